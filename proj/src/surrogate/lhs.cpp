#include "gla/surrogate/lhs.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "gla/core/rng.hpp"

namespace gla::surrogate {

void LhsDesign::validate() const {
    if (center.empty()) throw std::invalid_argument("lhs: empty center");
    if (!(range > 0.0)) throw std::invalid_argument("lhs: range must be positive");
    if (count < 1) throw std::invalid_argument("lhs: count must be positive");
    if (!(scale_floor > 0.0)) throw std::invalid_argument("lhs: scale floor must be positive");
    if (!core::all_finite(center)) throw std::invalid_argument("lhs: non-finite center");
}

Matrix lhs_sample(const LhsDesign& design) {
    design.validate();
    const std::size_t dim = design.center.size();
    const std::size_t n = design.count;
    core::Rng rng(design.seed);

    Matrix samples(n, dim);
    std::vector<std::size_t> strata(n);
    for (std::size_t d = 0; d < dim; ++d) {
        const double c = design.center[d];
        const double half_width = design.range * std::max(std::abs(c), design.scale_floor);
        std::iota(strata.begin(), strata.end(), 0);
        rng.shuffle(strata);
        for (std::size_t k = 0; k < n; ++k) {
            const double u = rng.uniform01();
            const double frac = (static_cast<double>(strata[k]) + u) / static_cast<double>(n);
            samples(k, d) = c - half_width + 2.0 * half_width * frac;
        }
    }
    return samples;
}

}  // namespace gla::surrogate
