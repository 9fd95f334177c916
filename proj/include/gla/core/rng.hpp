#pragma once

#include <cstdint>
#include <vector>

#include "gla/core/matrix.hpp"

namespace gla::core {

/// xoshiro256** with splitmix64 seeding. All stochastic behaviour in the
/// toolkit flows through explicit instances of this generator, so a run is
/// fully reproducible from its seeds on any platform; no std::random
/// distributions are involved.
/// Deterministic seed for a named sub-stream of a base seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform01();
    double uniform(double lo, double hi);

    /// Standard normal via Box-Muller, one spare cached.
    double normal();

    /// Uniform integer in [0, bound).
    std::uint64_t next_below(std::uint64_t bound);

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    /// Independent generator for a named sub-stream.
    Rng fork(std::uint64_t stream) const;

    Vector normal_vector(std::size_t n);
    Vector uniform_vector(std::size_t n, double lo, double hi);

private:
    std::uint64_t state_[4];
    std::uint64_t seed_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace gla::core
