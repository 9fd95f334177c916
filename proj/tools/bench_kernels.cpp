// Times the OpenMP kernels against their serial references and verifies
// that both produce identical results.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "gla/core/matrix.hpp"
#include "gla/core/rng.hpp"

using gla::core::Matrix;
using gla::core::Vector;

namespace {

double time_ms(const std::function<void()>& fn, int repeats) {
    fn();  // warm up
    const auto start = std::chrono::steady_clock::now();
    for (int r = 0; r < repeats; ++r) fn();
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(stop - start).count() / repeats;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i)
        worst = std::max(worst, std::abs(a.data[i] - b.data[i]));
    return worst;
}

void report(const std::string& name, double parallel_ms, double serial_ms, double diff) {
    std::printf("%-22s parallel %9.3f ms   serial %9.3f ms   speedup %5.2fx   max|diff| %g\n",
                name.c_str(), parallel_ms, serial_ms, serial_ms / parallel_ms, diff);
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (compiled without OpenMP)\n");
#endif

    gla::core::Rng rng(2024);
    const std::size_t n = 384;
    Matrix a(n, n), b(n, n);
    for (double& v : a.data) v = rng.normal();
    for (double& v : b.data) v = rng.normal();
    Vector x(n);
    for (double& v : x) v = rng.normal();

    {
        const Matrix ref = gla::core::serial::matmul(a, b);
        const Matrix par = gla::core::matmul(a, b);
        report("matmul", time_ms([&] { (void)gla::core::matmul(a, b); }, 5),
               time_ms([&] { (void)gla::core::serial::matmul(a, b); }, 5), max_abs_diff(par, ref));
    }
    {
        const Matrix ref = gla::core::serial::matmul_tn(a, b);
        const Matrix par = gla::core::matmul_tn(a, b);
        report("matmul_tn", time_ms([&] { (void)gla::core::matmul_tn(a, b); }, 5),
               time_ms([&] { (void)gla::core::serial::matmul_tn(a, b); }, 5),
               max_abs_diff(par, ref));
    }
    {
        const Matrix ref = gla::core::serial::matmul_nt(a, b);
        const Matrix par = gla::core::matmul_nt(a, b);
        report("matmul_nt", time_ms([&] { (void)gla::core::matmul_nt(a, b); }, 5),
               time_ms([&] { (void)gla::core::serial::matmul_nt(a, b); }, 5),
               max_abs_diff(par, ref));
    }
    {
        const Matrix ref = gla::core::serial::gram(a);
        const Matrix par = gla::core::gram(a);
        report("gram", time_ms([&] { (void)gla::core::gram(a); }, 5),
               time_ms([&] { (void)gla::core::serial::gram(a); }, 5), max_abs_diff(par, ref));
    }
    {
        const Vector ref = gla::core::serial::matvec(a, x);
        const Vector par = gla::core::matvec(a, x);
        double diff = 0.0;
        for (std::size_t i = 0; i < n; ++i) diff = std::max(diff, std::abs(ref[i] - par[i]));
        report("matvec", time_ms([&] { (void)gla::core::matvec(a, x); }, 50),
               time_ms([&] { (void)gla::core::serial::matvec(a, x); }, 50), diff);
    }
    return 0;
}
