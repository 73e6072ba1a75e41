// Timing comparison of the serial reference kernels against the OpenMP
// variants. Usage: bench_kernels [dim dim ...] (default 64 128 256 512).

#include <chrono>
#include <complex>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "abchain/kernels.hpp"

namespace {

using abchain::kernels::cdouble;

std::vector<cdouble> random_matrix(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<cdouble> m(n * n);
    for (auto& x : m) x = cdouble{dist(rng), dist(rng)};
    return m;
}

std::vector<cdouble> random_hermitian(std::size_t n, std::mt19937_64& rng) {
    auto m = random_matrix(n, rng);
    for (std::size_t i = 0; i < n; ++i) {
        m[i * n + i] = m[i * n + i].real();
        for (std::size_t j = i + 1; j < n; ++j) m[j * n + i] = std::conj(m[i * n + j]);
    }
    return m;
}

template <typename F>
double time_ms(F&& f, int reps) {
    const auto start = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) f();
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(stop - start).count() / reps;
}

double max_diff(const std::vector<cdouble>& a, const std::vector<cdouble>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::size_t> dims{64, 128, 256, 512};
    if (argc > 1) {
        dims.clear();
        for (int i = 1; i < argc; ++i) dims.push_back(std::stoul(argv[i]));
    }

#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; 'par' runs serially\n");
#endif
    std::printf("%-8s %-10s %12s %12s %8s %10s\n", "dim", "kernel", "serial[ms]",
                "par[ms]", "speedup", "max|diff|");

    std::mt19937_64 rng(12345);
    for (const std::size_t n : dims) {
        const int reps = n <= 128 ? 10 : 3;
        const auto a = random_matrix(n, rng);
        const auto b = random_matrix(n, rng);
        std::vector<cdouble> c1(n * n), c2(n * n);

        const double tm_s =
            time_ms([&] { abchain::kernels::serial::matmul(a.data(), b.data(), c1.data(), n); }, reps);
        const double tm_p =
            time_ms([&] { abchain::kernels::par::matmul(a.data(), b.data(), c2.data(), n); }, reps);
        std::printf("%-8zu %-10s %12.3f %12.3f %8.2f %10.2e\n", n, "matmul", tm_s, tm_p,
                    tm_s / tm_p, max_diff(c1, c2));

        const auto h = random_hermitian(n, rng);
        std::vector<double> vals1(n), vals2(n);
        std::vector<cdouble> vecs1(n * n), vecs2(n * n);
        const double te_s = time_ms(
            [&] {
                auto work = h;
                abchain::kernels::serial::eigh(work.data(), vals1.data(), vecs1.data(), n);
            },
            1);
        const double te_p = time_ms(
            [&] {
                auto work = h;
                abchain::kernels::par::eigh(work.data(), vals2.data(), vecs2.data(), n);
            },
            1);
        std::printf("%-8zu %-10s %12.3f %12.3f %8.2f %10.2e\n", n, "eigh", te_s, te_p,
                    te_s / te_p, max_diff(vecs1, vecs2));

        const double tv_s = time_ms(
            [&] {
                abchain::kernels::serial::evolve_from_eigh(vecs1.data(), vals1.data(), 0.7,
                                                           c1.data(), n);
            },
            reps);
        const double tv_p = time_ms(
            [&] {
                abchain::kernels::par::evolve_from_eigh(vecs2.data(), vals2.data(), 0.7,
                                                        c2.data(), n);
            },
            reps);
        std::printf("%-8zu %-10s %12.3f %12.3f %8.2f %10.2e\n", n, "evolve", tv_s, tv_p,
                    tv_s / tv_p, max_diff(c1, c2));
    }
    return 0;
}
