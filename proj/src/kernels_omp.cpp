#include "abchain/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

namespace abchain::kernels::par {

void matmul(const cdouble* a, const cdouble* b, cdouble* c, std::size_t n) {
    const std::int64_t ni = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < ni; ++i) {
        cdouble* crow = c + i * ni;
        std::fill(crow, crow + n, cdouble{});
        for (std::int64_t j = 0; j < ni; ++j) {
            const cdouble aij = a[i * ni + j];
            if (aij == cdouble{}) continue;
            const cdouble* brow = b + j * ni;
            for (std::int64_t k = 0; k < ni; ++k) crow[k] += aij * brow[k];
        }
    }
}

void matvec(const cdouble* a, const cdouble* x, cdouble* y, std::size_t n) {
    const std::int64_t ni = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < ni; ++i) {
        cdouble acc{};
        const cdouble* arow = a + i * ni;
        for (std::int64_t j = 0; j < ni; ++j) acc += arow[j] * x[j];
        y[i] = acc;
    }
}

namespace {

// Same rotation as the serial reference; the column/row update loop is
// the data-parallel part. Each k touches distinct entries, so the loop
// is race-free and the per-element arithmetic order is unchanged.
void apply_rotation(cdouble* h, cdouble* vecs, std::size_t n, std::size_t p,
                    std::size_t q) {
    const cdouble hpq = h[p * n + q];
    const double r = std::abs(hpq);
    const cdouble u = hpq / r;
    const double app = h[p * n + p].real();
    const double aqq = h[q * n + q].real();

    const double tau = (aqq - app) / (2.0 * r);
    const double sign = tau >= 0.0 ? 1.0 : -1.0;
    const double t = -sign / (std::abs(tau) + std::hypot(1.0, tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;

    h[p * n + p] = app * c * c + 2.0 * r * s * c + aqq * s * s;
    h[q * n + q] = app * s * s - 2.0 * r * s * c + aqq * c * c;
    h[p * n + q] = 0.0;
    h[q * n + p] = 0.0;

    const cdouble su = s * u;
    const cdouble su_conj = s * std::conj(u);
    const std::int64_t ni = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static) if (n >= kParallelThreshold)
    for (std::int64_t k = 0; k < ni; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        if (ku != p && ku != q) {
            const cdouble hkp = h[ku * n + p];
            const cdouble hkq = h[ku * n + q];
            h[ku * n + p] = c * hkp + su_conj * hkq;
            h[ku * n + q] = c * hkq - su * hkp;
            h[p * n + ku] = std::conj(h[ku * n + p]);
            h[q * n + ku] = std::conj(h[ku * n + q]);
        }
        const cdouble vkp = vecs[ku * n + p];
        const cdouble vkq = vecs[ku * n + q];
        vecs[ku * n + p] = c * vkp + su_conj * vkq;
        vecs[ku * n + q] = c * vkq - su * vkp;
    }
}

double offdiag_max(const cdouble* h, std::size_t n) {
    const std::int64_t ni = static_cast<std::int64_t>(n);
    double m = 0.0;
#pragma omp parallel for schedule(static) reduction(max : m)
    for (std::int64_t i = 0; i < ni; ++i)
        for (std::int64_t j = i + 1; j < ni; ++j)
            m = std::max(m, std::abs(h[i * ni + j]));
    return m;
}

void sort_eigenpairs(double* vals, cdouble* vecs, std::size_t n) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    std::vector<double> v2(n);
    std::vector<cdouble> m2(n * n);
    for (std::size_t j = 0; j < n; ++j) {
        v2[j] = vals[order[j]];
        for (std::size_t i = 0; i < n; ++i) m2[i * n + j] = vecs[i * n + order[j]];
    }
    std::copy(v2.begin(), v2.end(), vals);
    std::copy(m2.begin(), m2.end(), vecs);
}

}  // namespace

int eigh(cdouble* h, double* vals, cdouble* vecs, std::size_t n) {
    std::fill(vecs, vecs + n * n, cdouble{});
    for (std::size_t i = 0; i < n; ++i) vecs[i * n + i] = 1.0;

    double scale = 0.0;
    for (std::size_t i = 0; i < n * n; ++i) scale = std::max(scale, std::abs(h[i]));
    const double threshold = scale > 0.0 ? 1e-15 * scale : 0.0;

    constexpr int kMaxSweeps = 60;
    int sweep = 0;
    for (; sweep < kMaxSweeps; ++sweep) {
        if (offdiag_max(h, n) <= threshold) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(h[p * n + q]) > threshold)
                    apply_rotation(h, vecs, n, p, q);
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) vals[i] = h[i * n + i].real();
    sort_eigenpairs(vals, vecs, n);
    return sweep;
}

void evolve_from_eigh(const cdouble* vecs, const double* vals, double t,
                      cdouble* u, std::size_t n) {
    std::vector<cdouble> phases(n);
    for (std::size_t j = 0; j < n; ++j)
        phases[j] = std::polar(1.0, -vals[j] * t);

    const std::int64_t ni = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < ni; ++i) {
        cdouble* urow = u + i * ni;
        std::fill(urow, urow + n, cdouble{});
        for (std::int64_t j = 0; j < ni; ++j) {
            const cdouble w = vecs[i * ni + j] * phases[j];
            for (std::int64_t k = 0; k < ni; ++k)
                urow[k] += w * std::conj(vecs[k * ni + j]);
        }
    }
}

}  // namespace abchain::kernels::par

namespace abchain::kernels {

void matmul(const cdouble* a, const cdouble* b, cdouble* c, std::size_t n) {
    if (n >= kParallelThreshold)
        par::matmul(a, b, c, n);
    else
        serial::matmul(a, b, c, n);
}

void matvec(const cdouble* a, const cdouble* x, cdouble* y, std::size_t n) {
    if (n >= kParallelThreshold)
        par::matvec(a, x, y, n);
    else
        serial::matvec(a, x, y, n);
}

int eigh(cdouble* h, double* vals, cdouble* vecs, std::size_t n) {
    if (n >= kParallelThreshold) return par::eigh(h, vals, vecs, n);
    return serial::eigh(h, vals, vecs, n);
}

void evolve_from_eigh(const cdouble* vecs, const double* vals, double t,
                      cdouble* u, std::size_t n) {
    if (n >= kParallelThreshold)
        par::evolve_from_eigh(vecs, vals, t, u, n);
    else
        serial::evolve_from_eigh(vecs, vals, t, u, n);
}

}  // namespace abchain::kernels
