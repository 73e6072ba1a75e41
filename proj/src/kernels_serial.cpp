#include "abchain/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <vector>

namespace abchain::kernels::serial {

void matmul(const cdouble* a, const cdouble* b, cdouble* c, std::size_t n) {
    std::fill(c, c + n * n, cdouble{});
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const cdouble aij = a[i * n + j];
            if (aij == cdouble{}) continue;
            const cdouble* brow = b + j * n;
            cdouble* crow = c + i * n;
            for (std::size_t k = 0; k < n; ++k) crow[k] += aij * brow[k];
        }
    }
}

void matvec(const cdouble* a, const cdouble* x, cdouble* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        cdouble acc{};
        const cdouble* arow = a + i * n;
        for (std::size_t j = 0; j < n; ++j) acc += arow[j] * x[j];
        y[i] = acc;
    }
}

namespace {

// One complex Givens rotation zeroing h[p][q]. Updates h in place
// (both triangles) and accumulates the rotation into vecs.
void apply_rotation(cdouble* h, cdouble* vecs, std::size_t n, std::size_t p,
                    std::size_t q) {
    const cdouble hpq = h[p * n + q];
    const double r = std::abs(hpq);
    const cdouble u = hpq / r;  // e^{i phase}
    const double app = h[p * n + p].real();
    const double aqq = h[q * n + q].real();

    const double tau = (aqq - app) / (2.0 * r);
    const double sign = tau >= 0.0 ? 1.0 : -1.0;
    const double t = -sign / (std::abs(tau) + std::hypot(1.0, tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;

    // 2x2 pivot block
    h[p * n + p] = app * c * c + 2.0 * r * s * c + aqq * s * s;
    h[q * n + q] = app * s * s - 2.0 * r * s * c + aqq * c * c;
    h[p * n + q] = 0.0;
    h[q * n + p] = 0.0;

    const cdouble su = s * u;
    const cdouble su_conj = s * std::conj(u);
    for (std::size_t k = 0; k < n; ++k) {
        if (k == p || k == q) continue;
        const cdouble hkp = h[k * n + p];
        const cdouble hkq = h[k * n + q];
        h[k * n + p] = c * hkp + su_conj * hkq;
        h[k * n + q] = c * hkq - su * hkp;
        h[p * n + k] = std::conj(h[k * n + p]);
        h[q * n + k] = std::conj(h[k * n + q]);
    }
    for (std::size_t k = 0; k < n; ++k) {
        const cdouble vkp = vecs[k * n + p];
        const cdouble vkq = vecs[k * n + q];
        vecs[k * n + p] = c * vkp + su_conj * vkq;
        vecs[k * n + q] = c * vkq - su * vkp;
    }
}

double offdiag_max(const cdouble* h, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            m = std::max(m, std::abs(h[i * n + j]));
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

    std::fill(u, u + n * n, cdouble{});
    for (std::size_t i = 0; i < n; ++i) {
        cdouble* urow = u + i * n;
        for (std::size_t j = 0; j < n; ++j) {
            const cdouble w = vecs[i * n + j] * phases[j];
            for (std::size_t k = 0; k < n; ++k)
                urow[k] += w * std::conj(vecs[k * n + j]);
        }
    }
}

}  // namespace abchain::kernels::serial
