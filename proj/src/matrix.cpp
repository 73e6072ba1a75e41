#include "abchain/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "abchain/kernels.hpp"

namespace abchain {

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("matrix product: dimension mismatch");
    ComplexMatrix c(a.dim());
    kernels::matmul(a.data(), b.data(), c.data(), a.dim());
    return c;
}

cvector operator*(const ComplexMatrix& a, const cvector& x) {
    if (a.dim() != x.size())
        throw std::invalid_argument("matrix-vector product: dimension mismatch");
    cvector y(x.size());
    kernels::matvec(a.data(), x.data(), y.data(), a.dim());
    return y;
}

ComplexMatrix operator*(cdouble s, const ComplexMatrix& a) {
    ComplexMatrix c(a.dim());
    const std::size_t n2 = a.dim() * a.dim();
    for (std::size_t i = 0; i < n2; ++i) c.data()[i] = s * a.data()[i];
    return c;
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("matrix sum: dimension mismatch");
    ComplexMatrix c(a.dim());
    const std::size_t n2 = a.dim() * a.dim();
    for (std::size_t i = 0; i < n2; ++i) c.data()[i] = a.data()[i] + b.data()[i];
    return c;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("matrix difference: dimension mismatch");
    ComplexMatrix c(a.dim());
    const std::size_t n2 = a.dim() * a.dim();
    for (std::size_t i = 0; i < n2; ++i) c.data()[i] = a.data()[i] - b.data()[i];
    return c;
}

ComplexMatrix adjoint(const ComplexMatrix& a) {
    ComplexMatrix c(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) c(j, i) = std::conj(a(i, j));
    return c;
}

cdouble trace(const ComplexMatrix& a) {
    cdouble t{};
    for (std::size_t i = 0; i < a.dim(); ++i) t += a(i, i);
    return t;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("max_abs_diff: dimension mismatch");
    double m = 0.0;
    const std::size_t n2 = a.dim() * a.dim();
    for (std::size_t i = 0; i < n2; ++i)
        m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

double unitarity_error(const ComplexMatrix& u) {
    return max_abs_diff(adjoint(u) * u, ComplexMatrix::identity(u.dim()));
}

double hermiticity_error(const ComplexMatrix& h) {
    double m = 0.0;
    for (std::size_t i = 0; i < h.dim(); ++i)
        for (std::size_t j = i; j < h.dim(); ++j)
            m = std::max(m, std::abs(h(i, j) - std::conj(h(j, i))));
    return m;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t na = a.dim(), nb = b.dim();
    ComplexMatrix c(na * nb);
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < na; ++j) {
            const cdouble aij = a(i, j);
            if (aij == cdouble{}) continue;
            for (std::size_t k = 0; k < nb; ++k)
                for (std::size_t l = 0; l < nb; ++l)
                    c(i * nb + k, j * nb + l) = aij * b(k, l);
        }
    return c;
}

}  // namespace abchain
