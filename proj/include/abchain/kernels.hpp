#pragma once

#include <complex>
#include <cstddef>

namespace abchain::kernels {

using cdouble = std::complex<double>;

// Low-level dense kernels. Every kernel exists twice: a plain serial
// reference in `serial` and an OpenMP variant in `par`. The unprefixed
// entry points dispatch by problem size. Both variants perform the same
// floating-point operations in the same per-element order, so results
// agree to roundoff regardless of thread count.

namespace serial {

// c = a * b, n x n row-major
void matmul(const cdouble* a, const cdouble* b, cdouble* c, std::size_t n);

// y = a * x
void matvec(const cdouble* a, const cdouble* x, cdouble* y, std::size_t n);

// Cyclic Jacobi eigendecomposition of a Hermitian matrix.
// h (row-major, n x n) is consumed; on return vals holds ascending
// eigenvalues and vecs the corresponding eigenvectors as columns.
// Returns the number of sweeps used.
int eigh(cdouble* h, double* vals, cdouble* vecs, std::size_t n);

// u = vecs * diag(exp(-i*vals*t)) * vecs†
void evolve_from_eigh(const cdouble* vecs, const double* vals, double t,
                      cdouble* u, std::size_t n);

}  // namespace serial

namespace par {

void matmul(const cdouble* a, const cdouble* b, cdouble* c, std::size_t n);
void matvec(const cdouble* a, const cdouble* x, cdouble* y, std::size_t n);
int eigh(cdouble* h, double* vals, cdouble* vecs, std::size_t n);
void evolve_from_eigh(const cdouble* vecs, const double* vals, double t,
                      cdouble* u, std::size_t n);

}  // namespace par

// Below this dimension the dispatching wrappers stay serial; OpenMP
// overhead dwarfs the work on the 2x2 and 4x4 hot path.
inline constexpr std::size_t kParallelThreshold = 64;

void matmul(const cdouble* a, const cdouble* b, cdouble* c, std::size_t n);
void matvec(const cdouble* a, const cdouble* x, cdouble* y, std::size_t n);
int eigh(cdouble* h, double* vals, cdouble* vecs, std::size_t n);
void evolve_from_eigh(const cdouble* vecs, const double* vals, double t,
                      cdouble* u, std::size_t n);

}  // namespace abchain::kernels
