#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace abchain {

using cdouble = std::complex<double>;
using cvector = std::vector<cdouble>;

// Dense square complex matrix, row-major.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t dim) : dim_(dim), a_(dim * dim) {}

    static ComplexMatrix identity(std::size_t dim);
    static ComplexMatrix zero(std::size_t dim) { return ComplexMatrix(dim); }

    std::size_t dim() const { return dim_; }
    bool empty() const { return dim_ == 0; }

    cdouble& operator()(std::size_t i, std::size_t j) { return a_[i * dim_ + j]; }
    const cdouble& operator()(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }

    cdouble* data() { return a_.data(); }
    const cdouble* data() const { return a_.data(); }

    bool operator==(const ComplexMatrix& other) const = default;

private:
    std::size_t dim_ = 0;
    cvector a_;
};

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
cvector operator*(const ComplexMatrix& a, const cvector& x);
ComplexMatrix operator*(cdouble s, const ComplexMatrix& a);
ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix adjoint(const ComplexMatrix& a);
cdouble trace(const ComplexMatrix& a);

// max_ij |a_ij - b_ij|
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
// ‖U†U − I‖_max
double unitarity_error(const ComplexMatrix& u);
// ‖H − H†‖_max
double hermiticity_error(const ComplexMatrix& h);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace abchain
