#include "abchain/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "abchain/kernels.hpp"

namespace abchain {

namespace {
constexpr cdouble kI{0.0, 1.0};
}

ComplexMatrix pauli_x() {
    ComplexMatrix m(2);
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    return m;
}

ComplexMatrix pauli_y() {
    ComplexMatrix m(2);
    m(0, 1) = -kI;
    m(1, 0) = kI;
    return m;
}

ComplexMatrix pauli_z() {
    ComplexMatrix m(2);
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return m;
}

ComplexMatrix rotation_operator(const AxisAngle& aa) {
    const auto& n = aa.axis;
    const double norm = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
    if (std::abs(norm - 1.0) > 1e-12)
        throw std::invalid_argument("rotation_operator: axis must be unit length");

    const double c = std::cos(aa.angle / 2.0);
    const double s = std::sin(aa.angle / 2.0);
    ComplexMatrix u(2);
    u(0, 0) = c - kI * s * n[2];
    u(0, 1) = -kI * s * (n[0] - kI * n[1]);
    u(1, 0) = -kI * s * (n[0] + kI * n[1]);
    u(1, 1) = c + kI * s * n[2];
    return u;
}

ComplexMatrix expm_hermitian(const ComplexMatrix& h, double t) {
    if (hermiticity_error(h) > 1e-12)
        throw std::invalid_argument("expm_hermitian: matrix is not Hermitian");

    const std::size_t n = h.dim();
    std::vector<cdouble> work(h.data(), h.data() + n * n);
    std::vector<double> vals(n);
    ComplexMatrix vecs(n);
    kernels::eigh(work.data(), vals.data(), vecs.data(), n);

    ComplexMatrix u(n);
    kernels::evolve_from_eigh(vecs.data(), vals.data(), t, u.data(), n);
    return u;
}

double fidelity_up_to_phase(const ComplexMatrix& u, const ComplexMatrix& v) {
    if (u.dim() != v.dim())
        throw std::invalid_argument("fidelity_up_to_phase: dimension mismatch");
    // trace(U† V) without forming the product matrix
    cdouble tr{};
    for (std::size_t i = 0; i < u.dim(); ++i)
        for (std::size_t k = 0; k < u.dim(); ++k)
            tr += std::conj(u(k, i)) * v(k, i);
    return std::abs(tr) / static_cast<double>(u.dim());
}

AxisAngle axis_angle_from_unitary(const ComplexMatrix& u) {
    if (u.dim() != 2)
        throw std::invalid_argument("axis_angle_from_unitary: expected a 2x2 matrix");

    // Rescale to determinant 1 (principal square root of det).
    const cdouble det = u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0);
    const cdouble root = std::polar(std::sqrt(std::abs(det)), std::arg(det) / 2.0);
    const cdouble u00 = u(0, 0) / root;
    const cdouble u10 = u(1, 0) / root;

    AxisAngle aa;
    const double c = std::clamp(u00.real(), -1.0, 1.0);
    aa.angle = 2.0 * std::acos(c);
    const double s = std::sin(aa.angle / 2.0);
    if (s < 1e-9) return aa;  // zero rotation (or 4pi-equivalent): canonical z axis

    aa.axis = {-u10.imag() / s, u10.real() / s, -u00.imag() / s};
    const double norm = std::sqrt(aa.axis[0] * aa.axis[0] + aa.axis[1] * aa.axis[1] +
                                  aa.axis[2] * aa.axis[2]);
    for (auto& x : aa.axis) x /= norm;
    return aa;
}

}  // namespace abchain
