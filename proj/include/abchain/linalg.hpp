#pragma once

#include <array>

#include "abchain/matrix.hpp"

namespace abchain {

// Unit rotation axis plus angle in radians. Spinor rotations have period
// 4*pi up to sign, so the canonical angle range is [0, 4*pi).
struct AxisAngle {
    std::array<double, 3> axis{0.0, 0.0, 1.0};
    double angle = 0.0;
};

ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

// cos(psi/2) I - i sin(psi/2) (n . sigma); axis must be unit length.
ComplexMatrix rotation_operator(const AxisAngle& aa);

inline ComplexMatrix rotation_x(double psi) { return rotation_operator({{1, 0, 0}, psi}); }
inline ComplexMatrix rotation_y(double psi) { return rotation_operator({{0, 1, 0}, psi}); }
inline ComplexMatrix rotation_z(double psi) { return rotation_operator({{0, 0, 1}, psi}); }

// exp(-i H t) for Hermitian H, via eigendecomposition.
ComplexMatrix expm_hermitian(const ComplexMatrix& h, double t);

// |trace(U† V)| / dim; 1 exactly when U and V differ by a global phase.
double fidelity_up_to_phase(const ComplexMatrix& u, const ComplexMatrix& v);

// Inverse of rotation_operator up to overall sign; rescales the input to
// determinant 1 first. Angle lands in [0, 2*pi]; the zero rotation
// reports the canonical z axis.
AxisAngle axis_angle_from_unitary(const ComplexMatrix& u);

}  // namespace abchain
