#pragma once

#include "qweft/common.hpp"

namespace qweft {

bool is_unitary(const Matrix& u, double tol = 1e-12);
bool is_hermitian(const Matrix& m, double tol = 1e-12);
double operator_norm(const Matrix& m);  // largest singular value

// Principal square root of a unitary: eigenphases halved into (-pi/2, pi/2].
Matrix principal_unitary_sqrt(const Matrix& u);

// Principal square root of a PSD Hermitian matrix; tiny negative eigenvalues
// are clamped to zero.
Matrix principal_psd_sqrt(const Matrix& m, double clamp_tol = 1e-10);

Matrix kron(const Matrix& a, const Matrix& b);

// True if all entries coupling basis patterns of different Hamming weight
// vanish (the operator commutes with the number operator on its support).
bool commutes_with_number_op(const Matrix& m, double tol = 1e-12);

}  // namespace qweft
