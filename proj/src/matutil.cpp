#include "qweft/matutil.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

namespace qweft {

bool is_unitary(const Matrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  Matrix d = u.adjoint() * u - Matrix::Identity(u.rows(), u.cols());
  return d.cwiseAbs().maxCoeff() <= tol;
}

bool is_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double operator_norm(const Matrix& m) {
  return m.jacobiSvd().singularValues()[0];
}

Matrix principal_unitary_sqrt(const Matrix& u) {
  Eigen::ComplexEigenSolver<Matrix> es(u);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("principal_unitary_sqrt: eigensolver failed");
  Vector d = es.eigenvalues();
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    const double arg = std::arg(d[i]);
    d[i] = std::polar(1.0, arg / 2.0);
  }
  const Matrix& v = es.eigenvectors();
  return v * d.asDiagonal() * v.inverse();
}

Matrix principal_psd_sqrt(const Matrix& m, double clamp_tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("principal_psd_sqrt: eigensolver failed");
  Eigen::VectorXd d = es.eigenvalues();
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (d[i] < 0) {
      if (d[i] < -clamp_tol)
        throw std::invalid_argument("principal_psd_sqrt: matrix not PSD");
      d[i] = 0;
    }
    d[i] = std::sqrt(d[i]);
  }
  return es.eigenvectors() * d.asDiagonal() *
         es.eigenvectors().adjoint();
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix r(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return r;
}

bool commutes_with_number_op(const Matrix& m, double tol) {
  const auto dim = m.rows();
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c)
      if (popcount64(r) != popcount64(c) && std::abs(m(r, c)) > tol)
        return false;
  return true;
}

}  // namespace qweft
