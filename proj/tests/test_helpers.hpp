#pragma once

#include <random>
#include <vector>

#include "qweft/circuit.hpp"
#include "qweft/hamiltonian.hpp"
#include "qweft/matutil.hpp"
#include "qweft/weightspace.hpp"

namespace qweft::testing {

// enumeration oracle: all weight-k strings of length n in ascending integer
// order (qubit 0 = most significant bit)
inline std::vector<std::uint64_t> enumerate_sector(int n, int k) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x)
    if (popcount64(x) == k) out.push_back(x);
  return out;
}

inline Matrix random_unitary(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Matrix g(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) g(r, c) = cxd(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < dim; ++i) {
    const cxd d = r(i, i);
    q.col(i) *= d / std::abs(d);
  }
  return q;
}

inline Matrix random_hermitian(int dim, std::mt19937_64& rng,
                               double norm_cap = 1.0) {
  std::normal_distribution<double> gauss;
  Matrix g(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) g(r, c) = cxd(gauss(rng), gauss(rng));
  Matrix h = (g + g.adjoint()) / 2.0;
  const double nrm = operator_norm(h);
  if (nrm > norm_cap) h *= norm_cap / nrm;
  return h;
}

// dense 2^n x 2^n matrix of one local term, for brute-force cross-checks
inline Matrix embed_term_dense(const LocalTerm& t, int n) {
  const Eigen::Index total = Eigen::Index{1} << n;
  Matrix m = Matrix::Zero(total, total);
  const int s = static_cast<int>(t.support.size());
  const Eigen::Index sdim = Eigen::Index{1} << s;
  for (Eigen::Index v = 0; v < total; ++v) {
    Eigen::Index p = 0;
    bool base_ok = true;
    for (int j = 0; j < s; ++j) p = (p << 1) | bit_of(v, t.support[j], n);
    (void)base_ok;
    for (Eigen::Index q = 0; q < sdim; ++q) {
      std::uint64_t u = v;
      for (int j = 0; j < s; ++j)
        u = with_bit(u, t.support[j], n, static_cast<int>((q >> (s - 1 - j)) & 1));
      m(u, v) += t.block(q, p);
    }
  }
  return m;
}

inline LocalHamiltonian random_2local(int n, int m_terms, std::mt19937_64& rng) {
  LocalHamiltonian h;
  h.n = n;
  h.locality = 2;
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int i = 0; i < m_terms; ++i) {
    int a = pick(rng), b = pick(rng);
    while (b == a) b = pick(rng);
    h.terms.push_back(LocalTerm{{a, b}, random_hermitian(4, rng)});
  }
  return h;
}

}  // namespace qweft::testing
