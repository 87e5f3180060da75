#include "qweft/weightspace.hpp"

#include <algorithm>
#include <random>

namespace qweft {

std::uint64_t subspace_dim(int n, int k) {
  if (n < 0 || k < 0 || k > n)
    throw std::invalid_argument("subspace_dim: need 0 <= k <= n");
  if (n > 64) throw std::invalid_argument("subspace_dim: n > 64 unsupported");
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
  }
  return static_cast<std::uint64_t>(r);
}

namespace {

// C(a, b) with the zero convention outside 0 <= b <= a
std::uint64_t binom_or_zero(int a, int b) {
  if (b < 0 || b > a) return 0;
  return subspace_dim(a, b);
}

}  // namespace

BasisIndexer::BasisIndexer(int n, int k) : n_(n), k_(k) {
  dim_ = subspace_dim(n, k);
}

std::uint64_t BasisIndexer::rank(std::uint64_t bits) const {
  if (popcount64(bits) != k_)
    throw std::invalid_argument("rank: bitstring has wrong weight");
  if (n_ < 64 && (bits >> n_) != 0)
    throw std::invalid_argument("rank: bitstring out of range");
  std::uint64_t r = 0;
  int rem = k_;
  for (int i = 0; i < n_ && rem > 0; ++i) {
    if (bit_of(bits, i, n_)) {
      r += binom_or_zero(n_ - 1 - i, rem);
      --rem;
    }
  }
  return r;
}

std::uint64_t BasisIndexer::unrank(std::uint64_t index) const {
  if (index >= dim_) throw std::invalid_argument("unrank: index out of range");
  std::uint64_t bits = 0;
  int rem = k_;
  for (int i = 0; i < n_ && rem > 0; ++i) {
    const std::uint64_t c = binom_or_zero(n_ - 1 - i, rem);
    if (index >= c) {
      bits = with_bit(bits, i, n_, 1);
      index -= c;
      --rem;
    }
  }
  return bits;
}

std::uint64_t rank_string(int n, int k, std::uint64_t bits) {
  return BasisIndexer(n, k).rank(bits);
}

std::uint64_t unrank_index(int n, int k, std::uint64_t index) {
  return BasisIndexer(n, k).unrank(index);
}

SectorState::SectorState(BasisIndexer idx, Vector amp)
    : indexer(idx), amplitudes(std::move(amp)) {
  if (static_cast<std::uint64_t>(amplitudes.size()) != indexer.dim())
    throw std::invalid_argument("SectorState: amplitude length != C(n,k)");
}

SectorState SectorState::basis_state(int n, int k, std::uint64_t bits) {
  BasisIndexer idx(n, k);
  Vector v = Vector::Zero(idx.dim());
  v[idx.rank(bits)] = 1.0;
  return SectorState(idx, std::move(v));
}

bool SectorState::is_normalized(double tol) const {
  return std::abs(norm() - 1.0) <= tol;
}

Vector SectorOperator::apply(const Vector& v) const {
  if (is_dense()) return dense() * v;
  return sparse() * v;
}

Matrix SectorOperator::to_dense() const {
  if (is_dense()) return dense();
  return Matrix(sparse());
}

namespace {

// Entries <y|B|x> of one local block over the sector basis, as triplets.
// Only support patterns of equal weight can connect two sector states, so
// the loop never leaves the sector.
template <typename Emit>
void sector_entries(const LocalBlock& b, const BasisIndexer& idx, Emit&& emit) {
  const int n = idx.n();
  const int s = static_cast<int>(b.support.size());
  const int sdim = 1 << s;
  if (b.block.rows() != sdim || b.block.cols() != sdim)
    throw std::invalid_argument("LocalBlock: block size != 2^|support|");
  for (std::uint64_t col = 0; col < idx.dim(); ++col) {
    const std::uint64_t x = idx.unrank(col);
    int p = 0;
    for (int j = 0; j < s; ++j) p = (p << 1) | bit_of(x, b.support[j], n);
    const int pw = popcount64(static_cast<std::uint64_t>(p));
    for (int q = 0; q < sdim; ++q) {
      if (popcount64(static_cast<std::uint64_t>(q)) != pw) continue;
      const cxd a = b.block(q, p);
      if (a == cxd(0.0, 0.0)) continue;
      std::uint64_t y = x;
      for (int j = 0; j < s; ++j)
        y = with_bit(y, b.support[j], n, (q >> (s - 1 - j)) & 1);
      emit(idx.rank(y), col, a);
    }
  }
}

}  // namespace

SectorOperator restrict_operator(const std::vector<LocalBlock>& blocks, int n,
                                 int k, bool hermitian) {
  BasisIndexer idx(n, k);
  for (const auto& b : blocks)
    for (int w : b.support)
      if (w < 0 || w >= n)
        throw std::invalid_argument("restrict_operator: support out of range");
  if (idx.dim() <= SectorOperator::kDenseCap) {
    Matrix m = Matrix::Zero(idx.dim(), idx.dim());
    for (const auto& b : blocks)
      sector_entries(b, idx, [&](std::uint64_t r, std::uint64_t c, cxd a) {
        m(r, c) += a;
      });
    return SectorOperator{idx, std::move(m), hermitian};
  }
  std::vector<Eigen::Triplet<cxd>> trips;
  for (const auto& b : blocks)
    sector_entries(b, idx, [&](std::uint64_t r, std::uint64_t c, cxd a) {
      trips.emplace_back(static_cast<int>(r), static_cast<int>(c), a);
    });
  SparseMat sp(idx.dim(), idx.dim());
  sp.setFromTriplets(trips.begin(), trips.end());
  return SectorOperator{idx, std::move(sp), hermitian};
}

SectorOperator restrict_operator_dense(const Matrix& full, int n, int k,
                                       bool hermitian) {
  if (full.rows() != (1LL << n) || full.cols() != (1LL << n))
    throw std::invalid_argument("restrict_operator_dense: size != 2^n");
  BasisIndexer idx(n, k);
  Matrix m(idx.dim(), idx.dim());
  for (std::uint64_t r = 0; r < idx.dim(); ++r)
    for (std::uint64_t c = 0; c < idx.dim(); ++c)
      m(r, c) = full(idx.unrank(r), idx.unrank(c));
  return SectorOperator{idx, std::move(m), hermitian};
}

Vector apply_local_blocks(const std::vector<LocalBlock>& blocks,
                          const BasisIndexer& idx, const Vector& v) {
  Vector out = Vector::Zero(v.size());
  for (const auto& b : blocks)
    sector_entries(b, idx, [&](std::uint64_t r, std::uint64_t c, cxd a) {
      out[r] += a * v[c];
    });
  return out;
}

GroundResult lanczos_min_eig(const std::function<Vector(const Vector&)>& matvec,
                             const BasisIndexer& idx, std::uint64_t seed,
                             int max_iter, double tol) {
  const auto dim = static_cast<Eigen::Index>(idx.dim());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = cxd(gauss(rng), gauss(rng));
  v.normalize();

  std::vector<Vector> basis;
  std::vector<double> alpha, beta;
  basis.push_back(v);
  for (int it = 0; it < max_iter; ++it) {
    Vector w = matvec(basis.back());
    const double a = std::real(basis.back().dot(w));
    alpha.push_back(a);
    w -= a * basis.back();
    if (it > 0) w -= beta.back() * basis[basis.size() - 2];
    // full reorthogonalization, twice
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) w -= q.dot(w) * q;

    const int m = static_cast<int>(alpha.size());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) t(i, i) = alpha[i];
    for (int i = 0; i + 1 < m; ++i) t(i, i + 1) = t(i + 1, i) = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    const double ritz = es.eigenvalues()[0];

    const double b = w.norm();
    const double resid = b * std::abs(es.eigenvectors().col(0)[m - 1]);
    if (resid <= tol || b <= tol ||
        static_cast<std::uint64_t>(m) == idx.dim()) {
      Vector ev = Vector::Zero(dim);
      for (int i = 0; i < m; ++i) ev += es.eigenvectors().col(0)[i] * basis[i];
      ev.normalize();
      return GroundResult{ritz, SectorState(idx, std::move(ev)), m};
    }
    beta.push_back(b);
    basis.push_back(w / b);
  }
  throw std::runtime_error("lanczos_min_eig: no convergence after " +
                           std::to_string(max_iter) + " iterations");
}

GroundResult min_energy_in_sector(const std::vector<LocalBlock>& blocks, int n,
                                  int k, EigMethod method, std::uint64_t seed) {
  BasisIndexer idx(n, k);
  const bool dense = method == EigMethod::kDense ||
                     (method == EigMethod::kAuto && idx.dim() <= kDenseEigCrossover);
  if (dense) {
    SectorOperator op = restrict_operator(blocks, n, k);
    Eigen::SelfAdjointEigenSolver<Matrix> es(op.to_dense());
    if (es.info() != Eigen::Success)
      throw std::runtime_error("min_energy_in_sector: dense solver failed");
    return GroundResult{es.eigenvalues()[0],
                        SectorState(idx, es.eigenvectors().col(0)), 0};
  }
  SectorOperator op = restrict_operator(blocks, n, k);
  return lanczos_min_eig([&](const Vector& x) { return op.apply(x); }, idx,
                         seed);
}

}  // namespace qweft
