#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <variant>

#include "qweft/common.hpp"

namespace qweft {

// C(n,k); exact for n <= 64 (fits uint64_t), domain error outside 0<=k<=n.
std::uint64_t subspace_dim(int n, int k);

// Bijection between weight-k strings of length n and 0..C(n,k)-1, ordered by
// ascending integer value with qubit 0 as the most significant bit.
class BasisIndexer {
 public:
  BasisIndexer(int n, int k);

  int n() const { return n_; }
  int k() const { return k_; }
  std::uint64_t dim() const { return dim_; }

  std::uint64_t rank(std::uint64_t bits) const;
  std::uint64_t unrank(std::uint64_t index) const;

 private:
  int n_ = 0;
  int k_ = 0;
  std::uint64_t dim_ = 1;
};

std::uint64_t rank_string(int n, int k, std::uint64_t bits);
std::uint64_t unrank_index(int n, int k, std::uint64_t index);

struct SectorState {
  BasisIndexer indexer;
  Vector amplitudes;

  SectorState(BasisIndexer idx, Vector amp);
  static SectorState basis_state(int n, int k, std::uint64_t bits);

  double norm() const { return amplitudes.norm(); }
  bool is_normalized(double tol = 1e-12) const;
};

// Sector restriction of an operator; dense below `dense_cap` basis states,
// sparse triplets above.
struct SectorOperator {
  BasisIndexer indexer;
  std::variant<Matrix, SparseMat> matrix;
  bool hermitian = false;

  static constexpr std::uint64_t kDenseCap = 20000;

  bool is_dense() const { return std::holds_alternative<Matrix>(matrix); }
  const Matrix& dense() const { return std::get<Matrix>(matrix); }
  const SparseMat& sparse() const { return std::get<SparseMat>(matrix); }
  Vector apply(const Vector& v) const;
  Matrix to_dense() const;
};

// One local block of a full-space operator: dense matrix over the listed
// wires (first wire = local most significant bit).
struct LocalBlock {
  std::vector<int> support;
  Matrix block;
};

SectorOperator restrict_operator(const std::vector<LocalBlock>& blocks, int n,
                                 int k, bool hermitian = true);
SectorOperator restrict_operator_dense(const Matrix& full, int n, int k,
                                       bool hermitian = true);

// Applies sum of local blocks to a sector vector without materializing the
// restricted matrix.
Vector apply_local_blocks(const std::vector<LocalBlock>& blocks,
                          const BasisIndexer& idx, const Vector& v);

enum class EigMethod { kAuto, kDense, kIterative };

struct GroundResult {
  double energy = 0.0;
  SectorState witness;
  int iterations = 0;  // 0 for the dense path
};

// Smallest eigenpair of the sector restriction.  Dense solve for
// dim <= dense_crossover, Lanczos with full reorthogonalization above.
GroundResult min_energy_in_sector(const std::vector<LocalBlock>& blocks, int n,
                                  int k, EigMethod method = EigMethod::kAuto,
                                  std::uint64_t seed = 7);

inline constexpr std::uint64_t kDenseEigCrossover = 2048;

// Lanczos on an abstract matvec; throws on non-convergence with the
// iteration count in the message.
GroundResult lanczos_min_eig(const std::function<Vector(const Vector&)>& matvec,
                             const BasisIndexer& idx, std::uint64_t seed,
                             int max_iter = 400, double tol = 1e-12);

}  // namespace qweft
