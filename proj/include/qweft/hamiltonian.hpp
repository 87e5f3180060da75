#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qweft/common.hpp"
#include "qweft/weightspace.hpp"

namespace qweft {

struct LocalTerm {
  std::vector<int> support;
  Matrix block;  // dense Hermitian, 2^|support|
};

struct Thresholds {
  double a = 0.0;
  double b = 0.0;
};

struct LocalHamiltonian {
  int n = 0;
  std::vector<LocalTerm> terms;
  int locality = 0;  // declared l; validation checks |support| <= l
  std::optional<std::set<int>> clock_register;
  std::optional<Thresholds> thresholds;

  static constexpr std::size_t kTermCap = 2'000'000;

  std::vector<LocalBlock> blocks() const;  // view for weightspace ops
};

struct TermReport {
  bool hermitian = true;
  bool norm_ok = true;
  bool locality_ok = true;
  bool projector = false;
  double norm = 0.0;
};

struct InstanceReport {
  bool valid = true;
  bool all_projectors = true;
  std::vector<TermReport> terms;
};

InstanceReport validate_instance(const LocalHamiltonian& h);

enum class Sparsity { kSpatiallySparse, kAlmostSpatiallySparse, kNeither };

struct SparsityReport {
  Sparsity klass = Sparsity::kNeither;
  int max_degree = 0;  // over qubits, counting non-clock-only terms
};

// Degree counts terms not confined to the clock register; the bound is the
// implicit O(1) constant of the sparsity definitions.
SparsityReport classify_sparsity(const LocalHamiltonian& h, int degree_bound = 16);

struct ColoringResult {
  std::vector<std::vector<int>> groups;  // term indices per color
  int n_color = 0;  // non-clock colors; groups.size() == n_color + 1 when a
                    // clock group exists
  bool has_clock_group = false;
};

// Greedy coloring of the term conflict graph (terms conflict iff supports
// intersect); clock-only terms are forced into one final group.  Terms are
// taken in descending support size, ties by index.
ColoringResult color_terms(const LocalHamiltonian& h, int degree_bound = 16);

double energy_expectation(const LocalHamiltonian& h, const SectorState& psi);
double energy_expectation(const LocalHamiltonian& h, const Vector& full_psi);

}  // namespace qweft
