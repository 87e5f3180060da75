#pragma once

#include <string>
#include <variant>
#include <vector>

#include "qweft/reductions.hpp"

namespace qweft {

struct CheckRow {
  std::string name;
  double expected = 0.0;
  double observed = 0.0;
  double residual = 0.0;
  double tol = 0.0;
  bool pass = true;
};

struct VerificationReport {
  std::string instance_id;
  std::string step;
  std::vector<CheckRow> rows;
  bool pass = true;

  void add(std::string name, double expected, double observed, double tol);
  void add_flag(std::string name, bool ok);
};

struct VerifyOptions {
  double tol_formula = 1e-9;
  double tol_leakage = 1e-10;
  int n_witness_samples = 8;
  std::uint64_t seed = 5;
  std::uint64_t max_dim = 4096;
};

struct SumProdResult {
  // scalar reductions per joint eigenvalue; for scalar input a single entry
  std::vector<double> lower;    // 1 - sum x_j
  std::vector<double> product;  // prod (1 - x_j)
  std::vector<double> upper;    // 1 - (1/m) sum x_j
  bool verdict = true;
};

SumProdResult sum_prod_check(const std::vector<double>& xs);
SumProdResult sum_prod_check(const std::vector<Matrix>& ops,
                             double commute_tol = 1e-10);

bool frustration_free_check(const LocalHamiltonian& projectors, int k,
                            double tol = 1e-9);

// Source instance for verify_reduction; matches the artifact's step.
struct SourceInstance {
  std::optional<Graph> graph;
  std::optional<LocalHamiltonian> hamiltonian;
  std::optional<QuantumCircuit> circuit;
  std::optional<ClassicalCircuit> classical;
  std::optional<std::pair<double, double>> prob_thresholds;
  std::optional<Thresholds> energy_thresholds;
};

// Step-specific completeness/soundness and formula-residual checks; size
// guards shrink the report rather than failing it.
VerificationReport verify_reduction(const ReductionArtifact& artifact,
                                    const SourceInstance& source, int k,
                                    const VerifyOptions& opts = {});

}  // namespace qweft
