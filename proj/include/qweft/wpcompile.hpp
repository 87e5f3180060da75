#pragma once

#include "qweft/circuit.hpp"
#include "qweft/weightspace.hpp"

namespace qweft {

// Two-level unitary acting as V on span{|s>,|t>} of a weight-k sector, with
// |s> playing logical 0.
struct TwoLevelSpec {
  int n = 0;
  std::uint64_t s = 0;
  std::uint64_t t = 0;
  Matrix v;  // 2x2 unitary
};

GateDescriptor hat_gate(int a, int b, const Matrix& u);

// Controlled SWAP staircase moving the ones of s onto t, a multi-controlled
// hat(V) on the leftover pair, and the staircase reversed.  Strict mode
// controls on all other wires (identity elsewhere in the sector); loose mode
// controls only on the ones and may act outside the sector.
QuantumCircuit two_level_wp(const TwoLevelSpec& spec, bool strict = true);

// Controlled version of a 2-qubit weight-preserving gate W on (target_a,
// target_b) built from Fredkins and single-controlled sqrt(W) hats over an
// ancilla-pair stack; ancillas are appended as |01> pairs and restored.
QuantumCircuit multi_controlled_wp(const Matrix& w_middle, int target_a,
                                   int target_b,
                                   const std::vector<int>& controls,
                                   const std::vector<int>& polarities = {});

// C_n on n = 2^r wires with C_n |0^n> = |0^n> and C_n |0^{n-1}1> = |W_n>.
QuantumCircuit w_state_prep(int r);

// Product of two-level circuits reproducing the target sector unitary.
// Guarded: n <= 8 and C(n,k) <= 70.
QuantumCircuit decompose_wp_unitary(const SectorOperator& target,
                                    bool strict = true);

// Sector matrix of a weight-preserving circuit, column by column.
Matrix sector_matrix(const QuantumCircuit& c, int n, int k);

}  // namespace qweft
