#pragma once

#include <optional>
#include <utility>

#include "qweft/circuit.hpp"
#include "qweft/weightspace.hpp"

namespace qweft {

inline constexpr int kMaxFullWires = 24;

struct FullState {
  int n = 0;
  Vector amplitudes;

  FullState(int n_, Vector amp);
  static FullState basis(int n, std::uint64_t bits);

  double norm() const { return amplitudes.norm(); }
};

void apply_gate(FullState& st, const GateDescriptor& g);

// Exact evolution through the unitary gates, in list order.  Measurement
// gates are a dimension error here; acceptance_probability owns them.
FullState apply_circuit(const QuantumCircuit& c, FullState in);

struct AcceptanceResult {
  double probability = 0.0;
  std::optional<FullState> post_measurement_state;
};

// Witness on the witness wires, ancillas appended per ancilla_init.
FullState embed_witness(const QuantumCircuit& c, const SectorState& witness);
FullState embed_witness(const QuantumCircuit& c, const FullState& witness);

// ||Pi_accept U (|psi> (x) |anc>)||^2 under deferred measurement; refuses
// circuits with illegal classical fanout structure.
AcceptanceResult acceptance_probability(const QuantumCircuit& c,
                                        const SectorState& witness,
                                        bool want_post = false);
AcceptanceResult acceptance_probability(const QuantumCircuit& c,
                                        const FullState& witness,
                                        bool want_post = false);

// Sector restriction of M = (I (x) <anc|) U^dag Pi U (I (x) |anc>), dense.
Matrix acceptance_operator_sector(const QuantumCircuit& c, int k,
                                  std::uint64_t max_dim = 4096);

// Top eigenpair of the restricted acceptance operator: the best weight-k
// witness and its acceptance probability.
std::pair<SectorState, double> optimal_sector_witness(const QuantumCircuit& c,
                                                      int k,
                                                      std::uint64_t max_dim = 4096);

// Evolution inside the C(n,k) sector; the circuit must pass
// check_weight_preserving and act on exactly indexer.n wires.
SectorState apply_sector_restricted(const QuantumCircuit& c, SectorState in);

// Single weight-preserving gate applied to sector amplitudes in place.
void apply_gate_sector(const BasisIndexer& idx, Vector& amps,
                       const GateDescriptor& g);

// True if the circuit maps the given basis input to a state with more than
// `tol` amplitude mass outside the input's weight sector.
bool circuit_leaks_weight(const QuantumCircuit& c, std::uint64_t basis_input,
                          double tol = 1e-10);

}  // namespace qweft
