#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>

#include "qweft/circuit.hpp"
#include "qweft/hamiltonian.hpp"
#include "qweft/qsp.hpp"
#include "qweft/simulator.hpp"

namespace qweft {

struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
};

// Output of one reduction step: the produced instance plus the parameter map,
// thresholds and step bookkeeping.
struct ReductionArtifact {
  std::string step;
  std::optional<QuantumCircuit> circuit;
  std::optional<LocalHamiltonian> hamiltonian;
  int k_in = 0;
  int k_out = 0;
  std::optional<Thresholds> energy_thresholds;             // (a, b)
  std::optional<std::pair<double, double>> prob_thresholds;  // (c, s)
  std::optional<PhaseSequence> phases;
  std::map<std::string, double> metadata;
};

// One 2-local projector |11><11| per edge; a size-k independent set exists
// iff the weight-k sector ground energy is zero.
ReductionArtifact indset_to_wlh(const Graph& g, int k);

// Single-term acceptance circuit: ancilla pair |01>, k+1 counter ancillas
// |10^k>, Fredkin shift chains writing the weight of the untouched wires,
// and counter-controlled reflection blocks built from sqrt(O^(w)) with
// O = (I - H_term)/2.  Accepts (pair measured |01>) with probability
// <psi|O|psi> on weight-k witnesses.
QuantumCircuit energy_measurement_gadget(const LocalTerm& term, int n, int k);

// Full verification circuit W_H: W-state term selection plus per-term routed
// gadgets; acceptance 1 - (m + <psi|H|psi>)/(2M).
ReductionArtifact wlh_to_wpcsat(const LocalHamiltonian& h, int k, double a,
                                double b);

struct QsvtOptions {
  double kappa = 1.0;    // constant in the iteration-count bound
  int m_override = -1;   // >= 0 forces the iteration count
  int m_cap = 64;
  std::uint64_t seed = 11;
};

// Gap amplification: alternating projector phases around the base circuit,
// controlled on a {|01>,|10>}-encoded pair; yes-acceptance >= 1-eps and
// no-acceptance <= eps.
ReductionArtifact qsvt_amplify(const QuantumCircuit& c, int k, double c_thr,
                               double s_thr, double eps,
                               const QsvtOptions& opts = {});

// Rewrites a multi-bit acceptance pattern into a single-wire accept by
// flipping a fresh |01> pair under the pattern's controls.
QuantumCircuit normalize_accept_single_wire(const QuantumCircuit& c);

// Lazy grid simulation: R+1 layers of n wires, gate i on layer i-1 followed
// by a column of SWAPs; each wire is touched by at most three gates.
QuantumCircuit grid_embed(const QuantumCircuit& c);

// Indicator-clock circuit-to-Hamiltonian construction over duplicated state
// wires.  Produces H_in + H_out + H_prop + H_clock + H_state on
// 2 N + T + 1 qubits with the clock register designated; intended witness
// weight 2k'+1.  Requires gates on <= 2 wires and a single-wire accept.
ReductionArtifact wpcsat_to_sparse_ham(const QuantumCircuit& grid_circ, int k,
                                       double eps,
                                       std::size_t max_qubits = 4000);

// History state on the produced Hamiltonian's qubits, sector form.
SectorState history_state_sector(const QuantumCircuit& grid_circ,
                                 const SectorState& witness);
// Full-state form for small instances (2N + T + 1 <= 24 wires).
FullState history_state(const QuantumCircuit& grid_circ,
                        const SectorState& witness);

// Constant-weft verifier for an almost spatially sparse projector
// Hamiltonian: samples a color group, measures its terms in parallel into an
// outcome bank, pads with a fanned-out constant 1, and takes one big AND as
// the last gate.  Thresholds c = 1 - a/G, s = 1 - b/(n^2 G) with G groups.
ReductionArtifact sparse_ham_to_weft1(const LocalHamiltonian& h, double a,
                                      double b, int degree_bound = 16);

// One-hot block encoding E(x) over k groups of n wires (lexicographic
// order preserving), hat-gate simulation of 1-qubit gates, Fredkin networks
// for CNOTs, counter-based per-group weight checks, output moved to a |01>
// pair.
ReductionArtifact mini_to_wpcsat(const QuantumCircuit& mini, int k, int n_enc,
                                 double c_thr, double s_thr);

struct LightCone {
  std::set<int> qubits;
  std::vector<std::size_t> gate_indices;
};

// Backward dependency closure of an output wire; classical fanout
// contributes only its control wire, quantum fanout everything.  Gates
// controlled on fanout targets are rewired to the fanout control first.
LightCone light_cone(const QuantumCircuit& c, int wire);

// Extracts the quantum-SAT projector list Pi_j = V^dag |0><0|_j V for the
// inputs of the final big AND, each supported on its light cone, plus
// 1-local ancilla-pinning projectors.
ReductionArtifact sqw1_to_qsat(const QuantumCircuit& v, int cone_cap = 12);

// Classical combinational circuits for the reversibilization step.  Gates
// write to fresh wires (ids assigned upwards from n_inputs), NOT flips in
// place.
struct ClassicalGate {
  enum Kind { kNot, kAnd, kOr, kFanout };
  Kind kind = kNot;
  std::vector<int> inputs;
  std::vector<int> outputs;  // fresh wires; empty for kNot (in place)
};

struct ClassicalCircuit {
  int n_inputs = 0;
  int n_wires = 0;  // inputs + created wires
  std::vector<ClassicalGate> gates;
  int output_wire = 0;

  bool eval(std::uint64_t input_bits) const;  // enumeration oracle
};

// AND/OR gain a 0-ancilla and become (generalized) Toffolis, fanout becomes
// CNOTs, NOT becomes X; acceptance 1 on |x 0...0> iff the circuit accepts x.
ReductionArtifact reversibilize_classical(const ClassicalCircuit& c);

}  // namespace qweft
