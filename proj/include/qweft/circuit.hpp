#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qweft/common.hpp"
#include "qweft/matutil.hpp"

namespace qweft {

enum class GateKind {
  kUnitary1,    // single-qubit unitary; wires = [q]
  kHat,         // diag(1, U, 1) on two wires; wires = [a, b]
  kSwap,        // wires = [a, b]
  kFredkin,     // controlled SWAP; wires = [control, a, b]
  kPhaseE,      // diag(1, e^{i delta}); wires = [q]
  kCnot,        // wires = [control, target]
  kToffoli,     // generalized Toffoli (big); wires = [c_1..c_m, target]
  kBigAnd,      // classical big AND (big); wires = [in_1..in_m, target]
  kFanout,      // wires = [control, t_1..t_m]; classical unless quantum flag
  kControlled,  // polarity controls around an inner gate
  kProjPhase,   // e^{i phi (2P - I)} for described projector P
  kUnitary,     // dense unitary block on listed wires
  kMeasure,     // computational-basis measurement; wires = measured set
};

struct ProjectorSpec {
  std::vector<int> wires;
  // exactly one of the two descriptions is set
  std::vector<int> pattern;  // bit per wire; empty if matrix form
  Matrix matrix;             // Hermitian idempotent on 2^|wires|

  bool is_pattern() const { return !pattern.empty(); }
};

struct GateDescriptor {
  GateKind kind = GateKind::kUnitary;
  std::vector<int> wires;   // semantic order; controls only for kControlled
  Matrix matrix;            // kUnitary1/kHat: 2x2; kUnitary: full block
  double phase = 0.0;       // kPhaseE delta; kProjPhase phi
  ProjectorSpec projector;  // kProjPhase
  std::vector<int> polarities;            // kControlled, parallel to wires
  std::shared_ptr<GateDescriptor> inner;  // kControlled
  bool quantum_fanout = false;            // kFanout

  // every wire the gate touches, controls first, duplicates removed
  std::vector<int> all_wires() const;
  bool is_big() const {
    return kind == GateKind::kToffoli || kind == GateKind::kBigAnd;
  }
};

namespace gates {
GateDescriptor unitary1(int q, const Matrix& u);
GateDescriptor hat(int a, int b, const Matrix& u);
GateDescriptor swap(int a, int b);
GateDescriptor fredkin(int control, int a, int b);
GateDescriptor phase_e(int q, double delta);
GateDescriptor cnot(int control, int target);
GateDescriptor toffoli(std::vector<int> controls, int target);
GateDescriptor big_and(std::vector<int> inputs, int target);
GateDescriptor fanout(int control, std::vector<int> targets,
                      bool quantum = false);
GateDescriptor controlled(std::vector<int> controls, std::vector<int> polarities,
                          GateDescriptor inner);
GateDescriptor proj_phase(double phi, ProjectorSpec p);
GateDescriptor unitary(std::vector<int> wires, const Matrix& u);
GateDescriptor measure(std::vector<int> wires);
}  // namespace gates

struct AcceptClause {
  int wire = 0;
  int value = 1;
};

// Ordered gate list over witness wires [0, n_witness) followed by ancilla
// wires [n_witness, n_witness + n_ancilla).  Acceptance is the projector onto
// the given outcomes of the listed wires.
struct QuantumCircuit {
  int n_witness = 0;
  int n_ancilla = 0;
  std::string ancilla_init;  // '0'/'1' per ancilla wire
  std::vector<GateDescriptor> gates;
  std::vector<AcceptClause> accept;

  int n_total() const { return n_witness + n_ancilla; }
  int ancilla_ones() const;
  int ancilla_bit(int ancilla_wire) const;  // absolute wire index
  void add(GateDescriptor g) { gates.push_back(std::move(g)); }

  // throws std::invalid_argument on malformed circuits (wire bounds, repeated
  // wires inside a gate, non-unitary matrices, bad init/accept)
  void validate() const;
};

// Dense unitary of a non-measurement gate over all_wires() order (first wire
// is the local most significant bit).  Guarded against large supports.
Matrix gate_matrix(const GateDescriptor& g, int max_wires = 14);

int weft_of(const QuantumCircuit& c);
int depth_of(const QuantumCircuit& c);

struct WpVerdict {
  bool ok = true;
  std::optional<std::size_t> gate_index;
  std::optional<std::uint64_t> counterexample;  // basis input over n_total
};

// Per-gate criterion: every gate unitary commutes with the number operator on
// its support.  The counterexample, when attached, is simulation-verified.
WpVerdict check_weight_preserving(const QuantumCircuit& c);

struct FanoutVerdict {
  bool ok = true;
  std::optional<std::size_t> gate_index;
  std::string reason;
};

// Classical fanout legality: targets are 0-initialized ancillas untouched
// before the fanout and used only as controls afterwards.
FanoutVerdict validate_classical_fanout(const QuantumCircuit& c);

}  // namespace qweft
