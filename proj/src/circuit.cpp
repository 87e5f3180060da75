#include "qweft/circuit.hpp"

#include <algorithm>
#include <set>

#include "qweft/simulator.hpp"

namespace qweft {

namespace {

void append_unique(std::vector<int>& out, int w) {
  if (std::find(out.begin(), out.end(), w) == out.end()) out.push_back(w);
}

}  // namespace

std::vector<int> GateDescriptor::all_wires() const {
  std::vector<int> out;
  for (int w : wires) append_unique(out, w);
  if (kind == GateKind::kProjPhase)
    for (int w : projector.wires) append_unique(out, w);
  if (inner)
    for (int w : inner->all_wires()) append_unique(out, w);
  return out;
}

namespace gates {

GateDescriptor unitary1(int q, const Matrix& u) {
  GateDescriptor g;
  g.kind = GateKind::kUnitary1;
  g.wires = {q};
  g.matrix = u;
  return g;
}

GateDescriptor hat(int a, int b, const Matrix& u) {
  GateDescriptor g;
  g.kind = GateKind::kHat;
  g.wires = {a, b};
  g.matrix = u;
  return g;
}

GateDescriptor swap(int a, int b) {
  GateDescriptor g;
  g.kind = GateKind::kSwap;
  g.wires = {a, b};
  return g;
}

GateDescriptor fredkin(int control, int a, int b) {
  GateDescriptor g;
  g.kind = GateKind::kFredkin;
  g.wires = {control, a, b};
  return g;
}

GateDescriptor phase_e(int q, double delta) {
  GateDescriptor g;
  g.kind = GateKind::kPhaseE;
  g.wires = {q};
  g.phase = delta;
  return g;
}

GateDescriptor cnot(int control, int target) {
  GateDescriptor g;
  g.kind = GateKind::kCnot;
  g.wires = {control, target};
  return g;
}

GateDescriptor toffoli(std::vector<int> controls, int target) {
  GateDescriptor g;
  g.kind = GateKind::kToffoli;
  g.wires = std::move(controls);
  g.wires.push_back(target);
  return g;
}

GateDescriptor big_and(std::vector<int> inputs, int target) {
  GateDescriptor g;
  g.kind = GateKind::kBigAnd;
  g.wires = std::move(inputs);
  g.wires.push_back(target);
  return g;
}

GateDescriptor fanout(int control, std::vector<int> targets, bool quantum) {
  GateDescriptor g;
  g.kind = GateKind::kFanout;
  g.wires = {control};
  g.wires.insert(g.wires.end(), targets.begin(), targets.end());
  g.quantum_fanout = quantum;
  return g;
}

GateDescriptor controlled(std::vector<int> controls, std::vector<int> polarities,
                          GateDescriptor inner) {
  GateDescriptor g;
  g.kind = GateKind::kControlled;
  g.wires = std::move(controls);
  g.polarities = std::move(polarities);
  if (g.polarities.empty()) g.polarities.assign(g.wires.size(), 1);
  g.inner = std::make_shared<GateDescriptor>(std::move(inner));
  return g;
}

GateDescriptor proj_phase(double phi, ProjectorSpec p) {
  GateDescriptor g;
  g.kind = GateKind::kProjPhase;
  g.phase = phi;
  g.projector = std::move(p);
  return g;
}

GateDescriptor unitary(std::vector<int> wires, const Matrix& u) {
  GateDescriptor g;
  g.kind = GateKind::kUnitary;
  g.wires = std::move(wires);
  g.matrix = u;
  return g;
}

GateDescriptor measure(std::vector<int> wires) {
  GateDescriptor g;
  g.kind = GateKind::kMeasure;
  g.wires = std::move(wires);
  return g;
}

}  // namespace gates

int QuantumCircuit::ancilla_ones() const {
  return static_cast<int>(std::count(ancilla_init.begin(), ancilla_init.end(), '1'));
}

int QuantumCircuit::ancilla_bit(int wire) const {
  if (wire < n_witness || wire >= n_total())
    throw std::invalid_argument("ancilla_bit: not an ancilla wire");
  return ancilla_init[wire - n_witness] == '1' ? 1 : 0;
}

namespace {

void validate_gate(const GateDescriptor& g, int n) {
  const auto touched = g.all_wires();
  for (int w : touched)
    if (w < 0 || w >= n)
      throw std::invalid_argument("gate wire out of range");
  // distinctness over the flattened wire set
  std::set<int> uniq;
  auto check_list = [&uniq](const std::vector<int>& ws) {
    for (int w : ws)
      if (!uniq.insert(w).second)
        throw std::invalid_argument("gate wires not distinct");
  };
  check_list(g.wires);
  if (g.kind == GateKind::kProjPhase) check_list(g.projector.wires);
  if (g.inner) check_list(g.inner->all_wires());

  const double utol = 1e-12;
  switch (g.kind) {
    case GateKind::kUnitary1:
    case GateKind::kHat:
      if (g.matrix.rows() != 2 || g.matrix.cols() != 2 ||
          !is_unitary(g.matrix, utol))
        throw std::invalid_argument("gate carries a non-unitary 2x2 matrix");
      break;
    case GateKind::kUnitary: {
      const auto d = static_cast<Eigen::Index>(1) << g.wires.size();
      if (g.matrix.rows() != d || g.matrix.cols() != d ||
          !is_unitary(g.matrix, utol))
        throw std::invalid_argument("unitary block is not unitary");
      break;
    }
    case GateKind::kProjPhase: {
      const auto& p = g.projector;
      if (p.is_pattern()) {
        if (p.pattern.size() != p.wires.size())
          throw std::invalid_argument("projector pattern length mismatch");
      } else {
        const auto d = static_cast<Eigen::Index>(1) << p.wires.size();
        if (p.matrix.rows() != d || !is_hermitian(p.matrix, utol) ||
            (p.matrix * p.matrix - p.matrix).cwiseAbs().maxCoeff() > 1e-10)
          throw std::invalid_argument("projector matrix is not idempotent");
      }
      break;
    }
    case GateKind::kControlled:
      if (g.polarities.size() != g.wires.size())
        throw std::invalid_argument("controlled gate polarity size mismatch");
      if (!g.inner) throw std::invalid_argument("controlled gate lacks inner");
      validate_gate(*g.inner, n);
      break;
    case GateKind::kToffoli:
    case GateKind::kBigAnd:
    case GateKind::kFanout:
      if (g.wires.size() < 2)
        throw std::invalid_argument("gate needs at least two wires");
      break;
    default:
      break;
  }
}

}  // namespace

void QuantumCircuit::validate() const {
  if (n_witness < 0 || n_ancilla < 0)
    throw std::invalid_argument("negative wire counts");
  if (static_cast<int>(ancilla_init.size()) != n_ancilla)
    throw std::invalid_argument("ancilla_init length != n_ancilla");
  for (char c : ancilla_init)
    if (c != '0' && c != '1')
      throw std::invalid_argument("ancilla_init must be 0/1");
  for (const auto& g : gates) validate_gate(g, n_total());
  for (const auto& a : accept) {
    if (a.wire < 0 || a.wire >= n_total())
      throw std::invalid_argument("accept wire out of range");
    if (a.value != 0 && a.value != 1)
      throw std::invalid_argument("accept value must be 0/1");
  }
}

Matrix gate_matrix(const GateDescriptor& g, int max_wires) {
  const auto ws = g.all_wires();
  const int s = static_cast<int>(ws.size());
  if (s > max_wires)
    throw std::invalid_argument("gate_matrix: support too large");
  const Eigen::Index dim = Eigen::Index{1} << s;
  // local index of a wire within ws (first = most significant)
  auto loc = [&](int wire) {
    for (int i = 0; i < s; ++i)
      if (ws[i] == wire) return i;
    throw std::logic_error("gate_matrix: wire not in support");
  };
  auto bit_at = [&](Eigen::Index v, int pos) {
    return static_cast<int>((v >> (s - 1 - pos)) & 1);
  };

  switch (g.kind) {
    case GateKind::kUnitary1:
      return g.matrix;
    case GateKind::kHat: {
      Matrix m = Matrix::Identity(4, 4);
      m(1, 1) = g.matrix(0, 0);
      m(1, 2) = g.matrix(0, 1);
      m(2, 1) = g.matrix(1, 0);
      m(2, 2) = g.matrix(1, 1);
      return m;
    }
    case GateKind::kSwap: {
      Matrix m = Matrix::Zero(4, 4);
      m(0, 0) = m(3, 3) = 1;
      m(1, 2) = m(2, 1) = 1;
      return m;
    }
    case GateKind::kFredkin: {
      Matrix m = Matrix::Identity(8, 8);
      m(0b101, 0b101) = m(0b110, 0b110) = 0;
      m(0b101, 0b110) = m(0b110, 0b101) = 1;
      return m;
    }
    case GateKind::kPhaseE: {
      Matrix m = Matrix::Identity(2, 2);
      m(1, 1) = std::polar(1.0, g.phase);
      return m;
    }
    case GateKind::kCnot: {
      Matrix m = Matrix::Identity(4, 4);
      m(2, 2) = m(3, 3) = 0;
      m(2, 3) = m(3, 2) = 1;
      return m;
    }
    case GateKind::kToffoli:
    case GateKind::kBigAnd: {
      Matrix m = Matrix::Identity(dim, dim);
      const Eigen::Index all_on = dim - 2;  // controls 1..1, target 0
      m(all_on, all_on) = m(dim - 1, dim - 1) = 0;
      m(all_on, dim - 1) = m(dim - 1, all_on) = 1;
      return m;
    }
    case GateKind::kFanout: {
      Matrix m = Matrix::Zero(dim, dim);
      const Eigen::Index tmask = (dim >> 1) - 1;  // all wires but the control
      for (Eigen::Index v = 0; v < dim; ++v) {
        const bool on = (v >> (s - 1)) & 1;
        m(on ? (v ^ tmask) : v, v) = 1;
      }
      return m;
    }
    case GateKind::kControlled: {
      Matrix m = Matrix::Identity(dim, dim);
      const Matrix mi = gate_matrix(*g.inner, max_wires);
      const auto iws = g.inner->all_wires();
      const int si = static_cast<int>(iws.size());
      for (Eigen::Index v = 0; v < dim; ++v) {
        bool match = true;
        for (std::size_t ci = 0; ci < g.wires.size(); ++ci)
          if (bit_at(v, loc(g.wires[ci])) != g.polarities[ci]) match = false;
        if (!match) continue;
        m.col(v).setZero();
        Eigen::Index p = 0;
        for (int j = 0; j < si; ++j) p = (p << 1) | bit_at(v, loc(iws[j]));
        for (Eigen::Index q = 0; q < (Eigen::Index{1} << si); ++q) {
          if (mi(q, p) == cxd(0, 0)) continue;
          Eigen::Index u = v;
          for (int j = 0; j < si; ++j) {
            const int pos = loc(iws[j]);
            const Eigen::Index mask = Eigen::Index{1} << (s - 1 - pos);
            u = ((q >> (si - 1 - j)) & 1) ? (u | mask) : (u & ~mask);
          }
          m(u, v) = mi(q, p);
        }
      }
      return m;
    }
    case GateKind::kProjPhase: {
      // e^{i phi (2P - I)} = e^{i phi} P + e^{-i phi} (I - P)
      const cxd on = std::polar(1.0, g.phase);
      const cxd off = std::polar(1.0, -g.phase);
      if (g.projector.is_pattern()) {
        Matrix m = Matrix::Zero(dim, dim);
        for (Eigen::Index v = 0; v < dim; ++v) {
          bool match = true;
          for (std::size_t i = 0; i < g.projector.wires.size(); ++i)
            if (bit_at(v, loc(g.projector.wires[i])) != g.projector.pattern[i])
              match = false;
          m(v, v) = match ? on : off;
        }
        return m;
      }
      const Matrix& p = g.projector.matrix;
      return on * p + off * (Matrix::Identity(dim, dim) - p);
    }
    case GateKind::kUnitary:
      return g.matrix;
    case GateKind::kMeasure:
      throw std::invalid_argument("gate_matrix: measurement has no unitary");
  }
  throw std::logic_error("gate_matrix: unknown kind");
}

int weft_of(const QuantumCircuit& c) {
  std::vector<int> cnt(c.n_total(), 0);
  for (const auto& g : c.gates) {
    if (g.kind == GateKind::kMeasure) continue;  // per-wire, no coupling
    if (g.kind == GateKind::kFanout) {
      const int base = cnt[g.wires[0]];
      for (std::size_t i = 1; i < g.wires.size(); ++i)
        cnt[g.wires[i]] = std::max(cnt[g.wires[i]], base);
      continue;
    }
    const auto ws = g.all_wires();
    int m = 0;
    for (int w : ws) m = std::max(m, cnt[w]);
    if (g.is_big()) ++m;
    for (int w : ws) cnt[w] = m;
  }
  int r = 0;
  for (int v : cnt) r = std::max(r, v);
  return r;
}

int depth_of(const QuantumCircuit& c) {
  std::vector<int> layer(c.n_total(), 0);
  for (const auto& g : c.gates) {
    const auto ws = g.all_wires();
    int m = 0;
    for (int w : ws) m = std::max(m, layer[w]);
    ++m;  // measurements count one layer each, by convention
    for (int w : ws) layer[w] = m;
  }
  int r = 0;
  for (int v : layer) r = std::max(r, v);
  return r;
}

namespace {

// Structural weight-preservation check per gate; returns an offending local
// input pattern over all_wires() when the gate fails.
std::optional<std::uint64_t> gate_wp_violation(const GateDescriptor& g) {
  constexpr double tol = 1e-12;
  switch (g.kind) {
    case GateKind::kHat:
    case GateKind::kSwap:
    case GateKind::kFredkin:
    case GateKind::kPhaseE:
      return std::nullopt;
    case GateKind::kUnitary1:
      if (std::abs(g.matrix(0, 1)) > tol || std::abs(g.matrix(1, 0)) > tol)
        return std::abs(g.matrix(1, 0)) > tol ? 0b0 : 0b1;
      return std::nullopt;
    case GateKind::kCnot:
      return 0b10;  // control 1, target 0 -> 11
    case GateKind::kToffoli:
    case GateKind::kBigAnd: {
      // all controls on, target 0 -> weight grows by one
      return (std::uint64_t{1} << g.wires.size()) - 2;
    }
    case GateKind::kFanout:
      // control 1, targets 0 -> targets flip on
      return std::uint64_t{1} << (g.wires.size() - 1);
    case GateKind::kControlled: {
      auto sub = gate_wp_violation(*g.inner);
      if (!sub) return std::nullopt;
      // controls at their polarities, inner pattern appended in all_wires()
      // order (controls first, then inner wires)
      const auto iws = g.inner->all_wires();
      std::uint64_t pat = 0;
      for (std::size_t i = 0; i < g.wires.size(); ++i)
        pat = (pat << 1) | static_cast<std::uint64_t>(g.polarities[i]);
      pat = (pat << iws.size()) | *sub;
      return pat;
    }
    case GateKind::kProjPhase: {
      if (g.projector.is_pattern()) return std::nullopt;  // diagonal
      if (std::abs(std::sin(g.phase)) <= tol) return std::nullopt;
      const Matrix& p = g.projector.matrix;
      for (Eigen::Index r = 0; r < p.rows(); ++r)
        for (Eigen::Index cc = 0; cc < p.cols(); ++cc)
          if (popcount64(r) != popcount64(cc) && std::abs(p(r, cc)) > tol)
            return static_cast<std::uint64_t>(cc);
      return std::nullopt;
    }
    case GateKind::kUnitary: {
      for (Eigen::Index r = 0; r < g.matrix.rows(); ++r)
        for (Eigen::Index cc = 0; cc < g.matrix.cols(); ++cc)
          if (popcount64(r) != popcount64(cc) && std::abs(g.matrix(r, cc)) > tol)
            return static_cast<std::uint64_t>(cc);
      return std::nullopt;
    }
    case GateKind::kMeasure:
      return std::nullopt;  // rejected earlier
  }
  return std::nullopt;
}

}  // namespace

WpVerdict check_weight_preserving(const QuantumCircuit& c) {
  for (const auto& g : c.gates)
    if (g.kind == GateKind::kMeasure)
      throw std::invalid_argument(
          "check_weight_preserving: circuit contains measurements");
  for (std::size_t gi = 0; gi < c.gates.size(); ++gi) {
    const auto& g = c.gates[gi];
    auto local = gate_wp_violation(g);
    if (!local) continue;
    WpVerdict v;
    v.ok = false;
    v.gate_index = gi;
    // embed the local pattern as a global basis input and confirm the full
    // circuit leaks weight on it; earlier gates may mask the effect, in which
    // case the verdict stands without a counterexample
    const auto ws = g.all_wires();
    const int n = c.n_total();
    std::uint64_t x = 0;
    for (std::size_t i = 0; i < ws.size(); ++i)
      x = with_bit(x, ws[i], n,
                   static_cast<int>((*local >> (ws.size() - 1 - i)) & 1));
    if (n <= 20 && circuit_leaks_weight(c, x)) v.counterexample = x;
    return v;
  }
  return WpVerdict{};
}

FanoutVerdict validate_classical_fanout(const QuantumCircuit& c) {
  const int n = c.n_total();
  std::vector<bool> touched(n, false);
  // wires carrying classical data: fanout controls/targets and measured
  // wires; usable afterwards only as controls (or measured again)
  std::vector<bool> classical(n, false);
  for (std::size_t gi = 0; gi < c.gates.size(); ++gi) {
    const auto& g = c.gates[gi];
    if (g.kind == GateKind::kFanout && !g.quantum_fanout) {
      if (classical[g.wires[0]] && touched[g.wires[0]]) {
        // re-fanning a classical wire is a control use; fine
      }
      for (std::size_t i = 1; i < g.wires.size(); ++i) {
        const int t = g.wires[i];
        const bool is_zero_anc = t >= c.n_witness && c.ancilla_bit(t) == 0;
        if (!is_zero_anc || touched[t])
          return FanoutVerdict{false, gi,
                               "fanout target not a fresh 0-ancilla"};
      }
      for (int w : g.wires) {
        touched[w] = true;
        classical[w] = true;
      }
      continue;
    }
    std::vector<int> control_wires;
    if (g.kind == GateKind::kControlled) {
      control_wires = g.wires;
      const GateDescriptor* cur = g.inner.get();
      while (cur && cur->kind == GateKind::kControlled) {
        control_wires.insert(control_wires.end(), cur->wires.begin(),
                             cur->wires.end());
        cur = cur->inner.get();
      }
    }
    if (g.kind == GateKind::kFredkin) control_wires = {g.wires[0]};
    if (g.kind == GateKind::kCnot || g.kind == GateKind::kToffoli ||
        g.kind == GateKind::kBigAnd)
      control_wires.assign(g.wires.begin(), g.wires.end() - 1);
    if (g.kind == GateKind::kMeasure) {
      for (int w : g.wires) {
        touched[w] = true;
        classical[w] = true;
      }
      continue;
    }
    for (int w : g.all_wires()) {
      const bool as_control = std::find(control_wires.begin(),
                                        control_wires.end(),
                                        w) != control_wires.end();
      if (classical[w] && !as_control)
        return FanoutVerdict{false, gi,
                             "classical wire used other than as control"};
      touched[w] = true;
    }
  }
  return FanoutVerdict{};
}

}  // namespace qweft
