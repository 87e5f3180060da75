#include "qweft/reductions.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "qweft/wpcompile.hpp"

namespace qweft {

ReductionArtifact indset_to_wlh(const Graph& g, int k) {
  for (auto [u, v] : g.edges)
    if (u < 0 || v < 0 || u >= g.n || v >= g.n || u == v)
      throw std::invalid_argument("indset_to_wlh: bad edge");
  LocalHamiltonian h;
  h.n = g.n;
  h.locality = 2;
  Matrix p11 = Matrix::Zero(4, 4);
  p11(3, 3) = 1.0;
  for (auto [u, v] : g.edges) h.terms.push_back(LocalTerm{{u, v}, p11});
  // diagonal instance: the no-case sector ground energy is an integer >= 1
  h.thresholds = Thresholds{0.0, 1.0};

  ReductionArtifact art;
  art.step = "indset";
  art.hamiltonian = std::move(h);
  art.k_in = art.k_out = k;
  art.energy_thresholds = Thresholds{0.0, 1.0};
  art.metadata["edges"] = static_cast<double>(g.edges.size());
  return art;
}

namespace {

Matrix proj1(int b) {
  Matrix p = Matrix::Zero(2, 2);
  p(b, b) = 1.0;
  return p;
}

// Reorders a term block so its support is ascending.
LocalTerm sorted_term(const LocalTerm& t) {
  const int s = static_cast<int>(t.support.size());
  std::vector<int> perm(s);
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(),
            [&](int a, int b) { return t.support[a] < t.support[b]; });
  LocalTerm out;
  out.support.resize(s);
  for (int i = 0; i < s; ++i) out.support[i] = t.support[perm[i]];
  const Eigen::Index d = Eigen::Index{1} << s;
  out.block = Matrix::Zero(d, d);
  auto remap = [&](Eigen::Index v) {
    Eigen::Index u = 0;
    for (int i = 0; i < s; ++i)
      u |= ((v >> (s - 1 - perm[i])) & 1) << (s - 1 - i);
    return u;
  };
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) out.block(remap(r), remap(c)) = t.block(r, c);
  return out;
}

// Pads a term with identity wires so its support has exactly l qubits.
LocalTerm padded_term(const LocalTerm& t, int l, int n) {
  LocalTerm out = sorted_term(t);
  for (int w = 0; w < n && static_cast<int>(out.support.size()) < l; ++w) {
    if (std::find(out.support.begin(), out.support.end(), w) ==
        out.support.end()) {
      out.support.push_back(w);
      out.block = kron(out.block, Matrix::Identity(2, 2));
    }
  }
  if (static_cast<int>(out.support.size()) != l)
    throw std::invalid_argument("padded_term: not enough qubits");
  return sorted_term(out);
}

// The reflection block of the energy-measurement gadget for one weight w:
// rows/cols ordered as (pair a0 a1) (x) support, with the middle 2x2 block
// structure [[A, B], [B, -A]], A = sqrt(O^(w)), B = sqrt(I - O^(w)) taken in
// one eigenbasis of O^(w).
Matrix reflection_block(const Matrix& o_full, int l, int w) {
  const Eigen::Index d = Eigen::Index{1} << l;
  Matrix pw = Matrix::Zero(d, d);
  for (Eigen::Index v = 0; v < d; ++v)
    if (popcount64(static_cast<std::uint64_t>(v)) == w) pw(v, v) = 1.0;
  const Matrix ow = pw * o_full * pw;
  Eigen::SelfAdjointEigenSolver<Matrix> es(ow);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("reflection_block: eigensolver failed");
  Eigen::VectorXd lam = es.eigenvalues();
  Eigen::VectorXd sa(lam.size()), sb(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    double x = lam[i];
    if (x < -1e-9 || x > 1 + 1e-9)
      throw std::invalid_argument("reflection_block: O^(w) not in [0, I]");
    x = std::clamp(x, 0.0, 1.0);
    sa[i] = std::sqrt(x);
    sb[i] = std::sqrt(1.0 - x);
  }
  const Matrix& v = es.eigenvectors();
  const Matrix a = v * sa.asDiagonal() * v.adjoint();
  const Matrix b = v * sb.asDiagonal() * v.adjoint();

  Matrix u = Matrix::Zero(4 * d, 4 * d);
  u.block(0, 0, d, d) = Matrix::Identity(d, d);            // pair 00
  u.block(d, d, d, d) = a;                                 // 01,01
  u.block(d, 2 * d, d, d) = b;                             // 01,10
  u.block(2 * d, d, d, d) = b;                             // 10,01
  u.block(2 * d, 2 * d, d, d) = -a;                        // 10,10
  u.block(3 * d, 3 * d, d, d) = Matrix::Identity(d, d);    // pair 11
  return u;
}

struct GadgetWires {
  int pair0 = 0, pair1 = 0;
  std::vector<int> counter;  // k+1 wires
};

// Fredkin shift chains writing the weight of `counted` onto the counter.
void emit_weight_counter(QuantumCircuit& c, const std::vector<int>& counted,
                         const std::vector<int>& counter) {
  const int m = static_cast<int>(counter.size());
  for (int q : counted)
    for (int j = m - 1; j >= 1; --j)
      c.add(gates::fredkin(q, counter[j], counter[j - 1]));
}

// Counter-controlled reflection blocks for one (padded) term acting on the
// given slot wires; extra controls are prepended to every emitted gate.
void emit_term_reflections(QuantumCircuit& c, const Matrix& term_block, int l,
                           int k, const std::vector<int>& slots,
                           const GadgetWires& gw,
                           const std::vector<int>& extra_controls) {
  const Eigen::Index d = Eigen::Index{1} << l;
  const Matrix o = (Matrix::Identity(d, d) - term_block) / 2.0;
  std::vector<int> block_wires = {gw.pair0, gw.pair1};
  block_wires.insert(block_wires.end(), slots.begin(), slots.end());
  for (int w = 0; w <= std::min(k, l); ++w) {
    std::vector<int> ctr = extra_controls;
    ctr.push_back(gw.counter[k - w]);
    c.add(gates::controlled(ctr, std::vector<int>(ctr.size(), 1),
                            gates::unitary(block_wires, reflection_block(o, l, w))));
  }
}

}  // namespace

QuantumCircuit energy_measurement_gadget(const LocalTerm& term, int n, int k) {
  if (static_cast<int>(term.support.size()) > n)
    throw std::invalid_argument("energy_measurement_gadget: bad support");
  if (operator_norm(term.block) > 1 + 1e-9)
    throw std::invalid_argument("energy_measurement_gadget: ||H|| > 1");
  const LocalTerm t = sorted_term(term);
  const int l = static_cast<int>(t.support.size());

  QuantumCircuit c;
  c.n_witness = n;
  c.n_ancilla = 2 + k + 1;
  c.ancilla_init = "01" + std::string("1") + std::string(k, '0');
  GadgetWires gw;
  gw.pair0 = n;
  gw.pair1 = n + 1;
  for (int i = 0; i <= k; ++i) gw.counter.push_back(n + 2 + i);

  std::vector<int> untouched;
  for (int w = 0; w < n; ++w)
    if (std::find(t.support.begin(), t.support.end(), w) == t.support.end())
      untouched.push_back(w);
  emit_weight_counter(c, untouched, gw.counter);
  emit_term_reflections(c, t.block, l, k, t.support, gw, {});

  c.accept = {{gw.pair0, 0}, {gw.pair1, 1}};
  return c;
}

ReductionArtifact wlh_to_wpcsat(const LocalHamiltonian& h, int k, double a,
                                double b) {
  if (h.terms.empty()) throw std::invalid_argument("wlh_to_wpcsat: m = 0");
  if (b <= a) throw std::invalid_argument("wlh_to_wpcsat: need b > a");
  if (h.locality > h.n)
    throw std::invalid_argument("wlh_to_wpcsat: locality exceeds n");
  const int n = h.n;
  const int m = static_cast<int>(h.terms.size());
  int logm = 0;
  while ((1 << logm) < m) ++logm;
  const int M = 1 << logm;
  const int l = h.locality;

  QuantumCircuit c;
  c.n_witness = n;
  c.n_ancilla = M + 2 + k + 1;
  c.ancilla_init = std::string(M - 1, '0') + "1" + "01" + "1" + std::string(k, '0');
  auto sel = [&](int j) { return n + j; };  // j = 0..M-1
  GadgetWires gw;
  gw.pair0 = n + M;
  gw.pair1 = n + M + 1;
  for (int i = 0; i <= k; ++i) gw.counter.push_back(n + M + 2 + i);

  // term selection register |0^{M-1} 1> -> |W_M>
  {
    QuantumCircuit wprep = w_state_prep(logm);
    for (auto g : wprep.gates) {
      for (auto& w : g.wires) w += n;
      c.add(std::move(g));
    }
  }

  // route every term's (padded) support into slots 0..l-1
  std::vector<LocalTerm> padded;
  for (const auto& t : h.terms) padded.push_back(padded_term(t, l, n));
  std::vector<std::vector<std::pair<int, int>>> routes(m);
  for (int j = 0; j < m; ++j) {
    std::vector<int> loc(n);
    std::iota(loc.begin(), loc.end(), 0);  // loc[q] = wire holding qubit q
    std::vector<int> at(n);
    std::iota(at.begin(), at.end(), 0);  // at[w] = qubit sitting on wire w
    for (int i = 0; i < l; ++i) {
      const int q = padded[j].support[i];
      const int p = loc[q];
      if (p == i) continue;
      routes[j].push_back({p, i});
      c.add(gates::controlled({sel(j)}, {1}, gates::swap(p, i)));
      std::swap(at[p], at[i]);
      loc[at[p]] = p;
      loc[at[i]] = i;
    }
  }

  // shared weight counter over the fixed complement of the slots
  std::vector<int> complement;
  for (int w = l; w < n; ++w) complement.push_back(w);
  emit_weight_counter(c, complement, gw.counter);

  // term-selected reflection blocks on the slots
  std::vector<int> slots(l);
  std::iota(slots.begin(), slots.end(), 0);
  for (int j = 0; j < m; ++j)
    emit_term_reflections(c, padded[j].block, l, k, slots, gw, {sel(j)});

  // undo the routing
  for (int j = m - 1; j >= 0; --j)
    for (auto it = routes[j].rbegin(); it != routes[j].rend(); ++it)
      c.add(gates::controlled({sel(j)}, {1}, gates::swap(it->first, it->second)));

  c.accept = {{gw.pair0, 0}, {gw.pair1, 1}};

  ReductionArtifact art;
  art.step = "wlh2wpcsat";
  art.k_in = art.k_out = k;
  art.prob_thresholds = {1.0 - (m + a) / (2.0 * M), 1.0 - (m + b) / (2.0 * M)};
  art.metadata["m"] = m;
  art.metadata["M"] = M;
  art.metadata["ancilla_ones"] = c.ancilla_ones();
  art.metadata["wires"] = c.n_total();
  art.circuit = std::move(c);
  return art;
}

namespace {

GateDescriptor inverse_gate(const GateDescriptor& g) {
  GateDescriptor r = g;
  switch (g.kind) {
    case GateKind::kUnitary1:
    case GateKind::kHat:
    case GateKind::kUnitary:
      r.matrix = g.matrix.adjoint();
      return r;
    case GateKind::kSwap:
    case GateKind::kFredkin:
    case GateKind::kCnot:
    case GateKind::kToffoli:
    case GateKind::kBigAnd:
    case GateKind::kFanout:
      return r;  // self-inverse
    case GateKind::kPhaseE:
    case GateKind::kProjPhase:
      r.phase = -g.phase;
      return r;
    case GateKind::kControlled:
      r.inner = std::make_shared<GateDescriptor>(inverse_gate(*g.inner));
      return r;
    case GateKind::kMeasure:
      throw std::invalid_argument("inverse_gate: measurement not invertible");
  }
  throw std::logic_error("inverse_gate: unknown kind");
}

}  // namespace

ReductionArtifact qsvt_amplify(const QuantumCircuit& c, int k, double c_thr,
                               double s_thr, double eps,
                               const QsvtOptions& opts) {
  if (!(eps > 0 && eps < 0.5))
    throw std::invalid_argument("qsvt_amplify: eps must lie in (0, 1/2)");
  if (c_thr <= s_thr)
    throw std::invalid_argument("qsvt_amplify: need c > s");
  for (const auto& g : c.gates)
    if (g.kind == GateKind::kMeasure)
      throw std::invalid_argument(
          "qsvt_amplify: base circuit must be measurement-free");

  int m = opts.m_override >= 0
              ? opts.m_override
              : qsp_iteration_count(c_thr, s_thr, eps, opts.kappa);

  ReductionArtifact art;
  art.step = "amplify";
  art.k_in = art.k_out = k;
  art.metadata["eps"] = eps;

  if (m == 0) {
    // degenerate iterate: the base circuit already decides exactly
    art.circuit = c;
    art.prob_thresholds = {c_thr, s_thr};
    art.phases = PhaseSequence{{}, 0};
    art.metadata["m"] = 0;
    return art;
  }

  QspSolveResult sol;
  for (;;) {
    if (m > opts.m_cap)
      throw std::runtime_error(
          "qsvt_amplify: phase solver failed within the iteration cap");
    sol = solve_amplification_phases(c_thr, s_thr, eps, m, opts.seed);
    if (sol.ok) break;
    m += std::max(1, m / 4);
  }

  const int e0 = c.n_total();
  const int e1 = e0 + 1;
  QuantumCircuit out;
  out.n_witness = c.n_witness;
  out.n_ancilla = c.n_ancilla + 2;
  out.ancilla_init = c.ancilla_init + "01";

  ProjectorSpec accept_proj;  // Pi~: the base circuit's acceptance pattern
  for (const auto& cl : c.accept) {
    accept_proj.wires.push_back(cl.wire);
    accept_proj.pattern.push_back(cl.value);
  }
  ProjectorSpec init_proj;  // Pi: ancillas back at their initialization
  for (int w = c.n_witness; w < c.n_total(); ++w) {
    init_proj.wires.push_back(w);
    init_proj.pattern.push_back(c.ancilla_bit(w));
  }

  Matrix h(2, 2);
  const double inv = 1.0 / std::sqrt(2.0);
  h << inv, inv, inv, -inv;

  auto add_controlled_phase = [&](double phi, const ProjectorSpec& p) {
    out.add(gates::controlled({e0, e1}, {0, 1}, gates::proj_phase(phi, p)));
    out.add(gates::controlled({e0, e1}, {1, 0}, gates::proj_phase(-phi, p)));
  };

  out.add(gates::hat(e0, e1, h));
  for (int j = 1; j <= m; ++j) {
    for (const auto& g : c.gates) out.add(g);
    add_controlled_phase(sol.seq.phases[2 * j - 1], accept_proj);
    for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it)
      out.add(inverse_gate(*it));
    add_controlled_phase(sol.seq.phases[2 * j - 2], init_proj);
  }
  out.add(gates::hat(e0, e1, h));

  out.accept = {{e0, 0}, {e1, 1}};
  for (std::size_t i = 0; i < init_proj.wires.size(); ++i)
    out.accept.push_back({init_proj.wires[i], init_proj.pattern[i]});

  art.prob_thresholds = {1.0 - eps, eps};
  art.metadata["m"] = m;
  art.metadata["yes_min"] = sol.yes_min;
  art.metadata["no_max"] = sol.no_max;
  art.phases = sol.seq;
  art.circuit = std::move(out);
  return art;
}

QuantumCircuit normalize_accept_single_wire(const QuantumCircuit& c) {
  if (c.accept.size() == 1 && c.accept[0].value == 1) return c;
  QuantumCircuit out = c;
  const int p0 = c.n_total();
  const int p1 = p0 + 1;
  out.n_ancilla += 2;
  out.ancilla_init += "01";
  std::vector<int> ctr;
  std::vector<int> pol;
  for (const auto& cl : c.accept) {
    ctr.push_back(cl.wire);
    pol.push_back(cl.value);
  }
  out.add(gates::controlled(ctr, pol, gates::swap(p0, p1)));
  out.accept = {{p0, 1}};
  return out;
}

QuantumCircuit grid_embed(const QuantumCircuit& c) {
  const int n = c.n_total();
  const int r = static_cast<int>(c.gates.size());
  for (const auto& g : c.gates)
    if (g.kind == GateKind::kMeasure)
      throw std::invalid_argument("grid_embed: unitary circuits only");

  QuantumCircuit out;
  out.n_witness = c.n_witness;
  out.n_ancilla = n * (r + 1) - c.n_witness;
  out.ancilla_init =
      c.ancilla_init + std::string(static_cast<std::size_t>(n) * r, '0');
  auto wire = [&](int layer, int col) { return layer * n + col; };

  for (int i = 1; i <= r; ++i) {
    GateDescriptor g = c.gates[i - 1];
    // remap every wire reference into layer i-1
    auto remap = [&](GateDescriptor& d, auto&& self) -> void {
      for (auto& w : d.wires) w = wire(i - 1, w);
      for (auto& w : d.projector.wires) w = wire(i - 1, w);
      if (d.inner) {
        auto in = std::make_shared<GateDescriptor>(*d.inner);
        self(*in, self);
        d.inner = std::move(in);
      }
    };
    remap(g, remap);
    out.add(std::move(g));
    for (int col = 0; col < n; ++col)
      out.add(gates::swap(wire(i - 1, col), wire(i, col)));
  }
  for (const auto& cl : c.accept) out.accept.push_back({wire(r, cl.wire), cl.value});
  return out;
}

bool ClassicalCircuit::eval(std::uint64_t input_bits) const {
  std::vector<int> val(n_wires, 0);
  for (int i = 0; i < n_inputs; ++i) val[i] = bit_of(input_bits, i, n_inputs);
  for (const auto& g : gates) {
    switch (g.kind) {
      case ClassicalGate::kNot:
        val[g.inputs[0]] ^= 1;
        break;
      case ClassicalGate::kAnd: {
        int r = 1;
        for (int w : g.inputs) r &= val[w];
        val[g.outputs[0]] = r;
        break;
      }
      case ClassicalGate::kOr: {
        int r = 0;
        for (int w : g.inputs) r |= val[w];
        val[g.outputs[0]] = r;
        break;
      }
      case ClassicalGate::kFanout:
        for (int w : g.outputs) val[w] = val[g.inputs[0]];
        break;
    }
  }
  return val[output_wire] == 1;
}

ReductionArtifact reversibilize_classical(const ClassicalCircuit& c) {
  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  QuantumCircuit q;
  q.n_witness = c.n_inputs;
  q.n_ancilla = c.n_wires - c.n_inputs;
  q.ancilla_init = std::string(q.n_ancilla, '0');
  for (const auto& g : c.gates) {
    switch (g.kind) {
      case ClassicalGate::kNot:
        q.add(gates::unitary1(g.inputs[0], x));
        break;
      case ClassicalGate::kAnd:
        q.add(gates::toffoli(g.inputs, g.outputs[0]));
        break;
      case ClassicalGate::kOr:
        for (int w : g.inputs) q.add(gates::unitary1(w, x));
        q.add(gates::toffoli(g.inputs, g.outputs[0]));
        q.add(gates::unitary1(g.outputs[0], x));
        for (int w : g.inputs) q.add(gates::unitary1(w, x));
        break;
      case ClassicalGate::kFanout:
        for (int w : g.outputs) q.add(gates::cnot(g.inputs[0], w));
        break;
    }
  }
  q.accept = {{c.output_wire, 1}};

  ReductionArtifact art;
  art.step = "reversibilize";
  art.prob_thresholds = {1.0, 0.0};
  art.metadata["ancillas"] = q.n_ancilla;
  art.circuit = std::move(q);
  return art;
}

}  // namespace qweft
