#include <algorithm>

#include "qweft/reductions.hpp"

namespace qweft {

namespace {

// Rewires controls that sit on classical fanout targets back to the fanout's
// control wire (transitively), per the delayed-measurement preprocessing.
std::vector<GateDescriptor> rewire_fanout_controls(
    const std::vector<GateDescriptor>& gates) {
  std::vector<GateDescriptor> out;
  std::map<int, int> root;  // fanout target -> current source wire
  auto resolve = [&](int w) {
    auto it = root.find(w);
    return it == root.end() ? w : it->second;
  };
  for (const auto& g : gates) {
    GateDescriptor r = g;
    switch (g.kind) {
      case GateKind::kFanout:
        if (!g.quantum_fanout)
          for (std::size_t i = 1; i < g.wires.size(); ++i)
            root[g.wires[i]] = resolve(g.wires[0]);
        break;
      case GateKind::kControlled: {
        for (auto& w : r.wires) w = resolve(w);
        break;
      }
      case GateKind::kFredkin:
        r.wires[0] = resolve(r.wires[0]);
        break;
      case GateKind::kCnot:
        r.wires[0] = resolve(r.wires[0]);
        break;
      case GateKind::kToffoli:
      case GateKind::kBigAnd:
        for (std::size_t i = 0; i + 1 < r.wires.size(); ++i)
          r.wires[i] = resolve(r.wires[i]);
        break;
      default:
        break;
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

namespace {

// control wires of a gate whose classical status suppresses backward
// dependence (single layer; nested controls are flattened)
std::vector<int> control_wires_of(const GateDescriptor& g) {
  switch (g.kind) {
    case GateKind::kFredkin:
      return {g.wires[0]};
    case GateKind::kCnot:
      return {g.wires[0]};
    case GateKind::kToffoli:
    case GateKind::kBigAnd:
      return {g.wires.begin(), g.wires.end() - 1};
    case GateKind::kControlled: {
      std::vector<int> out = g.wires;
      const GateDescriptor* cur = g.inner.get();
      while (cur && cur->kind == GateKind::kControlled) {
        out.insert(out.end(), cur->wires.begin(), cur->wires.end());
        cur = cur->inner.get();
      }
      return out;
    }
    default:
      return {};
  }
}

}  // namespace

LightCone light_cone(const QuantumCircuit& c, int wire) {
  if (wire < 0 || wire >= c.n_total())
    throw std::invalid_argument("light_cone: wire out of range");
  const auto gates = rewire_fanout_controls(c.gates);

  // wires carrying classical information before gate i: fanout controls and
  // targets, and measured wires, from their gate onward
  std::vector<std::set<int>> classical_before(gates.size() + 1);
  std::set<int> cls;
  for (std::size_t i = 0; i < gates.size(); ++i) {
    classical_before[i] = cls;
    const auto& g = gates[i];
    if (g.kind == GateKind::kFanout && !g.quantum_fanout)
      for (int w : g.wires) cls.insert(w);
    if (g.kind == GateKind::kMeasure)
      for (int w : g.wires) cls.insert(w);
  }
  classical_before[gates.size()] = cls;

  LightCone cone;
  cone.qubits.insert(wire);
  std::vector<std::size_t> rev;
  for (std::size_t i = gates.size(); i-- > 0;) {
    const auto& g = gates[i];
    if (g.kind == GateKind::kMeasure) continue;
    if (g.kind == GateKind::kFanout && !g.quantum_fanout) {
      bool hit = false;
      for (std::size_t t = 1; t < g.wires.size(); ++t)
        if (cone.qubits.count(g.wires[t])) hit = true;
      if (hit) {
        cone.qubits.insert(g.wires[0]);
        rev.push_back(i);
      }
      continue;
    }
    // classical controls pass dependence one way only and never trigger
    // inclusion; everything else does
    std::vector<int> quiet;
    for (int w : control_wires_of(g))
      if (classical_before[i].count(w)) quiet.push_back(w);
    const auto ws = g.all_wires();
    bool hit = false;
    for (int w : ws)
      if (cone.qubits.count(w) &&
          std::find(quiet.begin(), quiet.end(), w) == quiet.end())
        hit = true;
    if (hit) {
      for (int w : ws) cone.qubits.insert(w);
      rev.push_back(i);
    }
  }
  cone.gate_indices.assign(rev.rbegin(), rev.rend());
  return cone;
}

ReductionArtifact sqw1_to_qsat(const QuantumCircuit& v, int cone_cap) {
  // SQW form: the only big gate is an AND gate and it is the last gate
  std::size_t n_big = 0;
  for (const auto& g : v.gates)
    if (g.is_big()) ++n_big;
  if (n_big != 1 || v.gates.empty() || !v.gates.back().is_big() ||
      v.gates.back().kind != GateKind::kBigAnd)
    throw std::invalid_argument(
        "sqw1_to_qsat: circuit must end in its single big AND gate");

  const GateDescriptor big = v.gates.back();
  const std::vector<int> and_inputs(big.wires.begin(), big.wires.end() - 1);

  QuantumCircuit body = v;
  body.gates.pop_back();
  body.gates = rewire_fanout_controls(body.gates);
  body.gates.erase(std::remove_if(body.gates.begin(), body.gates.end(),
                                  [](const GateDescriptor& g) {
                                    return g.kind == GateKind::kMeasure;
                                  }),
                   body.gates.end());

  LocalHamiltonian qsat;
  qsat.n = v.n_total();
  ReductionArtifact art;
  art.step = "sqw2qsat";

  for (int j : and_inputs) {
    LightCone cone = light_cone(body, j);
    const int s = static_cast<int>(cone.qubits.size());
    if (s > cone_cap)
      throw std::invalid_argument("sqw1_to_qsat: light cone exceeds cap");
    std::vector<int> support(cone.qubits.begin(), cone.qubits.end());
    std::map<int, int> local;
    for (int i = 0; i < s; ++i) local[support[i]] = i;

    // unitary of the cone gates over the cone qubits
    const Eigen::Index d = Eigen::Index{1} << s;
    Matrix u = Matrix::Identity(d, d);
    for (std::size_t gi : cone.gate_indices) {
      GateDescriptor g = body.gates[gi];
      auto remap = [&](GateDescriptor& gd, auto&& self) -> void {
        for (auto& w : gd.wires) w = local.at(w);
        for (auto& w : gd.projector.wires) w = local.at(w);
        if (gd.inner) {
          auto in = std::make_shared<GateDescriptor>(*gd.inner);
          self(*in, self);
          gd.inner = std::move(in);
        }
      };
      remap(g, remap);
      // embed the gate into the cone space
      const auto ws = g.all_wires();
      Matrix gm = gate_matrix(g);
      Matrix full = Matrix::Zero(d, d);
      const int gs = static_cast<int>(ws.size());
      const Eigen::Index gd_dim = Eigen::Index{1} << gs;
      for (Eigen::Index base = 0; base < d; ++base) {
        bool is_base = true;
        for (int wsi : ws)
          if ((base >> (s - 1 - wsi)) & 1) is_base = false;
        if (!is_base) continue;
        for (Eigen::Index p = 0; p < gd_dim; ++p) {
          Eigen::Index col = base;
          for (int wi = 0; wi < gs; ++wi)
            if ((p >> (gs - 1 - wi)) & 1)
              col |= Eigen::Index{1} << (s - 1 - ws[wi]);
          for (Eigen::Index q = 0; q < gd_dim; ++q) {
            if (gm(q, p) == cxd(0, 0)) continue;
            Eigen::Index row = base;
            for (int wi = 0; wi < gs; ++wi)
              if ((q >> (gs - 1 - wi)) & 1)
                row |= Eigen::Index{1} << (s - 1 - ws[wi]);
            full(row, col) = gm(q, p);
          }
        }
      }
      u = full * u;
    }

    // Pi_j = U^dag |0><0|_j U over the cone
    Matrix p0 = Matrix::Zero(d, d);
    const int jl = local.at(j);
    for (Eigen::Index x = 0; x < d; ++x)
      if (((x >> (s - 1 - jl)) & 1) == 0) p0(x, x) = 1.0;
    qsat.terms.push_back(LocalTerm{support, u.adjoint() * p0 * u});
    qsat.locality = std::max(qsat.locality, s);
    art.metadata["cone_" + std::to_string(j)] = s;
  }

  // ancilla-pinning projectors keep the sector verdict aligned with the
  // circuit decision
  for (int w = v.n_witness; w < v.n_total(); ++w) {
    Matrix pin = Matrix::Zero(2, 2);
    pin(1 - v.ancilla_bit(w), 1 - v.ancilla_bit(w)) = 1.0;
    qsat.terms.push_back(LocalTerm{{w}, pin});
    qsat.locality = std::max(qsat.locality, 1);
  }

  const double b = 0.5;  // Def: any 1/poly suffices; pinned for reports
  qsat.thresholds = Thresholds{0.0, b};
  art.energy_thresholds = Thresholds{0.0, b};
  art.metadata["projectors"] = static_cast<double>(qsat.terms.size());
  art.hamiltonian = std::move(qsat);
  return art;
}

namespace {

// position of the single 1 in E(x) for value v in 0..n-1: lexicographic
// order preserving one-hot, E(0) = 0..01 so larger values sit further left
int onehot_pos(int value, int n) { return n - 1 - value; }

}  // namespace

ReductionArtifact mini_to_wpcsat(const QuantumCircuit& mini, int k, int n_enc,
                                 double c_thr, double s_thr) {
  if (n_enc < 2 || (n_enc & (n_enc - 1)) != 0)
    throw std::invalid_argument("mini_to_wpcsat: n must be a power of two");
  int logn = 0;
  while ((1 << logn) < n_enc) ++logn;
  if (mini.n_ancilla != 0)
    throw std::invalid_argument("mini_to_wpcsat: mini circuit must be ancilla-free");
  if (mini.n_witness != k * logn)
    throw std::invalid_argument("mini_to_wpcsat: mini circuit must act on k log n qubits");
  if (mini.accept.size() != 1 || mini.accept[0].value != 1)
    throw std::invalid_argument("mini_to_wpcsat: single-wire acceptance required");
  for (const auto& g : mini.gates)
    if (g.kind != GateKind::kUnitary1 && g.kind != GateKind::kCnot)
      throw std::invalid_argument(
          "mini_to_wpcsat: mini circuit must use 1-qubit gates and CNOTs");

  QuantumCircuit c;
  c.n_witness = k * n_enc;
  const int counters0 = c.n_witness;
  const int f0 = counters0 + k * (n_enc + 1);
  const int f1 = f0 + 1;
  const int o0 = f1 + 1;
  const int o1 = o0 + 1;
  const int w0 = o1 + 1;
  const int w1 = w0 + 1;
  c.n_ancilla = k * (n_enc + 1) + 6;
  for (int g = 0; g < k; ++g)
    c.ancilla_init += "1" + std::string(n_enc, '0');
  c.ancilla_init += "01" + std::string("01") + "01";

  auto qwire = [&](int group, int value) {
    return group * n_enc + onehot_pos(value, n_enc);
  };
  auto counter = [&](int group, int i) {
    return counters0 + group * (n_enc + 1) + i;
  };

  for (const auto& g : mini.gates) {
    if (g.kind == GateKind::kUnitary1) {
      const int group = g.wires[0] / logn;
      const int bit = g.wires[0] % logn;
      for (int x = 0; x < n_enc; ++x) {
        if ((x >> (logn - 1 - bit)) & 1) continue;  // enumerate x with bit 0
        const int x1 = x | (1 << (logn - 1 - bit));
        // E(x) is logical 0: pair order (pos(E(x1)), pos(E(x)))
        c.add(gates::hat(qwire(group, x1), qwire(group, x), g.matrix));
      }
      continue;
    }
    // CNOT
    const int cw = g.wires[0], tw = g.wires[1];
    const int cg = cw / logn, ci = cw % logn;
    const int tg = tw / logn, ti = tw % logn;
    if (cg == tg) {
      for (int x = 0; x < n_enc; ++x) {
        if (!((x >> (logn - 1 - ci)) & 1)) continue;      // control bit 1
        if ((x >> (logn - 1 - ti)) & 1) continue;         // target bit 0
        const int x1 = x | (1 << (logn - 1 - ti));
        c.add(gates::swap(qwire(cg, x), qwire(cg, x1)));
      }
      continue;
    }
    // inter-group: latch the control bit onto the |01> pair with Fredkins,
    // run the controlled SWAP network, then unlatch
    std::vector<GateDescriptor> latch;
    for (int x = 0; x < n_enc; ++x)
      if ((x >> (logn - 1 - ci)) & 1)
        latch.push_back(gates::fredkin(qwire(cg, x), f0, f1));
    for (const auto& l : latch) c.add(l);
    for (int y = 0; y < n_enc; ++y) {
      if ((y >> (logn - 1 - ti)) & 1) continue;
      const int y1 = y | (1 << (logn - 1 - ti));
      c.add(gates::fredkin(f0, qwire(tg, y), qwire(tg, y1)));
    }
    for (auto it = latch.rbegin(); it != latch.rend(); ++it) c.add(*it);
  }

  // route the simulated output bit onto the |01> output pair
  {
    const int ow = mini.accept[0].wire;
    const int og = ow / logn, oi = ow % logn;
    for (int x = 0; x < n_enc; ++x)
      if ((x >> (logn - 1 - oi)) & 1)
        c.add(gates::fredkin(qwire(og, x), o0, o1));
  }

  // per-group weight counters; counter wire 1 reads "weight exactly one"
  for (int g = 0; g < k; ++g)
    for (int pos = 0; pos < n_enc; ++pos)
      for (int j = n_enc; j >= 1; --j)
        c.add(gates::fredkin(g * n_enc + pos, counter(g, j), counter(g, j - 1)));

  // aggregate: flip the |01> pair iff every group passed its weight check
  {
    std::vector<int> ctr;
    for (int g = 0; g < k; ++g) ctr.push_back(counter(g, 1));
    c.add(gates::controlled(ctr, std::vector<int>(ctr.size(), 1),
                            gates::swap(w0, w1)));
  }

  c.accept = {{o0, 1}, {o1, 0}, {w0, 1}, {w1, 0}};

  ReductionArtifact art;
  art.step = "mini";
  art.k_in = art.k_out = k;
  art.prob_thresholds = {c_thr, s_thr};
  art.metadata["wires"] = c.n_total();
  art.metadata["ancilla_ones"] = c.ancilla_ones();
  art.metadata["witness_weight_total"] = k + c.ancilla_ones();
  art.circuit = std::move(c);
  return art;
}

}  // namespace qweft
