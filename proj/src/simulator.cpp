#include "qweft/simulator.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>

namespace qweft {

FullState::FullState(int n_, Vector amp) : n(n_), amplitudes(std::move(amp)) {
  if (n < 0 || n > kMaxFullWires)
    throw std::invalid_argument("FullState: wire count exceeds cap");
  if (amplitudes.size() != (Eigen::Index{1} << n))
    throw std::invalid_argument("FullState: amplitude length != 2^n");
}

FullState FullState::basis(int n, std::uint64_t bits) {
  if (n < 0 || n > kMaxFullWires)
    throw std::invalid_argument("FullState: wire count exceeds cap");
  Vector v = Vector::Zero(Eigen::Index{1} << n);
  v[static_cast<Eigen::Index>(bits)] = 1.0;
  return FullState(n, std::move(v));
}

namespace {

std::uint64_t mask_of(const std::vector<int>& wires, int n) {
  std::uint64_t m = 0;
  for (int w : wires) m |= wire_mask(w, n);
  return m;
}

void apply_dense_on(Vector& a, int n, const std::vector<int>& wires,
                    const Matrix& u, std::uint64_t cmask = 0,
                    std::uint64_t cval = 0) {
  const int s = static_cast<int>(wires.size());
  const Eigen::Index sdim = Eigen::Index{1} << s;
  const std::uint64_t smask = mask_of(wires, n);
  std::vector<std::uint64_t> pat(sdim, 0);
  for (Eigen::Index p = 0; p < sdim; ++p)
    for (int j = 0; j < s; ++j)
      if ((p >> (s - 1 - j)) & 1) pat[p] |= wire_mask(wires[j], n);
  Vector buf(sdim);
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t v = 0; v < total; ++v) {
    if ((v & smask) != 0) continue;
    if ((v & cmask) != cval) continue;
    for (Eigen::Index p = 0; p < sdim; ++p) buf[p] = a[v | pat[p]];
    buf = u * buf;
    for (Eigen::Index p = 0; p < sdim; ++p) a[v | pat[p]] = buf[p];
  }
}

}  // namespace

void apply_gate(FullState& st, const GateDescriptor& g) {
  const int n = st.n;
  Vector& a = st.amplitudes;
  const std::uint64_t total = std::uint64_t{1} << n;
  switch (g.kind) {
    case GateKind::kMeasure:
      throw std::invalid_argument("apply_gate: measurement in unitary segment");
    case GateKind::kToffoli:
    case GateKind::kBigAnd: {
      const std::uint64_t cmask =
          mask_of({g.wires.begin(), g.wires.end() - 1}, n);
      const std::uint64_t tmask = wire_mask(g.wires.back(), n);
      for (std::uint64_t v = 0; v < total; ++v)
        if ((v & cmask) == cmask && (v & tmask) == 0)
          std::swap(a[v], a[v | tmask]);
      return;
    }
    case GateKind::kFanout: {
      const std::uint64_t cmask = wire_mask(g.wires[0], n);
      const std::uint64_t tmask =
          mask_of({g.wires.begin() + 1, g.wires.end()}, n);
      for (std::uint64_t v = 0; v < total; ++v)
        if ((v & cmask) != 0 && v < (v ^ tmask)) std::swap(a[v], a[v ^ tmask]);
      return;
    }
    case GateKind::kProjPhase:
      if (g.projector.is_pattern()) {
        const auto& pr = g.projector;
        std::uint64_t pmask = 0, pval = 0;
        for (std::size_t i = 0; i < pr.wires.size(); ++i) {
          pmask |= wire_mask(pr.wires[i], n);
          if (pr.pattern[i]) pval |= wire_mask(pr.wires[i], n);
        }
        const cxd on = std::polar(1.0, g.phase);
        const cxd off = std::polar(1.0, -g.phase);
        for (std::uint64_t v = 0; v < total; ++v)
          a[v] *= ((v & pmask) == pval) ? on : off;
        return;
      }
      apply_dense_on(a, n, g.projector.wires, gate_matrix(g));
      return;
    case GateKind::kControlled: {
      // flatten nested control layers
      std::uint64_t cmask = 0, cval = 0;
      const GateDescriptor* cur = &g;
      while (cur->kind == GateKind::kControlled) {
        for (std::size_t i = 0; i < cur->wires.size(); ++i) {
          cmask |= wire_mask(cur->wires[i], n);
          if (cur->polarities[i]) cval |= wire_mask(cur->wires[i], n);
        }
        cur = cur->inner.get();
      }
      if (cur->kind == GateKind::kProjPhase && cur->projector.is_pattern()) {
        const auto& pr = cur->projector;
        std::uint64_t pmask = 0, pval = 0;
        for (std::size_t i = 0; i < pr.wires.size(); ++i) {
          pmask |= wire_mask(pr.wires[i], n);
          if (pr.pattern[i]) pval |= wire_mask(pr.wires[i], n);
        }
        const cxd on = std::polar(1.0, cur->phase);
        const cxd off = std::polar(1.0, -cur->phase);
        for (std::uint64_t v = 0; v < total; ++v) {
          if ((v & cmask) != cval) continue;
          a[v] *= ((v & pmask) == pval) ? on : off;
        }
        return;
      }
      const auto iws = cur->all_wires();
      apply_dense_on(a, n, iws, gate_matrix(*cur), cmask, cval);
      return;
    }
    default:
      apply_dense_on(a, n, g.all_wires(), gate_matrix(g));
      return;
  }
}

FullState apply_circuit(const QuantumCircuit& c, FullState in) {
  if (in.n != c.n_total())
    throw std::invalid_argument("apply_circuit: wire count mismatch");
  for (const auto& g : c.gates) apply_gate(in, g);
  return in;
}

namespace {

std::uint64_t ancilla_bits(const QuantumCircuit& c) {
  std::uint64_t b = 0;
  for (int i = 0; i < c.n_ancilla; ++i) {
    b <<= 1;
    if (c.ancilla_init[i] == '1') b |= 1;
  }
  return b;
}

FullState run_skipping_measurements(const QuantumCircuit& c, FullState full) {
  auto fv = validate_classical_fanout(c);
  if (!fv.ok)
    throw std::invalid_argument(
        "acceptance_probability: illegal classical fanout at gate " +
        std::to_string(*fv.gate_index) + " (" + fv.reason + ")");
  for (const auto& g : c.gates) {
    if (g.kind == GateKind::kMeasure) continue;  // deferred
    apply_gate(full, g);
  }
  return full;
}

AcceptanceResult accept_of_state(const QuantumCircuit& c, FullState full,
                                 bool want_post) {
  const int n = full.n;
  std::uint64_t amask = 0, aval = 0;
  for (const auto& cl : c.accept) {
    amask |= wire_mask(cl.wire, n);
    if (cl.value) aval |= wire_mask(cl.wire, n);
  }
  double p = 0.0;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t v = 0; v < total; ++v)
    if ((v & amask) == aval) p += std::norm(full.amplitudes[v]);
  AcceptanceResult r;
  r.probability = p;
  if (want_post && p > 0) {
    for (std::uint64_t v = 0; v < total; ++v)
      if ((v & amask) != aval) full.amplitudes[v] = 0.0;
    full.amplitudes /= std::sqrt(p);
    r.post_measurement_state = std::move(full);
  }
  return r;
}

}  // namespace

FullState embed_witness(const QuantumCircuit& c, const SectorState& witness) {
  if (witness.indexer.n() != c.n_witness)
    throw std::invalid_argument("embed_witness: witness wire count mismatch");
  const int n = c.n_total();
  if (n > kMaxFullWires)
    throw std::invalid_argument("embed_witness: circuit exceeds full-state cap");
  Vector amp = Vector::Zero(Eigen::Index{1} << n);
  const std::uint64_t anc = ancilla_bits(c);
  for (std::uint64_t i = 0; i < witness.indexer.dim(); ++i) {
    const std::uint64_t wb = witness.indexer.unrank(i);
    amp[(wb << c.n_ancilla) | anc] = witness.amplitudes[i];
  }
  return FullState(n, std::move(amp));
}

FullState embed_witness(const QuantumCircuit& c, const FullState& witness) {
  if (witness.n != c.n_witness)
    throw std::invalid_argument("embed_witness: witness wire count mismatch");
  const int n = c.n_total();
  if (n > kMaxFullWires)
    throw std::invalid_argument("embed_witness: circuit exceeds full-state cap");
  Vector amp = Vector::Zero(Eigen::Index{1} << n);
  const std::uint64_t anc = ancilla_bits(c);
  for (std::uint64_t wb = 0; wb < (std::uint64_t{1} << c.n_witness); ++wb)
    amp[(wb << c.n_ancilla) | anc] = witness.amplitudes[wb];
  return FullState(n, std::move(amp));
}

AcceptanceResult acceptance_probability(const QuantumCircuit& c,
                                        const SectorState& witness,
                                        bool want_post) {
  return accept_of_state(c, run_skipping_measurements(c, embed_witness(c, witness)),
                         want_post);
}

AcceptanceResult acceptance_probability(const QuantumCircuit& c,
                                        const FullState& witness,
                                        bool want_post) {
  return accept_of_state(c, run_skipping_measurements(c, embed_witness(c, witness)),
                         want_post);
}

Matrix acceptance_operator_sector(const QuantumCircuit& c, int k,
                                  std::uint64_t max_dim) {
  BasisIndexer idx(c.n_witness, k);
  if (idx.dim() > max_dim)
    throw std::invalid_argument("acceptance_operator_sector: sector too large");
  const int n = c.n_total();
  std::uint64_t amask = 0, aval = 0;
  for (const auto& cl : c.accept) {
    amask |= wire_mask(cl.wire, n);
    if (cl.value) aval |= wire_mask(cl.wire, n);
  }
  const auto d = static_cast<Eigen::Index>(idx.dim());
  std::vector<Vector> projected(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    SectorState basis(idx, Vector::Unit(d, j));
    FullState out = run_skipping_measurements(c, embed_witness(c, basis));
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t v = 0; v < total; ++v)
      if ((v & amask) != aval) out.amplitudes[v] = 0.0;
    projected[j] = std::move(out.amplitudes);
  }
  Matrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = projected[i].dot(projected[j]);
  return m;
}

std::pair<SectorState, double> optimal_sector_witness(const QuantumCircuit& c,
                                                      int k,
                                                      std::uint64_t max_dim) {
  BasisIndexer idx(c.n_witness, k);
  Matrix m = acceptance_operator_sector(c, k, max_dim);
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("optimal_sector_witness: eigensolver failed");
  const Eigen::Index top = m.rows() - 1;
  double p = es.eigenvalues()[top];
  p = std::clamp(p, 0.0, 1.0 + 1e-12);
  return {SectorState(idx, es.eigenvectors().col(top)), p};
}

void apply_gate_sector(const BasisIndexer& idx, Vector& amps,
                       const GateDescriptor& g) {
  const int n = idx.n();
  const auto ws = g.all_wires();
  const int s = static_cast<int>(ws.size());
  const Matrix u = gate_matrix(g);
  const Eigen::Index sdim = Eigen::Index{1} << s;
  Vector out = Vector::Zero(amps.size());
  for (std::uint64_t col = 0; col < idx.dim(); ++col) {
    const cxd amp = amps[col];
    if (amp == cxd(0, 0)) continue;
    const std::uint64_t x = idx.unrank(col);
    Eigen::Index p = 0;
    for (int j = 0; j < s; ++j) p = (p << 1) | bit_of(x, ws[j], n);
    const int pw = popcount64(static_cast<std::uint64_t>(p));
    for (Eigen::Index q = 0; q < sdim; ++q) {
      if (popcount64(static_cast<std::uint64_t>(q)) != pw) continue;
      const cxd m = u(q, p);
      if (m == cxd(0, 0)) continue;
      std::uint64_t y = x;
      for (int j = 0; j < s; ++j)
        y = with_bit(y, ws[j], n, static_cast<int>((q >> (s - 1 - j)) & 1));
      out[idx.rank(y)] += m * amp;
    }
  }
  amps = std::move(out);
}

SectorState apply_sector_restricted(const QuantumCircuit& c, SectorState in) {
  if (in.indexer.n() != c.n_total())
    throw std::invalid_argument(
        "apply_sector_restricted: state must cover all circuit wires");
  auto wp = check_weight_preserving(c);
  if (!wp.ok)
    throw std::invalid_argument(
        "apply_sector_restricted: circuit is not weight-preserving (gate " +
        std::to_string(*wp.gate_index) + ")");
  for (const auto& g : c.gates) apply_gate_sector(in.indexer, in.amplitudes, g);
  return in;
}

bool circuit_leaks_weight(const QuantumCircuit& c, std::uint64_t basis_input,
                          double tol) {
  FullState st = FullState::basis(c.n_total(), basis_input);
  const int w = popcount64(basis_input);
  for (const auto& g : c.gates) {
    if (g.kind == GateKind::kMeasure) continue;
    apply_gate(st, g);
  }
  double off = 0.0;
  const std::uint64_t total = std::uint64_t{1} << c.n_total();
  for (std::uint64_t v = 0; v < total; ++v)
    if (popcount64(v) != w) off += std::norm(st.amplitudes[v]);
  return off > tol;
}

}  // namespace qweft
