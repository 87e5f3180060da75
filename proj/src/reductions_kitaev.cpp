#include <algorithm>
#include <cmath>

#include "qweft/reductions.hpp"

namespace qweft {

namespace {

struct GridShape {
  int n_state = 0;  // grid wires N
  int t_steps = 0;  // gate count T
  int clock0 = 0;   // first clock wire = 2N
};

GridShape shape_of(const QuantumCircuit& grid) {
  GridShape s;
  s.n_state = grid.n_total();
  s.t_steps = static_cast<int>(grid.gates.size());
  s.clock0 = 2 * s.n_state;
  return s;
}

// |b b> <b b| on a duplicated pair tensored with |1><1| on one clock wire
Matrix in_out_block(int b) {
  Matrix m = Matrix::Zero(8, 8);
  const Eigen::Index idx = b * 4 + b * 2 + 1;
  m(idx, idx) = 1.0;
  return m;
}

// duplication pattern: bits (x_1..x_s) -> (x_1 x_1 .. x_s x_s)
Eigen::Index dup_pattern(Eigen::Index x, int s) {
  Eigen::Index y = 0;
  for (int i = 0; i < s; ++i) {
    const Eigen::Index b = (x >> (s - 1 - i)) & 1;
    y = (y << 2) | (b ? 3 : 0);
  }
  return y;
}

Matrix propagation_block(const Matrix& w, int s) {
  const Eigen::Index d = Eigen::Index{1} << s;
  const Eigen::Index dd = d * d;  // doubled state space
  Matrix wdup = Matrix::Zero(dd, dd);
  Matrix pdup = Matrix::Zero(dd, dd);
  for (Eigen::Index c = 0; c < d; ++c) {
    pdup(dup_pattern(c, s), dup_pattern(c, s)) = 1.0;
    for (Eigen::Index r = 0; r < d; ++r)
      wdup(dup_pattern(r, s), dup_pattern(c, s)) = w(r, c);
  }
  Matrix hop_fwd = Matrix::Zero(4, 4);   // |01><10| on (C_{t-1}, C_t)
  hop_fwd(1, 2) = 1.0;
  Matrix hop_bwd = hop_fwd.adjoint();
  Matrix stay = Matrix::Zero(4, 4);
  stay(1, 1) = stay(2, 2) = 1.0;
  // halved so the term is a projector (spectrum {0,1} on the duplicated
  // subspace, 0 elsewhere)
  return 0.5 * (kron(pdup, stay) - kron(wdup, hop_fwd) -
                kron(wdup.adjoint(), hop_bwd));
}

}  // namespace

ReductionArtifact wpcsat_to_sparse_ham(const QuantumCircuit& grid_circ, int k,
                                       double eps, std::size_t max_qubits) {
  for (const auto& g : grid_circ.gates) {
    if (g.kind == GateKind::kMeasure)
      throw std::invalid_argument("wpcsat_to_sparse_ham: unitary gates only");
    if (g.all_wires().size() > 2)
      throw std::invalid_argument(
          "wpcsat_to_sparse_ham: gates must touch at most two wires");
  }
  if (grid_circ.accept.size() != 1)
    throw std::invalid_argument(
        "wpcsat_to_sparse_ham: single-wire acceptance required "
        "(see normalize_accept_single_wire)");
  {
    auto wp = check_weight_preserving(grid_circ);
    if (!wp.ok)
      throw std::invalid_argument(
          "wpcsat_to_sparse_ham: circuit is not weight-preserving");
  }
  const GridShape sh = shape_of(grid_circ);
  const int total = 2 * sh.n_state + sh.t_steps + 1;
  if (static_cast<std::size_t>(total) > max_qubits)
    throw std::invalid_argument("wpcsat_to_sparse_ham: size guard exceeded");

  auto clock = [&](int t) { return sh.clock0 + t; };
  LocalHamiltonian h;
  h.n = total;
  h.locality = 2;

  // H_state: force every I_q pair onto the duplicated subspace
  Matrix mismatch = Matrix::Zero(4, 4);
  mismatch(1, 1) = mismatch(2, 2) = 1.0;
  for (int q = 0; q < sh.n_state; ++q)
    h.terms.push_back(LocalTerm{{2 * q, 2 * q + 1}, mismatch});

  // H_clock: pairwise |11><11| keeps the clock one-hot
  Matrix p11 = Matrix::Zero(4, 4);
  p11(3, 3) = 1.0;
  for (int t = 0; t <= sh.t_steps; ++t)
    for (int u = t + 1; u <= sh.t_steps; ++u)
      h.terms.push_back(LocalTerm{{clock(t), clock(u)}, p11});

  // H_in: non-witness wires hold their initialization until first used
  for (int q = grid_circ.n_witness; q < sh.n_state; ++q) {
    int t_q = 1;
    for (std::size_t gi = 0; gi < grid_circ.gates.size(); ++gi) {
      const auto ws = grid_circ.gates[gi].all_wires();
      if (std::find(ws.begin(), ws.end(), q) != ws.end()) {
        t_q = static_cast<int>(gi) + 1;
        break;
      }
    }
    const int wrong = 1 - grid_circ.ancilla_bit(q);
    h.terms.push_back(
        LocalTerm{{2 * q, 2 * q + 1, clock(t_q - 1)}, in_out_block(wrong)});
    h.locality = std::max(h.locality, 3);
  }

  // H_out: penalize the rejecting outcome at the final clock tick
  {
    const int wout = grid_circ.accept[0].wire;
    const int wrong = 1 - grid_circ.accept[0].value;
    h.terms.push_back(LocalTerm{{2 * wout, 2 * wout + 1, clock(sh.t_steps)},
                                in_out_block(wrong)});
    h.locality = std::max(h.locality, 3);
  }

  // H_prop
  for (int t = 1; t <= sh.t_steps; ++t) {
    const auto& g = grid_circ.gates[t - 1];
    const auto ws = g.all_wires();
    const int s = static_cast<int>(ws.size());
    std::vector<int> support;
    for (int w : ws) {
      support.push_back(2 * w);
      support.push_back(2 * w + 1);
    }
    support.push_back(clock(t - 1));
    support.push_back(clock(t));
    h.terms.push_back(LocalTerm{support, propagation_block(gate_matrix(g), s)});
    h.locality = std::max(h.locality, 2 * s + 2);
  }

  std::set<int> clock_set;
  for (int t = 0; t <= sh.t_steps; ++t) clock_set.insert(clock(t));
  h.clock_register = clock_set;

  const int k_prime = k + grid_circ.ancilla_ones();
  const double t3 = std::pow(std::max(sh.t_steps, 1), 3.0);
  const double a = eps / (sh.t_steps + 1);
  const double b = (1.0 - std::sqrt(eps) - eps) / t3;
  if (!(b > a))
    throw std::invalid_argument("wpcsat_to_sparse_ham: thresholds collapsed");
  h.thresholds = Thresholds{a, b};

  ReductionArtifact art;
  art.step = "kitaev";
  art.k_in = k;
  art.k_out = 2 * k_prime + 1;
  art.energy_thresholds = Thresholds{a, b};
  art.metadata["T"] = sh.t_steps;
  art.metadata["N"] = sh.n_state;
  art.metadata["qubits"] = total;
  art.metadata["k_prime"] = k_prime;
  art.metadata["witness_weight"] = 2 * k_prime + 1;
  art.metadata["terms"] = static_cast<double>(h.terms.size());
  art.hamiltonian = std::move(h);
  return art;
}

SectorState history_state_sector(const QuantumCircuit& grid_circ,
                                 const SectorState& witness) {
  const GridShape sh = shape_of(grid_circ);
  const int total = 2 * sh.n_state + sh.t_steps + 1;
  if (total > 64)
    throw std::invalid_argument("history_state_sector: dimension guard");
  if (witness.indexer.n() != grid_circ.n_witness)
    throw std::invalid_argument("history_state_sector: witness size mismatch");
  const int k = witness.indexer.k();
  const int k_prime = k + grid_circ.ancilla_ones();

  // xi_0 = witness (x) ancilla pattern over the N grid wires
  BasisIndexer state_idx(sh.n_state, k_prime);
  Vector xi = Vector::Zero(state_idx.dim());
  std::uint64_t anc = 0;
  for (int i = 0; i < grid_circ.n_ancilla; ++i) {
    anc <<= 1;
    if (grid_circ.ancilla_init[i] == '1') anc |= 1;
  }
  for (std::uint64_t i = 0; i < witness.indexer.dim(); ++i) {
    const std::uint64_t wb = witness.indexer.unrank(i);
    xi[state_idx.rank((wb << grid_circ.n_ancilla) | anc)] =
        witness.amplitudes[i];
  }

  BasisIndexer big(total, 2 * k_prime + 1);
  Vector amp = Vector::Zero(big.dim());
  const double norm = 1.0 / std::sqrt(sh.t_steps + 1.0);
  auto accumulate = [&](const Vector& v, int t) {
    for (std::uint64_t i = 0; i < state_idx.dim(); ++i) {
      if (v[i] == cxd(0, 0)) continue;
      const std::uint64_t x = state_idx.unrank(i);
      std::uint64_t y = 0;
      for (int q = 0; q < sh.n_state; ++q) {
        const int b = bit_of(x, q, sh.n_state);
        y = with_bit(y, 2 * q, total, b);
        y = with_bit(y, 2 * q + 1, total, b);
      }
      y = with_bit(y, sh.clock0 + t, total, 1);
      amp[big.rank(y)] += norm * v[i];
    }
  };
  accumulate(xi, 0);
  for (int t = 1; t <= sh.t_steps; ++t) {
    apply_gate_sector(state_idx, xi, grid_circ.gates[t - 1]);
    accumulate(xi, t);
  }
  return SectorState(big, std::move(amp));
}

FullState history_state(const QuantumCircuit& grid_circ,
                        const SectorState& witness) {
  SectorState sec = history_state_sector(grid_circ, witness);
  const int n = sec.indexer.n();
  if (n > kMaxFullWires)
    throw std::invalid_argument("history_state: exceeds full-state cap");
  Vector amp = Vector::Zero(Eigen::Index{1} << n);
  for (std::uint64_t i = 0; i < sec.indexer.dim(); ++i)
    amp[sec.indexer.unrank(i)] = sec.amplitudes[i];
  return FullState(n, std::move(amp));
}

namespace {

Matrix unitary_with_first_column(const Vector& v) {
  const auto d = v.size();
  Vector w = v;
  w[0] -= 1.0;
  const double nw = w.norm();
  if (nw < 1e-14) return Matrix::Identity(d, d);
  return Matrix::Identity(d, d) - 2.0 * (w * w.adjoint()) / (nw * nw);
}

// Pi-controlled NOT: flips the (last-listed) target wire on ran(Pi)
Matrix projector_controlled_not(const Matrix& pi) {
  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  const auto d = pi.rows();
  return kron(pi, x) + kron(Matrix::Identity(d, d) - pi, Matrix::Identity(2, 2));
}

}  // namespace

ReductionArtifact sparse_ham_to_weft1(const LocalHamiltonian& h, double a,
                                      double b, int degree_bound) {
  InstanceReport rep = validate_instance(h);
  if (!rep.valid)
    throw std::invalid_argument("sparse_ham_to_weft1: invalid instance");
  if (!rep.all_projectors)
    throw std::invalid_argument("sparse_ham_to_weft1: terms must be projectors");
  const double n2 = static_cast<double>(h.n) * h.n;
  if (!(b / n2 - a > 0))
    throw std::invalid_argument("sparse_ham_to_weft1: strong gap violated");

  const ColoringResult coloring = color_terms(h, degree_bound);
  const int n_groups = static_cast<int>(coloring.groups.size());
  int m_max = 0, m_min = h.n + 1;
  for (const auto& g : coloring.groups) {
    m_max = std::max(m_max, static_cast<int>(g.size()));
    m_min = std::min(m_min, static_cast<int>(g.size()));
  }
  if (static_cast<double>(m_max) > n2)
    throw std::invalid_argument("sparse_ham_to_weft1: group size exceeds n^2");

  int kappa = 0;
  while ((1 << kappa) < n_groups) ++kappa;
  const int n_pads = m_max - m_min;

  QuantumCircuit c;
  c.n_witness = h.n;
  const int sampler0 = h.n;
  const int bank0 = sampler0 + kappa;
  const int ones = bank0 + m_max;
  const int pads0 = ones + 1;
  const int out = n_pads > 0 ? pads0 + n_pads : ones;
  c.n_ancilla = out + 1 - h.n;
  c.ancilla_init = std::string(kappa, '0') + std::string(m_max, '0');
  if (n_pads > 0) c.ancilla_init += "1" + std::string(n_pads, '0');
  c.ancilla_init += "0";  // the output wire

  std::vector<int> sampler_wires(kappa);
  for (int i = 0; i < kappa; ++i) sampler_wires[i] = sampler0 + i;

  if (kappa > 0) {
    Vector col = Vector::Zero(Eigen::Index{1} << kappa);
    for (int g = 0; g < n_groups; ++g) col[g] = 1.0 / std::sqrt(n_groups);
    c.add(gates::unitary(sampler_wires, unitary_with_first_column(col)));
    c.add(gates::measure(sampler_wires));
  }
  if (n_pads > 0) {
    std::vector<int> pad_wires(n_pads);
    for (int i = 0; i < n_pads; ++i) pad_wires[i] = pads0 + i;
    c.add(gates::fanout(ones, pad_wires));
  }

  auto group_controls = [&](int g, std::vector<int>& ctr, std::vector<int>& pol) {
    ctr.clear();
    pol.clear();
    for (int i = 0; i < kappa; ++i) {
      ctr.push_back(sampler_wires[i]);
      pol.push_back((g >> (kappa - 1 - i)) & 1);
    }
  };

  std::vector<int> ctr, pol;
  for (int g = 0; g < n_groups; ++g) {
    group_controls(g, ctr, pol);
    const auto& members = coloring.groups[g];
    for (std::size_t i = 0; i < members.size(); ++i) {
      const LocalTerm& term = h.terms[members[i]];
      const Eigen::Index d = Eigen::Index{1} << term.support.size();
      // measurement {I - H_j, H_j}: outcome 1 marks the satisfied branch
      Matrix cpn =
          projector_controlled_not(Matrix::Identity(d, d) - term.block);
      std::vector<int> ws = term.support;
      ws.push_back(bank0 + static_cast<int>(i));
      GateDescriptor inner = gates::unitary(ws, cpn);
      c.add(ctr.empty() ? inner : gates::controlled(ctr, pol, inner));
    }
    // pad short outcome lists from the fanned-out constant 1
    Matrix x(2, 2);
    x << 0, 1, 1, 0;
    for (int i = static_cast<int>(members.size()); i < m_max; ++i) {
      std::vector<int> pc = ctr;
      std::vector<int> pp = pol;
      pc.push_back(pads0 + (i - m_min));
      pp.push_back(1);
      c.add(gates::controlled(pc, pp, gates::unitary1(bank0 + i, x)));
    }
  }

  std::vector<int> bank_wires(m_max);
  for (int i = 0; i < m_max; ++i) bank_wires[i] = bank0 + i;
  c.add(gates::measure(bank_wires));
  c.add(gates::big_and(bank_wires, out));
  c.accept = {{out, 1}};

  ReductionArtifact art;
  art.step = "weft1";
  art.prob_thresholds = {1.0 - a / n_groups, 1.0 - b / (n2 * n_groups)};
  art.metadata["n_color"] = coloring.n_color;
  art.metadata["groups"] = n_groups;
  art.metadata["m_max"] = m_max;
  art.metadata["weft"] = 1;
  art.circuit = std::move(c);
  return art;
}

}  // namespace qweft
