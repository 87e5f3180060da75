#include "qweft/wpcompile.hpp"

#include <algorithm>

#include "qweft/simulator.hpp"

namespace qweft {

GateDescriptor hat_gate(int a, int b, const Matrix& u) {
  if (!is_unitary(u, 1e-12))
    throw std::invalid_argument("hat_gate: U is not unitary");
  return gates::hat(a, b, u);
}

namespace {

std::vector<int> ones_of(std::uint64_t x, int n) {
  std::vector<int> out;
  for (int i = 0; i < n; ++i)
    if (bit_of(x, i, n)) out.push_back(i);
  return out;
}

GateDescriptor maybe_controlled(std::vector<int> controls,
                                std::vector<int> polarities,
                                GateDescriptor inner) {
  if (controls.empty()) return inner;
  return gates::controlled(std::move(controls), std::move(polarities),
                           std::move(inner));
}

// Controls for one stage of the two-level staircase at intermediate pattern
// cur, excluding the two active wires.
void stage_controls(std::uint64_t cur, int n, int skip_a, int skip_b,
                    bool strict, std::vector<int>& controls,
                    std::vector<int>& polarities) {
  controls.clear();
  polarities.clear();
  for (int w = 0; w < n; ++w) {
    if (w == skip_a || w == skip_b) continue;
    const int bitv = bit_of(cur, w, n);
    if (strict || bitv == 1) {
      controls.push_back(w);
      polarities.push_back(bitv);
    }
  }
}

}  // namespace

QuantumCircuit two_level_wp(const TwoLevelSpec& spec, bool strict) {
  const int n = spec.n;
  if (spec.s == spec.t) throw std::invalid_argument("two_level_wp: s == t");
  if (popcount64(spec.s) != popcount64(spec.t))
    throw std::invalid_argument("two_level_wp: s and t have different weight");
  if (!is_unitary(spec.v, 1e-12))
    throw std::invalid_argument("two_level_wp: V is not unitary");

  // a: ones of s missing from t; b: ones of t missing from s
  std::vector<int> a, b;
  for (int w = 0; w < n; ++w) {
    const int sb = bit_of(spec.s, w, n), tb = bit_of(spec.t, w, n);
    if (sb && !tb) a.push_back(w);
    if (tb && !sb) b.push_back(w);
  }
  const int d = static_cast<int>(a.size());

  QuantumCircuit c;
  c.n_witness = n;

  std::vector<GateDescriptor> forward;
  std::uint64_t cur = spec.s;
  std::vector<int> ctr, pol;
  // place k-1 of s's ones onto t's one positions
  for (int i = 1; i < d; ++i) {
    stage_controls(cur, n, a[i], b[i], strict, ctr, pol);
    forward.push_back(maybe_controlled(ctr, pol, gates::swap(a[i], b[i])));
    cur = with_bit(with_bit(cur, a[i], n, 0), b[i], n, 1);
  }
  // move the remaining 1 next to t's remaining 1 when a free neighbor exists
  int p = a[0];
  const int q = b[0];
  if (std::abs(p - q) != 1) {
    int r = -1;
    for (int cand : {q + 1, q - 1})
      if (cand >= 0 && cand < n && cand != p && !bit_of(cur, cand, n)) {
        r = cand;
        break;
      }
    if (r >= 0) {
      stage_controls(cur, n, p, r, strict, ctr, pol);
      forward.push_back(maybe_controlled(ctr, pol, gates::swap(p, r)));
      cur = with_bit(with_bit(cur, p, n, 0), r, n, 1);
      p = r;
    }
  }
  for (const auto& g : forward) c.add(g);

  // hat(V) on (q, p): cur has (q, p) = (0, 1) = logical 0, t maps to (1, 0)
  stage_controls(cur, n, p, q, strict, ctr, pol);
  c.add(maybe_controlled(ctr, pol, gates::hat(q, p, spec.v)));

  for (auto it = forward.rbegin(); it != forward.rend(); ++it) c.add(*it);
  return c;
}

namespace {

struct McwBuilder {
  QuantumCircuit* circ;
  int anc_base;  // first ancilla wire; pair p occupies (anc_base+2p, +2p+1)

  int pair_zero(int level) const { return anc_base + 2 * level; }
  int pair_one(int level) const { return anc_base + 2 * level + 1; }

  // toggles the level's pair by the single literal (wire, pol)
  void toggle_literal(int level, int wire, int pol) {
    if (pol == 0) circ->add(gates::swap(pair_zero(level), pair_one(level)));
    circ->add(gates::fredkin(wire, pair_zero(level), pair_one(level)));
  }

  // swaps the pair at `level` conditioned on the AND of the literals
  void toggle_and(int level, const std::vector<int>& ctr,
                  const std::vector<int>& pol) {
    if (ctr.empty()) {
      circ->add(gates::swap(pair_zero(level), pair_one(level)));
      return;
    }
    if (ctr.size() == 1) {
      toggle_literal(level, ctr[0], pol[0]);
      return;
    }
    Matrix x(2, 2);
    x << 0, 1, 1, 0;
    emit(x, pair_zero(level), pair_one(level), ctr, pol, level - 1);
  }

  // controlled-hat(W) on (ta, tb) with the given literals, using ancilla
  // pairs at `level` and below
  void emit(const Matrix& w, int ta, int tb, const std::vector<int>& ctr,
            const std::vector<int>& pol, int level) {
    if (ctr.empty()) {
      circ->add(gates::hat(ta, tb, w));
      return;
    }
    if (ctr.size() == 1) {
      circ->add(gates::controlled({ctr[0]}, {pol[0]}, gates::hat(ta, tb, w)));
      return;
    }
    const Matrix v = principal_unitary_sqrt(w);
    const std::vector<int> rest_c(ctr.begin(), ctr.end() - 1);
    const std::vector<int> rest_p(pol.begin(), pol.end() - 1);
    const int last_c = ctr.back();
    const int last_p = pol.back();

    circ->add(gates::controlled({last_c}, {last_p}, gates::hat(ta, tb, v)));
    toggle_literal(level, last_c, last_p);
    toggle_and(level, rest_c, rest_p);
    circ->add(gates::controlled({pair_zero(level)}, {1},
                                gates::hat(ta, tb, v.adjoint())));
    toggle_and(level, rest_c, rest_p);
    toggle_literal(level, last_c, last_p);
    emit(v, ta, tb, rest_c, rest_p, level);
  }
};

}  // namespace

QuantumCircuit multi_controlled_wp(const Matrix& w_middle, int target_a,
                                   int target_b,
                                   const std::vector<int>& controls,
                                   const std::vector<int>& polarities) {
  if (!is_unitary(w_middle, 1e-12))
    throw std::invalid_argument("multi_controlled_wp: W is not unitary");
  std::vector<int> pol = polarities;
  if (pol.empty()) pol.assign(controls.size(), 1);
  if (pol.size() != controls.size())
    throw std::invalid_argument("multi_controlled_wp: polarity size mismatch");

  int hi = std::max(target_a, target_b);
  for (int w : controls) hi = std::max(hi, w);

  QuantumCircuit c;
  c.n_witness = hi + 1;
  const int n_pairs =
      controls.size() <= 1 ? 0 : static_cast<int>(controls.size()) - 1;
  c.n_ancilla = 2 * n_pairs;
  for (int i = 0; i < n_pairs; ++i) c.ancilla_init += "01";

  McwBuilder b{&c, c.n_witness};
  b.emit(w_middle, target_a, target_b, controls, pol, n_pairs - 1);
  return c;
}

QuantumCircuit w_state_prep(int r) {
  if (r < 0) throw std::invalid_argument("w_state_prep: r must be >= 0");
  const int n = 1 << r;
  QuantumCircuit c;
  c.n_witness = n;
  Matrix h(2, 2);
  const double inv = 1.0 / std::sqrt(2.0);
  h << inv, inv, inv, -inv;
  // recursion: split the block, entangle the two halves' last wires, recurse
  auto build = [&](auto&& self, int lo, int m) -> void {
    if (m == 1) return;
    c.add(gates::hat(lo + m / 2 - 1, lo + m - 1, h));
    self(self, lo, m / 2);
    self(self, lo + m / 2, m / 2);
  };
  build(build, 0, n);
  return c;
}

Matrix sector_matrix(const QuantumCircuit& c, int n, int k) {
  BasisIndexer idx(n, k);
  const auto d = static_cast<Eigen::Index>(idx.dim());
  Matrix m(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    SectorState col = apply_sector_restricted(c, SectorState(idx, Vector::Unit(d, j)));
    m.col(j) = col.amplitudes;
  }
  return m;
}

QuantumCircuit decompose_wp_unitary(const SectorOperator& target, bool strict) {
  const int n = target.indexer.n();
  const int k = target.indexer.k();
  if (n > 8 || target.indexer.dim() > 70)
    throw std::invalid_argument(
        "decompose_wp_unitary: size guard exceeded (n <= 8, C(n,k) <= 70)");
  Matrix a = target.to_dense();
  const auto d = a.rows();
  if (!is_unitary(a, 1e-8))
    throw std::invalid_argument("decompose_wp_unitary: target not unitary");

  struct Factor {
    Eigen::Index i, j;
    Matrix v;  // 2x2 acting on coordinates (i, j)
  };
  std::vector<Factor> elim;  // elim_m ... elim_1 * U = I

  auto apply_left = [&](const Factor& f) {
    for (Eigen::Index col = 0; col < d; ++col) {
      const cxd x = a(f.i, col), y = a(f.j, col);
      a(f.i, col) = f.v(0, 0) * x + f.v(0, 1) * y;
      a(f.j, col) = f.v(1, 0) * x + f.v(1, 1) * y;
    }
  };

  constexpr double eps = 1e-14;
  for (Eigen::Index col = 0; col + 1 < d; ++col) {
    for (Eigen::Index row = col + 1; row < d; ++row) {
      if (std::abs(a(row, col)) <= eps) continue;
      const cxd x = a(col, col), y = a(row, col);
      const double nrm = std::sqrt(std::norm(x) + std::norm(y));
      Matrix t(2, 2);
      t << std::conj(x) / nrm, std::conj(y) / nrm, y / nrm, -x / nrm;
      Factor f{col, row, t};
      apply_left(f);
      elim.push_back(std::move(f));
    }
    // normalize the surviving diagonal phase against the last coordinate
    const double th = std::arg(a(col, col));
    if (std::abs(th) > eps) {
      Matrix t = Matrix::Identity(2, 2);
      t(0, 0) = std::polar(1.0, -th);
      Factor f{col, d - 1, t};
      apply_left(f);
      elim.push_back(std::move(f));
    }
  }
  {
    const double th = std::arg(a(d - 1, d - 1));
    if (std::abs(th) > eps && d >= 2) {
      Matrix t = Matrix::Identity(2, 2);
      t(1, 1) = std::polar(1.0, -th);
      Factor f{d - 2, d - 1, t};
      apply_left(f);
      elim.push_back(std::move(f));
    }
  }

  QuantumCircuit out;
  out.n_witness = n;
  // U = elim_1^dag ... elim_m^dag, applied left to right in circuit order
  for (auto it = elim.rbegin(); it != elim.rend(); ++it) {
    TwoLevelSpec spec;
    spec.n = n;
    spec.s = target.indexer.unrank(it->i);
    spec.t = target.indexer.unrank(it->j);
    spec.v = it->v.adjoint();
    QuantumCircuit part = two_level_wp(spec, strict);
    for (auto& g : part.gates) out.add(std::move(g));
  }
  return out;
}

}  // namespace qweft
