#include "qweft/hamiltonian.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <numeric>

#include "qweft/matutil.hpp"

namespace qweft {

std::vector<LocalBlock> LocalHamiltonian::blocks() const {
  std::vector<LocalBlock> out;
  out.reserve(terms.size());
  for (const auto& t : terms) out.push_back(LocalBlock{t.support, t.block});
  return out;
}

InstanceReport validate_instance(const LocalHamiltonian& h) {
  InstanceReport rep;
  if (h.terms.size() > LocalHamiltonian::kTermCap) rep.valid = false;
  for (const auto& t : h.terms) {
    TermReport tr;
    tr.locality_ok = static_cast<int>(t.support.size()) <= h.locality;
    for (int w : t.support)
      if (w < 0 || w >= h.n) tr.locality_ok = false;
    const auto d = static_cast<Eigen::Index>(1) << t.support.size();
    if (t.block.rows() != d || t.block.cols() != d) {
      tr.hermitian = false;
      tr.norm_ok = false;
    } else {
      tr.hermitian = is_hermitian(t.block, 1e-12);
      tr.norm = operator_norm(t.block);
      tr.norm_ok = tr.norm <= 1.0 + 1e-9;
      if (tr.hermitian) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(t.block);
        tr.projector = true;
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
          const double ev = es.eigenvalues()[i];
          if (std::min(std::abs(ev), std::abs(ev - 1.0)) > 1e-9)
            tr.projector = false;
        }
      }
    }
    if (!tr.hermitian || !tr.norm_ok || !tr.locality_ok) rep.valid = false;
    if (!tr.projector) rep.all_projectors = false;
    rep.terms.push_back(tr);
  }
  if (h.thresholds && !(h.thresholds->b > h.thresholds->a)) rep.valid = false;
  return rep;
}

namespace {

bool clock_only(const LocalTerm& t, const std::optional<std::set<int>>& clock) {
  if (!clock) return false;
  return std::all_of(t.support.begin(), t.support.end(),
                     [&](int w) { return clock->count(w) > 0; });
}

}  // namespace

SparsityReport classify_sparsity(const LocalHamiltonian& h, int degree_bound) {
  std::vector<int> degree(h.n, 0);
  std::size_t n_clock_only = 0;
  for (const auto& t : h.terms) {
    if (clock_only(t, h.clock_register)) {
      ++n_clock_only;
      continue;
    }
    for (int w : t.support) ++degree[w];
  }
  SparsityReport rep;
  rep.max_degree = degree.empty()
                       ? 0
                       : *std::max_element(degree.begin(), degree.end());
  if (rep.max_degree <= degree_bound)
    rep.klass = n_clock_only > 0 ? Sparsity::kAlmostSpatiallySparse
                                 : Sparsity::kSpatiallySparse;
  return rep;
}

ColoringResult color_terms(const LocalHamiltonian& h, int degree_bound) {
  if (classify_sparsity(h, degree_bound).klass == Sparsity::kNeither)
    throw std::invalid_argument("color_terms: instance is not sparse");
  const std::size_t m = h.terms.size();
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return h.terms[a].support.size() > h.terms[b].support.size();
  });

  std::vector<int> color(m, -1);
  int n_color = 0;
  std::vector<int> clock_terms;
  for (int ti : order) {
    if (clock_only(h.terms[ti], h.clock_register)) {
      clock_terms.push_back(ti);
      continue;
    }
    // smallest color whose members are all support-disjoint from ti
    std::vector<bool> used;
    used.assign(n_color, false);
    for (std::size_t tj = 0; tj < m; ++tj) {
      if (color[tj] < 0) continue;
      const auto& sa = h.terms[ti].support;
      const auto& sb = h.terms[tj].support;
      const bool conflict = std::any_of(sa.begin(), sa.end(), [&](int w) {
        return std::find(sb.begin(), sb.end(), w) != sb.end();
      });
      if (conflict) used[color[tj]] = true;
    }
    int chosen = 0;
    while (chosen < n_color && used[chosen]) ++chosen;
    if (chosen == n_color) ++n_color;
    color[ti] = chosen;
  }

  ColoringResult res;
  res.n_color = n_color;
  res.groups.assign(n_color, {});
  for (std::size_t ti = 0; ti < m; ++ti)
    if (color[ti] >= 0) res.groups[color[ti]].push_back(static_cast<int>(ti));
  std::sort(clock_terms.begin(), clock_terms.end());
  if (!clock_terms.empty()) {
    res.groups.push_back(clock_terms);
    res.has_clock_group = true;
  }
  return res;
}

double energy_expectation(const LocalHamiltonian& h, const SectorState& psi) {
  if (psi.indexer.n() != h.n)
    throw std::invalid_argument("energy_expectation: dimension mismatch");
  Vector hv = apply_local_blocks(h.blocks(), psi.indexer, psi.amplitudes);
  return std::real(psi.amplitudes.dot(hv));
}

double energy_expectation(const LocalHamiltonian& h, const Vector& full_psi) {
  if (full_psi.size() != (Eigen::Index{1} << h.n))
    throw std::invalid_argument("energy_expectation: dimension mismatch");
  cxd e = 0;
  for (const auto& t : h.terms) {
    const int s = static_cast<int>(t.support.size());
    const Eigen::Index sdim = Eigen::Index{1} << s;
    std::uint64_t smask = 0;
    for (int w : t.support) smask |= wire_mask(w, h.n);
    std::vector<std::uint64_t> pat(sdim, 0);
    for (Eigen::Index p = 0; p < sdim; ++p)
      for (int j = 0; j < s; ++j)
        if ((p >> (s - 1 - j)) & 1) pat[p] |= wire_mask(t.support[j], h.n);
    const std::uint64_t total = std::uint64_t{1} << h.n;
    for (std::uint64_t v = 0; v < total; ++v) {
      if ((v & smask) != 0) continue;
      for (Eigen::Index p = 0; p < sdim; ++p)
        for (Eigen::Index q = 0; q < sdim; ++q)
          e += std::conj(full_psi[v | pat[q]]) * t.block(q, p) *
               full_psi[v | pat[p]];
    }
  }
  return std::real(e);
}

}  // namespace qweft
