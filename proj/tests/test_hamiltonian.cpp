#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qweft/hamiltonian.hpp"
#include "test_helpers.hpp"

using namespace qweft;
using qweft::testing::random_2local;

namespace {

Matrix p11() {
  Matrix m = Matrix::Zero(4, 4);
  m(3, 3) = 1;
  return m;
}

LocalHamiltonian chain(int n) {
  LocalHamiltonian h;
  h.n = n;
  h.locality = 2;
  for (int i = 0; i + 1 < n; ++i) h.terms.push_back(LocalTerm{{i, i + 1}, p11()});
  return h;
}

}  // namespace

TEST_CASE("validate_instance: zero terms, oversized norm, projector flag") {
  LocalHamiltonian h;
  h.n = 3;
  h.locality = 2;
  h.terms.push_back(LocalTerm{{0, 1}, Matrix::Zero(4, 4)});
  InstanceReport rep = validate_instance(h);
  CHECK(rep.valid);
  CHECK(rep.terms[0].projector);  // zero matrix has eigenvalues {0}

  h.terms.push_back(LocalTerm{{1, 2}, 2.0 * Matrix::Identity(4, 4)});
  rep = validate_instance(h);
  CHECK(!rep.valid);
  CHECK(!rep.terms[1].norm_ok);

  LocalHamiltonian proj;
  proj.n = 2;
  proj.locality = 2;
  proj.terms.push_back(LocalTerm{{0, 1}, p11()});
  rep = validate_instance(proj);
  CHECK(rep.valid);
  CHECK(rep.all_projectors);
}

TEST_CASE("validate_instance flags bad thresholds and locality") {
  LocalHamiltonian h = chain(4);
  h.thresholds = Thresholds{0.5, 0.4};
  CHECK(!validate_instance(h).valid);

  LocalHamiltonian wide;
  wide.n = 4;
  wide.locality = 1;
  wide.terms.push_back(LocalTerm{{0, 1}, p11()});
  CHECK(!validate_instance(wide).valid);
}

TEST_CASE("classify_sparsity: chain, chain + clock, complete graph") {
  LocalHamiltonian h = chain(8);
  CHECK(classify_sparsity(h).klass == Sparsity::kSpatiallySparse);

  LocalHamiltonian hc = chain(6);
  hc.n = 10;
  hc.clock_register = std::set<int>{6, 7, 8, 9};
  for (int t = 6; t < 10; ++t)
    for (int u = t + 1; u < 10; ++u)
      hc.terms.push_back(LocalTerm{{t, u}, p11()});
  CHECK(classify_sparsity(hc).klass == Sparsity::kAlmostSpatiallySparse);

  LocalHamiltonian dense;
  dense.n = 20;
  dense.locality = 2;
  for (int i = 0; i < 20; ++i)
    for (int j = i + 1; j < 20; ++j)
      dense.terms.push_back(LocalTerm{{i, j}, p11()});
  CHECK(classify_sparsity(dense).klass == Sparsity::kNeither);
}

TEST_CASE("color_terms: disjoint terms need one color, chains two") {
  LocalHamiltonian disj;
  disj.n = 6;
  disj.locality = 2;
  disj.terms.push_back(LocalTerm{{0, 1}, p11()});
  disj.terms.push_back(LocalTerm{{2, 3}, p11()});
  disj.terms.push_back(LocalTerm{{4, 5}, p11()});
  ColoringResult c = color_terms(disj);
  CHECK(c.groups.size() == 1);
  CHECK(c.n_color == 1);

  ColoringResult c2 = color_terms(chain(7));
  CHECK(c2.groups.size() == 2);  // even/odd split
}

TEST_CASE("coloring soundness: pairwise disjoint supports per non-clock group") {
  LocalHamiltonian hc = chain(6);
  hc.n = 9;
  hc.clock_register = std::set<int>{6, 7, 8};
  for (int t = 6; t < 9; ++t)
    for (int u = t + 1; u < 9; ++u)
      hc.terms.push_back(LocalTerm{{t, u}, p11()});
  ColoringResult c = color_terms(hc);
  REQUIRE(c.has_clock_group);
  for (std::size_t g = 0; g + 1 < c.groups.size(); ++g) {
    std::set<int> seen;
    for (int ti : c.groups[g])
      for (int w : hc.terms[ti].support) CHECK(seen.insert(w).second);
  }
  // every clock-only term landed in the final group
  CHECK(c.groups.back().size() == 3);
}

TEST_CASE("color_terms refuses non-sparse instances") {
  LocalHamiltonian dense;
  dense.n = 20;
  dense.locality = 2;
  for (int i = 0; i < 20; ++i)
    for (int j = i + 1; j < 20; ++j)
      dense.terms.push_back(LocalTerm{{i, j}, p11()});
  CHECK_THROWS_AS(color_terms(dense), std::invalid_argument);
}

TEST_CASE("energy_expectation: zero, number operator, K3 basis state") {
  LocalHamiltonian zero;
  zero.n = 4;
  zero.locality = 1;
  SectorState s = SectorState::basis_state(4, 2, string_to_bits("1010"));
  CHECK(energy_expectation(zero, s) == doctest::Approx(0.0));

  LocalHamiltonian num;
  num.n = 4;
  num.locality = 1;
  Matrix p1 = Matrix::Zero(2, 2);
  p1(1, 1) = 1;
  for (int i = 0; i < 4; ++i) num.terms.push_back(LocalTerm{{i}, p1});
  CHECK(energy_expectation(num, s) == doctest::Approx(2.0));

  LocalHamiltonian k3;
  k3.n = 3;
  k3.locality = 2;
  k3.terms.push_back(LocalTerm{{0, 1}, p11()});
  k3.terms.push_back(LocalTerm{{1, 2}, p11()});
  k3.terms.push_back(LocalTerm{{0, 2}, p11()});
  SectorState s110 = SectorState::basis_state(3, 2, string_to_bits("110"));
  CHECK(energy_expectation(k3, s110) == doctest::Approx(1.0));
}

TEST_CASE("energy_expectation matches the restricted quadratic form") {
  std::mt19937_64 rng(31);
  LocalHamiltonian h = random_2local(6, 5, rng);
  for (int k : {1, 3}) {
    BasisIndexer idx(6, k);
    std::normal_distribution<double> gauss;
    Vector v(idx.dim());
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = cxd(gauss(rng), gauss(rng));
    v.normalize();
    SectorState psi(idx, v);
    SectorOperator op = restrict_operator(h.blocks(), 6, k);
    const double direct = std::real(v.dot(op.to_dense() * v));
    CHECK(energy_expectation(h, psi) == doctest::Approx(direct).epsilon(1e-10));
    // full-space path agrees as well
    Vector full = Vector::Zero(1 << 6);
    for (std::uint64_t i = 0; i < idx.dim(); ++i) full[idx.unrank(i)] = v[i];
    CHECK(energy_expectation(h, full) == doctest::Approx(direct).epsilon(1e-10));
  }
}
