#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qweft/reductions.hpp"
#include "test_helpers.hpp"

using namespace qweft;
using qweft::testing::random_hermitian;
using qweft::testing::random_unitary;

namespace {

Matrix hadamard() {
  Matrix h(2, 2);
  const double s = 1 / std::sqrt(2.0);
  h << s, s, s, -s;
  return h;
}

Matrix proj1() {
  Matrix p = Matrix::Zero(2, 2);
  p(1, 1) = 1;
  return p;
}

}  // namespace

TEST_CASE("indset_to_wlh: P3 and K3 thresholds and energies") {
  Graph p3{3, {{0, 1}, {1, 2}}};
  ReductionArtifact a = indset_to_wlh(p3, 2);
  GroundResult g = min_energy_in_sector(a.hamiltonian->blocks(), 3, 2);
  CHECK(g.energy == doctest::Approx(0.0).epsilon(1e-12));
  // the zero-energy witness is |101>
  CHECK(std::abs(g.witness.amplitudes[g.witness.indexer.rank(
            string_to_bits("101"))]) == doctest::Approx(1.0));

  Graph k3{3, {{0, 1}, {1, 2}, {0, 2}}};
  ReductionArtifact b = indset_to_wlh(k3, 2);
  GroundResult g2 = min_energy_in_sector(b.hamiltonian->blocks(), 3, 2);
  CHECK(g2.energy == doctest::Approx(1.0).epsilon(1e-12));

  Graph edgeless{5, {}};
  ReductionArtifact c = indset_to_wlh(edgeless, 3);
  CHECK(min_energy_in_sector(c.hamiltonian->blocks(), 5, 3).energy ==
        doctest::Approx(0.0));
}

TEST_CASE("indset_to_wlh verdict equals brute-force independent set search") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 4 + static_cast<int>(rng() % 5);  // 4..8
    Graph g{n, {}};
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rng() % 3 == 0) g.edges.push_back({i, j});
    const int k = 1 + static_cast<int>(rng() % 3);
    // brute force over weight-k subsets
    BasisIndexer idx(n, k);
    bool indep = false;
    for (std::uint64_t i = 0; i < idx.dim(); ++i) {
      const std::uint64_t x = idx.unrank(i);
      bool ok = true;
      for (auto [u, v] : g.edges)
        if (bit_of(x, u, n) && bit_of(x, v, n)) ok = false;
      indep = indep || ok;
    }
    ReductionArtifact art = indset_to_wlh(g, k);
    GroundResult gr = min_energy_in_sector(art.hamiltonian->blocks(), n, k);
    CHECK((gr.energy <= 1e-9) == indep);
  }
}

TEST_CASE("energy_measurement_gadget: constant terms") {
  // H = I: O = 0, never accepts
  LocalTerm id{{0}, Matrix::Identity(2, 2)};
  QuantumCircuit c = energy_measurement_gadget(id, 3, 1);
  CHECK(check_weight_preserving(c).ok);
  for (std::uint64_t w : {0b100u, 0b010u, 0b001u}) {
    SectorState psi = SectorState::basis_state(3, 1, w);
    CHECK(acceptance_probability(c, psi).probability ==
          doctest::Approx(0.0).epsilon(1e-9));
  }
  // H = 0: O = I/2, accepts with probability 1/2 everywhere
  LocalTerm zero{{0}, Matrix::Zero(2, 2)};
  QuantumCircuit cz = energy_measurement_gadget(zero, 3, 1);
  for (std::uint64_t w : {0b100u, 0b010u, 0b001u}) {
    SectorState psi = SectorState::basis_state(3, 1, w);
    CHECK(acceptance_probability(cz, psi).probability ==
          doctest::Approx(0.5).epsilon(1e-9));
  }
}

TEST_CASE("energy_measurement_gadget: projector term on qubit 0") {
  LocalTerm t{{0}, proj1()};
  QuantumCircuit c = energy_measurement_gadget(t, 3, 1);
  SectorState w100 = SectorState::basis_state(3, 1, string_to_bits("100"));
  SectorState w010 = SectorState::basis_state(3, 1, string_to_bits("010"));
  // acceptance is <psi|(I - H)/2|psi>
  CHECK(acceptance_probability(c, w100).probability ==
        doctest::Approx(0.0).epsilon(1e-9));
  CHECK(acceptance_probability(c, w010).probability ==
        doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("energy_measurement_gadget matches the observable on random input") {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 5; ++trial) {
    LocalTerm t{{1, 3}, random_hermitian(4, rng)};
    const int n = 5, k = 2;
    QuantumCircuit c = energy_measurement_gadget(t, n, k);
    REQUIRE(check_weight_preserving(c).ok);
    BasisIndexer idx(n, k);
    std::normal_distribution<double> gauss;
    Vector v(idx.dim());
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = cxd(gauss(rng), gauss(rng));
    v.normalize();
    SectorState psi(idx, v);
    LocalHamiltonian h;
    h.n = n;
    h.locality = 2;
    h.terms = {t};
    const double want = (1.0 - energy_expectation(h, psi)) / 2.0;
    CHECK(acceptance_probability(c, psi).probability ==
          doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("energy_measurement_gadget rejects oversized terms") {
  LocalTerm t{{0}, 3.0 * Matrix::Identity(2, 2)};
  CHECK_THROWS_AS(energy_measurement_gadget(t, 2, 1), std::invalid_argument);
}

TEST_CASE("wlh_to_wpcsat: single zero term accepts at 1/2") {
  LocalHamiltonian h;
  h.n = 3;
  h.locality = 2;
  h.terms.push_back(LocalTerm{{0, 1}, Matrix::Zero(4, 4)});
  ReductionArtifact art = wlh_to_wpcsat(h, 1, 0.0, 1.0);
  CHECK(art.metadata.at("M") == 1);
  std::mt19937_64 rng(1);
  BasisIndexer idx(3, 1);
  std::normal_distribution<double> gauss;
  Vector v(idx.dim());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = cxd(gauss(rng), gauss(rng));
  v.normalize();
  CHECK(acceptance_probability(*art.circuit, SectorState(idx, v)).probability ==
        doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("wlh_to_wpcsat: acceptance formula on random instances") {
  std::mt19937_64 rng(20);
  for (int trial = 0; trial < 4; ++trial) {
    const int n = 4 + static_cast<int>(rng() % 2);
    const int m = 1 + static_cast<int>(rng() % 4);
    const int k = 1 + static_cast<int>(rng() % 2);
    LocalHamiltonian h = qweft::testing::random_2local(n, m, rng);
    ReductionArtifact art = wlh_to_wpcsat(h, k, 0.1, 0.5);
    REQUIRE(check_weight_preserving(*art.circuit).ok);
    const double mm = art.metadata.at("m");
    const double big_m = art.metadata.at("M");
    BasisIndexer idx(n, k);
    std::normal_distribution<double> gauss;
    for (int w = 0; w < 4; ++w) {
      Vector v(idx.dim());
      for (Eigen::Index i = 0; i < v.size(); ++i)
        v[i] = cxd(gauss(rng), gauss(rng));
      v.normalize();
      SectorState psi(idx, v);
      const double want =
          1.0 - (mm + energy_expectation(h, psi)) / (2.0 * big_m);
      CHECK(acceptance_probability(*art.circuit, psi).probability ==
            doctest::Approx(want).epsilon(1e-9));
    }
  }
}

TEST_CASE("wlh_to_wpcsat threshold arithmetic") {
  LocalHamiltonian h;
  h.n = 4;
  h.locality = 2;
  for (int i = 0; i < 3; ++i)
    h.terms.push_back(LocalTerm{{i, i + 1}, Matrix::Zero(4, 4)});
  ReductionArtifact art = wlh_to_wpcsat(h, 1, 0.1, 0.5);
  CHECK(art.metadata.at("M") == 4);
  CHECK(art.prob_thresholds->first == doctest::Approx(1.0 - 3.1 / 8));
  CHECK(art.prob_thresholds->second == doctest::Approx(1.0 - 3.5 / 8));
  CHECK_THROWS_AS(wlh_to_wpcsat(h, 1, 0.5, 0.1), std::invalid_argument);
  LocalHamiltonian empty;
  empty.n = 2;
  empty.locality = 1;
  CHECK_THROWS_AS(wlh_to_wpcsat(empty, 1, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("qsvt_amplify: m = 0 override returns the base circuit") {
  QuantumCircuit base;
  base.n_witness = 2;
  base.add(gates::swap(0, 1));
  base.accept = {{0, 1}};
  QsvtOptions opts;
  opts.m_override = 0;
  ReductionArtifact art = qsvt_amplify(base, 1, 1.0, 0.0, 0.45, opts);
  CHECK(art.circuit->gates.size() == base.gates.size());
  CHECK(art.prob_thresholds->first == doctest::Approx(1.0));
}

TEST_CASE("qsvt_amplify: circuit-level acceptance matches the scalar oracle") {
  // 3-wire seed: witness wire + |01> pair; hat(R) leaks the witness bit into
  // the accept pattern with p(|1>) = sin^2(theta), p(|0>) = 0 base; the
  // acceptance operator is diagonal, so basis witnesses are eigenvectors
  const double theta = 0.93;
  Matrix r(2, 2);
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  QuantumCircuit base;
  base.n_witness = 1;
  base.n_ancilla = 2;
  base.ancilla_init = "01";
  base.add(gates::controlled({0}, {1}, gates::hat(1, 2, r)));
  base.accept = {{1, 1}, {2, 0}};

  const double p1 =
      acceptance_probability(base, FullState::basis(1, 1)).probability;
  const double p0 =
      acceptance_probability(base, FullState::basis(1, 0)).probability;
  CHECK(p1 == doctest::Approx(std::sin(theta) * std::sin(theta)));
  CHECK(p0 == doctest::Approx(0.0));

  ReductionArtifact art = qsvt_amplify(base, 1, p1 - 0.05, 0.2, 0.1);
  REQUIRE(check_weight_preserving(*art.circuit).ok);
  const double amp1 =
      acceptance_probability(*art.circuit, FullState::basis(1, 1)).probability;
  const double amp0 =
      acceptance_probability(*art.circuit, FullState::basis(1, 0)).probability;
  CHECK(amp1 == doctest::Approx(qsp_amplified_acceptance(*art.phases, p1))
                    .epsilon(1e-6));
  CHECK(amp0 == doctest::Approx(qsp_amplified_acceptance(*art.phases, p0))
                    .epsilon(1e-6));
  CHECK(amp1 >= 0.9);
  CHECK(amp0 <= 0.1);
}

TEST_CASE("qsvt_amplify rejects bad parameters") {
  QuantumCircuit base;
  base.n_witness = 1;
  base.accept = {{0, 1}};
  CHECK_THROWS_AS(qsvt_amplify(base, 1, 0.7, 0.3, 0.6), std::invalid_argument);
  CHECK_THROWS_AS(qsvt_amplify(base, 1, 0.3, 0.7, 0.1), std::invalid_argument);
}

TEST_CASE("grid_embed: layer count, incidence, faithfulness") {
  QuantumCircuit one;
  one.n_witness = 2;
  one.add(gates::swap(0, 1));
  one.accept = {{0, 1}};
  QuantumCircuit g1 = grid_embed(one);
  CHECK(g1.n_total() == 4);  // 2 layers of 2 wires

  std::mt19937_64 rng(44);
  QuantumCircuit c;
  c.n_witness = 3;
  c.n_ancilla = 1;
  c.ancilla_init = "1";
  for (int i = 0; i < 5; ++i) {
    const int a = static_cast<int>(rng() % 4);
    int b = static_cast<int>(rng() % 4);
    while (b == a) b = static_cast<int>(rng() % 4);
    c.add(gates::hat(a, b, random_unitary(2, rng)));
  }
  c.accept = {{0, 1}};
  QuantumCircuit grid = grid_embed(c);
  CHECK(grid.n_total() == 4 * 6);

  std::vector<int> touches(grid.n_total(), 0);
  for (const auto& g : grid.gates)
    for (int w : g.all_wires()) ++touches[w];
  CHECK(*std::max_element(touches.begin(), touches.end()) <= 3);

  for (int k : {1, 2}) {
    BasisIndexer idx(3, k);
    std::normal_distribution<double> gauss;
    Vector v(idx.dim());
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = cxd(gauss(rng), gauss(rng));
    v.normalize();
    SectorState psi(idx, v);
    CHECK(acceptance_probability(c, psi).probability ==
          doctest::Approx(acceptance_probability(grid, psi).probability)
              .epsilon(1e-10));
  }
}

TEST_CASE("normalize_accept_single_wire preserves acceptance") {
  QuantumCircuit c;
  c.n_witness = 2;
  c.n_ancilla = 2;
  c.ancilla_init = "01";
  c.add(gates::hat(0, 1, hadamard()));
  c.accept = {{2, 0}, {3, 1}, {0, 1}};
  QuantumCircuit n = normalize_accept_single_wire(c);
  REQUIRE(n.accept.size() == 1);
  CHECK(check_weight_preserving(n).ok);
  for (std::uint64_t w : {0b01u, 0b10u}) {
    SectorState psi = SectorState::basis_state(2, 1, w);
    CHECK(acceptance_probability(c, psi).probability ==
          doctest::Approx(acceptance_probability(n, psi).probability)
              .epsilon(1e-12));
  }
}

TEST_CASE("reversibilize_classical: NOT, AND, OR and a 3-gate formula") {
  // single AND
  ClassicalCircuit andc;
  andc.n_inputs = 2;
  andc.n_wires = 3;
  andc.gates.push_back({ClassicalGate::kAnd, {0, 1}, {2}});
  andc.output_wire = 2;
  ReductionArtifact art = reversibilize_classical(andc);
  REQUIRE(art.circuit->gates.size() == 1);
  CHECK(art.circuit->gates[0].kind == GateKind::kToffoli);

  // (x0 OR x1) AND NOT x2
  ClassicalCircuit f;
  f.n_inputs = 3;
  f.n_wires = 5;
  f.gates.push_back({ClassicalGate::kOr, {0, 1}, {3}});
  f.gates.push_back({ClassicalGate::kNot, {2}, {}});
  f.gates.push_back({ClassicalGate::kAnd, {3, 2}, {4}});
  f.output_wire = 4;
  ReductionArtifact a2 = reversibilize_classical(f);
  for (std::uint64_t x = 0; x < 8; ++x) {
    const double p =
        acceptance_probability(*a2.circuit, FullState::basis(3, x)).probability;
    CHECK(p == doctest::Approx(f.eval(x) ? 1.0 : 0.0));
  }

  // fanout feeding two ANDs
  ClassicalCircuit fan;
  fan.n_inputs = 2;
  fan.n_wires = 7;
  fan.gates.push_back({ClassicalGate::kFanout, {0}, {2, 3}});
  fan.gates.push_back({ClassicalGate::kAnd, {2, 1}, {4}});
  fan.gates.push_back({ClassicalGate::kAnd, {3, 4}, {5}});
  fan.gates.push_back({ClassicalGate::kOr, {5, 4}, {6}});
  fan.output_wire = 6;
  ReductionArtifact a3 = reversibilize_classical(fan);
  for (std::uint64_t x = 0; x < 4; ++x) {
    const double p =
        acceptance_probability(*a3.circuit, FullState::basis(2, x)).probability;
    CHECK(p == doctest::Approx(fan.eval(x) ? 1.0 : 0.0));
  }
}
