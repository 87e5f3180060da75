#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qweft/simulator.hpp"
#include "qweft/wpcompile.hpp"
#include "test_helpers.hpp"

using namespace qweft;
using qweft::testing::random_unitary;

namespace {

Matrix pauli_x() {
  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  return x;
}

Matrix hadamard() {
  Matrix h(2, 2);
  const double s = 1 / std::sqrt(2.0);
  h << s, s, s, -s;
  return h;
}

// reference sector matrix of the two-level target: V in the (rank s, rank t)
// block, identity elsewhere
Matrix two_level_reference(const TwoLevelSpec& spec) {
  BasisIndexer idx(spec.n, popcount64(spec.s));
  const auto d = static_cast<Eigen::Index>(idx.dim());
  Matrix m = Matrix::Identity(d, d);
  const auto i = static_cast<Eigen::Index>(idx.rank(spec.s));
  const auto j = static_cast<Eigen::Index>(idx.rank(spec.t));
  m(i, i) = spec.v(0, 0);
  m(i, j) = spec.v(0, 1);
  m(j, i) = spec.v(1, 0);
  m(j, j) = spec.v(1, 1);
  return m;
}

}  // namespace

TEST_CASE("hat(X) is SWAP and hat(I) is the identity") {
  Matrix hx = gate_matrix(hat_gate(0, 1, pauli_x()));
  Matrix sw = gate_matrix(gates::swap(0, 1));
  CHECK((hx - sw).cwiseAbs().maxCoeff() < 1e-15);

  Matrix hi = gate_matrix(hat_gate(0, 1, Matrix::Identity(2, 2)));
  CHECK((hi - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-15);

  // the W-state base gate: middle block 1/sqrt(2)
  Matrix hh = gate_matrix(hat_gate(0, 1, hadamard()));
  CHECK(std::abs(hh(1, 1) - cxd(1 / std::sqrt(2.0), 0)) < 1e-15);
  CHECK(std::abs(hh(2, 2) - cxd(-1 / std::sqrt(2.0), 0)) < 1e-15);
  CHECK_THROWS_AS(hat_gate(0, 1, 2.0 * pauli_x()), std::invalid_argument);
}

TEST_CASE("two_level_wp reproduces the paper path 10001 -> 10100 -> 11000") {
  TwoLevelSpec spec;
  spec.n = 5;
  spec.s = string_to_bits("10001");
  spec.t = string_to_bits("11000");
  std::mt19937_64 rng(2);
  spec.v = random_unitary(2, rng);
  QuantumCircuit c = two_level_wp(spec);

  // one staircase stage, a controlled hat, and the stage undone
  REQUIRE(c.gates.size() == 3);
  // stage swaps the moving 1 from wire 4 to wire 2 (0-based), appearing as
  // the intermediate 10100
  const auto& stage = c.gates[0];
  REQUIRE(stage.kind == GateKind::kControlled);
  CHECK(stage.inner->kind == GateKind::kSwap);
  CHECK(stage.inner->wires == std::vector<int>{4, 2});
  // hat acts on (qubit 2, qubit 1) in 1-based paper terms = wires (1, 2)
  const auto& mid = c.gates[1];
  REQUIRE(mid.kind == GateKind::kControlled);
  CHECK(mid.inner->kind == GateKind::kHat);
  CHECK(mid.inner->wires == std::vector<int>{1, 2});

  CHECK(check_weight_preserving(c).ok);
  Matrix got = sector_matrix(c, 5, 2);
  CHECK((got - two_level_reference(spec)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("two_level_wp with V = I acts as the identity on the sector") {
  TwoLevelSpec spec;
  spec.n = 4;
  spec.s = string_to_bits("1010");
  spec.t = string_to_bits("0101");
  spec.v = Matrix::Identity(2, 2);
  Matrix got = sector_matrix(two_level_wp(spec), 4, 2);
  CHECK((got - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("two_level_wp strict: random targets over several sectors") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 3);
    const int k = 1 + static_cast<int>(rng() % (n - 1));
    BasisIndexer idx(n, k);
    std::uint64_t i = rng() % idx.dim();
    std::uint64_t j = rng() % idx.dim();
    while (j == i) j = rng() % idx.dim();
    TwoLevelSpec spec;
    spec.n = n;
    spec.s = idx.unrank(std::min(i, j));
    spec.t = idx.unrank(std::max(i, j));
    spec.v = random_unitary(2, rng);
    QuantumCircuit c = two_level_wp(spec);
    CHECK(check_weight_preserving(c).ok);
    Matrix got = sector_matrix(c, n, k);
    CHECK((got - two_level_reference(spec)).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("two_level_wp loose mode still realizes the sector action") {
  std::mt19937_64 rng(8);
  TwoLevelSpec spec;
  spec.n = 5;
  spec.s = string_to_bits("00011");
  spec.t = string_to_bits("11000");
  spec.v = random_unitary(2, rng);
  QuantumCircuit c = two_level_wp(spec, /*strict=*/false);
  Matrix got = sector_matrix(c, 5, 2);
  CHECK((got - two_level_reference(spec)).cwiseAbs().maxCoeff() < 1e-10);
  // loose controls only on the ones
  for (const auto& g : c.gates)
    if (g.kind == GateKind::kControlled)
      for (int p : g.polarities) CHECK(p == 1);
}

TEST_CASE("two_level_wp rejects s == t and weight mismatch") {
  TwoLevelSpec bad;
  bad.n = 3;
  bad.s = bad.t = string_to_bits("101");
  bad.v = Matrix::Identity(2, 2);
  CHECK_THROWS_AS(two_level_wp(bad), std::invalid_argument);
  bad.t = string_to_bits("111");
  CHECK_THROWS_AS(two_level_wp(bad), std::invalid_argument);
}

TEST_CASE("multi_controlled_wp: zero controls is the hat itself") {
  std::mt19937_64 rng(3);
  Matrix w = random_unitary(2, rng);
  QuantumCircuit c = multi_controlled_wp(w, 0, 1, {});
  REQUIRE(c.gates.size() == 1);
  CHECK(c.n_ancilla == 0);
  Matrix got = gate_matrix(c.gates[0]);
  Matrix want = gate_matrix(gates::hat(0, 1, w));
  CHECK((got - want).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("multi_controlled_wp: two controls equal a doubly controlled hat") {
  std::mt19937_64 rng(4);
  for (bool use_swap : {true, false}) {
    Matrix w = use_swap ? pauli_x() : random_unitary(2, rng);
    QuantumCircuit c = multi_controlled_wp(w, 2, 3, {0, 1});
    CHECK(c.n_ancilla == 2);
    CHECK(c.ancilla_init == "01");
    CHECK(check_weight_preserving(c).ok);

    GateDescriptor want =
        gates::controlled({0, 1}, {1, 1}, gates::hat(2, 3, w));
    for (std::uint64_t main = 0; main < 16; ++main) {
      FullState in = FullState::basis(6, (main << 2) | 0b01);
      FullState out = apply_circuit(c, in);
      QuantumCircuit ref;
      ref.n_witness = 4;
      ref.add(want);
      FullState want_out = apply_circuit(ref, FullState::basis(4, main));
      for (std::uint64_t m2 = 0; m2 < 16; ++m2)
        CHECK(std::abs(out.amplitudes[(m2 << 2) | 0b01] -
                       want_out.amplitudes[m2]) < 1e-10);
      // ancillas restored exactly: no amplitude off the |01> pair state
      double leak = 0.0;
      for (std::uint64_t v = 0; v < 64; ++v)
        if ((v & 3) != 1) leak += std::norm(out.amplitudes[v]);
      CHECK(leak < 1e-10);
    }
  }
}

TEST_CASE("multi_controlled_wp: three controls and negative polarity") {
  std::mt19937_64 rng(6);
  Matrix w = random_unitary(2, rng);
  QuantumCircuit c = multi_controlled_wp(w, 3, 4, {0, 1, 2}, {1, 0, 1});
  CHECK(check_weight_preserving(c).ok);
  const int na = c.n_ancilla;
  std::uint64_t anc_bits = 0;
  for (int i = 0; i < na; ++i)
    anc_bits = (anc_bits << 1) | (c.ancilla_init[i] == '1' ? 1 : 0);

  GateDescriptor want =
      gates::controlled({0, 1, 2}, {1, 0, 1}, gates::hat(3, 4, w));
  QuantumCircuit ref;
  ref.n_witness = 5;
  ref.add(want);
  for (std::uint64_t main = 0; main < 32; ++main) {
    FullState in = FullState::basis(5 + na, (main << na) | anc_bits);
    FullState out = apply_circuit(c, in);
    FullState want_out = apply_circuit(ref, FullState::basis(5, main));
    for (std::uint64_t m2 = 0; m2 < 32; ++m2)
      CHECK(std::abs(out.amplitudes[(m2 << na) | anc_bits] -
                     want_out.amplitudes[m2]) < 1e-10);
  }
}

TEST_CASE("w_state_prep: base cases and amplitudes") {
  QuantumCircuit c0 = w_state_prep(0);
  CHECK(c0.gates.empty());

  QuantumCircuit c1 = w_state_prep(1);
  FullState out = apply_circuit(c1, FullState::basis(2, string_to_bits("01")));
  const double s = 1 / std::sqrt(2.0);
  CHECK(std::abs(out.amplitudes[string_to_bits("01")] - s) < 1e-12);
  CHECK(std::abs(out.amplitudes[string_to_bits("10")] - s) < 1e-12);

  QuantumCircuit c2 = w_state_prep(2);
  out = apply_circuit(c2, FullState::basis(4, string_to_bits("0001")));
  for (std::uint64_t v : {0b0001u, 0b0010u, 0b0100u, 0b1000u})
    CHECK(std::abs(out.amplitudes[v] - 0.5) < 1e-12);

  // all-zero input is fixed exactly
  for (int r : {1, 2, 3}) {
    QuantumCircuit c = w_state_prep(r);
    FullState z = apply_circuit(c, FullState::basis(1 << r, 0));
    CHECK(std::abs(z.amplitudes[0] - 1.0) < 1e-12);
    CHECK(check_weight_preserving(c).ok);
  }
}

TEST_CASE("w_state_prep: n = 8 gives equal 1/sqrt(8) amplitudes, O(n) gates") {
  QuantumCircuit c = w_state_prep(3);
  CHECK(c.gates.size() == 7);  // 2^r - 1 hats
  FullState out = apply_circuit(c, FullState::basis(8, 1));
  const double want = 1 / std::sqrt(8.0);
  for (int i = 0; i < 8; ++i)
    CHECK(std::abs(out.amplitudes[std::uint64_t{1} << i] - want) < 1e-12);
}

TEST_CASE("decompose_wp_unitary: identity gives an empty circuit") {
  BasisIndexer idx(4, 2);
  SectorOperator target{idx, Matrix::Identity(6, 6).eval(), false};
  QuantumCircuit c = decompose_wp_unitary(target);
  CHECK(c.gates.empty());
}

TEST_CASE("decompose_wp_unitary: single two-level target needs one factor") {
  std::mt19937_64 rng(9);
  TwoLevelSpec spec;
  spec.n = 4;
  spec.s = string_to_bits("0011");
  spec.t = string_to_bits("1100");
  spec.v = random_unitary(2, rng);
  SectorOperator target{BasisIndexer(4, 2), two_level_reference(spec), false};
  QuantumCircuit c = decompose_wp_unitary(target);
  Matrix got = sector_matrix(c, 4, 2);
  CHECK((got - target.dense()).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("decompose_wp_unitary reconstructs random sector unitaries") {
  std::mt19937_64 rng(12);
  SectorOperator target{BasisIndexer(4, 2), random_unitary(6, rng), false};
  QuantumCircuit c = decompose_wp_unitary(target);
  CHECK(check_weight_preserving(c).ok);
  Matrix got = sector_matrix(c, 4, 2);
  CHECK((got - target.dense()).cwiseAbs().maxCoeff() < 1e-8);

  SectorOperator t2{BasisIndexer(5, 2), random_unitary(10, rng), false};
  Matrix got2 = sector_matrix(decompose_wp_unitary(t2), 5, 2);
  CHECK((got2 - t2.dense()).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("decompose_wp_unitary enforces the size guard") {
  BasisIndexer idx(9, 4);
  CHECK_THROWS_AS(
      decompose_wp_unitary(SectorOperator{
          idx, Matrix::Identity(idx.dim(), idx.dim()).eval(), false}),
      std::invalid_argument);
}
