#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qweft/reductions.hpp"
#include "qweft/verify.hpp"
#include "test_helpers.hpp"

using namespace qweft;
using qweft::testing::random_unitary;

namespace {

// The worked light-cone example: nine wires, six marked gates V1..V6, a
// classical fanout from qubit 6 onto the 0-ancillas 8 and 9, a few unmarked
// bystander gates, output measured on qubit 4 (all 1-based).
QuantumCircuit lightcone_example(std::mt19937_64& rng) {
  QuantumCircuit c;
  c.n_witness = 7;
  c.n_ancilla = 2;  // qubits 8, 9
  c.ancilla_init = "00";
  auto q = [](int one_based) { return one_based - 1; };
  c.add(gates::unitary({q(5), q(6)}, random_unitary(4, rng)));        // V1
  c.add(gates::unitary({q(3), q(4)}, random_unitary(4, rng)));        // V2
  c.add(gates::fanout(q(6), {q(8), q(9)}));                           // dashed box
  c.add(gates::unitary({q(2), q(3)}, random_unitary(4, rng)));        // V3
  c.add(gates::controlled({q(8)}, {0},
                          gates::unitary1(q(7), random_unitary(2, rng))));
  c.add(gates::controlled({q(9)}, {1},
                          gates::unitary({q(3), q(4)}, random_unitary(4, rng))));  // V4
  c.add(gates::unitary({q(2), q(3)}, random_unitary(4, rng)));        // V5
  c.add(gates::controlled({q(7)}, {1},
                          gates::unitary1(q(5), random_unitary(2, rng))));
  c.add(gates::unitary({q(3), q(4)}, random_unitary(4, rng)));        // V6
  c.add(gates::controlled({q(9)}, {1},
                          gates::unitary1(q(5), random_unitary(2, rng))));
  c.add(gates::unitary({q(1), q(2)}, random_unitary(4, rng)));
  c.add(gates::measure({q(4)}));
  return c;
}

GateDescriptor random_two_qubit(int a, int b, std::mt19937_64& rng) {
  return gates::unitary({a, b}, random_unitary(4, rng));
}

}  // namespace

TEST_CASE("light cone of the worked example is qubits 2..6, gates V1..V6") {
  std::mt19937_64 rng(4);
  QuantumCircuit c = lightcone_example(rng);
  LightCone cone = light_cone(c, 3);  // qubit 4, 0-based wire 3
  CHECK(cone.qubits == std::set<int>{1, 2, 3, 4, 5});
  // marked gates sit at indices 0,1,3,5,6,8 of the list above
  CHECK(cone.gate_indices == std::vector<std::size_t>{0, 1, 3, 5, 6, 8});
}

TEST_CASE("light cone degenerate cases") {
  QuantumCircuit c;
  c.n_witness = 3;
  CHECK(light_cone(c, 2).qubits == std::set<int>{2});

  // a quantum-marked fanout pulls in every input
  QuantumCircuit qf;
  qf.n_witness = 1;
  qf.n_ancilla = 2;
  qf.ancilla_init = "00";
  qf.add(gates::fanout(0, {1, 2}, /*quantum=*/true));
  LightCone cone = light_cone(qf, 2);
  CHECK(cone.qubits == std::set<int>{0, 1, 2});
}

TEST_CASE("sqw1_to_qsat: depth-1 disjoint gates give 2-local projectors") {
  std::mt19937_64 rng(9);
  QuantumCircuit v;
  v.n_witness = 4;
  v.n_ancilla = 1;
  v.ancilla_init = "0";
  v.add(random_two_qubit(0, 1, rng));
  v.add(random_two_qubit(2, 3, rng));
  v.add(gates::measure({0, 2}));
  v.add(gates::big_and({0, 2}, 4));
  v.accept = {{4, 1}};
  ReductionArtifact art = sqw1_to_qsat(v);
  // two cone projectors + one ancilla pin
  int cone_terms = 0;
  for (const auto& t : art.hamiltonian->terms)
    if (t.support.size() > 1) {
      CHECK(t.support.size() == 2);
      ++cone_terms;
    }
  CHECK(cone_terms == 2);
}

TEST_CASE("sqw1_to_qsat: frustration-freeness matches perfect acceptance") {
  std::mt19937_64 rng(21);
  int yes_seen = 0, no_seen = 0;
  for (int trial = 0; trial < 20; ++trial) {
    QuantumCircuit v;
    v.n_witness = 3;
    v.n_ancilla = 2;  // one work ancilla + the AND output
    v.ancilla_init = "00";
    // depth <= 3 of small unitary gates; sometimes swap-like structure so
    // perfect acceptance is reachable
    const bool frustration_free_style = trial % 2 == 0;
    if (frustration_free_style) {
      v.add(gates::swap(0, 1));
      v.add(gates::swap(1, 2));
      v.add(random_two_qubit(0, 1, rng));
    } else {
      v.add(random_two_qubit(0, 3, rng));
      v.add(random_two_qubit(1, 2, rng));
      v.add(random_two_qubit(0, 2, rng));
    }
    v.add(gates::measure({2}));
    v.add(gates::big_and({2}, 4));
    v.accept = {{4, 1}};

    ReductionArtifact art = sqw1_to_qsat(v);
    auto [psi, p] = optimal_sector_witness(v, 1);
    const int k_total = 1 + v.ancilla_ones();
    const bool ff = frustration_free_check(*art.hamiltonian, k_total, 1e-9);
    CHECK(ff == (p >= 1.0 - 1e-9));
    if (ff) ++yes_seen;
    else ++no_seen;
  }
  CHECK(no_seen > 0);  // the corpus exercises both outcomes
}

TEST_CASE("sqw1_to_qsat rejects non-SQW circuits") {
  QuantumCircuit v;
  v.n_witness = 2;
  v.add(gates::big_and({0}, 1));
  v.add(gates::swap(0, 1));  // big gate not last
  CHECK_THROWS_AS(sqw1_to_qsat(v), std::invalid_argument);

  QuantumCircuit w;
  w.n_witness = 3;
  w.add(gates::toffoli({0, 1}, 2));  // wrong big gate kind
  CHECK_THROWS_AS(sqw1_to_qsat(w), std::invalid_argument);
}

TEST_CASE("mini encoding table matches E(00)..E(11)") {
  // E preserves lexicographic order: E(00)=0001, E(01)=0010, E(10)=0100,
  // E(11)=1000; seen through the positions of hat gates for a gate on bit 1
  std::mt19937_64 rng(3);
  QuantumCircuit mini;
  mini.n_witness = 2;
  mini.add(gates::unitary1(1, random_unitary(2, rng)));
  mini.accept = {{0, 1}};
  ReductionArtifact art = mini_to_wpcsat(mini, 1, 4, 1.0, 0.0);
  // pairs (x0, x1) with bit1 flipped: (00,01) -> wires of 0010,0001 and
  // (10,11) -> wires of 1000,0100
  REQUIRE(art.circuit->gates.size() >= 2);
  CHECK(art.circuit->gates[0].kind == GateKind::kHat);
  CHECK(art.circuit->gates[0].wires == std::vector<int>{2, 3});
  CHECK(art.circuit->gates[1].wires == std::vector<int>{0, 1});
}

TEST_CASE("mini_to_wpcsat: k=1 n=4 encoded acceptance matches the mini circuit") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 6; ++trial) {
    QuantumCircuit mini;
    mini.n_witness = 2;
    mini.add(gates::unitary1(static_cast<int>(rng() % 2), random_unitary(2, rng)));
    if (trial % 2)
      mini.add(gates::cnot(0, 1));
    else
      mini.add(gates::unitary1(static_cast<int>(rng() % 2), random_unitary(2, rng)));
    mini.accept = {{0, 1}};
    ReductionArtifact art = mini_to_wpcsat(mini, 1, 4, 1.0, 0.0);
    REQUIRE(check_weight_preserving(*art.circuit).ok);
    for (std::uint64_t x = 0; x < 4; ++x) {
      FullState mw = FullState::basis(2, x);
      const std::uint64_t pos = 4 - 1 - x;  // one-hot position of E(x)
      SectorState ew = SectorState::basis_state(
          4, 1, std::uint64_t{1} << (4 - 1 - pos));
      CHECK(acceptance_probability(*art.circuit, ew).probability ==
            doctest::Approx(acceptance_probability(mini, mw).probability)
                .epsilon(1e-9));
    }
  }
}

TEST_CASE("mini_to_wpcsat: inter-group CNOT simulates faithfully at k=2") {
  std::mt19937_64 rng(17);
  QuantumCircuit mini;
  mini.n_witness = 2;  // k=2 groups of log n = 1 qubit each, n_enc = 2
  mini.add(gates::unitary1(0, random_unitary(2, rng)));
  mini.add(gates::cnot(0, 1));  // crosses the two groups
  mini.accept = {{1, 1}};
  ReductionArtifact art = mini_to_wpcsat(mini, 2, 2, 1.0, 0.0);
  REQUIRE(check_weight_preserving(*art.circuit).ok);
  for (std::uint64_t x = 0; x < 4; ++x) {
    FullState mw = FullState::basis(2, x);
    // E over two groups of 2 wires: bit b -> one-hot (10 for 1, 01 for 0)
    std::uint64_t ew = 0;
    for (int g = 0; g < 2; ++g) {
      const int bit = bit_of(x, g, 2);
      ew = (ew << 2) | (bit ? 0b10 : 0b01);
    }
    SectorState ws = SectorState::basis_state(4, 2, ew);
    CHECK(acceptance_probability(*art.circuit, ws).probability ==
          doctest::Approx(acceptance_probability(mini, mw).probability)
              .epsilon(1e-9));
  }
}

TEST_CASE("mini_to_wpcsat: cheating weight distribution scales by |alpha|^2") {
  std::mt19937_64 rng(19);
  QuantumCircuit mini;
  mini.n_witness = 2;
  mini.add(gates::unitary1(0, random_unitary(2, rng)));
  mini.accept = {{0, 1}};
  ReductionArtifact art = mini_to_wpcsat(mini, 2, 2, 1.0, 0.0);
  // valid encoded witness |01 01> vs invalid weight split |00 11>
  SectorState valid = SectorState::basis_state(4, 2, string_to_bits("0101"));
  SectorState invalid = SectorState::basis_state(4, 2, string_to_bits("0011"));
  const double p_valid =
      acceptance_probability(*art.circuit, valid).probability;
  const double p_invalid =
      acceptance_probability(*art.circuit, invalid).probability;
  CHECK(p_invalid == doctest::Approx(0.0).epsilon(1e-9));
  const double alpha = 0.6;
  Vector mix = alpha * valid.amplitudes +
               std::sqrt(1 - alpha * alpha) * invalid.amplitudes;
  SectorState mixed(valid.indexer, mix);
  CHECK(acceptance_probability(*art.circuit, mixed).probability ==
        doctest::Approx(alpha * alpha * p_valid).epsilon(1e-9));
}

TEST_CASE("mini_to_wpcsat input validation") {
  QuantumCircuit mini;
  mini.n_witness = 2;
  mini.accept = {{0, 1}};
  CHECK_THROWS_AS(mini_to_wpcsat(mini, 1, 3, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(mini_to_wpcsat(mini, 2, 4, 1.0, 0.0), std::invalid_argument);
  QuantumCircuit tof;
  tof.n_witness = 2;
  tof.add(gates::swap(0, 1));
  tof.accept = {{0, 1}};
  CHECK_THROWS_AS(mini_to_wpcsat(tof, 1, 4, 1.0, 0.0), std::invalid_argument);
}
