#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qweft/qsp.hpp"

using namespace qweft;

TEST_CASE("zero phases reduce to a reflection-square identity") {
  // with all phases zero the iterate is (R(x)^2)^m = I, so Re P = 1
  PhaseSequence seq;
  seq.m = 3;
  seq.phases.assign(6, 0.0);
  for (double x : {0.0, 0.3, 0.7, 1.0})
    CHECK(qsp_polynomial(seq, x) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("single-factor phases act as a known trigonometric polynomial") {
  // m=1, phases (phi, theta):
  // P(x) = e^{i phi}(x^2 e^{i theta} + (1-x^2) e^{-i theta})
  PhaseSequence seq;
  seq.m = 1;
  const double phi = 0.37, theta = -0.92;
  seq.phases = {phi, theta};
  for (double x : {0.0, 0.25, 0.6, 0.95, 1.0}) {
    const cxd want = std::polar(1.0, phi) *
                     (x * x * std::polar(1.0, theta) +
                      (1 - x * x) * std::polar(1.0, -theta));
    CHECK(qsp_polynomial(seq, x) ==
          doctest::Approx(std::real(want)).epsilon(1e-12));
  }
}

TEST_CASE("iteration count follows the bound formula") {
  const double c = 0.7, s = 0.3, eps = 0.1;
  const double delta =
      std::max(std::sqrt(c) - std::sqrt(s), std::sqrt(1 - s) - std::sqrt(1 - c));
  CHECK(qsp_iteration_count(c, s, eps) ==
        static_cast<int>(std::ceil(std::log(10.0) / delta - 1e-12)));
  CHECK(qsp_iteration_count(1.0, 0.0, 0.1) ==
        static_cast<int>(std::ceil(std::log(10.0))));
  CHECK_THROWS_AS(qsp_iteration_count(0.5, 0.5, 0.1), std::invalid_argument);
}

TEST_CASE("solver amplifies the 0.3 / 0.7 gap at eps = 0.1") {
  const double c = 0.7, s = 0.3, eps = 0.1;
  int m = qsp_iteration_count(c, s, eps);
  QspSolveResult sol = solve_amplification_phases(c, s, eps, m);
  if (!sol.ok) {
    m += std::max(1, m / 2);
    sol = solve_amplification_phases(c, s, eps, m);
  }
  REQUIRE(sol.ok);
  CHECK(qsp_amplified_acceptance(sol.seq, 0.7) >= 0.9);
  CHECK(qsp_amplified_acceptance(sol.seq, 0.3) <= 0.1);
  CHECK(sol.yes_min >= 0.9);
  CHECK(sol.no_max <= 0.1);
}

TEST_CASE("amplified acceptance is monotone over a sampled grid") {
  const double c = 0.7, s = 0.3, eps = 0.1;
  QspSolveResult sol =
      solve_amplification_phases(c, s, eps, qsp_iteration_count(c, s, eps) + 2);
  REQUIRE(sol.ok);
  // nondecreasing from the no band through the gap into the yes band, up to
  // solver ripple
  double prev = -1e-3;
  for (int i = 0; i <= 40; ++i) {
    const double p = s + (c - s) * i / 40.0;
    const double f = qsp_amplified_acceptance(sol.seq, p);
    CHECK(f >= prev - 5e-3);
    prev = std::max(prev, f);
  }
}

TEST_CASE("m = 0 leaves the base acceptance untouched") {
  PhaseSequence empty;
  empty.m = 0;
  CHECK(qsp_amplified_acceptance(empty, 0.42) == doctest::Approx(0.42));
}
