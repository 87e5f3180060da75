#pragma once

#include <cstdint>
#include <vector>

#include "qweft/common.hpp"

namespace qweft {

// Phase sequence for the alternating-reflection iterate.  With the circuit
// convention used throughout (factor j applies the base circuit, an
// accept-projector phase phi_{2j}, the inverse circuit, then an
// input-projector phase phi_{2j-1}), the scalar reduction of the iterate at
// singular value x is a product of 2x2 reflections R(x) and phase diagonals.
struct PhaseSequence {
  std::vector<double> phases;  // length 2m
  int m = 0;
};

// Re P(x): real part of the <w|U_Phi|w> matrix element of the scalar iterate.
double qsp_polynomial(const PhaseSequence& seq, double x);

// Acceptance probability of the +/- controlled construction on a witness
// whose base acceptance is p: (Re P(sqrt(p)))^2.
double qsp_amplified_acceptance(const PhaseSequence& seq, double p);

// Iteration count per the amplification bound: ceil(kappa * ln(1/eps) /
// max(sqrt(c)-sqrt(s), sqrt(1-s)-sqrt(1-c))), never negative.
int qsp_iteration_count(double c, double s, double eps, double kappa = 1.0);

struct QspSolveResult {
  PhaseSequence seq;
  bool ok = false;
  double yes_min = 0.0;  // min of (Re P)^2 over the yes band
  double no_max = 1.0;   // max of (Re P)^2 over the no band
};

// Fits the phases so that (Re P)^2 >= 1-eps for p in [c,1] and <= eps for
// p in [0,s]; damped Gauss-Newton on band targets with a few restarts.
QspSolveResult solve_amplification_phases(double c, double s, double eps,
                                          int m, std::uint64_t seed = 11);

}  // namespace qweft
