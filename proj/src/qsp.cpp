#include "qweft/qsp.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>

namespace qweft {

namespace {

using M2 = Eigen::Matrix2cd;
using V2 = Eigen::Vector2cd;

M2 refl(double x) {
  const double y = std::sqrt(std::max(0.0, 1.0 - x * x));
  M2 r;
  r << x, y, y, -x;
  return r;
}

M2 dphase(double phi) {
  M2 d = M2::Zero();
  d(0, 0) = std::polar(1.0, phi);
  d(1, 1) = std::polar(1.0, -phi);
  return d;
}

cxd transfer_amplitude(const PhaseSequence& seq, double x) {
  const M2 r = refl(x);
  M2 u = M2::Identity();
  for (int j = 1; j <= seq.m; ++j) {
    u = r * u;                            // base circuit
    u = dphase(seq.phases[2 * j - 1]) * u;  // accept-projector phase
    u = r * u;                            // inverse circuit
    u = dphase(seq.phases[2 * j - 2]) * u;  // input-projector phase
  }
  return u(0, 0);
}

}  // namespace

double qsp_polynomial(const PhaseSequence& seq, double x) {
  if (static_cast<int>(seq.phases.size()) != 2 * seq.m)
    throw std::invalid_argument("qsp_polynomial: phase length != 2m");
  if (seq.m == 0) return 1.0;
  return std::real(transfer_amplitude(seq, x));
}

double qsp_amplified_acceptance(const PhaseSequence& seq, double p) {
  if (seq.m == 0) return p;  // empty iterate leaves the base circuit as-is
  const double f = qsp_polynomial(seq, std::sqrt(std::clamp(p, 0.0, 1.0)));
  return f * f;
}

int qsp_iteration_count(double c, double s, double eps, double kappa) {
  const double delta =
      std::max(std::sqrt(c) - std::sqrt(s), std::sqrt(1 - s) - std::sqrt(1 - c));
  if (delta <= 0) throw std::invalid_argument("qsp_iteration_count: no gap");
  const double raw = kappa * std::log(1.0 / eps) / delta;
  return std::max(0, static_cast<int>(std::ceil(raw - 1e-12)));
}

namespace {

struct BandGrid {
  std::vector<double> xs;
  std::vector<double> targets;
};

BandGrid make_grid(double c, double s, double eps, int per_band) {
  BandGrid g;
  const double f_yes = 0.5 * (std::sqrt(1.0 - eps) + 1.0);
  const double f_no = 0.5 * std::sqrt(eps);
  const double x_no = std::sqrt(s);
  const double x_yes = std::sqrt(c);
  for (int i = 0; i < per_band; ++i) {
    const double t = (per_band == 1) ? 0.0 : double(i) / (per_band - 1);
    g.xs.push_back(t * x_no);
    g.targets.push_back(f_no);
  }
  for (int i = 0; i < per_band; ++i) {
    const double t = (per_band == 1) ? 0.0 : double(i) / (per_band - 1);
    g.xs.push_back(x_yes + t * (1.0 - x_yes));
    g.targets.push_back(f_yes);
  }
  return g;
}

// Re P and its gradient w.r.t. every phase, via forward states and backward
// rows through the 2x2 chain.
void value_and_grad(const PhaseSequence& seq, double x, double& value,
                    std::vector<double>& grad) {
  const int L = 4 * seq.m;
  const M2 r = refl(x);
  std::vector<V2> fwd(L + 1);
  fwd[0] = V2::Unit(0);
  std::vector<int> phase_index(L, -1);
  {
    int step = 0;
    for (int j = 1; j <= seq.m; ++j) {
      fwd[step + 1] = r * fwd[step];
      ++step;
      phase_index[step] = 2 * j - 1;
      fwd[step + 1] = dphase(seq.phases[2 * j - 1]) * fwd[step];
      ++step;
      fwd[step + 1] = r * fwd[step];
      ++step;
      phase_index[step] = 2 * j - 2;
      fwd[step + 1] = dphase(seq.phases[2 * j - 2]) * fwd[step];
      ++step;
    }
  }
  value = std::real(fwd[L](0));
  grad.assign(seq.phases.size(), 0.0);
  Eigen::RowVector2cd bwd;
  bwd << 1.0, 0.0;  // <e0|
  for (int step = L - 1; step >= 0; --step) {
    if (phase_index[step] >= 0) {
      const double phi = seq.phases[phase_index[step]];
      M2 d = M2::Zero();  // d/dphi of dphase = i sigma_z dphase
      d(0, 0) = cxd(0, 1) * std::polar(1.0, phi);
      d(1, 1) = cxd(0, -1) * std::polar(1.0, -phi);
      grad[phase_index[step]] += std::real((bwd * d * fwd[step])(0));
      bwd = bwd * dphase(phi);
    } else {
      bwd = bwd * r;
    }
  }
}

}  // namespace

QspSolveResult solve_amplification_phases(double c, double s, double eps,
                                          int m, std::uint64_t seed) {
  QspSolveResult best;
  best.seq.m = m;
  best.seq.phases.assign(2 * std::max(m, 0), 0.0);
  if (m == 0) {
    best.ok = (c >= 1.0 - 1e-12 && s <= 1e-12);
    best.yes_min = 1.0;
    best.no_max = 0.0;
    return best;
  }

  const BandGrid grid = make_grid(c, s, eps, 48);
  const int npts = static_cast<int>(grid.xs.size());
  const int nvar = 2 * m;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 0.1);

  auto evaluate_bands = [&](const PhaseSequence& seq, double& yes_min,
                            double& no_max) {
    yes_min = 1.0;
    no_max = 0.0;
    const int fine = 256;
    for (int i = 0; i <= fine; ++i) {
      const double p_no = s * i / fine;
      no_max = std::max(no_max, qsp_amplified_acceptance(seq, p_no));
      const double p_yes = c + (1.0 - c) * i / fine;
      yes_min = std::min(yes_min, qsp_amplified_acceptance(seq, p_yes));
    }
  };

  double best_score = -1.0;
  for (int restart = 0; restart < 6; ++restart) {
    PhaseSequence seq;
    seq.m = m;
    seq.phases.assign(nvar, 0.0);
    if (restart > 0)
      for (auto& ph : seq.phases) ph = gauss(rng) * restart;

    double lambda = 1e-3;
    Eigen::VectorXd resid(npts);
    Eigen::MatrixXd jac(npts, nvar);
    std::vector<double> g;
    for (int it = 0; it < 400; ++it) {
      for (int i = 0; i < npts; ++i) {
        double f;
        value_and_grad(seq, grid.xs[i], f, g);
        resid[i] = f - grid.targets[i];
        for (int v = 0; v < nvar; ++v) jac(i, v) = g[v];
      }
      const double err = resid.squaredNorm();
      Eigen::MatrixXd a = jac.transpose() * jac;
      a.diagonal().array() += lambda;
      Eigen::VectorXd delta = a.ldlt().solve(-jac.transpose() * resid);
      PhaseSequence trial = seq;
      for (int v = 0; v < nvar; ++v) trial.phases[v] += delta[v];
      double trial_err = 0.0;
      for (int i = 0; i < npts; ++i) {
        double f;
        value_and_grad(trial, grid.xs[i], f, g);
        const double rr = f - grid.targets[i];
        trial_err += rr * rr;
      }
      if (trial_err < err) {
        seq = trial;
        lambda = std::max(lambda * 0.5, 1e-12);
        if (err - trial_err < 1e-15) break;
      } else {
        lambda *= 10;
        if (lambda > 1e8) break;
      }
    }

    double yes_min, no_max;
    evaluate_bands(seq, yes_min, no_max);
    const double score = std::min(yes_min - (1 - eps), eps - no_max);
    if (score > best_score) {
      best_score = score;
      best.seq = seq;
      best.yes_min = yes_min;
      best.no_max = no_max;
    }
    if (best_score >= 0) break;
  }
  best.ok = best.yes_min >= 1 - eps && best.no_max <= eps;
  return best;
}

}  // namespace qweft
