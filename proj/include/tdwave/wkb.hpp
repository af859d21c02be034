#pragma once

//
// Liouville--Green machinery for the linear mode equation
//
//     y''(t) = V(t) y(t),      V = a^2 + b'/2 + b^2/4 ,
//
// whose decaying solution, re-weighted by e^{-B/2}, is the profile m_*
// multiplying the spatial eigenfunction in the test-function construction:
//
//     m_*   = kappa_* e^{-B/2} psi_- ,      kappa_* = e^{B(inf)/2} ,
//     m_*'' + b m_*' = a^2 m_* ,            m_* > 0 > m_*' ,
//     delta_* a^{-1/2} e^{-A} <= m_* <= delta_*^{-1} a^{-1/2} e^{-A} .
//
// Numerical strategy: the modes span e^{+-A(t)}, far beyond double range, so
// everything is integrated in (log-magnitude, logarithmic-derivative) form:
// with l = log y and u = y'/y,
//
//     l' = u,      u' = V - u^2 .
//
// The decaying mode is recovered by integrating BACKWARD from an anchor at
// T_big carrying the leading-order profile y = a^{-1/2} e^{-A},
// y' = -a^{1/2} e^{-A}: forward integration loses the decaying mode to the
// growing one, while backward the decaying direction is the attracting one.
// The anchor's relative error is of the order of the error-weight tail
// integral_{T_big}^inf |W|, which the admissibility check estimates.
//

#include <vector>

#include "tdwave/coefficients.hpp"

namespace tdwave {

/// The split V = phi^2 + V_* with phi = a, V_* = b'/2 + b^2/4, plus the
/// error weight W controlling the quality of the phi^{-1/2} e^{+-A} ansatz.
struct PotentialSplit {
  CoefficientModel model;

  double phi(double t) const { return model.a(t); }
  double V_star(double t) const {
    const double bb = model.b(t);
    return 0.5 * model.b1(t) + 0.25 * bb * bb;
  }
  double V(double t) const {
    const double p = phi(t);
    return p * p + V_star(t);
  }
};

PotentialSplit effective_potential(const CoefficientModel& model);

/// W_{phi,V_*}(t) = -phi^{-1/2} (phi^{-1/2})'' + V_* / phi
///               = -(3/4) phi'^2/phi^3 + phi''/(2 phi^2) + V_*/phi .
double error_weight(const PotentialSplit& split, double t);

struct AdmissibilityReport {
  ConditionCheck phi_positive;     // phi > 0 on the probed range
  ConditionCheck phi_not_L1;      // integral of phi diverges (fitted growth)
  ConditionCheck W_L1;            // L1 tail of the error weight
  double horizon = 0.0;
  double tol = 0.0;
  Verdict overall() const;
};

/// Evidential check of the two hypotheses behind the fundamental-system
/// construction: phi > 0 with divergent integral, and W integrable.
AdmissibilityReport check_admissibility(const PotentialSplit& split,
                                        double horizon, double tol = 2e-2);

/// Estimated integral_T^inf |W|: one probed decade plus fitted-decay
/// extrapolation. This is the anchor-error scale for solve_decaying.
double error_weight_tail(const PotentialSplit& split, double T);

/// Uniform output grid for the mode solvers.
struct GridSpec {
  double t_end = 30.0;
  int n = 150001;  // samples on [0, t_end]
};

/// One mode of y'' = V y in overflow-safe form: y = sign * e^{log_mag},
/// y'/y = u at each grid point (grid ascending).
struct ModeSolution {
  std::vector<double> t;
  std::vector<double> log_mag;
  std::vector<double> u;
  int sign = 1;

  double value(std::size_t i) const { return sign * std::exp(log_mag[i]); }
};

/// Decaying mode psi_-: backward integration from the T_big anchor described
/// above. Fails (NumericalError) if the logarithmic derivative blows up,
/// which is the footprint of the solution crossing zero — i.e. an anchor
/// placed too early. Requires T_big > grid end.
ModeSolution solve_decaying(const CoefficientModel& model, double T_big,
                            const GridSpec& grid);

/// Growing mode psi_+: forward integration from leading-order data at t = 0
/// (u(0) = a(0) - a'(0)/(2a(0)), unit scale). Used for Wronskian checks.
ModeSolution solve_growing(const CoefficientModel& model, const GridSpec& grid);

/// Sampled m_* with the empirical constants of its two-sided envelope.
struct MStarProfile {
  std::vector<double> grid;       // ascending times
  std::vector<double> m;          // m_*(t)  (underflows to 0 past ~A(t) > 700)
  std::vector<double> m_prime;    // m_*'(t)
  std::vector<double> log_m;          // exact in log space
  std::vector<double> log_neg_mp;     // log(-m_*')
  std::vector<double> dlog_m;         // d/dt log m_* = u - b/2 (analytic)
  std::vector<double> dlog_neg_mp;    // d/dt log(-m_*') (analytic)
  double kappa_star = 1.0;
  double delta_star = 0.0;  // largest delta validating all four bounds
  double T_big = 0.0;
  double residual_sup = 0.0;  // sup |m'' + b m' - a^2 m| / (a^2 m)

  // Cubic Hermite interpolation off the grid (clamped to the ends); the
  // analytic slope columns keep the error at h^4, so a coarse profile grid
  // is enough for the solver's conservation checks.
  double log_m_at(double t) const;
  double log_neg_mp_at(double t) const;
};

/// Builds m_* = kappa_* e^{-B/2} psi_- on the grid, differentiates through
/// the product rule (m' = m (u - b/2)), verifies the ODE residual with a
/// centered second difference, checks the sign pattern, and computes
/// delta_* as the largest constant validating the envelope on the grid.
MStarProfile build_m_star(const CoefficientModel& model, double T_big,
                          const GridSpec& grid);

}  // namespace tdwave
