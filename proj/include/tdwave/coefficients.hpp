#pragma once

//
// Coefficient pair (a, b) for the wave operator
//
//     d_t^2 u - a(t)^2 Lap u + b(t) d_t u = |u|^p ,
//
// together with the cumulative integrals that the rest of the library leans
// on:
//
//     A(t)  = integral_0^t a          (stretched time / light-cone radius)
//     B(t)  = integral_0^t b          (accumulated damping)
//     B*(t) = integral_0^t e^{-B}     (damped clock)
//
// The built-in family is the power law a(t) = (1+t)^alpha with integrable
// damping b(t) = mu (1+t)^{-beta}, beta > 1; closed forms are used wherever
// they exist. Custom tabulated coefficients must bring their own derivative
// columns: second derivatives of user tables obtained by differencing are
// not trustworthy, so we refuse to produce them.
//

#include <string>
#include <vector>

#include "tdwave/numerics.hpp"

namespace tdwave {

enum class Family { power_law, constant, custom };

/// One coefficient pair (a, b) with analytic first/second derivatives of a
/// and first derivative of b. Immutable after construction; safe to share
/// across threads.
struct CoefficientModel {
  Family family = Family::constant;

  // power-law parameters (also kept for family == constant, where they are
  // alpha = mu = 0)
  double alpha = 0.0;
  double mu = 0.0;
  double beta = 2.0;

  // declared envelope constant for (1+t)^{-alpha} a(t); 1 for exact power laws
  double envelope_K = 1.0;

  // custom family: Hermite tables built from user samples
  CubicTable ca, ca1, ca2, cb, cb1;

  double a(double t) const;
  double a1(double t) const;  // a'
  double a2(double t) const;  // a''
  double b(double t) const;
  double b1(double t) const;  // b'

  /// Short stable identifier, e.g. "power:alpha=0.5,mu=1,beta=2".
  std::string id() const;
};

/// Builds the power-law model a(t) = (1+t)^alpha, b(t) = mu (1+t)^{-beta}.
/// Rejects alpha <= -1 (A would not reach every positive time), beta <= 1
/// (b not integrable) and mu < 0. alpha = mu = 0 degrades to the constant
/// family a = 1, b = 0.
CoefficientModel make_power_law(double alpha, double mu, double beta);

/// Builds a custom model from uniformly spaced samples. All six arrays must
/// share the grid t_j = t0 + j dt; derivatives are the caller's, sampled
/// analytically.
CoefficientModel make_custom_sampled(double t0, double dt,
                                     std::vector<double> a,
                                     std::vector<double> a1,
                                     std::vector<double> a2,
                                     std::vector<double> b,
                                     std::vector<double> b1);

/// A(t) = integral_0^t a. Closed form for the built-in families; adaptive
/// quadrature (abs tol `quad_tol`) for custom models. Throws NumericalError
/// if the quadrature cannot reach its tolerance.
double primitive_A(const CoefficientModel& m, double t, double quad_tol = 1e-10);

/// B(t) = integral_0^t b, closed form / quadrature as primitive_A.
double primitive_B(const CoefficientModel& m, double t, double quad_tol = 1e-10);

/// B*(t) = integral_0^t e^{-B}. Enforces the sandwich
/// e^{-B_inf} t <= B*(t) <= t as a postcondition (up to tolerance slack).
double b_star(const CoefficientModel& m, double t, double quad_tol = 1e-10);

/// B(+infinity). Exact mu/(beta-1) for the power family; for custom models,
/// B(t_cap) plus a fitted power-law tail beyond t_cap.
double b_infinity(const CoefficientModel& m, double t_cap = 1e4);

/// Cached cumulative tables for the hot path (the solver evaluates A, B, B*
/// millions of times). Values and analytic slopes on a uniform grid feed
/// cubic Hermite interpolation; build cost is one pass of panel quadrature.
class CumulativeIntegrals {
public:
  CumulativeIntegrals() = default;
  CumulativeIntegrals(const CoefficientModel& m, double t_cap, int cells = 8192,
                      double quad_tol = 1e-10);

  double A(double t) const;
  double B(double t) const;
  double Bstar(double t) const;
  double B_infinity() const { return b_inf_; }
  double t_cap() const { return t_cap_; }
  double quad_tol() const { return quad_tol_; }

private:
  CubicTable ta_, tb_, tbs_;
  bool closed_forms_ = false;  // power family: A, B bypass the tables
  CoefficientModel model_;
  double b_inf_ = 0.0;
  double t_cap_ = 0.0;
  double quad_tol_ = 1e-10;
};

// ------------------------------------------------------- assumption audit --

/// Evidence for one integrability/limit condition. `tail` is the quadrature
/// value on [horizon, 10 horizon] extended by the fitted decay rate; `rate`
/// is that fitted rate (meaningful only when the quantity does not vanish).
struct ConditionCheck {
  std::string name;
  Verdict verdict = Verdict::inconclusive;
  double tail = 0.0;        // extrapolated tail mass (or limit value for limits)
  double rate = 0.0;        // fitted power-law decay rate of the integrand
  bool is_limit = false;
};

/// Report of the standing hypotheses on (a, b): positivity of a,
/// nonnegativity and integrability of b, L1 tails of (1/a)'' and (b/a)',
/// the L2 tail of (a^{-1/2})', and the vanishing limits of (1/a)' and b/a.
/// Tolerances are configuration, not derivation — a finite computation can
/// only ever gather evidence about an asymptotic hypothesis, so verdicts
/// may be "inconclusive" when decay-rate extrapolation cannot bound a tail.
struct AssumptionReport {
  std::vector<ConditionCheck> checks;
  double horizon = 0.0;
  double tol = 0.0;

  Verdict overall() const;
  const ConditionCheck* find(const std::string& name) const;
};

AssumptionReport check_assumptions(const CoefficientModel& m, double horizon,
                                   double tol = 2e-2);

}  // namespace tdwave
