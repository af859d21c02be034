#pragma once

//
// Closed-form critical-exponent algebra for the damped wave equation with
// propagation speed (1+t)^alpha. The central object is the quadratic
//
//   gamma(nu, alpha; p) = 2 + (nu+1 - 3 alpha/(1+alpha)) p
//                           - (nu-1 +   alpha/(1+alpha)) p^2 ,
//
// whose positive root generalizes the Strauss exponent; gamma > 0 is the
// blowup regime and the lifespan upper bound scales like
// eps^{-2p(p-1) / ((1+alpha) gamma)}.
//

#include <optional>
#include <utility>

#include "tdwave/coefficients.hpp"

namespace tdwave {

/// A positive real or "unbounded" (the supremum-of-an-interval case).
/// Deliberately not a float infinity: persisted output serializes the
/// unbounded state as the string "inf".
struct Extended {
  double value = 0.0;
  bool unbounded = false;

  static Extended of(double v) { return {v, false}; }
  static Extended inf() { return {0.0, true}; }
  bool finite() const { return !unbounded; }
};

/// gamma_S(nu, p) = 2 + (nu+1) p - (nu-1) p^2.
double gamma_strauss(double nu, double p);

/// Strauss exponent: positive root of gamma_S for nu > 1; unbounded at
/// nu = 1 where the quadratic degenerates and gamma_S > 0 for every p.
Extended p_strauss(double nu);

/// The speed-adjusted quadratic displayed above.
double gamma_hwy(double nu, double alpha, double p);

/// Positive root of gamma_hwy in p (the He--Witt--Yin exponent); unbounded
/// when the leading coefficient is <= 0 so gamma stays positive for all
/// p > 1. Coincides with p_strauss at alpha = 0.
Extended p_hwy(double nu, double alpha);

/// Fujita exponent 1 + 2/nu.
double p_fujita(double nu);

/// Kato exponent (nu+1)/(nu-1); unbounded at nu = 1.
Extended p_kato(double nu);

/// Lifespan exponent 2p(p-1) / ((1+alpha) gamma(N, alpha; p)) governing
/// T_eps <~ C eps^{-lifespan_exponent}. Undefined (nullopt) when
/// gamma <= 0: no polynomial bound is claimed at or above the critical power.
std::optional<double> lifespan_exponent(double N, double alpha, double p);

/// Blowup condition for speeds with growth rate sigma = limsup log A/log t:
/// first component is the positive-mean branch p + 1 - N sigma (p-1) > 0,
/// second the zero-mean branch 2 - N sigma (p-1) > 0.
std::pair<bool, bool> tw_condition(double N, double sigma, double p);

/// Numerical sigma: max of log A(t)/log t over a geometric grid in
/// [horizon/10, horizon]. Converges to 1 + alpha for the power family.
double estimate_sigma(const CoefficientModel& model, double horizon);

/// Inputs for a full report.
struct ExponentQuery {
  double nu = 3.0;     // effective dimension
  double alpha = 0.0;  // speed growth rate, > -1
  double p = 2.0;      // nonlinearity power, > 1
  double mu = 0.0;     // damping amplitude (informational)
  std::optional<double> sigma;  // growth rate of A; default 1 + alpha
};

struct ExponentReport {
  double gamma_strauss = 0.0;
  Extended p_strauss;
  double gamma_hwy = 0.0;
  Extended p_hwy;
  double p_fujita = 0.0;
  Extended p_kato;
  std::optional<double> lifespan_exponent;
  std::pair<bool, bool> tw_condition{false, false};
  double sigma_used = 0.0;
  /// Exponent p(p-1) of the critical-case form exp(C eps^{-p(p-1)});
  /// informational only, status "conjectural" in serialized output.
  double critical_lifespan_exponent = 0.0;
};

ExponentReport evaluate(const ExponentQuery& q);

}  // namespace tdwave
