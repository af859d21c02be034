#include "tdwave/exponents.hpp"

#include <cmath>
#include <limits>

namespace tdwave {

namespace {

void require_nu(double nu) {
  if (!(nu >= 1.0)) throw ConfigError("exponents: nu must be >= 1");
}
void require_p(double p) {
  if (!(p > 1.0)) throw ConfigError("exponents: p must exceed 1");
}
void require_alpha(double alpha) {
  if (!(alpha > -1.0)) throw ConfigError("exponents: alpha must exceed -1");
}

// Larger root of -Q p^2 + L p + 2 = 0 for Q > 0, computed in the
// cancellation-free form: with D = L^2 + 8Q,
//   root = (L + sqrt(D)) / (2Q)   when L >= 0,
//   root = 4 / (sqrt(D) - L)      when L <  0   (same number, no subtraction
//                                                of close quantities).
double stable_positive_root(double L, double Q) {
  const double D = L * L + 8.0 * Q;
  const double sq = std::sqrt(D);
  return L >= 0.0 ? (L + sq) / (2.0 * Q) : 4.0 / (sq - L);
}

}  // namespace

double gamma_strauss(double nu, double p) {
  require_nu(nu);
  require_p(p);
  return 2.0 + (nu + 1.0) * p - (nu - 1.0) * p * p;
}

Extended p_strauss(double nu) {
  require_nu(nu);
  if (nu == 1.0) return Extended::inf();
  return Extended::of(stable_positive_root(nu + 1.0, nu - 1.0));
}

double gamma_hwy(double nu, double alpha, double p) {
  require_nu(nu);
  require_alpha(alpha);
  require_p(p);
  const double r = alpha / (1.0 + alpha);
  return 2.0 + (nu + 1.0 - 3.0 * r) * p - (nu - 1.0 + r) * p * p;
}

Extended p_hwy(double nu, double alpha) {
  require_nu(nu);
  require_alpha(alpha);
  const double r = alpha / (1.0 + alpha);
  const double L = nu + 1.0 - 3.0 * r;
  const double Q = nu - 1.0 + r;
  // Q <= 0: the quadratic opens upward (or is linear with positive slope,
  // since gamma(1) = 4/(1+alpha) > 0 always), so gamma > 0 for all p > 1.
  if (Q <= 0.0) return Extended::inf();
  return Extended::of(stable_positive_root(L, Q));
}

double p_fujita(double nu) {
  require_nu(nu);
  return 1.0 + 2.0 / nu;
}

Extended p_kato(double nu) {
  require_nu(nu);
  if (nu == 1.0) return Extended::inf();
  return Extended::of((nu + 1.0) / (nu - 1.0));
}

std::optional<double> lifespan_exponent(double N, double alpha, double p) {
  const double g = gamma_hwy(N, alpha, p);
  if (!(g > 0.0)) return std::nullopt;
  return 2.0 * p * (p - 1.0) / ((1.0 + alpha) * g);
}

std::pair<bool, bool> tw_condition(double N, double sigma, double p) {
  require_p(p);
  if (sigma < 0) throw ConfigError("tw_condition: sigma must be nonnegative");
  const bool mean_pos = p + 1.0 - N * sigma * (p - 1.0) > 0.0;
  const bool mean_zero = 2.0 - N * sigma * (p - 1.0) > 0.0;
  return {mean_pos, mean_zero};
}

double estimate_sigma(const CoefficientModel& model, double horizon) {
  if (!(horizon >= 10.0))
    throw ConfigError("estimate_sigma: horizon must be >= 10");
  // For custom models one cumulative cache serves the whole scan.
  const bool closed =
      model.family == Family::constant || model.family == Family::power_law;
  CumulativeIntegrals cache;
  if (!closed) cache = CumulativeIntegrals(model, horizon, 8192);

  const int n = 64;
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= n; ++i) {
    const double t =
        horizon / 10.0 * std::pow(10.0, static_cast<double>(i) / n);
    const double At = closed ? primitive_A(model, t) : cache.A(t);
    best = std::max(best, std::log(At) / std::log(t));
  }
  return best;
}

ExponentReport evaluate(const ExponentQuery& q) {
  ExponentReport rep;
  rep.gamma_strauss = gamma_strauss(q.nu, q.p);
  rep.p_strauss = p_strauss(q.nu);
  rep.gamma_hwy = gamma_hwy(q.nu, q.alpha, q.p);
  rep.p_hwy = p_hwy(q.nu, q.alpha);
  rep.p_fujita = p_fujita(q.nu);
  rep.p_kato = p_kato(q.nu);
  rep.lifespan_exponent = lifespan_exponent(q.nu, q.alpha, q.p);
  rep.sigma_used = q.sigma.value_or(1.0 + q.alpha);
  rep.tw_condition = tw_condition(q.nu, rep.sigma_used, q.p);
  rep.critical_lifespan_exponent = q.p * (q.p - 1.0);
  return rep;
}

}  // namespace tdwave
