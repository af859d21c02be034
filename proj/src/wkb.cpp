#include "tdwave/wkb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tdwave {

PotentialSplit effective_potential(const CoefficientModel& model) {
  return PotentialSplit{model};
}

double error_weight(const PotentialSplit& split, double t) {
  const CoefficientModel& m = split.model;
  const double a = m.a(t), a1 = m.a1(t), a2 = m.a2(t);
  return -0.75 * a1 * a1 / (a * a * a) + 0.5 * a2 / (a * a) +
         split.V_star(t) / a;
}

double error_weight_tail(const PotentialSplit& split, double T) {
  const auto q = [&split](double t) { return std::abs(error_weight(split, t)); };
  const double seg = integrate(q, T, 10.0 * T, 1e-13 * (1.0 + T)).value;
  const double qlo = q(T), qhi = q(10.0 * T);
  if (seg < 1e-13) return 0.0;
  const double rate =
      std::log(std::max(qhi, 1e-300) / std::max(qlo, 1e-300)) / std::log(10.0);
  if (rate < -1.05) {
    const double r = std::pow(10.0, rate + 1.0);
    return seg / (1.0 - r);
  }
  return std::numeric_limits<double>::infinity();
}

Verdict AdmissibilityReport::overall() const {
  Verdict out = Verdict::pass;
  for (const ConditionCheck* c : {&phi_positive, &phi_not_L1, &W_L1}) {
    if (c->verdict == Verdict::fail) return Verdict::fail;
    if (c->verdict == Verdict::inconclusive) out = Verdict::inconclusive;
  }
  return out;
}

AdmissibilityReport check_admissibility(const PotentialSplit& split,
                                        double horizon, double tol) {
  if (!(horizon > 0) || !(tol > 0))
    throw ConfigError("check_admissibility: horizon and tol must be positive");
  AdmissibilityReport rep;
  rep.horizon = horizon;
  rep.tol = tol;

  // phi > 0 on [0, 10 horizon]
  rep.phi_positive.name = "phi_positive";
  double pmin = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 4096; ++i)
    pmin = std::min(pmin, split.phi(10.0 * horizon * i / 4096.0));
  rep.phi_positive.tail = pmin;
  rep.phi_positive.verdict = pmin > 0 ? Verdict::pass : Verdict::fail;

  // phi not integrable: fitted growth rate of Phi(t) = integral phi between
  // horizon and 10 horizon; divergence shows up as a positive rate.
  rep.phi_not_L1.name = "phi_not_L1";
  {
    const double Phi_lo = integrate([&split](double t) { return split.phi(t); },
                                    0.0, horizon, 1e-10)
                              .value;
    const double Phi_hi = Phi_lo + integrate([&split](double t) { return split.phi(t); },
                                             horizon, 10.0 * horizon, 1e-10)
                                       .value;
    const double rate = std::log(Phi_hi / std::max(Phi_lo, 1e-300)) / std::log(10.0);
    rep.phi_not_L1.rate = rate;
    rep.phi_not_L1.tail = Phi_hi;
    if (rate > 0.02) rep.phi_not_L1.verdict = Verdict::pass;
    else if (rate < 0.005) rep.phi_not_L1.verdict = Verdict::fail;
    else rep.phi_not_L1.verdict = Verdict::inconclusive;
  }

  // W in L1: tail by decay-rate extrapolation
  rep.W_L1.name = "W_L1";
  {
    const double tail = error_weight_tail(split, horizon);
    rep.W_L1.tail = tail;
    const double qlo = std::abs(error_weight(split, horizon));
    const double qhi = std::abs(error_weight(split, 10.0 * horizon));
    rep.W_L1.rate =
        (qlo < 1e-300 && qhi < 1e-300)
            ? 0.0
            : std::log(std::max(qhi, 1e-300) / std::max(qlo, 1e-300)) /
                  std::log(10.0);
    if (std::isfinite(tail))
      rep.W_L1.verdict = Verdict::pass;  // integrable; magnitude is reported
    else if (rep.W_L1.rate > -0.95)
      rep.W_L1.verdict = Verdict::fail;
    else
      rep.W_L1.verdict = Verdict::inconclusive;
  }
  return rep;
}

namespace {

std::vector<double> uniform_grid(double lo, double hi, int n) {
  std::vector<double> ts(n);
  const double d = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) ts[i] = lo + d * i;
  ts.back() = hi;
  return ts;
}

// Right-hand side of the (l, u) system for y'' = V y.
OdeRhs log_riccati_rhs(const CoefficientModel& model) {
  PotentialSplit split{model};
  return [split](double t, const std::vector<double>& y, std::vector<double>& dy) {
    const double u = y[1];
    dy[0] = u;
    dy[1] = split.V(t) - u * u;
  };
}

}  // namespace

ModeSolution solve_decaying(const CoefficientModel& model, double T_big,
                            const GridSpec& grid) {
  if (!(T_big > grid.t_end))
    throw ConfigError("solve_decaying: T_big must exceed the grid end");
  if (grid.n < 9) throw ConfigError("solve_decaying: grid too coarse");

  const double aT = model.a(T_big);
  // anchor: y = a^{-1/2} e^{-A}, y' = -a^{1/2} e^{-A}  =>  u = -a, and the
  // log-magnitude needs no e^{-A} evaluation (it lives in l directly)
  std::vector<double> y0 = {-0.5 * std::log(aT) - primitive_A(model, T_big),
                            -aT};

  // march T_big -> t_end (no recording), then t_end -> 0 on the output grid
  std::vector<double> ts;
  ts.reserve(grid.n + 1);
  ts.push_back(T_big);
  for (int i = grid.n - 1; i >= 0; --i)
    ts.push_back(grid.t_end * i / (grid.n - 1));

  ModeSolution out;
  out.t.resize(grid.n);
  out.log_mag.resize(grid.n);
  out.u.resize(grid.n);
  out.sign = 1;

  OdeOptions opts;
  opts.rel_tol = 1e-10;
  opts.abs_tol = 1e-12;
  ode_integrate(log_riccati_rhs(model), ts, std::move(y0), opts,
                [&](std::size_t node, double t, const std::vector<double>& y) {
                  if (std::abs(y[1]) > 1e8)
                    throw NumericalError(
                        "solve_decaying: logarithmic derivative blew up (the "
                        "mode crossed zero; anchor T_big too small)");
                  if (node == 0) return;  // the anchor itself
                  const std::size_t i = grid.n - node;  // descending fill
                  out.t[i] = t;
                  out.log_mag[i] = y[0];
                  out.u[i] = y[1];
                });
  // positive and decreasing by construction: u < 0 throughout is the check
  for (std::size_t i = 0; i < out.u.size(); ++i)
    if (!(out.u[i] < 0.0))
      throw NumericalError("solve_decaying: mode stopped decreasing");
  return out;
}

ModeSolution solve_growing(const CoefficientModel& model, const GridSpec& grid) {
  if (grid.n < 9) throw ConfigError("solve_growing: grid too coarse");
  const double a0 = model.a(0.0);
  std::vector<double> y0 = {-0.5 * std::log(a0),
                            a0 - model.a1(0.0) / (2.0 * a0)};
  ModeSolution out;
  out.t = uniform_grid(0.0, grid.t_end, grid.n);
  out.log_mag.resize(grid.n);
  out.u.resize(grid.n);
  out.sign = 1;

  OdeOptions opts;
  opts.rel_tol = 1e-10;
  opts.abs_tol = 1e-12;
  ode_integrate(log_riccati_rhs(model), out.t, std::move(y0), opts,
                [&](std::size_t node, double, const std::vector<double>& y) {
                  out.log_mag[node] = y[0];
                  out.u[node] = y[1];
                });
  return out;
}

namespace {

double hermite_eval(const std::vector<double>& grid,
                    const std::vector<double>& vals,
                    const std::vector<double>& slopes, double t) {
  const double d = grid[1] - grid[0];
  double x = (t - grid.front()) / d;
  if (x < 0.0) x = 0.0;
  const std::size_t last = grid.size() - 2;
  std::size_t i = 0;
  if (x > 0) i = std::min(static_cast<std::size_t>(x), last);
  const double u = std::min(x - static_cast<double>(i), 1.0);
  const double um = 1.0 - u;
  const double h00 = (1.0 + 2.0 * u) * um * um;
  const double h10 = u * um * um;
  const double h01 = u * u * (3.0 - 2.0 * u);
  const double h11 = u * u * (u - 1.0);
  return h00 * vals[i] + h10 * d * slopes[i] + h01 * vals[i + 1] +
         h11 * d * slopes[i + 1];
}

}  // namespace

double MStarProfile::log_m_at(double t) const {
  return hermite_eval(grid, log_m, dlog_m, t);
}

double MStarProfile::log_neg_mp_at(double t) const {
  return hermite_eval(grid, log_neg_mp, dlog_neg_mp, t);
}

MStarProfile build_m_star(const CoefficientModel& model, double T_big,
                          const GridSpec& grid) {
  const ModeSolution psi = solve_decaying(model, T_big, grid);

  MStarProfile prof;
  prof.T_big = T_big;
  prof.kappa_star = std::exp(0.5 * b_infinity(model));
  prof.grid = psi.t;
  const std::size_t n = psi.t.size();
  prof.m.resize(n);
  prof.m_prime.resize(n);
  prof.log_m.resize(n);
  prof.log_neg_mp.resize(n);
  prof.dlog_m.resize(n);
  prof.dlog_neg_mp.resize(n);

  const double log_kappa = 0.5 * b_infinity(model);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = psi.t[i];
    const double b = model.b(t);
    // m = kappa e^{-B/2} psi_-, hence m'/m = u - b/2; the lemma's sign
    // pattern requires u < b/2 everywhere
    const double slope = psi.u[i] - 0.5 * b;
    if (!(slope < 0.0))
      throw NumericalError("build_m_star: m' changed sign at t = " +
                           std::to_string(t));
    prof.log_m[i] = log_kappa - 0.5 * primitive_B(model, t) + psi.log_mag[i];
    prof.log_neg_mp[i] = prof.log_m[i] + std::log(-slope);
    prof.m[i] = std::exp(prof.log_m[i]);
    prof.m_prime[i] = -std::exp(prof.log_neg_mp[i]);
    // analytic slopes for the Hermite accessors: (log m)' = u - b/2 and
    // (log(-m'))' = slope + slope'/slope with slope' = a^2 + b^2/4 - u^2
    const double a_t = model.a(t);
    const double slope_d = a_t * a_t + 0.25 * b * b - psi.u[i] * psi.u[i];
    prof.dlog_m[i] = slope;
    prof.dlog_neg_mp[i] = slope + slope_d / slope;
  }

  // ODE residual |m'' + b m' - a^2 m| / (a^2 m) with m'' from a centered
  // second difference of m — evaluated scale-free through the log samples:
  // with q± = m(t±d)/m(t) = exp(l(t±d) - l(t)), all factors are O(1) and the
  // check never touches the (possibly subnormal) m values themselves.
  const double d = prof.grid[1] - prof.grid[0];
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double qm = std::exp(prof.log_m[i - 1] - prof.log_m[i]);
    const double qp = std::exp(prof.log_m[i + 1] - prof.log_m[i]);
    const double t = prof.grid[i];
    const double a = model.a(t);
    const double mpp_over_m = (qp - 2.0 + qm) / (d * d);
    const double mp_over_m = -std::exp(prof.log_neg_mp[i] - prof.log_m[i]);
    const double res =
        std::abs(mpp_over_m + model.b(t) * mp_over_m - a * a) / (a * a);
    worst = std::max(worst, res);
  }
  prof.residual_sup = worst;

  // delta_*: largest delta with
  //   delta <= m a^{1/2} e^{A} <= 1/delta  and
  //   delta <= (-m') a^{-1/2} e^{A} <= 1/delta  on the grid
  double worst_log = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = prof.grid[i];
    const double la = std::log(model.a(t));
    const double A = primitive_A(model, t);
    const double r1 = prof.log_m[i] + 0.5 * la + A;
    const double r2 = prof.log_neg_mp[i] - 0.5 * la + A;
    worst_log = std::max({worst_log, std::abs(r1), std::abs(r2)});
  }
  prof.delta_star = std::exp(-worst_log);
  return prof;
}

}  // namespace tdwave
