#include "tdwave/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>

#include "tdwave/common.hpp"
#include "tdwave/numerics.hpp"
#include "tdwave/testfn.hpp"

namespace tdwave {

namespace {
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
}

// -------------------------------------------------------------- data types --

void InitialData::compute_moments(int N) {
  const double area = sphere_area(N - 1);
  auto mom = [&](const std::function<double(double)>& fn) {
    auto integrand = [&](double r) { return fn(r) * std::pow(r, N - 1); };
    return area * integrate_or_throw(integrand, 0.0, r0, 1e-12);
  };
  M_f = mom(f);
  M_g = mom(g);
}

void InitialData::validate() const {
  if (!(r0 > 0.0)) throw ConfigError("initial data needs r0 > 0");
  if (!(eps > 0.0)) throw ConfigError("initial data needs eps > 0");
  if (M_f < 0.0 || M_g < 0.0) {
    throw ConfigError("initial data: call compute_moments first");
  }
  for (int i = 0; i <= 400; ++i) {
    const double r = r0 * i / 400.0;
    if (f(r) < -1e-12 || g(r) < -1e-12) {
      throw ConfigError("initial data must be nonnegative");
    }
  }
  if (std::abs(f(r0)) > 1e-10 || std::abs(g(r0)) > 1e-10) {
    throw ConfigError("initial data must vanish at r0");
  }
  if (M_f + M_g <= 0.0) {
    throw ConfigError("initial data must not vanish identically");
  }
}

InitialData bump_data(double eps, double r0) {
  InitialData d;
  d.r0 = r0;
  d.eps = eps;
  auto bump = [r0](double r) {
    const double x = r / r0;
    if (x >= 1.0) return 0.0;
    const double c = 1.0 - x * x;
    return c * c * c;
  };
  d.f = bump;
  d.g = bump;
  return d;
}

InitialData zero_data(double r0) {
  InitialData d;
  d.r0 = r0;
  d.eps = 1.0;
  d.f = [](double) { return 0.0; };
  d.g = [](double) { return 0.0; };
  return d;
}

void SolverConfig::validate() const {
  if (N < 1) throw ConfigError("solver: N >= 1 required");
  if (!(p > 1.0)) throw ConfigError("solver: p > 1 required");
  if (!(h > 0.0)) throw ConfigError("solver: h > 0 required");
  if (!(cfl > 0.0 && cfl < 1.0)) throw ConfigError("solver: CFL in (0,1)");
  if (!(s_max > 0.0)) throw ConfigError("solver: s_max > 0 required");
  if (!(blowup_threshold > 1.0)) {
    throw ConfigError("solver: blowup threshold must exceed 1");
  }
}

double RadialState::sup_w() const {
  double m = 0.0;
  for (double x : w) m = std::max(m, std::abs(x));
  return m;
}

// ----------------------------------------------------------- coefficients --

TransformedCoefficients transformed_coefficients(const CoefficientModel& model,
                                                 double s, double p) {
  const double t = inverse_A(model, s);
  const double a = model.a(t);
  const double a1 = model.a1(t);
  const double a2 = model.a2(t);
  const double b = model.b(t);
  // Theta = a^{-1/2}: Theta' = -a1/(2 a^{3/2}),
  // Theta'' = (3/4) a1^2 a^{-5/2} - (1/2) a2 a^{-3/2}
  const double sq = std::sqrt(a);
  const double th1 = -0.5 * a1 / (a * sq);
  const double th2 = 0.75 * a1 * a1 / (a * a * sq) - 0.5 * a2 / (a * sq);
  TransformedCoefficients tc;
  tc.btilde = b / a;
  tc.vtilde = (th2 + b * th1) / (a * sq);  // Theta^3 = a^{-3/2}
  tc.ctilde = std::pow(a, -0.5 * (p + 3.0));
  return tc;
}

double inverse_A(const CoefficientModel& model, double s) {
  if (s < 0.0) throw ConfigError("inverse_A needs s >= 0");
  if (model.family != Family::custom) {
    const double al = model.alpha;
    if (al == 0.0) return s;
    return std::pow(1.0 + (1.0 + al) * s, 1.0 / (1.0 + al)) - 1.0;
  }
  // Newton with bisection safety on the monotone map t -> A(t)
  double lo = 0.0, hi = std::max(1.0, s);
  while (primitive_A(model, hi) < s) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw NumericalError("inverse_A: A(t) saturates below s");
  }
  double t = 0.5 * (lo + hi);
  for (int it = 0; it < 100; ++it) {
    const double val = primitive_A(model, t) - s;
    if (std::abs(val) < 1e-12 * (1.0 + s)) return t;
    (val > 0.0 ? hi : lo) = t;
    const double dv = model.a(t);
    double next = t - val / dv;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    t = next;
  }
  return t;
}

// ------------------------------------------------------------------ setup --

namespace {

long grid_size(const SolverConfig& cfg, double r_max) {
  const long J = std::lround(r_max / cfg.h);
  if (J < 8) throw ConfigError("solver: grid needs at least 8 cells");
  return J;
}

double resolve_r_max(const SolverConfig& cfg, double r0) {
  return cfg.r_max > 0.0 ? cfg.r_max : r0 + cfg.s_max + 1.0;
}

}  // namespace

std::pair<std::vector<double>, std::vector<double>> liouville_initial(
    const CoefficientModel& model, const InitialData& data,
    const SolverConfig& config) {
  const double r_max = resolve_r_max(config, data.r0);
  const long J = grid_size(config, r_max);
  const double a0 = model.a(0.0);
  const double a1 = model.a1(0.0);
  const double cw = std::sqrt(a0) * data.eps;
  const double cg = data.eps / std::sqrt(a0);
  const double cf = 0.5 * a1 / (a0 * std::sqrt(a0)) * data.eps;
  std::vector<double> w0(J + 1, 0.0), w1(J + 1, 0.0);
  for (long j = 0; j < J; ++j) {
    const double r = j * config.h;
    const double fv = r < data.r0 ? data.f(r) : 0.0;
    const double gv = r < data.r0 ? data.g(r) : 0.0;
    w0[j] = cw * fv;
    w1[j] = cg * gv + cf * fv;
  }
  return {std::move(w0), std::move(w1)};
}

RadialState initial_state(const CoefficientModel& model,
                          const InitialData& data, const SolverConfig& config) {
  RadialState st;
  st.N = config.N;
  st.h = config.h;
  const double ds0 = config.cfl * config.h;
  const long n_steps = std::max(1L, std::lround(std::ceil(config.s_max / ds0)));
  st.ds = config.s_max / static_cast<double>(n_steps);
  auto init = liouville_initial(model, data, config);
  st.w = std::move(init.first);
  st.v = std::move(init.second);
  st.force.assign(st.w.size(), 0.0);
  st.force_valid = false;
  return st;
}

// ------------------------------------------------------------------- step --

namespace {

// F = Lap w - Vtilde w + ctilde |w|^p on the interior, 0 on the Dirichlet
// wall. Origin: ghost symmetry gives Lap = 2N (w_1 - w_0)/h^2.
void eval_force(const RadialState& st, const SolverConfig& cfg,
                const TransformedCoefficients& tc, bool nonlinearity_on,
                std::vector<double>& out) {
  const long J = static_cast<long>(st.w.size()) - 1;
  const double inv_h2 = 1.0 / (st.h * st.h);
  const double* w = st.w.data();
  double* F = out.data();
  const int N = st.N;
  const double V = tc.vtilde, c = tc.ctilde, p = cfg.p;
  F[0] = 2.0 * N * (w[1] - w[0]) * inv_h2 - V * w[0];
  for (long j = 1; j < J; ++j) {
    const double lap = (w[j + 1] - 2.0 * w[j] + w[j - 1]) * inv_h2 +
                       (N - 1) * (w[j + 1] - w[j - 1]) * inv_h2 * st.h /
                           (2.0 * (j * st.h));
    F[j] = lap - V * w[j];
  }
  if (nonlinearity_on) {
    for (long j = 0; j < J; ++j) {
      F[j] += c * std::pow(std::abs(w[j]), p);
    }
  }
  F[J] = 0.0;
}

}  // namespace

void step(RadialState& state, const SolverConfig& config,
          const CoefficientModel& model, bool nonlinearity_on) {
  const double ds = state.ds;
  const long J = static_cast<long>(state.w.size()) - 1;
  const TransformedCoefficients tc0 =
      transformed_coefficients(model, state.s, config.p);
  if (!state.force_valid) {
    eval_force(state, config, tc0, nonlinearity_on, state.force);
    state.force_valid = true;
  }
  // half kick with trapezoidal damping, then drift
  const double k0 = 0.25 * ds * tc0.btilde;
  const double g0 = (1.0 - k0) / (1.0 + k0), f0 = 0.5 * ds / (1.0 + k0);
  double* v = state.v.data();
  double* w = state.w.data();
  const double* F = state.force.data();
  for (long j = 0; j <= J; ++j) {
    v[j] = g0 * v[j] + f0 * F[j];
    w[j] += ds * v[j];
  }
  w[J] = 0.0;
  state.s += ds;
  state.t = inverse_A(model, state.s);
  ++state.steps;
  // closing half kick at the new time
  const TransformedCoefficients tc1 =
      transformed_coefficients(model, state.s, config.p);
  eval_force(state, config, tc1, nonlinearity_on, state.force);
  const double k1 = 0.25 * ds * tc1.btilde;
  const double g1 = (1.0 - k1) / (1.0 + k1), f1 = 0.5 * ds / (1.0 + k1);
  for (long j = 0; j <= J; ++j) {
    v[j] = g1 * v[j] + f1 * state.force[j];
  }
  v[J] = 0.0;
}

double support_radius(const RadialState& state, double tol) {
  const long J = static_cast<long>(state.w.size()) - 1;
  double sup = 0.0;
  for (long j = 0; j <= J; ++j) {
    sup = std::max(sup, std::max(std::abs(state.w[j]), std::abs(state.v[j])));
  }
  if (sup <= 0.0) return 0.0;
  const double thr = tol * sup;
  for (long j = J; j >= 0; --j) {
    if (std::max(std::abs(state.w[j]), std::abs(state.v[j])) > thr) {
      return j * state.h;
    }
  }
  return 0.0;
}

OriginalSnapshot from_transformed(const RadialState& state,
                                  const CoefficientModel& model) {
  const double t = state.t;
  const double a = model.a(t);
  const double a1 = model.a1(t);
  const double sq = std::sqrt(a);
  const double cu = 1.0 / sq;
  const double cv = sq;
  const double cw = -0.5 * a1 / (a * sq);
  OriginalSnapshot snap;
  snap.t = t;
  const std::size_t n = state.w.size();
  snap.r.resize(n);
  snap.u.resize(n);
  snap.ut.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    snap.r[j] = j * state.h;
    snap.u[j] = cu * state.w[j];
    snap.ut[j] = cv * state.v[j] + cw * state.w[j];
  }
  return snap;
}

std::string to_string(RunVerdict v) {
  switch (v) {
    case RunVerdict::blowup: return "blowup";
    case RunVerdict::survived: return "survived";
    case RunVerdict::boundary_breach: return "boundary_breach";
    case RunVerdict::instability: return "instability";
  }
  return "?";
}

// -------------------------------------------------------------------- run --

namespace {

struct Recorder {
  const CoefficientModel& model;
  const SolverConfig& cfg;
  const MStarProfile* mstar;
  std::vector<double> log_phi;  // per node, only when mstar is set
  double area;

  Recorder(const CoefficientModel& m, const SolverConfig& c,
           const MStarProfile* ms, std::size_t nodes)
      : model(m), cfg(c), mstar(ms), area(sphere_area(c.N - 1)) {
    if (mstar) {
      log_phi.resize(nodes);
      for (std::size_t j = 0; j < nodes; ++j) {
        log_phi[j] = phi_full(cfg.N, j * cfg.h).log_value;
      }
    }
  }

  RunSample sample(const RadialState& st) const {
    RunSample smp;
    smp.s = st.s;
    smp.t = st.t;
    const double a = model.a(st.t);
    const double a1 = model.a1(st.t);
    const double sq = std::sqrt(a);
    smp.sup_u = st.sup_w() / sq;
    smp.support_r = support_radius(st);
    const double B = primitive_B(model, st.t);
    const double eB = std::exp(B);
    const std::size_t n = st.w.size();
    std::vector<double> fw(n), fv(n), fp(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double rn = std::pow(j * st.h, cfg.N - 1);
      fw[j] = st.w[j] * rn;
      fv[j] = st.v[j] * rn;
      fp[j] = std::pow(std::abs(st.w[j]), cfg.p) * rn;
    }
    const double Iw = area * simpson_uniform(fw, st.h);
    const double Iv = area * simpson_uniform(fv, st.h);
    const double Ip = area * simpson_uniform(fp, st.h);
    smp.mass = Iw / sq;
    smp.ip = Ip * std::pow(a, -0.5 * cfg.p);
    // u_t = a^{1/2} v - (a'/2) a^{-3/2} w
    smp.q1 = eB * (sq * Iv - 0.5 * a1 / (a * sq) * Iw);
    if (mstar) {
      const double lm = mstar->log_m_at(st.t);
      const double lmp = mstar->log_neg_mp_at(st.t);
      const double cv = sq, cw2 = -0.5 * a1 / (a * sq), cu = 1.0 / sq;
      std::vector<double> fq(n), fr(n), fu(n), fd(n);
      const double lpw = -0.5 * cfg.p * std::log(a);
      for (std::size_t j = 0; j < n; ++j) {
        const double rn = std::pow(j * st.h, cfg.N - 1);
        const double wm = std::exp(B + lm + log_phi[j]);
        const double wp = std::exp(B + lmp + log_phi[j]);
        const double ut = cv * st.v[j] + cw2 * st.w[j];
        const double uj = cu * st.w[j];
        fq[j] = (wm * ut + wp * uj) * rn;
        fr[j] = std::exp(B + lm + log_phi[j] + lpw) *
                std::pow(std::abs(st.w[j]), cfg.p) * rn;
        fu[j] = std::exp(lm + log_phi[j]) * uj * rn;
        fd[j] = -std::exp(lmp + log_phi[j]) * uj * rn;
      }
      smp.qstar = area * simpson_uniform(fq, st.h);
      smp.ip_phi_w = area * simpson_uniform(fr, st.h);
      smp.iu_phi = area * simpson_uniform(fu, st.h);
      smp.iut_phi = area * simpson_uniform(fd, st.h);
    } else {
      smp.qstar = kNan;
      smp.ip_phi_w = kNan;
      smp.iu_phi = kNan;
      smp.iut_phi = kNan;
    }
    return smp;
  }
};

// Tail fit of the self-similar law sup ~ (s_b - s)^{-2/(p-1)}: linearize via
// y = sup^{-(p-1)/2} (a straight line hitting 0 at s_b), then cross-check the
// fitted log-log growth exponent.
struct BlowupFit {
  bool usable = false;
  double s_b = 0.0;
  double exponent = 0.0;
  int points = 0;
};

BlowupFit fit_blowup(const std::vector<double>& hs,
                     const std::vector<double>& hsup, double sup0, double p,
                     double ds) {
  BlowupFit out;
  // the last couple of steps before the threshold trips are not resolved
  // (sup can jump orders of magnitude per step there); cut the history back
  // to the stretch the scheme actually tracked
  std::size_t last = hsup.size();
  while (last > 1 && (!std::isfinite(hsup[last - 1]) ||
                      hsup[last - 1] > 3.0 * hsup[last - 2])) {
    --last;
  }
  // widen the amplitude gate until enough resolved points survive the
  // near-root cut below; a tight gate is preferred (purer asymptotics)
  std::vector<double> xs, ys, lx, lsup;
  for (double gate : {1e4, 1e3, 1e2, 1e1}) {
    xs.clear();
    ys.clear();
    for (std::size_t i = 0; i < last; ++i) {
      if (std::isfinite(hsup[i]) && hsup[i] > gate * sup0) {
        xs.push_back(hs[i]);
        ys.push_back(std::pow(hsup[i], -0.5 * (p - 1.0)));
      }
    }
    if (xs.size() < 4) continue;
    // sup ~ K (s_b - s)^{-2/(p-1)} makes sup^{-(p-1)/2} linear in s with
    // root s_b, which is a far better-conditioned estimator than any
    // direct nonlinear fit
    const LineFit lf = fit_line(xs, ys);
    if (!(lf.slope < 0.0)) continue;
    double s_b = -lf.intercept / lf.slope;
    const double s_last = xs.back();
    if (!(s_b > s_last)) s_b = s_last + ds;
    // conformity of the growth exponent: log sup against log (s_b - s),
    // skipping points so close to s_b that its +-ds uncertainty would move
    // log(gap) by O(1)
    lx.clear();
    lsup.clear();
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double gap = s_b - xs[i];
      if (gap <= 3.0 * ds) continue;
      lx.push_back(std::log(gap));
      lsup.push_back(-2.0 / (p - 1.0) * std::log(ys[i]));
    }
    if (lx.size() < 4) continue;
    const LineFit gf = fit_line(lx, lsup);
    out.usable = true;
    out.s_b = s_b;
    out.exponent = gf.slope;
    out.points = static_cast<int>(lx.size());
    if (lx.size() >= 6) break;
  }
  return out;
}

}  // namespace

RunOutcome run(const CoefficientModel& model, const SolverConfig& config,
               const InitialData& data, bool nonlinearity_on,
               const MStarProfile* mstar) {
  config.validate();
  InitialData dat = data;
  dat.compute_moments(config.N);
  dat.validate();

  SolverConfig cfg = config;
  cfg.r_max = resolve_r_max(config, dat.r0);

  RadialState st = initial_state(model, dat, cfg);
  const long J = static_cast<long>(st.w.size()) - 1;
  const long n_steps = std::lround(cfg.s_max / st.ds);

  // m_* profile: use the supplied one, else build one when the damping
  // integral converges (otherwise Q_* has no normalizer and stays NaN)
  std::unique_ptr<MStarProfile> owned;
  std::string note;
  if (!mstar && std::isfinite(b_infinity(model))) {
    const double t_end = inverse_A(model, cfg.s_max) + 1.0;
    GridSpec gs;
    gs.t_end = t_end;
    gs.n = static_cast<int>(
        std::clamp(std::ceil(t_end / 2e-3) + 1.0, 2001.0, 200001.0));
    try {
      owned = std::make_unique<MStarProfile>(
          build_m_star(model, 2.0 * t_end + 10.0, gs));
      mstar = owned.get();
    } catch (const NumericalError& e) {
      note = std::string("m_* profile unavailable: ") + e.what();
    }
  }

  Recorder rec(model, cfg, mstar, st.w.size());

  RunOutcome out;
  out.sup0 = st.sup_w() / std::sqrt(model.a(0.0));
  if (out.sup0 <= 0.0) throw ConfigError("run: zero initial data");
  out.note = note;
  out.samples.push_back(rec.sample(st));

  const long rec_every =
      cfg.record_every > 0
          ? cfg.record_every
          : std::max(1L, n_steps / 600);
  const long breach_cells = 5;

  std::vector<double> hs, hsup;
  hs.reserve(n_steps + 1);
  hsup.reserve(n_steps + 1);
  hs.push_back(0.0);
  hsup.push_back(out.sup0);

  const double lin_cap = 1e3 * st.sup_w();
  bool blew = false, breached = false, unstable = false;

  for (long k = 1; k <= n_steps; ++k) {
    step(st, cfg, model, nonlinearity_on);
    const double sw = st.sup_w();
    const double su = sw / std::sqrt(model.a(st.t));
    hs.push_back(st.s);
    hsup.push_back(su);
    if (!std::isfinite(sw)) {
      // past the threshold this is the singularity itself; otherwise the
      // scheme lost the solution
      double peak = 0.0;
      for (double x : hsup) {
        if (std::isfinite(x)) peak = std::max(peak, x);
      }
      (peak > 1e3 * out.sup0 ? blew : unstable) = true;
      break;
    }
    if (nonlinearity_on && su > cfg.blowup_threshold * out.sup0) {
      blew = true;
      out.samples.push_back(rec.sample(st));
      break;
    }
    if (!nonlinearity_on && sw > lin_cap) {
      unstable = true;
      break;
    }
    // boundary sentinel: any signal in the outermost cells
    const double guard = 1e-8 * std::max(sw, 1e-300);
    for (long j = J - breach_cells; j <= J; ++j) {
      if (std::abs(st.w[j]) > guard || std::abs(st.v[j]) > guard) {
        breached = true;
        break;
      }
    }
    if (breached) break;
    if (k % rec_every == 0 || k == n_steps) {
      out.samples.push_back(rec.sample(st));
    }
  }

  out.s_end = st.s;
  out.final_state = st;

  if (unstable) {
    out.verdict = RunVerdict::instability;
    out.note += (out.note.empty() ? "" : "; ");
    out.note += "growth without a consistent blowup signature";
    return out;
  }
  if (breached) {
    out.verdict = RunVerdict::boundary_breach;
    return out;
  }
  if (!blew) {
    out.verdict = RunVerdict::survived;
    return out;
  }

  const BlowupFit fit = fit_blowup(hs, hsup, out.sup0, cfg.p, st.ds);
  const double expected = -2.0 / (cfg.p - 1.0);
  if (!fit.usable || !(fit.exponent / expected > 0.5 &&
                       fit.exponent / expected < 2.0)) {
    out.verdict = RunVerdict::instability;
    out.note += (out.note.empty() ? "" : "; ");
    out.note += fit.usable ? "growth exponent off the self-similar rate"
                           : "no usable window for the blowup fit";
    out.growth_exponent = fit.exponent;
    out.fit_points = fit.points;
    return out;
  }
  out.verdict = RunVerdict::blowup;
  out.s_blowup = fit.s_b;
  out.T_blowup = inverse_A(model, fit.s_b);
  out.growth_exponent = fit.exponent;
  out.fit_points = fit.points;
  return out;
}

// ----------------------------------------------------------- direct route --

std::vector<OriginalSnapshot> direct_reference_run(
    const CoefficientModel& model, const SolverConfig& config,
    const InitialData& data, double t_end, bool nonlinearity_on) {
  config.validate();
  if (!(t_end > 0.0)) throw ConfigError("direct run needs t_end > 0");
  InitialData dat = data;
  dat.compute_moments(config.N);

  const double A_end = primitive_A(model, t_end);
  const double r_max =
      config.r_max > 0.0 ? config.r_max : dat.r0 + A_end + 1.0;
  const long J = grid_size(config, r_max);
  const double h = config.h;
  const int N = config.N;

  double a_max = 0.0;
  for (int i = 0; i <= 256; ++i) {
    a_max = std::max(a_max, model.a(t_end * i / 256.0));
  }
  const long n_steps =
      std::max(1L, std::lround(std::ceil(t_end / (config.cfl * h / a_max))));
  const double dt = t_end / static_cast<double>(n_steps);

  std::vector<double> u(J + 1, 0.0), ut(J + 1, 0.0), F(J + 1, 0.0);
  for (long j = 0; j < J; ++j) {
    const double r = j * h;
    u[j] = r < dat.r0 ? dat.eps * dat.f(r) : 0.0;
    ut[j] = r < dat.r0 ? dat.eps * dat.g(r) : 0.0;
  }

  auto eval = [&](double t) {
    const double a2 = model.a(t) * model.a(t);
    const double inv_h2 = 1.0 / (h * h);
    F[0] = a2 * 2.0 * N * (u[1] - u[0]) * inv_h2;
    for (long j = 1; j < J; ++j) {
      const double lap = (u[j + 1] - 2.0 * u[j] + u[j - 1]) * inv_h2 +
                         (N - 1) * (u[j + 1] - u[j - 1]) / (2.0 * h * (j * h));
      F[j] = a2 * lap;
    }
    if (nonlinearity_on) {
      for (long j = 0; j < J; ++j) {
        F[j] += std::pow(std::abs(u[j]), config.p);
      }
    }
    F[J] = 0.0;
  };

  std::vector<OriginalSnapshot> frames;
  auto snap = [&](double t) {
    OriginalSnapshot s;
    s.t = t;
    s.r.resize(J + 1);
    s.u = u;
    s.ut = ut;
    for (long j = 0; j <= J; ++j) s.r[j] = j * h;
    frames.push_back(std::move(s));
  };

  const long frame_every = std::max(1L, n_steps / 20);
  double t = 0.0;
  eval(t);
  snap(t);
  for (long k = 1; k <= n_steps; ++k) {
    const double k0 = 0.25 * dt * model.b(t);
    const double g0 = (1.0 - k0) / (1.0 + k0), f0 = 0.5 * dt / (1.0 + k0);
    for (long j = 0; j <= J; ++j) {
      ut[j] = g0 * ut[j] + f0 * F[j];
      u[j] += dt * ut[j];
    }
    u[J] = 0.0;
    t = t_end * static_cast<double>(k) / n_steps;
    eval(t);
    const double k1 = 0.25 * dt * model.b(t);
    const double g1 = (1.0 - k1) / (1.0 + k1), f1 = 0.5 * dt / (1.0 + k1);
    for (long j = 0; j <= J; ++j) {
      ut[j] = g1 * ut[j] + f1 * F[j];
    }
    ut[J] = 0.0;
    double sup = 0.0;
    for (double x : u) sup = std::max(sup, std::abs(x));
    if (!std::isfinite(sup)) {
      throw NumericalError("direct run lost the solution at t = " +
                           std::to_string(t));
    }
    if (k % frame_every == 0 || k == n_steps) snap(t);
  }
  return frames;
}

void write_series_csv(const RunOutcome& outcome, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open " + path);
  os << "s,t,sup_u,support_r,Q1,Qstar,mass\n";
  char buf[256];
  for (const RunSample& s : outcome.samples) {
    std::snprintf(buf, sizeof buf,
                  "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n", s.s, s.t,
                  s.sup_u, s.support_r, s.q1, s.qstar, s.mass);
    os << buf;
  }
}

}  // namespace tdwave
