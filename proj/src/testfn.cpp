#include "tdwave/testfn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tdwave/common.hpp"
#include "tdwave/numerics.hpp"

namespace tdwave {

namespace {

// Confluent-limit series  phi(r) = |S^{N-1}| sum_k (r^2/4)^k / ((N/2)_k k!),
// rapidly convergent for moderate r; used below the quadrature crossover.
double phi_series_factor(int N, double r) {
  const double z = 0.25 * r * r;
  const double b = 0.5 * N;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= z / (b + (k - 1)) / k;
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return sum;
}

}  // namespace

double phi_integral_scaled(int N, double r) {
  if (N < 2) throw ConfigError("phi_integral_scaled requires N >= 2");
  const double ring = sphere_area(N - 2);
  const int m = N - 2;
  auto f = [r, m](double th) {
    const double s = std::sin(th);
    return std::exp(-r * (1.0 - std::cos(th))) * std::pow(s, m);
  };
  return ring * integrate_or_throw(f, 0.0, kPi, 1e-13);
}

PhiValue phi_full(int N, double r) {
  if (N < 1) throw ConfigError("phi_full requires N >= 1");
  if (r < 0.0) throw ConfigError("phi_full requires r >= 0");
  PhiValue out;
  if (N == 1) {
    // 2 cosh r = e^r (1 + e^{-2r}), written to stay finite for any r
    out.log_value = r + std::log1p(std::exp(-2.0 * r));
    out.scaled = 1.0 + std::exp(-2.0 * r);
    out.value = 2.0 * std::cosh(r);
    return out;
  }
  const double area = sphere_area(N - 1);
  if (r < 0.5) {
    const double factor = phi_series_factor(N, r);
    out.value = area * factor;
    out.log_value = std::log(area) + std::log(factor);
    out.scaled = out.value * std::exp(-r);
    return out;
  }
  const double scaled = phi_integral_scaled(N, r);
  out.scaled = scaled;
  out.log_value = r + std::log(scaled);
  out.value = std::exp(out.log_value);
  return out;
}

double phi(int N, double r) { return phi_full(N, r).value; }

double phi_laplacian_residual(int N, double r, double h) {
  if (r <= h) throw ConfigError("phi_laplacian_residual needs r > h");
  const double fp = phi(N, r + h), f0 = phi(N, r), fm = phi(N, r - h);
  const double lap =
      (fp - 2.0 * f0 + fm) / (h * h) + (N - 1) * (fp - fm) / (2.0 * h * r);
  return std::abs(lap - f0);
}

// ----------------------------------------------------------------- cutoff --

EtaValue eta_smoothstep(double x) {
  EtaValue out;
  const double u = 2.0 * (1.0 - x);
  // Flat tails: the transition variable lives on (0, 1).
  if (u >= 1.0 - 1e-7) {
    out.eta = 1.0;
    return out;
  }
  if (u <= 1e-7) return out;  // all zeros
  const double v = 1.0 - u;
  const double hu = 1.0 / u - 1.0 / v;
  if (hu > 700.0) return out;  // e^{-h} below double range
  const double S = 1.0 / (1.0 + std::exp(hu));
  const double Sc = S * (1.0 - S);
  const double h1 = -1.0 / (u * u) - 1.0 / (v * v);
  const double h2 = 2.0 / (u * u * u) - 2.0 / (v * v * v);
  const double Sp = -h1 * Sc;                             // dS/du
  const double Spp = -h2 * Sc + h1 * h1 * Sc * (1.0 - 2.0 * S);
  out.eta = S;
  out.d1 = -2.0 * Sp;      // d/dx with u = 2(1-x)
  out.d2 = 4.0 * Spp;
  return out;
}

CutoffPsi::CutoffPsi(const CoefficientModel& model, double R, double p)
    : model_(model),
      cache_(model, std::max(R, 1.0) * 1.02 + 1.0),
      R_(R),
      p_(p),
      q_(2.0 * p / (p - 1.0)) {
  if (R <= 0.0) throw ConfigError("cutoff scale R must be positive");
  if (p <= 1.0) throw ConfigError("cutoff exponent p must exceed 1");
  trivial_damping_ = (model.family != Family::custom && model.mu == 0.0);
  bstar_R_ = trivial_damping_ ? R : cache_.Bstar(R);
}

CutoffPsi::ZetaDerivs CutoffPsi::zeta(double x) const {
  const EtaValue e = eta_smoothstep(x);
  ZetaDerivs z{0.0, 0.0, 0.0};
  if (e.eta <= 0.0) return z;
  z.zeta = std::pow(e.eta, q_);
  const double em1 = std::pow(e.eta, q_ - 1.0);
  const double em2 = std::pow(e.eta, q_ - 2.0);
  z.d1 = q_ * em1 * e.d1;
  z.d2 = q_ * (q_ - 1.0) * em2 * e.d1 * e.d1 + q_ * em1 * e.d2;
  return z;
}

double CutoffPsi::operator()(double t) const {
  if (t >= R_) return 0.0;
  const double bs = trivial_damping_ ? t : cache_.Bstar(t);
  return zeta(bs / bstar_R_).zeta;
}

double CutoffPsi::weighted_first(double t) const {
  if (t >= R_) return 0.0;
  const double bs = trivial_damping_ ? t : cache_.Bstar(t);
  return zeta(bs / bstar_R_).d1 / bstar_R_;
}

double CutoffPsi::weighted_second(double t) const {
  if (t >= R_) return 0.0;
  const double bs = trivial_damping_ ? t : cache_.Bstar(t);
  const double eB = std::exp(-primitive_B(model_, t));
  return zeta(bs / bstar_R_).d2 * eB / (bstar_R_ * bstar_R_);
}

CutoffPsi make_cutoff(const CoefficientModel& model, double R, double p) {
  return CutoffPsi(model, R, p);
}

namespace {

double cutoff_constant(const CutoffPsi& cut, int n) {
  const double R = cut.R();
  const double inv_p = 1.0 / cut.p();
  double C = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = R * static_cast<double>(i) / (n - 1);
    const double psi = cut(t);
    if (psi <= 0.0) continue;
    const double den = std::pow(psi, inv_p);
    const double m1 = R * std::abs(cut.weighted_first(t)) / den;
    const double m2 = R * R * std::abs(cut.weighted_second(t)) / den;
    C = std::max(C, std::max(m1, m2));
  }
  return C;
}

}  // namespace

CutoffBoundFit verify_cutoff_bounds(const CutoffPsi& cut, int grid_points) {
  CutoffBoundFit out;
  out.C = cutoff_constant(cut, grid_points);
  out.C_refined = cutoff_constant(cut, 2 * grid_points - 1);
  out.diverging = out.C_refined > 1.1 * out.C + 1e-12;
  return out;
}

// ----------------------------------------------------- truncated phi norm --

YzNormResult yz_norm_bound(int N, double p, double r0,
                           const CoefficientModel& model, double t) {
  if (p <= 1.0) throw ConfigError("yz_norm_bound needs p > 1");
  const double pprime = p / (p - 1.0);
  const double At = primitive_A(model, t);
  const double r_up = r0 + At;

  const int n = 4001;  // even interval count for Simpson
  const double h = r_up / (n - 1);
  std::vector<double> logs(n);
  double peak = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double r = i * h;
    double li;
    if (i == 0 && N > 1) {
      li = -std::numeric_limits<double>::infinity();
    } else {
      li = pprime * phi_full(N, r).log_value;
      if (N > 1) li += (N - 1) * std::log(r);
    }
    logs[i] = li;
    peak = std::max(peak, li);
  }
  std::vector<double> vals(n);
  for (int i = 0; i < n; ++i) {
    vals[i] = std::isfinite(logs[i]) ? std::exp(logs[i] - peak) : 0.0;
  }
  const double integral = simpson_uniform(vals, h);

  YzNormResult out;
  out.measured_log = peak + std::log(integral) + std::log(sphere_area(N - 1));
  out.bound_log =
      (N - 1) * (1.0 - 0.5 * pprime) * std::log(1.0 + r_up) + pprime * At;
  out.ratio = std::exp(out.measured_log - out.bound_log);
  return out;
}

// ------------------------------------------------- conservative pairings --

namespace {

void check_state(const OriginalState& st) {
  if (st.r.size() < 5 || st.r.size() != st.u.size() ||
      st.r.size() != st.ut.size()) {
    throw ConfigError("state arrays must agree and hold >= 5 nodes");
  }
}

}  // namespace

double q1(const OriginalState& state, const CoefficientModel& model) {
  check_state(state);
  const std::size_t n = state.r.size();
  std::vector<double> f(n);
  for (std::size_t j = 0; j < n; ++j) {
    f[j] = state.ut[j] * std::pow(state.r[j], state.N - 1);
  }
  const double radial = simpson_uniform(f, state.h);
  return std::exp(primitive_B(model, state.t)) * sphere_area(state.N - 1) *
         radial;
}

double q_star(const OriginalState& state, const CoefficientModel& model,
              const MStarProfile& mstar) {
  check_state(state);
  const double t = state.t;
  const double B = primitive_B(model, t);
  const double lm = mstar.log_m_at(t);
  const double lmp = mstar.log_neg_mp_at(t);
  const std::size_t n = state.r.size();
  std::vector<double> f(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double lphi = phi_full(state.N, state.r[j]).log_value;
    const double w = std::exp(B + lm + lphi) * state.ut[j] +
                     std::exp(B + lmp + lphi) * state.u[j];
    f[j] = w * std::pow(state.r[j], state.N - 1);
  }
  return sphere_area(state.N - 1) * simpson_uniform(f, state.h);
}

}  // namespace tdwave
