#include "tdwave/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace tdwave {

// ---------------------------------------------------------------- model ---

double CoefficientModel::a(double t) const {
  switch (family) {
    case Family::constant: return 1.0;
    case Family::power_law: return std::pow(1.0 + t, alpha);
    default: return ca(t);
  }
}

double CoefficientModel::a1(double t) const {
  switch (family) {
    case Family::constant: return 0.0;
    case Family::power_law: return alpha * std::pow(1.0 + t, alpha - 1.0);
    default: return ca1(t);
  }
}

double CoefficientModel::a2(double t) const {
  switch (family) {
    case Family::constant: return 0.0;
    case Family::power_law:
      return alpha * (alpha - 1.0) * std::pow(1.0 + t, alpha - 2.0);
    default: return ca2(t);
  }
}

double CoefficientModel::b(double t) const {
  switch (family) {
    case Family::constant: return 0.0;
    case Family::power_law: return mu * std::pow(1.0 + t, -beta);
    default: return cb(t);
  }
}

double CoefficientModel::b1(double t) const {
  switch (family) {
    case Family::constant: return 0.0;
    case Family::power_law: return -mu * beta * std::pow(1.0 + t, -beta - 1.0);
    default: return cb1(t);
  }
}

std::string CoefficientModel::id() const {
  std::ostringstream os;
  switch (family) {
    case Family::constant:
      os << "constant";
      break;
    case Family::power_law:
      os << "power:alpha=" << alpha << ",mu=" << mu << ",beta=" << beta;
      break;
    default:
      os << "custom:[" << ca.front_t() << "," << ca.back_t() << "]";
      break;
  }
  return os.str();
}

CoefficientModel make_power_law(double alpha, double mu, double beta) {
  if (!(alpha > -1.0))
    throw ConfigError("make_power_law: alpha must exceed -1 (got " +
                      std::to_string(alpha) + ")");
  if (mu < 0.0) throw ConfigError("make_power_law: mu must be nonnegative");
  if (mu > 0.0 && !(beta > 1.0))
    throw ConfigError("make_power_law: beta must exceed 1 for integrable damping");
  CoefficientModel m;
  m.alpha = alpha;
  m.mu = mu;
  m.beta = beta;
  m.family = (alpha == 0.0 && mu == 0.0) ? Family::constant : Family::power_law;
  m.envelope_K = 1.0;
  return m;
}

CoefficientModel make_custom_sampled(double t0, double dt,
                                     std::vector<double> a,
                                     std::vector<double> a1,
                                     std::vector<double> a2,
                                     std::vector<double> b,
                                     std::vector<double> b1) {
  const std::size_t n = a.size();
  if (n < 4 || a1.size() != n || a2.size() != n || b.size() != n || b1.size() != n)
    throw ConfigError("make_custom_sampled: need >= 4 aligned samples per column");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(a[i] > 0.0))
      throw ConfigError("make_custom_sampled: a must be positive at every sample");
    if (b[i] < 0.0)
      throw ConfigError("make_custom_sampled: b must be nonnegative at every sample");
  }
  CoefficientModel m;
  m.family = Family::custom;
  // Hermite tables: value column paired with its own derivative column;
  // second derivatives interpolate with slope a''~ finite-difference-free:
  // we reuse a2 as its own slope via a flat extension, which only affects
  // interpolation accuracy of a'' (used in smooth weights), not a or a'.
  std::vector<double> a2s(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = std::min(n - 1, i + 1);
    a2s[i] = (a2[hi] - a2[lo]) / (dt * static_cast<double>(hi - lo));
  }
  std::vector<double> b1s(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = std::min(n - 1, i + 1);
    b1s[i] = (b1[hi] - b1[lo]) / (dt * static_cast<double>(hi - lo));
  }
  m.ca = CubicTable(t0, dt, a, a1);
  m.ca1 = CubicTable(t0, dt, a1, a2);
  m.ca2 = CubicTable(t0, dt, a2, a2s);
  m.cb = CubicTable(t0, dt, b, b1);
  m.cb1 = CubicTable(t0, dt, b1, b1s);
  return m;
}

// ----------------------------------------------------------- primitives ---

double primitive_A(const CoefficientModel& m, double t, double quad_tol) {
  if (t < 0) throw ConfigError("primitive_A: negative time");
  switch (m.family) {
    case Family::constant:
      return t;
    case Family::power_law: {
      const double e = 1.0 + m.alpha;
      return (std::pow(1.0 + t, e) - 1.0) / e;
    }
    default:
      return integrate_or_throw([&m](double r) { return m.a(r); }, 0.0, t,
                                quad_tol);
  }
}

double primitive_B(const CoefficientModel& m, double t, double quad_tol) {
  if (t < 0) throw ConfigError("primitive_B: negative time");
  switch (m.family) {
    case Family::constant:
      return 0.0;
    case Family::power_law: {
      if (m.mu == 0.0) return 0.0;
      const double e = 1.0 - m.beta;
      return m.mu * (std::pow(1.0 + t, e) - 1.0) / e;
    }
    default:
      return integrate_or_throw([&m](double r) { return m.b(r); }, 0.0, t,
                                quad_tol);
  }
}

double b_infinity(const CoefficientModel& m, double t_cap) {
  switch (m.family) {
    case Family::constant:
      return 0.0;
    case Family::power_law:
      return m.mu / (m.beta - 1.0);
    default: {
      const double cap = std::min(t_cap, m.cb.back_t());
      const double base = primitive_B(m, cap);
      // extend by the fitted decay rate of b over the last decade
      const double blo = std::abs(m.b(cap / 10.0));
      const double bhi = std::abs(m.b(cap));
      if (bhi < 1e-14) return base;
      const double rate = std::log(bhi / std::max(blo, 1e-300)) / std::log(10.0);
      if (rate < -1.05) {
        const double seg = integrate_or_throw(
            [&m](double r) { return m.b(r); }, cap / 10.0, cap, 1e-10);
        const double q = std::pow(10.0, rate + 1.0);
        return base + seg * q / (1.0 - q);
      }
      return base;  // tail not boundable; report the truncation
    }
  }
}

double b_star(const CoefficientModel& m, double t, double quad_tol) {
  if (t < 0) throw ConfigError("b_star: negative time");
  double value;
  if (m.family == Family::constant || (m.family == Family::power_law && m.mu == 0.0)) {
    value = t;
  } else {
    value = integrate_or_throw(
        [&m, quad_tol](double r) { return std::exp(-primitive_B(m, r, quad_tol)); },
        0.0, t, quad_tol);
  }
  // postcondition: e^{-B_inf} t <= B*(t) <= t
  const double lo = std::exp(-b_infinity(m)) * t;
  const double slack = 1e-8 * (1.0 + t);
  if (value > t + slack || value < lo - slack)
    throw NumericalError("b_star: sandwich e^{-B_inf} t <= B* <= t violated");
  return value;
}

// ---------------------------------------------------- cumulative caching ---

CumulativeIntegrals::CumulativeIntegrals(const CoefficientModel& m, double t_cap,
                                         int cells, double quad_tol)
    : model_(m), t_cap_(t_cap), quad_tol_(quad_tol) {
  if (!(t_cap > 0) || cells < 16)
    throw ConfigError("CumulativeIntegrals: bad cap or cell count");
  closed_forms_ =
      m.family == Family::constant || m.family == Family::power_law;
  b_inf_ = b_infinity(m, std::max(t_cap, 1e4));

  const double dt = t_cap / cells;
  const int n = cells + 1;
  const double cell_tol = quad_tol / cells;

  // pass 1: A and B with analytic slopes a, b
  std::vector<double> av(n), as(n), bv(n), bs(n);
  av[0] = bv[0] = 0.0;
  as[0] = m.a(0.0);
  bs[0] = m.b(0.0);
  for (int i = 1; i < n; ++i) {
    const double lo = dt * (i - 1), hi = dt * i;
    if (closed_forms_) {
      av[i] = primitive_A(m, hi);
      bv[i] = primitive_B(m, hi);
    } else {
      av[i] = av[i - 1] +
              integrate_or_throw([&m](double r) { return m.a(r); }, lo, hi, cell_tol);
      bv[i] = bv[i - 1] +
              integrate_or_throw([&m](double r) { return m.b(r); }, lo, hi, cell_tol);
    }
    as[i] = m.a(hi);
    bs[i] = m.b(hi);
    if (!(av[i] > av[i - 1]))
      throw NumericalError("CumulativeIntegrals: A not strictly increasing");
  }
  ta_ = CubicTable(0.0, dt, std::move(av), std::move(as));
  tb_ = CubicTable(0.0, dt, std::move(bv), std::move(bs));

  // pass 2: B* against the now-complete B table (closed form when available)
  const auto Bof = [&](double r) {
    return closed_forms_ ? primitive_B(m, r) : tb_(r);
  };
  std::vector<double> sv(n), ss(n);
  sv[0] = 0.0;
  ss[0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const double lo = dt * (i - 1), hi = dt * i;
    sv[i] = sv[i - 1] +
            integrate_or_throw([&Bof](double r) { return std::exp(-Bof(r)); },
                               lo, hi, cell_tol);
    ss[i] = std::exp(-Bof(hi));
  }
  tbs_ = CubicTable(0.0, dt, std::move(sv), std::move(ss));
}

double CumulativeIntegrals::A(double t) const {
  if (closed_forms_) return primitive_A(model_, t);
  return ta_(t);
}

double CumulativeIntegrals::B(double t) const {
  if (closed_forms_) return primitive_B(model_, t);
  return tb_(t);
}

double CumulativeIntegrals::Bstar(double t) const {
  if (model_.family == Family::constant ||
      (model_.family == Family::power_law && model_.mu == 0.0))
    return t;
  return tbs_(t);
}

// ------------------------------------------------------ assumption audit ---

namespace {

struct TailFit {
  double seg = 0.0;    // integral over [H, 10H]
  double rate = 0.0;   // fitted decay exponent
  double total = 0.0;  // extrapolated full tail
  Verdict verdict = Verdict::inconclusive;
};

// Evidential tail bound for integral_H^inf q(t) dt with q >= 0: integrate one
// decade, fit the decay rate from the endpoint values, and extend the decade
// sum geometrically when the rate is safely below -1.
TailFit tail_check(const std::function<double(double)>& q, double H, double tol) {
  TailFit out;
  out.seg = integrate(q, H, 10.0 * H, 1e-12 * (1.0 + H)).value;
  const double qlo = std::abs(q(H));
  const double qhi = std::abs(q(10.0 * H));
  if (out.seg < 1e-13 && qlo < 1e-13 && qhi < 1e-13) {
    out.total = 0.0;
    out.rate = 0.0;
    out.verdict = Verdict::pass;  // identically vanishing quantity
    return out;
  }
  out.rate = std::log(std::max(qhi, 1e-300) / std::max(qlo, 1e-300)) /
             std::log(10.0);
  if (out.rate < -1.05) {
    const double r = std::pow(10.0, out.rate + 1.0);  // per-decade shrink factor
    out.total = out.seg / (1.0 - r);
    out.verdict = out.total <= tol ? Verdict::pass : Verdict::fail;
  } else if (out.rate > -0.95) {
    out.total = std::numeric_limits<double>::infinity();
    out.verdict = Verdict::fail;
  } else {
    out.total = std::numeric_limits<double>::infinity();
    out.verdict = Verdict::inconclusive;  // rate too close to the borderline
  }
  return out;
}

}  // namespace

Verdict AssumptionReport::overall() const {
  Verdict out = Verdict::pass;
  for (const auto& c : checks) {
    if (c.verdict == Verdict::fail) return Verdict::fail;
    if (c.verdict == Verdict::inconclusive) out = Verdict::inconclusive;
  }
  return out;
}

const ConditionCheck* AssumptionReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

AssumptionReport check_assumptions(const CoefficientModel& m, double horizon,
                                   double tol) {
  if (!(horizon > 0) || !(tol > 0))
    throw ConfigError("check_assumptions: horizon and tol must be positive");
  AssumptionReport rep;
  rep.horizon = horizon;
  rep.tol = tol;

  // pointwise positivity of a and sign of b on [0, 10 horizon]
  {
    ConditionCheck pos{"a_positive"};
    ConditionCheck sgn{"b_nonnegative"};
    pos.verdict = Verdict::pass;
    sgn.verdict = Verdict::pass;
    double amin = std::numeric_limits<double>::infinity();
    double bmin = 0.0;
    const int samples = 4096;
    for (int i = 0; i <= samples; ++i) {
      const double t = 10.0 * horizon * i / samples;
      amin = std::min(amin, m.a(t));
      bmin = std::min(bmin, m.b(t));
    }
    pos.tail = amin;
    if (!(amin > 0)) pos.verdict = Verdict::fail;
    sgn.tail = bmin;
    if (bmin < 0) sgn.verdict = Verdict::fail;
    rep.checks.push_back(pos);
    rep.checks.push_back(sgn);
  }

  const auto add_tail = [&](const std::string& name,
                            std::function<double(double)> q) {
    ConditionCheck c{name};
    const TailFit tf = tail_check(q, horizon, tol);
    c.tail = tf.total;
    c.rate = tf.rate;
    c.verdict = tf.verdict;
    rep.checks.push_back(c);
  };

  // b in L1
  add_tail("b_L1", [&m](double t) { return std::abs(m.b(t)); });
  // (1/a)'' = 2 a'^2 / a^3 - a'' / a^2 in L1
  add_tail("inv_a_second_L1", [&m](double t) {
    const double a = m.a(t), a1 = m.a1(t), a2 = m.a2(t);
    return std::abs(2.0 * a1 * a1 / (a * a * a) - a2 / (a * a));
  });
  // (b/a)' = b'/a - a' b / a^2 in L1
  add_tail("b_over_a_prime_L1", [&m](double t) {
    const double a = m.a(t);
    return std::abs(m.b1(t) / a - m.a1(t) * m.b(t) / (a * a));
  });
  // (a^{-1/2})' = -a' / (2 a^{3/2}) in L2: the tail of the square
  add_tail("inv_sqrt_a_prime_L2", [&m](double t) {
    const double a = m.a(t), a1 = m.a1(t);
    const double d = -a1 / (2.0 * std::pow(a, 1.5));
    return d * d;
  });

  // limits at the far end of the probed range: (1/a)' -> 0 and b/a -> 0
  const auto add_limit = [&](const std::string& name, double value) {
    ConditionCheck c{name};
    c.is_limit = true;
    c.tail = std::abs(value);
    c.verdict = std::abs(value) <= tol ? Verdict::pass : Verdict::fail;
    rep.checks.push_back(c);
  };
  const double T = 10.0 * horizon;
  add_limit("inv_a_prime_limit", -m.a1(T) / (m.a(T) * m.a(T)));
  add_limit("b_over_a_limit", m.b(T) / m.a(T));

  return rep;
}

}  // namespace tdwave
