#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "tdwave/coefficients.hpp"
#include "tdwave/common.hpp"
#include "tdwave/numerics.hpp"
#include "tdwave/solver.hpp"
#include "tdwave/testfn.hpp"
#include "tdwave/wkb.hpp"

using namespace tdwave;

namespace {

struct Lcg {
  unsigned long long s = 88172645463325252ull;
  double next() {
    s = s * 6364136223846793005ull + 1442695040888963407ull;
    return (s >> 11) * (1.0 / 9007199254740992.0);
  }
};

}  // namespace

TEST_CASE("phi closed forms in low dimensions") {
  // N = 1: 2 cosh r
  CHECK(phi(1, 0.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(phi(1, 3.0) == doctest::Approx(2.0 * std::cosh(3.0)).epsilon(1e-13));
  // N = 3: 4 pi sinh(r)/r (series branch below 0.5, quadrature above)
  CHECK(phi(3, 0.0) == doctest::Approx(4.0 * kPi).epsilon(1e-14));
  for (double r : {0.1, 1.0, 2.0, 5.0, 10.0}) {
    const double exact = 4.0 * kPi * std::sinh(r) / r;
    CHECK(phi(3, r) == doctest::Approx(exact).epsilon(1e-10));
  }
  // N = 2: 2 pi I_0(r)
  for (double r : {0.3, 1.0, 2.5, 7.0}) {
    const double exact = 2.0 * kPi * std::cyl_bessel_i(0.0, r);
    CHECK(phi(2, r) == doctest::Approx(exact).epsilon(1e-9));
  }
}

TEST_CASE("phi value, log, and scaled forms agree") {
  for (int N : {1, 2, 3, 4}) {
    for (double r : {0.2, 1.0, 3.0, 20.0}) {
      const PhiValue v = phi_full(N, r);
      CHECK(v.value == doctest::Approx(std::exp(v.log_value)).epsilon(1e-12));
      CHECK(v.scaled ==
            doctest::Approx(v.value * std::exp(-r)).epsilon(1e-12));
      CHECK(v.value > 0.0);
    }
  }
  // direct quadrature form matches the dispatcher on its own branch
  for (double r : {0.5, 2.0, 10.0}) {
    const double exact = 4.0 * kPi * std::sinh(r) / r * std::exp(-r);
    CHECK(phi_integral_scaled(3, r) == doctest::Approx(exact).epsilon(1e-10));
  }
  CHECK_THROWS_AS(phi_integral_scaled(1, 1.0), ConfigError);
  CHECK_THROWS_AS(phi_full(0, 1.0), ConfigError);
  CHECK_THROWS_AS(phi_full(3, -1.0), ConfigError);
}

TEST_CASE("phi survives far beyond double overflow in log form") {
  const double r = 800.0;
  {
    const PhiValue v = phi_full(3, r);
    // 4 pi sinh(r)/r -> log = r + log(pi/400) up to an e^{-1600} correction
    CHECK(v.log_value == doctest::Approx(r + std::log(kPi / 400.0)).epsilon(1e-12));
    CHECK(v.scaled == doctest::Approx(kPi / 400.0).epsilon(1e-10));
    CHECK(std::isinf(v.value));  // the plain value is allowed to saturate
  }
  {
    const PhiValue v = phi_full(1, r);
    // 2 cosh(800) = e^800 (1 + e^{-1600}), so the log collapses to r
    CHECK(v.log_value == doctest::Approx(r).epsilon(1e-12));
    CHECK(v.scaled == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("phi solves its eigenvalue equation") {
  // |discrete Laplacian - phi| should sit at the h^2 floor, far below phi
  CHECK(phi_laplacian_residual(3, 2.0, 1e-3) <= 1e-5 * phi(3, 2.0));
  CHECK(phi_laplacian_residual(1, 5.0, 1e-3) <= 1e-5 * phi(1, 5.0));
  CHECK(phi_laplacian_residual(2, 1.0, 1e-3) <= 1e-4 * phi(2, 1.0));
  Lcg rng;
  for (int k = 0; k < 50; ++k) {
    const int N = 1 + static_cast<int>(4.0 * rng.next());
    const double r = 0.5 + 5.5 * rng.next();
    CHECK(phi_laplacian_residual(N, r, 1e-3) <= 1e-4 * phi(N, r));
  }
}

TEST_CASE("eta transition profile") {
  // plateaus, including the exact corner points
  for (double x : {-3.0, 0.0, 0.3, 0.5}) {
    const EtaValue e = eta_smoothstep(x);
    CHECK(e.eta == 1.0);
    CHECK(e.d1 == 0.0);
    CHECK(e.d2 == 0.0);
  }
  for (double x : {1.0, 1.3, 2.0}) {
    const EtaValue e = eta_smoothstep(x);
    CHECK(e.eta == 0.0);
    CHECK(e.d1 == 0.0);
    CHECK(e.d2 == 0.0);
  }
  // symmetric midpoint and strict decrease across the transition
  CHECK(eta_smoothstep(0.75).eta == doctest::Approx(0.5).epsilon(1e-14));
  double prev = 1.0;
  for (double x = 0.55; x < 0.99; x += 0.05) {
    const double v = eta_smoothstep(x).eta;
    CHECK(v < prev);
    CHECK(v > 0.0);
    prev = v;
  }
  // reported derivatives match finite differences of the value
  const double d = 1e-3;
  for (double x : {0.6, 0.7, 0.75, 0.8, 0.9}) {
    const EtaValue e = eta_smoothstep(x);
    const double ep = eta_smoothstep(x + d).eta;
    const double em = eta_smoothstep(x - d).eta;
    const double fd1 = (ep - em) / (2.0 * d);
    const double fd2 = (ep - 2.0 * e.eta + em) / (d * d);
    CHECK(std::abs(fd1 - e.d1) <= 5e-3 * std::max(1.0, std::abs(e.d1)));
    CHECK(std::abs(fd2 - e.d2) <= 5e-2 * std::max(1.0, std::abs(e.d2)));
  }
}

TEST_CASE("temporal cutoff without damping has closed-form values") {
  const CoefficientModel m = make_power_law(0.0, 0.0, 2.0);
  const CutoffPsi cut = make_cutoff(m, 10.0, 2.0);
  CHECK(cut.b_star_R() == 10.0);  // B == 0 means B_* is the identity
  CHECK(cut(3.0) == 1.0);
  CHECK(cut(5.0) == 1.0);
  CHECK(cut(10.0) == 0.0);
  CHECK(cut(12.0) == 0.0);
  // x = 3/4 is the symmetric point: eta = 1/2, so psi = (1/2)^4 for p = 2
  CHECK(cut(7.5) == doctest::Approx(1.0 / 16.0).epsilon(1e-13));
  // zeta'(3/4) = 4 eta^3 eta' = 4 (1/8)(-4) = -2, divided by B_*(R) = 10
  CHECK(cut.weighted_first(7.5) == doctest::Approx(-0.2).epsilon(1e-12));
  // zeta''(3/4) = 12 eta^2 eta'^2 = 12 (1/4)(16) = 48, divided by 100
  CHECK(cut.weighted_second(7.5) == doctest::Approx(0.48).epsilon(1e-12));
  // derivatives on the plateau vanish identically
  CHECK(cut.weighted_first(3.0) == 0.0);
  CHECK(cut.weighted_second(4.0) == 0.0);
  // finite differences of psi itself (e^B = 1 here)
  const double d = 1e-4;
  for (double t : {6.0, 7.0, 7.5, 8.0, 9.0}) {
    const double fd = (cut(t + d) - cut(t - d)) / (2.0 * d);
    CHECK(fd == doctest::Approx(cut.weighted_first(t)).epsilon(1e-5));
    const double fd2 =
        (cut.weighted_first(t + d) - cut.weighted_first(t - d)) / (2.0 * d);
    CHECK(fd2 == doctest::Approx(cut.weighted_second(t)).epsilon(1e-5));
  }
  CHECK_THROWS_AS(make_cutoff(m, -1.0, 2.0), ConfigError);
  CHECK_THROWS_AS(make_cutoff(m, 10.0, 1.0), ConfigError);
}

TEST_CASE("temporal cutoff with damping follows the chain rule") {
  const CoefficientModel m = make_power_law(0.5, 1.0, 2.0);
  const CutoffPsi cut = make_cutoff(m, 8.0, 2.0);
  // cached B_*(R) against direct quadrature of e^{-B}
  const double direct = integrate_or_throw(
      [&m](double t) { return std::exp(-primitive_B(m, t)); }, 0.0, 8.0);
  CHECK(cut.b_star_R() == doctest::Approx(direct).epsilon(1e-6));

  // locate the transition window, then check the weighted derivatives are
  // really psi' e^B and (psi' e^B)'
  std::vector<double> probes;
  for (int k = 1; k < 160; ++k) {
    const double t = 0.05 * k;
    const double v = cut(t);
    if (v > 1e-6 && v < 1.0 - 1e-6) probes.push_back(t);
  }
  REQUIRE(probes.size() >= 10);
  const double d = 1e-3;
  for (std::size_t i = 0; i < probes.size(); i += probes.size() / 5) {
    const double t = probes[i];
    const double eB = std::exp(-primitive_B(m, t));
    const double fd = (cut(t + d) - cut(t - d)) / (2.0 * d);
    CHECK(std::abs(fd - cut.weighted_first(t) * eB) <= 1e-4);
    const double fd2 =
        (cut.weighted_first(t + d) - cut.weighted_first(t - d)) / (2.0 * d);
    CHECK(std::abs(fd2 - cut.weighted_second(t)) <= 1e-4);
  }
}

TEST_CASE("cutoff derivative constant is scale-free") {
  const CoefficientModel m = make_power_law(0.0, 0.0, 2.0);
  const CutoffBoundFit base = verify_cutoff_bounds(make_cutoff(m, 10.0, 2.0));
  CHECK(base.C > 0.0);
  CHECK_FALSE(base.diverging);
  for (double R : {100.0, 1000.0}) {
    const CutoffBoundFit f = verify_cutoff_bounds(make_cutoff(m, R, 2.0));
    CHECK_FALSE(f.diverging);
    // with B == 0 the constant is exactly R-independent
    CHECK(f.C == doctest::Approx(base.C).epsilon(1e-6));
  }
  // bounded damping only shifts the constant by bounded e^{B} factors:
  // here B_infinity = 1, so the shift sits inside [e^{-1}, e^{2}]
  const CoefficientModel md = make_power_law(0.5, 1.0, 2.0);
  const CutoffBoundFit damped = verify_cutoff_bounds(make_cutoff(md, 100.0, 2.0));
  CHECK_FALSE(damped.diverging);
  const double ratio = damped.C / base.C;
  CHECK(ratio > std::exp(-1.0) * 0.9);
  CHECK(ratio < std::exp(2.0) * 1.1);
}

TEST_CASE("truncated phi norm tracks its growth shape") {
  {
    const CoefficientModel m = make_power_law(0.0, 0.0, 2.0);
    const YzNormResult a = yz_norm_bound(3, 2.0, 1.0, m, 20.0);
    const YzNormResult b = yz_norm_bound(3, 2.0, 1.0, m, 40.0);
    CHECK(a.ratio > 0.0);
    CHECK(std::isfinite(a.measured_log));
    // measured/bound settles to a constant: its log moves sublinearly
    CHECK(std::abs(b.measured_log - b.bound_log -
                   (a.measured_log - a.bound_log)) /
              20.0 <=
          0.05);
  }
  {
    const CoefficientModel m = make_power_law(0.5, 0.0, 2.0);
    const YzNormResult a = yz_norm_bound(2, 2.0, 1.0, m, 10.0);
    const YzNormResult b = yz_norm_bound(2, 2.0, 1.0, m, 20.0);
    CHECK(a.ratio > 0.0);
    CHECK(std::abs(b.measured_log - b.bound_log -
                   (a.measured_log - a.bound_log)) /
              10.0 <=
          0.05);
  }
  CHECK_THROWS_AS(yz_norm_bound(3, 1.0, 1.0, make_power_law(0, 0, 2), 1.0),
                  ConfigError);
}

namespace {

OriginalState sampled_state(int N, const InitialData& data, double t,
                            double r_max, double h) {
  OriginalState st;
  st.N = N;
  st.t = t;
  st.h = h;
  const int n = static_cast<int>(std::lround(r_max / h)) + 1;
  for (int j = 0; j < n; ++j) {
    const double r = j * h;
    st.r.push_back(r);
    st.u.push_back(data.eps * data.f(r));
    st.ut.push_back(data.eps * data.g(r));
  }
  return st;
}

}  // namespace

TEST_CASE("weighted mass flux pairing at known states") {
  InitialData data = bump_data(0.7);
  data.compute_moments(3);
  // moment of (1 - r^2)^3 over the unit ball: 4 pi * 16/315
  const double exact_Mg = 64.0 * kPi / 315.0;
  CHECK(data.M_g == doctest::Approx(exact_Mg).epsilon(1e-10));
  const OriginalState st0 = sampled_state(3, data, 0.0, 1.5, 1.0 / 200.0);

  const CoefficientModel flat = make_power_law(0.0, 0.0, 2.0);
  CHECK(q1(st0, flat) == doctest::Approx(0.7 * exact_Mg).epsilon(1e-6));

  // damping only multiplies by e^{B(t)}
  const CoefficientModel damped = make_power_law(0.5, 1.0, 2.0);
  OriginalState st2 = sampled_state(3, data, 2.0, 1.5, 1.0 / 200.0);
  const double B2 = primitive_B(damped, 2.0);
  CHECK(q1(st2, damped) ==
        doctest::Approx(0.7 * exact_Mg * std::exp(B2)).epsilon(1e-6));

  InitialData none = zero_data();
  const OriginalState zst = sampled_state(3, none, 0.0, 1.5, 1.0 / 200.0);
  CHECK(q1(zst, flat) == 0.0);
}

TEST_CASE("mode-weighted pairing is positive on positive data") {
  const CoefficientModel m = make_power_law(0.5, 1.0, 2.0);
  GridSpec grid;
  grid.t_end = 5.0;
  grid.n = 5001;
  const MStarProfile prof = build_m_star(m, 100.0, grid);

  InitialData data = bump_data(0.7);
  data.compute_moments(3);
  const OriginalState st = sampled_state(3, data, 0.0, 1.5, 1.0 / 200.0);
  // both m_* > 0 and -m_*' > 0, so positive data pairs to a positive value
  const double q = q_star(st, m, prof);
  CHECK(std::isfinite(q));
  CHECK(q > 0.0);

  InitialData none = zero_data();
  const OriginalState zst = sampled_state(3, none, 0.0, 1.5, 1.0 / 200.0);
  CHECK(q_star(zst, m, prof) == 0.0);

  OriginalState bad = st;
  bad.ut.pop_back();
  CHECK_THROWS_AS(q1(bad, m), ConfigError);
}
