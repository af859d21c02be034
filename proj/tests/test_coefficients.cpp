#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "tdwave/coefficients.hpp"

using namespace tdwave;

namespace {

// deterministic pseudo-random stream so failures reproduce
struct Lcg {
  unsigned long long s = 88172645463325252ull;
  double next() {
    s = s * 6364136223846793005ull + 1442695040888963407ull;
    return (s >> 11) * (1.0 / 9007199254740992.0);
  }
};

CoefficientModel sampled_copy(double alpha, double mu, double beta,
                              double t_end, double dt) {
  const int n = static_cast<int>(t_end / dt) + 1;
  std::vector<double> a(n), a1(n), a2(n), b(n), b1(n);
  for (int i = 0; i < n; ++i) {
    const double q = 1.0 + i * dt;
    a[i] = std::pow(q, alpha);
    a1[i] = alpha * std::pow(q, alpha - 1.0);
    a2[i] = alpha * (alpha - 1.0) * std::pow(q, alpha - 2.0);
    b[i] = mu * std::pow(q, -beta);
    b1[i] = -mu * beta * std::pow(q, -beta - 1.0);
  }
  return make_custom_sampled(0.0, dt, a, a1, a2, b, b1);
}

}  // namespace

TEST_CASE("power-law construction and rejection") {
  const CoefficientModel flat = make_power_law(0.0, 0.0, 2.0);
  CHECK(flat.a(3.7) == 1.0);
  CHECK(flat.b(3.7) == 0.0);

  const CoefficientModel m = make_power_law(0.5, 1.0, 2.0);
  CHECK(m.a(10.0) == doctest::Approx(std::sqrt(11.0)).epsilon(1e-14));
  CHECK(m.b(10.0) == doctest::Approx(1.0 / 121.0).epsilon(1e-14));
  CHECK(m.a1(10.0) == doctest::Approx(0.5 / std::sqrt(11.0)).epsilon(1e-13));

  CHECK_THROWS_AS(make_power_law(-1.5, 0.0, 2.0), ConfigError);
  CHECK_THROWS_AS(make_power_law(-1.0, 0.0, 2.0), ConfigError);
  CHECK_THROWS_AS(make_power_law(0.0, 1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(make_power_law(0.0, -0.5, 2.0), ConfigError);

  CHECK(m.id().find("0.5") != std::string::npos);
  CHECK(m.id() != flat.id());
}

TEST_CASE("primitive A closed forms") {
  CHECK(primitive_A(make_power_law(0.0, 0.0, 2.0), 7.0) ==
        doctest::Approx(7.0).epsilon(1e-14));
  CHECK(primitive_A(make_power_law(1.0, 0.0, 2.0), 3.0) ==
        doctest::Approx(7.5).epsilon(1e-14));
  CHECK(primitive_A(make_power_law(-0.5, 0.0, 2.0), 8.0) ==
        doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("primitive B, b_star and the damped-clock sandwich") {
  const CoefficientModel undamped = make_power_law(0.3, 0.0, 2.0);
  CHECK(primitive_B(undamped, 5.0) == 0.0);
  CHECK(b_star(undamped, 5.0) == doctest::Approx(5.0).epsilon(1e-12));

  const CoefficientModel m = make_power_law(0.0, 1.0, 2.0);
  CHECK(primitive_B(m, 1.0) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(b_infinity(m) == doctest::Approx(1.0).epsilon(1e-12));

  const double bs1 = b_star(m, 1.0);
  CHECK(bs1 >= std::exp(-1.0) * 1.0 - 1e-10);
  CHECK(bs1 <= 1.0 + 1e-10);

  for (double t : {0.5, 2.0, 10.0, 100.0}) {
    const double bs = b_star(m, t);
    CHECK(bs >= std::exp(-b_infinity(m)) * t - 1e-8);
    CHECK(bs <= t + 1e-8);
  }
}

TEST_CASE("cumulative integrals are strictly monotone") {
  const CoefficientModel m = make_power_law(0.5, 1.0, 2.0);
  Lcg rng;
  std::vector<double> ts;
  for (int i = 0; i < 40; ++i) ts.push_back(rng.next() * 50.0);
  std::sort(ts.begin(), ts.end());
  for (std::size_t i = 1; i < ts.size(); ++i) {
    if (ts[i] - ts[i - 1] < 1e-6) continue;
    CHECK(primitive_A(m, ts[i]) > primitive_A(m, ts[i - 1]));
    CHECK(primitive_B(m, ts[i]) > primitive_B(m, ts[i - 1]));
    CHECK(b_star(m, ts[i]) > b_star(m, ts[i - 1]));
  }
}

TEST_CASE("closed forms agree with quadrature on the power family") {
  const CoefficientModel m = make_power_law(0.5, 1.0, 2.0);
  Lcg rng;
  for (int i = 0; i < 100; ++i) {
    const double t = rng.next() * 1000.0;
    const double quad = integrate_or_throw(
        [&m](double r) { return m.a(r); }, 0.0, t, 1e-9);
    CHECK(primitive_A(m, t) == doctest::Approx(quad).epsilon(1e-8));
  }
  const double qb = integrate_or_throw(
      [&m](double r) { return m.b(r); }, 0.0, 500.0, 1e-11);
  CHECK(primitive_B(m, 500.0) == doctest::Approx(qb).epsilon(1e-9));
}

TEST_CASE("custom tabulated model reproduces the power law") {
  const CoefficientModel ref = make_power_law(0.5, 1.0, 2.0);
  const CoefficientModel tab = sampled_copy(0.5, 1.0, 2.0, 12.0, 0.01);

  Lcg rng;
  for (int i = 0; i < 100; ++i) {
    const double t = rng.next() * 10.0;
    CHECK(tab.a(t) == doctest::Approx(ref.a(t)).epsilon(1e-9));
    CHECK(tab.b(t) == doctest::Approx(ref.b(t)).epsilon(1e-9));
    CHECK(primitive_A(tab, t) == doctest::Approx(primitive_A(ref, t)).epsilon(1e-6));
  }

  // derivative columns are the user's responsibility and must be consistent:
  // centered differences of a reproduce a1 to O(h^2)
  const double h = 1e-4;
  for (double t : {0.5, 2.0, 7.0}) {
    const double fd = (tab.a(t + h) - tab.a(t - h)) / (2.0 * h);
    CHECK(fd == doctest::Approx(tab.a1(t)).epsilon(1e-5));
  }
}

TEST_CASE("derivative columns match finite differences of a and b") {
  for (double alpha : {0.5, 1.0, -0.5}) {
    const CoefficientModel m = make_power_law(alpha, 1.0, 2.0);
    const double h = 1e-5;
    for (double t : {0.3, 1.7, 9.0}) {
      const double da = (m.a(t + h) - m.a(t - h)) / (2.0 * h);
      const double dda = (m.a(t + h) - 2.0 * m.a(t) + m.a(t - h)) / (h * h);
      const double db = (m.b(t + h) - m.b(t - h)) / (2.0 * h);
      CHECK(da == doctest::Approx(m.a1(t)).epsilon(1e-6));
      CHECK(dda == doctest::Approx(m.a2(t)).epsilon(1e-4));
      CHECK(db == doctest::Approx(m.b1(t)).epsilon(1e-6));
    }
  }
}

TEST_CASE("cached cumulative tables match the direct evaluators") {
  const CoefficientModel m = make_power_law(0.5, 1.0, 2.0);
  const CumulativeIntegrals cache(m, 200.0);
  CHECK(cache.B_infinity() == doctest::Approx(1.0).epsilon(1e-10));

  Lcg rng;
  for (int i = 0; i < 50; ++i) {
    const double t = rng.next() * 150.0;
    CHECK(cache.A(t) == doctest::Approx(primitive_A(m, t)).epsilon(1e-8));
    CHECK(cache.B(t) == doctest::Approx(primitive_B(m, t)).epsilon(1e-8));
    CHECK(cache.Bstar(t) == doctest::Approx(b_star(m, t)).epsilon(1e-7));
  }
}

TEST_CASE("assumption report verdicts") {
  const AssumptionReport trivial =
      check_assumptions(make_power_law(0.0, 0.0, 2.0), 100.0);
  CHECK(trivial.overall() == Verdict::pass);

  const AssumptionReport damped =
      check_assumptions(make_power_law(0.5, 1.0, 2.0), 100.0);
  CHECK(damped.overall() == Verdict::pass);
  REQUIRE(damped.find("b_L1") != nullptr);
  CHECK(damped.find("b_L1")->verdict == Verdict::pass);

  // beta = 1 is rejected by the power-law constructor, so build the
  // non-integrable damping b = 1/(1+t) as a custom table: its L1 check
  // must not pass
  const CoefficientModel slow = sampled_copy(0.0, 1.0, 1.0, 1100.0, 0.25);
  const AssumptionReport bad = check_assumptions(slow, 100.0);
  REQUIRE(bad.find("b_L1") != nullptr);
  CHECK(bad.find("b_L1")->verdict != Verdict::pass);
  CHECK(bad.overall() != Verdict::pass);
}
