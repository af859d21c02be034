#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "tdwave/numerics.hpp"

using namespace tdwave;

TEST_CASE("adaptive quadrature hits analytic integrals") {
  const QuadResult r1 = integrate([](double x) { return std::sin(x); }, 0.0, kPi);
  CHECK(r1.converged);
  CHECK(r1.value == doctest::Approx(2.0).epsilon(1e-12));

  const QuadResult r2 =
      integrate([](double x) { return std::pow(x, 7); }, 0.0, 1.0);
  CHECK(r2.value == doctest::Approx(0.125).epsilon(1e-13));

  // half Gaussian; the tail forces panel subdivision
  const double g = integrate_or_throw(
      [](double x) { return std::exp(-x * x); }, 0.0, 12.0, 1e-12);
  CHECK(g == doctest::Approx(0.5 * std::sqrt(kPi)).epsilon(1e-12));

  // degenerate interval
  const QuadResult r0 = integrate([](double x) { return x; }, 2.0, 2.0);
  CHECK(r0.value == 0.0);
}

TEST_CASE("ode integrator reproduces exponentials both directions") {
  std::vector<double> ts;
  for (int i = 0; i <= 10; ++i) ts.push_back(i / 10.0);

  OdeOptions opts;
  std::vector<double> got(ts.size(), 0.0);
  ode_integrate(
      [](double, const std::vector<double>& y, std::vector<double>& dy) {
        dy[0] = y[0];
      },
      ts, {1.0}, opts,
      [&](std::size_t i, double, const std::vector<double>& y) {
        got[i] = y[0];
      });
  for (std::size_t i = 0; i < ts.size(); ++i) {
    CHECK(got[i] == doctest::Approx(std::exp(ts[i])).epsilon(1e-9));
  }

  // decreasing node sequence: integrate y' = y from t=1 back to 0
  std::vector<double> back(ts.rbegin(), ts.rend());
  double y_end = 0.0;
  ode_integrate(
      [](double, const std::vector<double>& y, std::vector<double>& dy) {
        dy[0] = y[0];
      },
      back, {std::exp(1.0)}, opts,
      [&](std::size_t, double t, const std::vector<double>& y) {
        if (t == 0.0) y_end = y[0];
      });
  CHECK(y_end == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("ode integrator keeps oscillator energy and visits node 0") {
  std::vector<double> ts;
  const int n = 64;
  for (int i = 0; i <= n; ++i) ts.push_back(2.0 * kPi * i / n);

  bool saw_first = false;
  std::vector<double> final_y;
  ode_integrate(
      [](double, const std::vector<double>& y, std::vector<double>& dy) {
        dy[0] = y[1];
        dy[1] = -y[0];
      },
      ts, {1.0, 0.0}, OdeOptions{},
      [&](std::size_t i, double, const std::vector<double>& y) {
        if (i == 0) {
          saw_first = true;
          CHECK(y[0] == 1.0);
        }
        final_y = y;
      });
  CHECK(saw_first);
  CHECK(final_y[0] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(final_y[1]) < 1e-8);
}

TEST_CASE("cubic hermite table interpolates a smooth function to h^4") {
  const int n = 41;
  const double dt = 2.0 * kPi / (n - 1);
  std::vector<double> vals(n), slopes(n);
  for (int i = 0; i < n; ++i) {
    vals[i] = std::sin(i * dt);
    slopes[i] = std::cos(i * dt);
  }
  CubicTable table(0.0, dt, vals, slopes);

  double worst = 0.0, worst_d = 0.0;
  for (int k = 0; k <= 1000; ++k) {
    const double t = 2.0 * kPi * k / 1000.0;
    worst = std::max(worst, std::abs(table(t) - std::sin(t)));
    worst_d = std::max(worst_d, std::abs(table.derivative(t) - std::cos(t)));
  }
  CHECK(worst < 1e-5);    // (h^4/384)|f''''| ~ 1.6e-6
  CHECK(worst_d < 5e-4);  // derivative one order worse

  // clamped extrapolation stays finite and continuous at the ends
  CHECK(std::isfinite(table(-1.0)));
  CHECK(std::isfinite(table(2.0 * kPi + 1.0)));
  CHECK(table(0.0) == doctest::Approx(0.0));
  CHECK(table.back_t() == doctest::Approx(2.0 * kPi));
}

TEST_CASE("simpson sums are exact on cubics for even and odd panel counts") {
  auto sample = [](int npts) {
    std::vector<double> v(npts);
    const double h = 1.0 / (npts - 1);
    for (int i = 0; i < npts; ++i) {
      const double x = i * h;
      v[i] = x * x * x;
    }
    return v;
  };
  // 4 intervals (pure Simpson) and 5 intervals (Simpson + 3/8 tail)
  CHECK(simpson_uniform(sample(5), 0.25) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(simpson_uniform(sample(6), 0.2) == doctest::Approx(0.25).epsilon(1e-14));

  std::vector<double> sins(101);
  for (int i = 0; i <= 100; ++i) sins[i] = std::sin(kPi * i / 100.0);
  CHECK(simpson_uniform(sins, kPi / 100.0) ==
        doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("line fit recovers exact slopes and flags residual scatter") {
  std::vector<double> x, y;
  for (int i = 0; i < 12; ++i) {
    x.push_back(0.3 * i);
    y.push_back(3.0 * x.back() - 2.0);
  }
  const LineFit exact = fit_line(x, y);
  CHECK(exact.slope == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(exact.intercept == doctest::Approx(-2.0).epsilon(1e-10));
  CHECK(exact.slope_stderr < 1e-10);
  CHECK(exact.n == 12);

  // symmetric perturbation leaves the slope, inflates the error bar
  std::vector<double> yn = y;
  for (std::size_t i = 0; i < yn.size(); ++i) yn[i] += (i % 2 ? 0.05 : -0.05);
  const LineFit noisy = fit_line(x, yn);
  CHECK(noisy.slope == doctest::Approx(3.0).epsilon(0.02));
  CHECK(noisy.slope_stderr > 1e-3);
  CHECK(noisy.rss > 0.0);
}

TEST_CASE("quadratic fit recovers coefficients after internal scaling") {
  std::vector<double> x, y;
  for (int i = 0; i < 9; ++i) {
    const double xi = -3.0 + 0.8 * i;
    x.push_back(xi);
    y.push_back(1.0 + 2.0 * xi + 0.5 * xi * xi);
  }
  const QuadraticFit q = fit_quadratic(x, y);
  CHECK(q.c0 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(q.c1 == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(q.c2 == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(q.c2_stderr < 1e-8);
  CHECK(q.n == 9);
}
