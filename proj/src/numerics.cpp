#include "tdwave/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace tdwave {

namespace {

// 15-point Kronrod abscissae on [-1,1] (symmetric; only the non-negative
// half is stored) with Kronrod weights, and the embedded 7-point Gauss
// weights on the odd-index subset.
constexpr std::array<double, 8> kKronrodX = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr std::array<double, 8> kKronrodW = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr std::array<double, 4> kGaussW = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelEval {
  double k15;
  double err;
};

PanelEval eval_panel(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double hw = 0.5 * (b - a);
  double k15 = 0.0, g7 = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double dx = hw * kKronrodX[i];
    double fsum;
    if (i == 7) {
      fsum = f(c);
    } else {
      fsum = f(c - dx) + f(c + dx);
    }
    k15 += kKronrodW[i] * fsum;
    if (i % 2 == 1) g7 += kGaussW[i / 2] * fsum;
    else if (i == 7) g7 += kGaussW[3] * fsum;
  }
  k15 *= hw;
  g7 *= hw;
  return {k15, std::abs(k15 - g7)};
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double lo,
                     double hi, double abs_tol, int max_depth) {
  QuadResult out;
  if (!(hi > lo)) {
    out.value = 0.0;
    return out;
  }
  struct Item {
    double a, b;
    int depth;
  };
  const double total = hi - lo;
  std::vector<Item> stack{{lo, hi, 0}};
  while (!stack.empty()) {
    const Item it = stack.back();
    stack.pop_back();
    const PanelEval pe = eval_panel(f, it.a, it.b);
    const double budget = abs_tol * (it.b - it.a) / total;
    if (pe.err <= budget || it.depth >= max_depth) {
      out.value += pe.k15;
      out.error += pe.err;
      out.panels += 1;
      if (pe.err > budget) out.converged = false;
    } else {
      const double mid = 0.5 * (it.a + it.b);
      stack.push_back({it.a, mid, it.depth + 1});
      stack.push_back({mid, it.b, it.depth + 1});
    }
  }
  return out;
}

double integrate_or_throw(const std::function<double(double)>& f, double lo,
                          double hi, double abs_tol) {
  const QuadResult q = integrate(f, lo, hi, abs_tol);
  if (!q.converged)
    throw NumericalError("quadrature did not converge: achieved error " +
                         std::to_string(q.error) + " on [" + std::to_string(lo) +
                         ", " + std::to_string(hi) + "]");
  return q.value;
}

// ------------------------------------------------------------- ODE stepper

namespace {

// Dormand--Prince 5(4) tableau.
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
constexpr double kB5[7] = {35.0 / 384,     0.0,  500.0 / 1113, 125.0 / 192,
                           -2187.0 / 6784, 11.0 / 84, 0.0};
constexpr double kB4[7] = {5179.0 / 57600,  0.0,        7571.0 / 16695,
                           393.0 / 640,     -92097.0 / 339200,
                           187.0 / 2100,    1.0 / 40};

}  // namespace

void ode_integrate(const OdeRhs& f, const std::vector<double>& ts,
                   std::vector<double> y, const OdeOptions& opts,
                   const std::function<void(std::size_t, double, const std::vector<double>&)>& on_node) {
  if (ts.size() < 2) {
    if (!ts.empty()) on_node(0, ts[0], y);
    return;
  }
  const std::size_t dim = y.size();
  const double dir = ts[1] > ts[0] ? 1.0 : -1.0;
  for (std::size_t i = 1; i < ts.size(); ++i) {
    if ((ts[i] - ts[i - 1]) * dir <= 0.0)
      throw ConfigError("ode_integrate: node sequence not strictly monotone");
  }

  std::array<std::vector<double>, 7> k;
  for (auto& v : k) v.assign(dim, 0.0);
  std::vector<double> ytmp(dim), y5(dim), yerr(dim);

  double t = ts[0];
  on_node(0, t, y);

  const double span = std::abs(ts.back() - ts.front());
  double h = opts.initial_step > 0 ? opts.initial_step : span / 100.0;
  if (opts.max_step > 0) h = std::min(h, opts.max_step);
  const double h_floor = span * 1e-14 + 1e-300;

  f(t, y, k[0]);
  bool have_k0 = true;

  for (std::size_t node = 1; node < ts.size(); ++node) {
    const double t_target = ts[node];
    while ((t_target - t) * dir > span * 1e-15) {
      double step = std::min(h, std::abs(t_target - t));
      bool hits_node = step >= std::abs(t_target - t) * (1.0 - 1e-12);
      if (hits_node) step = std::abs(t_target - t);

      if (!have_k0) {
        f(t, y, k[0]);
        have_k0 = true;
      }
      const double hs = dir * step;
      for (int stage = 1; stage < 7; ++stage) {
        for (std::size_t d = 0; d < dim; ++d) {
          double acc = 0.0;
          for (int j = 0; j < stage; ++j) acc += kA[stage][j] * k[j][d];
          ytmp[d] = y[d] + hs * acc;
        }
        f(t + hs * kC[stage], ytmp, k[stage]);
      }
      double err_norm = 0.0;
      for (std::size_t d = 0; d < dim; ++d) {
        double a5 = 0.0, a4 = 0.0;
        for (int j = 0; j < 7; ++j) {
          a5 += kB5[j] * k[j][d];
          a4 += kB4[j] * k[j][d];
        }
        y5[d] = y[d] + hs * a5;
        const double scale =
            opts.abs_tol + opts.rel_tol * std::max(std::abs(y[d]), std::abs(y5[d]));
        const double e = hs * (a5 - a4) / scale;
        err_norm += e * e;
      }
      err_norm = std::sqrt(err_norm / static_cast<double>(dim));

      if (err_norm <= 1.0) {
        t = hits_node ? t_target : t + hs;
        y.swap(y5);
        // FSAL: stage 7 of an accepted step is the derivative at the new point.
        k[0].swap(k[6]);
        have_k0 = true;
      } else {
        have_k0 = true;  // k[0] still valid at unchanged t
      }
      const double grow =
          err_norm > 0 ? 0.9 * std::pow(err_norm, -0.2) : 5.0;
      h = step * std::clamp(grow, 0.2, 5.0);
      if (opts.max_step > 0) h = std::min(h, opts.max_step);
      if (h < h_floor)
        throw NumericalError("ode_integrate: step size collapsed at t = " +
                             std::to_string(t));
    }
    t = t_target;
    on_node(node, t, y);
  }
}

// -------------------------------------------------------------- CubicTable

CubicTable::CubicTable(double t0, double dt, std::vector<double> values,
                       std::vector<double> slopes)
    : t0_(t0), dt_(dt), values_(std::move(values)), slopes_(std::move(slopes)) {
  if (values_.size() != slopes_.size() || values_.size() < 2)
    throw ConfigError("CubicTable: values/slopes size mismatch or too short");
  if (!(dt_ > 0)) throw ConfigError("CubicTable: non-positive spacing");
}

double CubicTable::operator()(double t) const {
  const std::size_t nseg = values_.size() - 1;
  double x = (t - t0_) / dt_;
  std::size_t i = 0;
  if (x > 0) i = std::min(static_cast<std::size_t>(x), nseg - 1);
  const double u = x - static_cast<double>(i);
  const double y0 = values_[i], y1 = values_[i + 1];
  const double m0 = slopes_[i] * dt_, m1 = slopes_[i + 1] * dt_;
  const double u2 = u * u, u3 = u2 * u;
  return (2 * u3 - 3 * u2 + 1) * y0 + (u3 - 2 * u2 + u) * m0 +
         (-2 * u3 + 3 * u2) * y1 + (u3 - u2) * m1;
}

double CubicTable::derivative(double t) const {
  const std::size_t nseg = values_.size() - 1;
  double x = (t - t0_) / dt_;
  std::size_t i = 0;
  if (x > 0) i = std::min(static_cast<std::size_t>(x), nseg - 1);
  const double u = x - static_cast<double>(i);
  const double y0 = values_[i], y1 = values_[i + 1];
  const double m0 = slopes_[i] * dt_, m1 = slopes_[i + 1] * dt_;
  const double u2 = u * u;
  const double d = (6 * u2 - 6 * u) * y0 + (3 * u2 - 4 * u + 1) * m0 +
                   (-6 * u2 + 6 * u) * y1 + (3 * u2 - 2 * u) * m1;
  return d / dt_;
}

// ----------------------------------------------------------------- Simpson

double simpson_uniform(const std::vector<double>& v, double h) {
  const std::size_t n = v.size();
  if (n < 2) return 0.0;
  if (n == 2) return 0.5 * h * (v[0] + v[1]);
  const std::size_t m = n - 1;  // interval count
  double total = 0.0;
  std::size_t stop = m;
  if (m % 2 == 1) {
    // odd interval count (n is even, >= 4 here): close the last three
    // intervals with the 3/8 rule so the composite order stays 4
    stop = m - 3;
    total += 3.0 * h / 8.0 *
             (v[n - 4] + 3 * v[n - 3] + 3 * v[n - 2] + v[n - 1]);
  }
  double s = 0.0;
  for (std::size_t i = 0; i + 2 <= stop; i += 2)
    s += v[i] + 4 * v[i + 1] + v[i + 2];
  total += h / 3.0 * s;
  return total;
}

// -------------------------------------------------------------------- fits

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw ConfigError("fit_line: need matching arrays with n >= 2");
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) throw ConfigError("fit_line: degenerate abscissae");
  LineFit out;
  out.n = n;
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (out.intercept + out.slope * x[i]);
    out.rss += r * r;
  }
  if (n > 2) out.slope_stderr = std::sqrt(out.rss / static_cast<double>(n - 2) / sxx);
  return out;
}

QuadraticFit fit_quadratic(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 3)
    throw ConfigError("fit_quadratic: need matching arrays with n >= 3");
  const std::size_t n = x.size();
  // center and scale for conditioning
  double mx = 0;
  for (double v : x) mx += v;
  mx /= static_cast<double>(n);
  double sx = 0;
  for (double v : x) sx = std::max(sx, std::abs(v - mx));
  if (sx == 0) throw ConfigError("fit_quadratic: degenerate abscissae");

  // normal equations in the scaled variable u = (x - mx)/sx
  double s[5] = {0, 0, 0, 0, 0};
  double b[3] = {0, 0, 0};
  for (std::size_t i = 0; i < n; ++i) {
    const double u = (x[i] - mx) / sx;
    double up = 1.0;
    for (int p = 0; p <= 4; ++p) {
      s[p] += up;
      if (p <= 2) b[p] += up * y[i];
      up *= u;
    }
  }
  double M[3][4] = {{s[0], s[1], s[2], b[0]},
                    {s[1], s[2], s[3], b[1]},
                    {s[2], s[3], s[4], b[2]}};
  // Gaussian elimination with partial pivoting
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(M[r][col]) > std::abs(M[piv][col])) piv = r;
    std::swap(M[piv], M[col]);
    if (M[col][col] == 0) throw ConfigError("fit_quadratic: singular system");
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double fac = M[r][col] / M[col][col];
      for (int c = col; c < 4; ++c) M[r][c] -= fac * M[col][c];
    }
  }
  const double a0 = M[0][3] / M[0][0];
  const double a1 = M[1][3] / M[1][1];
  const double a2 = M[2][3] / M[2][2];

  QuadraticFit out;
  out.n = n;
  // map y = a0 + a1 u + a2 u^2 back to x
  out.c2 = a2 / (sx * sx);
  out.c1 = a1 / sx - 2 * a2 * mx / (sx * sx);
  out.c0 = a0 - a1 * mx / sx + a2 * mx * mx / (sx * sx);

  if (n > 3) {
    double rss = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double u = (x[i] - mx) / sx;
      const double r = y[i] - (a0 + a1 * u + a2 * u * u);
      rss += r * r;
    }
    // variance of a2 from the inverse normal matrix diagonal; recompute the
    // (2,2) entry of (X^T X)^{-1} by solving with unit rhs
    double N[3][4] = {{s[0], s[1], s[2], 0},
                      {s[1], s[2], s[3], 0},
                      {s[2], s[3], s[4], 1}};
    for (int col = 0; col < 3; ++col) {
      int piv = col;
      for (int r = col + 1; r < 3; ++r)
        if (std::abs(N[r][col]) > std::abs(N[piv][col])) piv = r;
      std::swap(N[piv], N[col]);
      for (int r = 0; r < 3; ++r) {
        if (r == col) continue;
        const double fac = N[r][col] / N[col][col];
        for (int c = col; c < 4; ++c) N[r][c] -= fac * N[col][c];
      }
    }
    const double inv22 = N[2][3] / N[2][2];
    const double sigma2 = rss / static_cast<double>(n - 3);
    out.c2_stderr = std::sqrt(std::max(0.0, sigma2 * inv22)) / (sx * sx);
  }
  return out;
}

}  // namespace tdwave
