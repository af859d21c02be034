#pragma once

//
// Shared numerical toolkit: adaptive Gauss--Kronrod quadrature, an adaptive
// Dormand--Prince ODE stepper, cubic Hermite lookup tables, composite
// Simpson sums, and small least-squares fits. Everything here is plain
// double-precision with explicit tolerances; nothing allocates per call once
// the work buffers are set up.
//

#include <functional>
#include <vector>

#include "tdwave/common.hpp"

namespace tdwave {

// ------------------------------------------------------------ quadrature --

struct QuadResult {
  double value = 0.0;
  double error = 0.0;   // accumulated error estimate (sum of |K15-G7| terms)
  bool converged = true;
  int panels = 0;
};

/// Adaptive quadrature of f over [lo, hi] (lo <= hi) built on the 7-point
/// Gauss / 15-point Kronrod pair with panel bisection. `abs_tol` is an
/// absolute target for the whole interval; panels subdivide until their
/// local error estimate fits their share of the budget or `max_depth` is
/// reached (in which case `converged` is false and the best estimate is
/// returned with its error).
QuadResult integrate(const std::function<double(double)>& f, double lo,
                     double hi, double abs_tol = 1e-10, int max_depth = 30);

/// As `integrate`, but throws NumericalError when the tolerance is not met.
double integrate_or_throw(const std::function<double(double)>& f, double lo,
                          double hi, double abs_tol = 1e-10);

// -------------------------------------------------------------- ODE steps --

/// Right-hand side of y' = f(t, y); writes dy/dt into `dydt` (same size as y).
using OdeRhs =
    std::function<void(double t, const std::vector<double>& y, std::vector<double>& dydt)>;

struct OdeOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 0.0;       // 0 = unlimited
  double initial_step = 0.0;   // 0 = choose automatically
};

/// Integrates y' = f(t, y) through the strictly monotone node sequence `ts`
/// (increasing or decreasing), taking adaptive Dormand--Prince 5(4) substeps
/// that are clipped to land exactly on every node. `on_node(i, t, y)` is
/// invoked at each node, including i = 0 with the initial state. Throws
/// NumericalError if the step size collapses.
void ode_integrate(const OdeRhs& f, const std::vector<double>& ts,
                   std::vector<double> y0, const OdeOptions& opts,
                   const std::function<void(std::size_t, double, const std::vector<double>&)>& on_node);

// ------------------------------------------------------------ interpolation

/// Cubic Hermite interpolation table on a uniform grid with caller-supplied
/// values and slopes (no numerical differentiation). Evaluation outside the
/// grid clamps to the end intervals' polynomials.
class CubicTable {
public:
  CubicTable() = default;
  CubicTable(double t0, double dt, std::vector<double> values,
             std::vector<double> slopes);

  double operator()(double t) const;
  double derivative(double t) const;

  bool empty() const { return values_.empty(); }
  double front_t() const { return t0_; }
  double back_t() const { return t0_ + dt_ * (values_.empty() ? 0 : values_.size() - 1); }

private:
  double t0_ = 0.0, dt_ = 1.0;
  std::vector<double> values_, slopes_;
};

// ---------------------------------------------------------------- Simpson --

/// Composite Simpson sum of uniformly spaced samples with spacing h. An odd
/// interval count is finished with the 3/8 rule so the order stays 4.
double simpson_uniform(const std::vector<double>& values, double h);

// ------------------------------------------------------------------- fits --

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double rss = 0.0;
  std::size_t n = 0;
};

/// Ordinary least squares y ~ intercept + slope * x. Requires n >= 2;
/// slope_stderr needs n >= 3 (0 otherwise).
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct QuadraticFit {
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;  // y ~ c0 + c1 x + c2 x^2
  double c2_stderr = 0.0;
  std::size_t n = 0;
};

/// Least-squares parabola through (x, y); x is centered/scaled internally for
/// conditioning, coefficients are mapped back. Requires n >= 3.
QuadraticFit fit_quadratic(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace tdwave
