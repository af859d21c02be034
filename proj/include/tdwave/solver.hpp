#pragma once

//
// Radially symmetric initial-value solver for
//
//     d_t^2 u - a(t)^2 Lap u + b(t) d_t u = |u|^p,   u(0) = eps f, d_t u(0) = eps g.
//
// The equation is integrated in the stretched time s = A(t) after the
// substitution u = a^{-1/2} w, which turns it into a unit-speed wave
// equation
//
//     d_s^2 w - Lap w + btilde(s) d_s w + Vtilde(s) w = ctilde(s) |w|^p
//
// with bounded coefficients — one CFL number works for the whole run, no
// matter how fast a(t) grows. A direct integrator for the original
// variables is kept alongside as a cross-check oracle.
//
// Scheme: kick-drift-kick leapfrog on (w, v = d_s w), damping handled by a
// trapezoidal (semi-implicit) average over each half-kick, radial Laplacian
// with ghost-node symmetry at r = 0 and an (inert) Dirichlet wall at r_max.
//

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tdwave/coefficients.hpp"
#include "tdwave/wkb.hpp"

namespace tdwave {

/// Compactly supported radial data pair (u, d_t u)(0) = eps (f, g).
struct InitialData {
  std::function<double(double)> f, g;
  double r0 = 1.0;
  double eps = 1.0;
  double M_f = -1.0;  // |S^{N-1}| int f r^{N-1} dr, set by compute_moments
  double M_g = -1.0;

  void compute_moments(int N);
  void validate() const;  // f, g >= 0 sampled; moments nonnegative, not both 0
};

/// The standard profile f = g = (1 - (r/r0)^2)^3 on [0, r0).
InitialData bump_data(double eps, double r0 = 1.0);

/// Zero data (linear-solver and trivial-step checks only).
InitialData zero_data(double r0 = 1.0);

struct SolverConfig {
  int N = 3;
  double p = 2.0;
  double h = 1.0 / 64.0;
  double cfl = 0.45;               // ds = cfl * h, then rounded to land on s_max
  double blowup_threshold = 1e6;   // ratio to the initial sup norm of u
  double s_max = 10.0;
  double r_max = 0.0;              // 0: auto = r0 + s_max + 1
  int record_every = 0;            // 0: auto (~600 samples per run)

  void validate() const;
};

/// Transformed-variable state on the uniform radial grid r_j = j h.
struct RadialState {
  int N = 3;
  double h = 0.0;
  double ds = 0.0;
  double s = 0.0;
  double t = 0.0;  // inverse_A(s), carried along
  long steps = 0;
  std::vector<double> w, v;

  // one-step force cache (valid means force = rhs(s, w) at the current s)
  std::vector<double> force;
  bool force_valid = false;

  double sup_w() const;
};

struct TransformedCoefficients {
  double btilde = 0.0;  // b / a
  double vtilde = 0.0;  // Theta^3 (Theta'' + b Theta'), Theta = a^{-1/2}
  double ctilde = 1.0;  // a^{-(p+3)/2}
};

/// Coefficients of the transformed equation at stretched time s.
TransformedCoefficients transformed_coefficients(const CoefficientModel& model,
                                                 double s, double p);

/// t with A(t) = s. Closed form for the power family, Newton iteration on
/// the cached table for custom models.
double inverse_A(const CoefficientModel& model, double s);

/// Initial (w, d_s w) on the grid:
/// w_0 = a(0)^{1/2} eps f,  w_1 = a(0)^{-1/2} eps g + (1/2) a(0)^{-3/2} a'(0) eps f.
std::pair<std::vector<double>, std::vector<double>> liouville_initial(
    const CoefficientModel& model, const InitialData& data,
    const SolverConfig& config);

/// Fresh state at s = 0 holding the transformed data.
RadialState initial_state(const CoefficientModel& model,
                          const InitialData& data, const SolverConfig& config);

/// One kick-drift-kick step of size state.ds. Second order in ds and h.
void step(RadialState& state, const SolverConfig& config,
          const CoefficientModel& model, bool nonlinearity_on);

/// Largest r_j carrying more than tol * sup of max(|w|, |v|); 0 for a zero
/// state.
double support_radius(const RadialState& state, double tol = 1e-8);

/// Recovered original-variable snapshot u = a^{-1/2} w,
/// u_t = a^{1/2} v - (a'/2) a^{-3/2} w.
struct OriginalSnapshot {
  double t = 0.0;
  std::vector<double> r, u, ut;
};
OriginalSnapshot from_transformed(const RadialState& state,
                                  const CoefficientModel& model);

enum class RunVerdict { blowup, survived, boundary_breach, instability };
std::string to_string(RunVerdict v);

/// One recorded frame of a run. q_star and ip_phi_w are NaN when no m_*
/// profile applies (damping with divergent B).
struct RunSample {
  double s = 0.0, t = 0.0;
  double sup_u = 0.0;
  double support_r = 0.0;
  double q1 = 0.0;
  double qstar = 0.0;
  double mass = 0.0;      // int u dx
  double ip = 0.0;        // int |u|^p dx
  double ip_phi_w = 0.0;  // e^B int |u|^p Phi dx, Phi = m_* phi
  double iu_phi = 0.0;    // int u Phi dx           (no e^B weight)
  double iut_phi = 0.0;   // int u d_t Phi dx = -int u |m_*'| phi dx
};

struct RunOutcome {
  RunVerdict verdict = RunVerdict::survived;
  std::optional<double> T_blowup;       // original time, by inverse_A
  std::optional<double> s_blowup;       // fitted singular stretched time
  double growth_exponent = 0.0;         // fitted d log sup / d log (s_b - s)
  int fit_points = 0;
  double sup0 = 0.0;                    // initial sup |u|
  double s_end = 0.0;                   // last computed s
  std::vector<RunSample> samples;
  std::string note;

  RadialState final_state;              // state at s_end (pre-blowup if any)
};

/// Full run. Records every config.record_every steps (plus first/last),
/// detects blowup via threshold + self-similar tail fit, verifies the
/// support cone, and reports one of the four verdicts. An m_* profile may
/// be supplied to avoid rebuilding it per run; pass nullptr to build one
/// internally when the model admits it.
RunOutcome run(const CoefficientModel& model, const SolverConfig& config,
               const InitialData& data, bool nonlinearity_on,
               const MStarProfile* mstar = nullptr);

/// Direct integration of the original equation in t (oracle for the
/// transform route): kick-drift-kick in t with dt = cfl h / max a, same
/// radial stencil. Returns snapshots at ~20 times plus exactly t_end.
std::vector<OriginalSnapshot> direct_reference_run(
    const CoefficientModel& model, const SolverConfig& config,
    const InitialData& data, double t_end, bool nonlinearity_on);

/// Writes the run's samples as CSV: s,t,sup_u,support_r,Q1,Qstar,mass.
void write_series_csv(const RunOutcome& outcome, const std::string& path);

}  // namespace tdwave
