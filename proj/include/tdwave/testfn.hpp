#pragma once

//
// Test functions for the blowup argument:
//
//  * the radial eigenfunction phi of the Laplacian, Lap phi = phi > 0,
//    realized as the sphere integral phi(x) = int_{S^{N-1}} e^{w.x} dS(w) —
//    growth e^r forces log-space/scaled evaluation;
//  * the temporal cutoff psi_R(t) = eta(B_*(t)/B_*(R))^{2p'} built from one
//    fixed smooth bump step, with the weighted derivatives psi' e^B and
//    (psi' e^B)' in closed chain-rule form;
//  * the truncated-ball norm of phi against its analytic growth shape;
//  * the conservative pairings Q_1 (weighted mass flux) and Q_* (pairing
//    against m_* phi), time-invariant on solutions of the linear equation.
//

#include <vector>

#include "tdwave/coefficients.hpp"
#include "tdwave/wkb.hpp"

namespace tdwave {

/// phi(r) with its logarithm and the overflow-free scaled value phi e^{-r}.
struct PhiValue {
  double value = 0.0;   // may overflow to +inf for r beyond ~705
  double log_value = 0.0;
  double scaled = 0.0;  // phi(r) e^{-r}, bounded on [0, inf)
};

/// Radial evaluator: N = 1 uses 2 cosh r; N >= 2 evaluates the sphere
/// integral |S^{N-2}| int_0^pi e^{r cos h} sin^{N-2}h dh by adaptive
/// quadrature of the scaled integrand, switching to the power series of
/// the underlying hypergeometric profile near r = 0.
PhiValue phi_full(int N, double r);

/// Convenience: phi_full(N, r).value.
double phi(int N, double r);

/// The defining sphere integral evaluated by quadrature for any N >= 2 —
/// exposed so closed forms can be cross-checked against it.
double phi_integral_scaled(int N, double r);

/// |(phi(r+h) - 2 phi(r) + phi(r-h))/h^2 + (N-1)(phi(r+h) - phi(r-h))/(2hr)
///  - phi(r)|: the discrete residual of Lap phi = phi, expected O(h^2 phi).
double phi_laplacian_residual(int N, double r, double h);

// ----------------------------------------------------------------- cutoff --

/// The fixed transition profile eta: 1 on (-inf, 1/2], 0 on [1, inf),
/// C-infinity in between (normalized e^{-1/x} bump step). Returns value and
/// first two derivatives.
struct EtaValue {
  double eta = 0.0, d1 = 0.0, d2 = 0.0;
};
EtaValue eta_smoothstep(double x);

/// Temporal cutoff psi_R(t) = eta(B_*(t)/B_*(R))^{2p'} with p' = p/(p-1).
/// Holds a cumulative cache so evaluation is O(1).
class CutoffPsi {
public:
  CutoffPsi(const CoefficientModel& model, double R, double p);

  double R() const { return R_; }
  double p() const { return p_; }
  double b_star_R() const { return bstar_R_; }

  double operator()(double t) const;

  /// psi_R'(t) e^{B(t)} = zeta'(x)/B_*(R), zeta = eta^{2p'}, x = B_*(t)/B_*(R).
  double weighted_first(double t) const;

  /// (psi_R' e^B)'(t) = zeta''(x) e^{-B(t)} / B_*(R)^2.
  double weighted_second(double t) const;

private:
  struct ZetaDerivs {
    double zeta, d1, d2;
  };
  ZetaDerivs zeta(double x) const;

  CoefficientModel model_;
  CumulativeIntegrals cache_;
  bool trivial_damping_ = false;  // B == 0: B_* = t exactly
  double R_ = 0.0, p_ = 0.0, q_ = 0.0;  // q = 2p'
  double bstar_R_ = 0.0;
};

CutoffPsi make_cutoff(const CoefficientModel& model, double R, double p);

/// Fitted constant of the cutoff derivative bounds:
///   C = max over the grid of max( R |psi' e^B| / psi^{1/p},
///                                 R^2 |(psi' e^B)'| / psi^{1/p} )
/// over points with psi > 0. `diverging` flags growth of the constant under
/// grid refinement (said growth would mean eta lacks the needed flatness).
struct CutoffBoundFit {
  double C = 0.0;
  double C_refined = 0.0;
  bool diverging = false;
};
CutoffBoundFit verify_cutoff_bounds(const CutoffPsi& cut, int grid_points = 2001);

// ----------------------------------------------------- truncated phi norm --

/// Measured |S^{N-1}| int_0^{r0+A(t)} phi^{p'} r^{N-1} dr (log value) against
/// the growth shape (1+r0+A)^{N-1-(N-1)p'/2} e^{p' A} (log value).
struct YzNormResult {
  double measured_log = 0.0;
  double bound_log = 0.0;
  double ratio = 0.0;  // exp(measured_log - bound_log)
};
YzNormResult yz_norm_bound(int N, double p, double r0,
                           const CoefficientModel& model, double t);

// ------------------------------------------------- conservative pairings --

/// Solution snapshot in the original variables on a uniform radial grid.
struct OriginalState {
  int N = 3;
  double t = 0.0;
  double h = 0.0;
  std::vector<double> r, u, ut;
};

/// Q_1(u; t) = e^{B(t)} int d_t u dx  (radial Simpson quadrature).
double q1(const OriginalState& state, const CoefficientModel& model);

/// Q_*(u; t) = e^{B(t)} int (m_* d_t u - m_*' u) phi dx, evaluated node-wise
/// as exp(log m + log phi) to keep the e^{-A} x e^{+r} product in range.
double q_star(const OriginalState& state, const CoefficientModel& model,
              const MStarProfile& mstar);

}  // namespace tdwave
