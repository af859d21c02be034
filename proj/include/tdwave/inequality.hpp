#pragma once

//
// Empirical audits of the test-function chain on computed runs:
//
//  * the bracket identity behind the method — for an ansatz Phi solving the
//    weighted linear equation and a temporal cutoff psi,
//
//      -d/dt [ psi Q_Phi - (psi' e^B) int u Phi ] + psi e^B int |u|^p Phi
//         = 2 (psi' e^B) int u d_t Phi + (psi' e^B)' int u Phi ,
//
//    checked frame-by-frame with centered time differences;
//  * the R-family bound  eps M_g + int_0^R psi_R int |u|^p dx dt
//      <= C R^{-(p+1)/(p-1)} (r0 + A(R))^N,  C fitted over a decade of R;
//  * the two lifespan estimates evaluated at the measured blowup time, each
//    reported as its implied constant (stability across a sweep is the
//    testable content — the constants are otherwise unquantified).
//

#include <vector>

#include "tdwave/solver.hpp"
#include "tdwave/testfn.hpp"

namespace tdwave {

/// Residual trace of the bracket identity over the run's recorded frames.
struct IdentityTrace {
  std::vector<double> s;         // frame times (stretched)
  std::vector<double> residual;  // normalized |lhs - rhs| per interior frame
  double max_residual = 0.0;
  double scale = 0.0;            // the normalizer used
};

/// Evaluates the identity with Phi = m_* phi when `mstar` is given, or with
/// Phi = 1 (the weighted-mass bookkeeping) when it is null. The run must
/// have been recorded densely (uniform cadence) for the centered d/dt.
IdentityTrace audit_identity(const RunOutcome& run,
                             const CoefficientModel& model,
                             const MStarProfile* mstar, const CutoffPsi& psi);

/// One audited scale R of the R-family bound.
struct InequalityAudit {
  std::vector<double> R;
  std::vector<double> lhs;
  std::vector<double> rhs_shape;
  std::vector<double> ratio;  // lhs / rhs_shape
  double C = 0.0;             // max ratio
  double spread = 0.0;        // max ratio / min ratio
  bool pass = false;          // spread <= 1.5 (the +-20% band)
};

/// lhs(R) = eps M_g + int_0^R psi_R(t) int |u|^p dx dt from the recorded
/// frames; rhs_shape(R) = R^{-(p+1)/(p-1)} (r0 + A(R))^N. The run must
/// survive past the largest R.
InequalityAudit audit_prop_tfm1(const RunOutcome& run,
                                const CoefficientModel& model,
                                const SolverConfig& config,
                                const InitialData& data,
                                const std::vector<double>& R_list);

/// Both lifespan estimates at the measured T_blowup.
struct TheoremAudit {
  double T = 0.0;
  double A_T = 0.0;
  double lhs1 = 0.0;   // eps M_g + eps^p M_f^p
  double rhs1 = 0.0;   // T^{-(p+1)/(p-1)} A(T)^N
  double C1 = 0.0;
  double rhs2 = 0.0;   // T^{-(p^2+1)/(p(p-1))} A(T)^{N/p} (weighted integral)^{1/p'}
  double C2 = 0.0;     // eps / rhs2
  double weighted_integral = 0.0;  // int_0^T a^{p'/2} (1+A)^{N-1-(N-1)p'/2} dt
};

/// Rejects runs that did not end in blowup (ConfigError).
TheoremAudit audit_theorem(const RunOutcome& run, const CoefficientModel& model,
                           const SolverConfig& config, const InitialData& data);

}  // namespace tdwave
