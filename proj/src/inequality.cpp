#include "tdwave/inequality.hpp"

#include <algorithm>
#include <cmath>

#include "tdwave/common.hpp"
#include "tdwave/numerics.hpp"

namespace tdwave {

IdentityTrace audit_identity(const RunOutcome& run,
                             const CoefficientModel& model,
                             const MStarProfile* mstar, const CutoffPsi& psi) {
  const std::vector<RunSample>& f = run.samples;
  if (f.size() < 5) throw ConfigError("identity audit needs >= 5 frames");

  // require a uniform frame cadence for the difference stencils (the last
  // frame may sit off-cadence; it is simply not audited)
  const double ds = f[1].s - f[0].s;
  std::size_t last = f.size() - 1;
  if (std::abs((f[last].s - f[last - 1].s) - ds) > 1e-9 * ds) --last;
  for (std::size_t k = 1; k + 1 <= last; ++k) {
    if (std::abs((f[k + 1].s - f[k].s) - ds) > 1e-9 * ds) {
      throw ConfigError("identity audit needs uniformly recorded frames");
    }
  }
  if (last < 4) {
    throw ConfigError("identity audit needs >= 5 uniformly recorded frames");
  }

  // bracket and the three non-derivative terms per frame
  std::vector<double> G(last + 1), T2(last + 1), rhs(last + 1);
  for (std::size_t k = 0; k <= last; ++k) {
    const double t = f[k].t;
    const double ps = psi(t);
    const double wf = psi.weighted_first(t);
    const double ws = psi.weighted_second(t);
    if (mstar) {
      G[k] = ps * f[k].qstar - wf * f[k].iu_phi;
      T2[k] = ps * f[k].ip_phi_w;
      rhs[k] = 2.0 * wf * f[k].iut_phi + ws * f[k].iu_phi;
    } else {
      // Phi = 1: Q_Phi = Q_1, int u Phi = mass, d_t Phi = 0
      const double eB = std::exp(primitive_B(model, t));
      G[k] = ps * f[k].q1 - wf * f[k].mass;
      T2[k] = ps * eB * f[k].ip;
      rhs[k] = ws * f[k].mass;
    }
  }

  IdentityTrace trace;
  double sup_terms = 0.0, sup_G = 0.0;
  for (std::size_t k = 0; k <= last; ++k) {
    sup_terms = std::max(sup_terms, std::abs(T2[k]));
    sup_G = std::max(sup_G, std::abs(G[k]));
  }
  const double span = f[last].s - f[0].s;
  trace.scale = std::max({sup_terms, sup_G / std::max(span, 1e-30), 1e-300});

  for (std::size_t k = 1; k + 1 <= last; ++k) {
    // d/dt = a(t) d/ds on the uniform s cadence; fourth-order stencils so
    // the differencing error sits well below the solver's own O(h^2)
    double dGds;
    if (k >= 2 && k + 2 <= last) {
      dGds = (G[k - 2] - 8.0 * G[k - 1] + 8.0 * G[k + 1] - G[k + 2]) /
             (12.0 * ds);
    } else if (k == 1) {
      dGds = (-3.0 * G[0] - 10.0 * G[1] + 18.0 * G[2] - 6.0 * G[3] + G[4]) /
             (12.0 * ds);
    } else {
      dGds = -(-3.0 * G[last] - 10.0 * G[last - 1] + 18.0 * G[last - 2] -
               6.0 * G[last - 3] + G[last - 4]) /
             (12.0 * ds);
    }
    const double dGdt = model.a(f[k].t) * dGds;
    const double res = std::abs(-dGdt + T2[k] - rhs[k]) / trace.scale;
    trace.s.push_back(f[k].s);
    trace.residual.push_back(res);
    trace.max_residual = std::max(trace.max_residual, res);
  }
  return trace;
}

InequalityAudit audit_prop_tfm1(const RunOutcome& run,
                                const CoefficientModel& model,
                                const SolverConfig& config,
                                const InitialData& data,
                                const std::vector<double>& R_list) {
  if (R_list.empty()) throw ConfigError("audit needs at least one R");
  InitialData dat = data;
  dat.compute_moments(config.N);
  const std::vector<RunSample>& f = run.samples;
  if (f.size() < 3) throw ConfigError("audit needs recorded frames");

  InequalityAudit audit;
  const double exponent = -(config.p + 1.0) / (config.p - 1.0);
  for (double R : R_list) {
    const double A_R = primitive_A(model, R);
    if (run.s_end < A_R) {
      throw ConfigError("run too short for R = " + std::to_string(R));
    }
    const CutoffPsi psi = make_cutoff(model, R, config.p);
    // int_0^R psi_R |u|_p^p dt = int psi_R ip a^{-1} ds over the frames
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < f.size(); ++k) {
      if (f[k].s > A_R) break;
      auto val = [&](const RunSample& smp) {
        return smp.t >= R ? 0.0 : psi(smp.t) * smp.ip / model.a(smp.t);
      };
      const double hk = std::min(f[k + 1].s, A_R) - f[k].s;
      if (hk <= 0.0) continue;
      acc += 0.5 * hk * (val(f[k]) + val(f[k + 1]));
    }
    const double lhs = dat.eps * dat.M_g + acc;
    const double rhs_shape =
        std::pow(R, exponent) * std::pow(dat.r0 + A_R, config.N);
    audit.R.push_back(R);
    audit.lhs.push_back(lhs);
    audit.rhs_shape.push_back(rhs_shape);
    audit.ratio.push_back(lhs / rhs_shape);
  }
  const auto [mn, mx] =
      std::minmax_element(audit.ratio.begin(), audit.ratio.end());
  audit.C = *mx;
  audit.spread = *mx / *mn;
  audit.pass = audit.spread <= 1.5 && std::isfinite(audit.C) && audit.C > 0.0;
  return audit;
}

TheoremAudit audit_theorem(const RunOutcome& run, const CoefficientModel& model,
                           const SolverConfig& config, const InitialData& data) {
  if (!run.T_blowup) {
    throw ConfigError("theorem audit needs a blowup verdict");
  }
  InitialData dat = data;
  dat.compute_moments(config.N);

  TheoremAudit audit;
  const double p = config.p;
  const double pprime = p / (p - 1.0);
  audit.T = *run.T_blowup;
  audit.A_T = primitive_A(model, audit.T);

  audit.lhs1 = dat.eps * dat.M_g + std::pow(dat.eps, p) * std::pow(dat.M_f, p);
  audit.rhs1 = std::pow(audit.T, -(p + 1.0) / (p - 1.0)) *
               std::pow(audit.A_T, config.N);
  audit.C1 = audit.lhs1 / audit.rhs1;

  const double shape_pow = config.N - 1.0 - 0.5 * (config.N - 1.0) * pprime;
  auto integrand = [&](double t) {
    return std::exp(0.5 * pprime * std::log(model.a(t)) +
                    shape_pow * std::log1p(primitive_A(model, t)));
  };
  audit.weighted_integral =
      integrate_or_throw(integrand, 0.0, audit.T, 1e-10);
  audit.rhs2 = std::pow(audit.T, -(p * p + 1.0) / (p * (p - 1.0))) *
               std::pow(audit.A_T, config.N / p) *
               std::pow(audit.weighted_integral, 1.0 / pprime);
  audit.C2 = dat.eps / audit.rhs2;
  return audit;
}

}  // namespace tdwave
