#include "tdwave/json_io.hpp"

#include <cmath>
#include <fstream>

#include "tdwave/common.hpp"

namespace tdwave {

namespace {

double num_or(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  return j.at(key).get<double>();
}

}  // namespace

CoefficientModel model_from_json(const json& j) {
  const std::string family = j.value("family", "power");
  if (family == "constant") return make_power_law(0.0, 0.0, 2.0);
  if (family == "power") {
    return make_power_law(num_or(j, "alpha", 0.0), num_or(j, "mu", 0.0),
                          num_or(j, "beta", 2.0));
  }
  if (family == "custom") {
    if (!j.contains("custom")) {
      throw ConfigError("custom model needs a \"custom\" table block");
    }
    const json& c = j.at("custom");
    auto col = [&](const char* key) {
      if (!c.contains(key)) {
        throw ConfigError(std::string("custom table missing column ") + key);
      }
      return c.at(key).get<std::vector<double>>();
    };
    return make_custom_sampled(num_or(c, "t0", 0.0), c.at("dt").get<double>(),
                               col("a"), col("a1"), col("a2"), col("b"),
                               col("b1"));
  }
  throw ConfigError("unknown model family \"" + family + "\"");
}

SolverConfig solver_from_json(const json& j) {
  SolverConfig cfg;
  if (j.contains("N")) cfg.N = j.at("N").get<int>();
  if (j.contains("p")) cfg.p = j.at("p").get<double>();
  cfg.h = num_or(j, "h", cfg.h);
  cfg.cfl = num_or(j, "cfl", cfg.cfl);
  cfg.s_max = num_or(j, "s_max", cfg.s_max);
  cfg.r_max = num_or(j, "r_max", cfg.r_max);
  cfg.blowup_threshold = num_or(j, "blowup_threshold", cfg.blowup_threshold);
  if (j.contains("record_every")) {
    cfg.record_every = j.at("record_every").get<int>();
  }
  cfg.validate();
  return cfg;
}

InitialData data_from_json(const json& j) {
  const std::string profile = j.value("profile", "bump");
  const double eps = num_or(j, "eps", 1.0);
  const double r0 = num_or(j, "r0", 1.0);
  if (profile == "bump") return bump_data(eps, r0);
  if (profile == "zero") return zero_data(r0);
  throw ConfigError("unknown data profile \"" + profile + "\"");
}

SweepSpec sweep_from_json(const json& j) {
  SweepSpec spec;
  if (!j.contains("model")) throw ConfigError("config needs a model section");
  spec.model = model_from_json(j.at("model"));
  spec.solver = j.contains("solver") ? solver_from_json(j.at("solver"))
                                     : SolverConfig{};
  spec.data = j.contains("data") ? data_from_json(j.at("data"))
                                 : bump_data(1.0);
  if (!j.contains("sweep")) throw ConfigError("config needs a sweep section");
  const json& s = j.at("sweep");
  if (s.contains("eps_list")) {
    spec.eps_list = s.at("eps_list").get<std::vector<double>>();
  } else {
    const double e0 = s.at("eps_start").get<double>();
    const double e1 = s.at("eps_end").get<double>();
    const int n = s.at("points").get<int>();
    if (n < 2 || !(e0 > e1) || !(e1 > 0.0)) {
      throw ConfigError("geometric sweep needs eps_start > eps_end > 0, points >= 2");
    }
    const double rho = std::pow(e1 / e0, 1.0 / (n - 1));
    spec.eps_list.resize(n);
    for (int i = 0; i < n; ++i) spec.eps_list[i] = e0 * std::pow(rho, i);
  }
  spec.grid_check = s.value("grid_check", false);
  if (s.contains("parallelism")) {
    spec.parallelism = s.at("parallelism").get<int>();
  }
  spec.out_dir = s.value("out_dir", std::string());
  spec.validate();
  return spec;
}

json load_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    is >> j;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config parse failure: ") + e.what());
  }
  return j;
}

// ------------------------------------------------------------ report side --

json to_json(const Extended& e) {
  if (e.unbounded) return json("inf");
  return json(e.value);
}

json to_json(const ExponentReport& r) {
  json j;
  j["gamma_strauss"] = r.gamma_strauss;
  j["p_strauss"] = to_json(r.p_strauss);
  j["gamma"] = r.gamma_hwy;
  j["p_hwy"] = to_json(r.p_hwy);
  j["p_fujita"] = r.p_fujita;
  j["p_kato"] = to_json(r.p_kato);
  if (r.lifespan_exponent) {
    j["lifespan_exponent"] = *r.lifespan_exponent;
  } else {
    j["lifespan_exponent"] = nullptr;
  }
  j["tw_condition"] = {{"positive_mean", r.tw_condition.first},
                       {"zero_mean", r.tw_condition.second}};
  j["sigma_used"] = r.sigma_used;
  j["critical_lifespan"] = {{"exponent", r.critical_lifespan_exponent},
                            {"status", "conjectural"}};
  return j;
}

json to_json(const ConditionCheck& c) {
  json j;
  j["name"] = c.name;
  j["verdict"] = to_string(c.verdict);
  j[c.is_limit ? "limit" : "tail"] = c.tail;
  j["rate"] = c.rate;
  return j;
}

json to_json(const AssumptionReport& r) {
  json j;
  j["horizon"] = r.horizon;
  j["tol"] = r.tol;
  j["overall"] = to_string(r.overall());
  j["checks"] = json::array();
  for (const ConditionCheck& c : r.checks) j["checks"].push_back(to_json(c));
  return j;
}

json to_json(const AdmissibilityReport& r) {
  json j;
  j["phi_positive"] = to_json(r.phi_positive);
  j["phi_not_L1"] = to_json(r.phi_not_L1);
  j["W_L1"] = to_json(r.W_L1);
  j["horizon"] = r.horizon;
  j["tol"] = r.tol;
  j["overall"] = to_string(r.overall());
  return j;
}

json to_json(const MStarProfile& prof) {
  json j;
  j["kappa_star"] = prof.kappa_star;
  j["delta_star"] = prof.delta_star;
  j["residual_sup"] = prof.residual_sup;
  j["T_big"] = prof.T_big;
  j["grid_points"] = prof.grid.size();
  j["t_end"] = prof.grid.empty() ? 0.0 : prof.grid.back();
  return j;
}

json to_json(const CutoffBoundFit& fit) {
  json j;
  j["C"] = fit.C;
  j["C_refined"] = fit.C_refined;
  j["diverging"] = fit.diverging;
  return j;
}

json to_json(const RunOutcome& out) {
  json j;
  j["verdict"] = to_string(out.verdict);
  if (out.T_blowup) {
    j["T_blowup"] = *out.T_blowup;
  } else {
    j["T_blowup"] = nullptr;
  }
  if (out.s_blowup) j["s_blowup"] = *out.s_blowup;
  j["growth_exponent"] = out.growth_exponent;
  j["fit_points"] = out.fit_points;
  j["sup0"] = out.sup0;
  j["s_end"] = out.s_end;
  j["samples"] = out.samples.size();
  if (!out.note.empty()) j["note"] = out.note;
  return j;
}

json to_json(const IdentityTrace& trace) {
  json j;
  j["max_residual"] = trace.max_residual;
  j["scale"] = trace.scale;
  j["frames"] = trace.s.size();
  return j;
}

json to_json(const InequalityAudit& audit) {
  json j;
  j["R"] = audit.R;
  j["lhs"] = audit.lhs;
  j["rhs_shape"] = audit.rhs_shape;
  j["ratio"] = audit.ratio;
  j["C"] = audit.C;
  j["spread"] = audit.spread;
  j["pass"] = audit.pass;
  return j;
}

json to_json(const TheoremAudit& audit) {
  json j;
  j["T"] = audit.T;
  j["A_T"] = audit.A_T;
  j["lhs1"] = audit.lhs1;
  j["rhs1"] = audit.rhs1;
  j["C1"] = audit.C1;
  j["rhs2"] = audit.rhs2;
  j["C2"] = audit.C2;
  j["weighted_integral"] = audit.weighted_integral;
  return j;
}

json to_json(const FitResult& fit) {
  json j;
  j["slope"] = fit.slope;
  j["stderr"] = fit.stderr_;
  if (fit.slope_corollary) {
    j["slope_corollary"] = *fit.slope_corollary;
  } else {
    j["slope_corollary"] = nullptr;
  }
  if (fit.slope_thm1) {
    j["slope_thm1"] = *fit.slope_thm1;
  } else {
    j["slope_thm1"] = nullptr;
  }
  j["chosen"] = fit.chosen;
  j["deviation"] = fit.deviation;
  j["points_used"] = fit.points_used;
  j["curvature_discard"] = fit.curvature_discard;
  return j;
}

}  // namespace tdwave
