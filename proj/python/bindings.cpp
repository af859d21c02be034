//
// Python bindings for the main operations: exponent algebra, the decaying
// mode profile, cutoff verification, the initial-value solver, sweeps, and
// fits. Report types map to plain dicts via the JSON serializers.
//

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tdwave/common.hpp"
#include "tdwave/harness.hpp"
#include "tdwave/inequality.hpp"
#include "tdwave/json_io.hpp"

namespace py = pybind11;
using namespace tdwave;

namespace {

py::object json_to_py(const json& j) {
  switch (j.type()) {
    case json::value_t::null:
      return py::none();
    case json::value_t::boolean:
      return py::bool_(j.get<bool>());
    case json::value_t::number_integer:
    case json::value_t::number_unsigned:
      return py::int_(j.get<long long>());
    case json::value_t::number_float:
      return py::float_(j.get<double>());
    case json::value_t::string:
      return py::str(j.get<std::string>());
    case json::value_t::array: {
      py::list lst;
      for (const auto& item : j) lst.append(json_to_py(item));
      return lst;
    }
    case json::value_t::object: {
      py::dict d;
      for (auto it = j.begin(); it != j.end(); ++it) {
        d[py::str(it.key())] = json_to_py(it.value());
      }
      return d;
    }
    default:
      return py::none();
  }
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "variable-speed damped wave blowup laboratory";

  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<NumericalError>(m, "NumericalError");

  py::class_<CoefficientModel>(m, "CoefficientModel")
      .def_readonly("alpha", &CoefficientModel::alpha)
      .def_readonly("mu", &CoefficientModel::mu)
      .def_readonly("beta", &CoefficientModel::beta)
      .def("a", &CoefficientModel::a)
      .def("b", &CoefficientModel::b)
      .def("id", &CoefficientModel::id);

  m.def("make_power_law", &make_power_law, py::arg("alpha"), py::arg("mu"),
        py::arg("beta") = 2.0);
  m.def("primitive_A", [](const CoefficientModel& mod, double t) {
    return primitive_A(mod, t);
  });
  m.def("primitive_B", [](const CoefficientModel& mod, double t) {
    return primitive_B(mod, t);
  });
  m.def("b_star", [](const CoefficientModel& mod, double t) {
    return b_star(mod, t);
  });
  m.def("check_assumptions",
        [](const CoefficientModel& mod, double horizon, double tol) {
          return json_to_py(to_json(check_assumptions(mod, horizon, tol)));
        },
        py::arg("model"), py::arg("horizon"), py::arg("tol") = 2e-2);

  m.def("exponent_report",
        [](double nu, double alpha, double p, double mu) {
          ExponentQuery q;
          q.nu = nu;
          q.alpha = alpha;
          q.p = p;
          q.mu = mu;
          return json_to_py(to_json(evaluate(q)));
        },
        py::arg("nu"), py::arg("alpha"), py::arg("p"), py::arg("mu") = 0.0);
  m.def("gamma_hwy", &gamma_hwy);
  m.def("p_hwy", [](double nu, double alpha) {
    const Extended e = p_hwy(nu, alpha);
    return json_to_py(to_json(e));
  });

  m.def("build_m_star",
        [](const CoefficientModel& mod, double T_big, double t_end, int n) {
          GridSpec grid;
          grid.t_end = t_end;
          grid.n = n;
          return json_to_py(to_json(build_m_star(mod, T_big, grid)));
        },
        py::arg("model"), py::arg("T_big"), py::arg("t_end") = 30.0,
        py::arg("n") = 150001);

  m.def("phi", &phi, py::arg("N"), py::arg("r"));
  m.def("verify_cutoff_bounds",
        [](const CoefficientModel& mod, double R, double p) {
          return json_to_py(to_json(verify_cutoff_bounds(make_cutoff(mod, R, p))));
        },
        py::arg("model"), py::arg("R"), py::arg("p"));
  m.def("yz_norm_bound",
        [](int N, double p, double r0, const CoefficientModel& mod, double t) {
          const YzNormResult yz = yz_norm_bound(N, p, r0, mod, t);
          py::dict d;
          d["measured_log"] = yz.measured_log;
          d["bound_log"] = yz.bound_log;
          d["ratio"] = yz.ratio;
          return d;
        });

  m.def("simulate",
        [](const CoefficientModel& mod, int N, double p, double h, double s_max,
           double eps, bool nonlinear, double cfl) {
          SolverConfig cfg;
          cfg.N = N;
          cfg.p = p;
          cfg.h = h;
          cfg.s_max = s_max;
          cfg.cfl = cfl;
          const RunOutcome out = run(mod, cfg, bump_data(eps), nonlinear);
          py::dict d = json_to_py(to_json(out));
          py::list series;
          for (const RunSample& s : out.samples) {
            py::dict row;
            row["s"] = s.s;
            row["t"] = s.t;
            row["sup_u"] = s.sup_u;
            row["support_r"] = s.support_r;
            row["Q1"] = s.q1;
            row["Qstar"] = s.qstar;
            row["mass"] = s.mass;
            series.append(row);
          }
          d["series"] = series;
          return d;
        },
        py::arg("model"), py::arg("N"), py::arg("p"), py::arg("h"),
        py::arg("s_max"), py::arg("eps"), py::arg("nonlinear") = true,
        py::arg("cfl") = 0.45);

  m.def("lifespan_sweep",
        [](const CoefficientModel& mod, int N, double p, double h,
           double s_max, std::vector<double> eps_list, int parallelism) {
          SweepSpec spec;
          spec.model = mod;
          spec.solver.N = N;
          spec.solver.p = p;
          spec.solver.h = h;
          spec.solver.s_max = s_max;
          spec.data = bump_data(1.0);
          spec.eps_list = std::move(eps_list);
          spec.parallelism = parallelism;
          const auto records = lifespan_sweep(spec);
          py::list rows;
          for (const ExperimentRecord& r : records) {
            py::dict row;
            row["eps"] = r.eps;
            row["verdict"] = to_string(r.verdict);
            row["T_blowup"] =
                r.T_blowup ? py::object(py::float_(*r.T_blowup))
                           : py::object(py::none());
            row["h"] = r.h;
            rows.append(row);
          }
          return rows;
        },
        py::arg("model"), py::arg("N"), py::arg("p"), py::arg("h"),
        py::arg("s_max"), py::arg("eps_list"), py::arg("parallelism") = 0);

  m.def("fit_lifespan_exponent",
        [](std::vector<std::pair<double, double>> eps_T, double nu,
           double alpha, double p) {
          std::vector<ExperimentRecord> records;
          for (const auto& [eps, T] : eps_T) {
            ExperimentRecord r;
            r.eps = eps;
            r.verdict = RunVerdict::blowup;
            r.T_blowup = T;
            records.push_back(r);
          }
          ExponentQuery q;
          q.nu = nu;
          q.alpha = alpha;
          q.p = p;
          return json_to_py(to_json(fit_lifespan_exponent(records, q)));
        },
        py::arg("eps_T"), py::arg("nu"), py::arg("alpha"), py::arg("p"));
}
