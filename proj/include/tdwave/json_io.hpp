#pragma once

//
// JSON ingestion of experiment configs (sections: model, solver, data,
// sweep, audits) and serialization of every report type the CLI prints.
// Unbounded exponents serialize as the string "inf", absent optionals as
// null.
//

#include <string>
#include <vector>

#include <json.hpp>

#include "tdwave/exponents.hpp"
#include "tdwave/harness.hpp"
#include "tdwave/inequality.hpp"
#include "tdwave/solver.hpp"
#include "tdwave/testfn.hpp"
#include "tdwave/wkb.hpp"

namespace tdwave {

using json = nlohmann::json;

// ------------------------------------------------------------ config side --

/// Section "model": {"family": "power"|"constant"|"custom", "alpha", "mu",
/// "beta"} or {"family": "custom", "custom": {"t0", "dt", "a": [...],
/// "a1": [...], "a2": [...], "b": [...], "b1": [...]}}.
CoefficientModel model_from_json(const json& j);

/// Section "solver": N, p, h, cfl, s_max, r_max, blowup_threshold,
/// record_every (all optional except N and p).
SolverConfig solver_from_json(const json& j);

/// Section "data": {"profile": "bump", "eps", "r0"}.
InitialData data_from_json(const json& j);

/// Whole config with sections model/solver/data/sweep (eps_list or
/// geometric {eps_start, eps_end, points}), plus parallelism, out_dir,
/// grid_check.
SweepSpec sweep_from_json(const json& j);

json load_json_file(const std::string& path);

// ------------------------------------------------------------ report side --

json to_json(const Extended& e);
json to_json(const ExponentReport& r);
json to_json(const ConditionCheck& c);
json to_json(const AssumptionReport& r);
json to_json(const AdmissibilityReport& r);
json to_json(const MStarProfile& prof);       // summary, not the samples
json to_json(const CutoffBoundFit& fit);
json to_json(const RunOutcome& out);          // verdict + scalars, not series
json to_json(const IdentityTrace& trace);
json to_json(const InequalityAudit& audit);
json to_json(const TheoremAudit& audit);
json to_json(const FitResult& fit);

}  // namespace tdwave
