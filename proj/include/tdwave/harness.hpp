#pragma once

//
// Lifespan sweeps over the data amplitude eps and the log-log fit of the
// blowup time against the two candidate rates:
//
//   * the gamma-quadratic rate  T ~ eps^{-2p(p-1)/((1+alpha) gamma)}
//   * the first lifespan estimate's rate, 1/(N(1+alpha) - (p+1)/(p-1)),
//     which binds instead when the weighted-mass bound dominates (it does
//     e.g. for N = 1, constant speed).
//
// Runs are independent; a worker pool executes them and a single committer
// appends records to the CSV in eps order, flushing per record so an
// interrupted sweep loses at most the in-flight result.
//

#include <optional>
#include <string>
#include <vector>

#include "tdwave/exponents.hpp"
#include "tdwave/solver.hpp"

namespace tdwave {

struct SweepSpec {
  CoefficientModel model;
  SolverConfig solver;
  InitialData data;               // eps is overridden per run
  std::vector<double> eps_list;   // strictly decreasing, > 0
  bool grid_check = false;        // re-run each blowup at h/2
  int parallelism = 0;            // 0: hardware concurrency
  std::string out_dir;            // empty: no persistence

  void validate() const;
};

struct ExperimentRecord {
  double eps = 0.0;
  RunVerdict verdict = RunVerdict::survived;
  std::optional<double> T_blowup;
  double h = 0.0;
  double runtime_s = 0.0;
  std::string model_id;
  std::string config_hash;
  double T_half_h = 0.0;  // grid-check re-run blowup time (0 if not run)
};

struct FitResult {
  double slope = 0.0;
  double stderr_ = 0.0;
  std::optional<double> slope_corollary;  // -2p(p-1)/((1+alpha) gamma)
  std::optional<double> slope_thm1;       // 1/(N(1+alpha) - (p+1)/(p-1)) when < 0
  std::string chosen;                     // "corollary" | "thm1"
  double deviation = 0.0;                 // |slope - chosen| / |chosen|
  int points_used = 0;
  bool curvature_discard = false;         // dropped the large-eps half
};

/// FNV-1a hash of a canonical description of (model, solver, eps list),
/// rendered as 16 hex digits. Stable across runs and platforms.
std::string config_hash(const SweepSpec& spec);

/// Runs the sweep. Records are returned in eps order; when out_dir is set,
/// they are also appended to <out_dir>/records.csv as they complete.
std::vector<ExperimentRecord> lifespan_sweep(const SweepSpec& spec);

/// Least-squares slope of log T against log eps over the blowup records.
/// Discards the large-eps half when the log-log curvature is significant
/// (the rate is asymptotic in small eps). Throws ConfigError with fewer
/// than 4 blowup records.
FitResult fit_lifespan_exponent(const std::vector<ExperimentRecord>& records,
                                const ExponentQuery& query);

/// CSV persistence, columns: eps,verdict,T_blowup,h,runtime_s,model_id,config_hash.
/// T_blowup is empty for non-blowup verdicts.
void write_records_csv(const std::vector<ExperimentRecord>& records,
                       const std::string& path);
std::vector<ExperimentRecord> read_records_csv(const std::string& path);

}  // namespace tdwave
