#include "tdwave/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>

#include "tdwave/common.hpp"
#include "tdwave/numerics.hpp"

namespace tdwave {

void SweepSpec::validate() const {
  solver.validate();
  if (eps_list.size() < 4) throw ConfigError("sweep needs >= 4 eps values");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0)) throw ConfigError("sweep eps must be positive");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1])) {
      throw ConfigError("sweep eps list must be strictly decreasing");
    }
  }
}

std::string config_hash(const SweepSpec& spec) {
  char buf[512];
  std::string canon = spec.model.id();
  std::snprintf(buf, sizeof buf,
                "|N=%d|p=%.17g|h=%.17g|cfl=%.17g|thr=%.17g|smax=%.17g|rmax=%.17g"
                "|r0=%.17g",
                spec.solver.N, spec.solver.p, spec.solver.h, spec.solver.cfl,
                spec.solver.blowup_threshold, spec.solver.s_max,
                spec.solver.r_max, spec.data.r0);
  canon += buf;
  for (double e : spec.eps_list) {
    std::snprintf(buf, sizeof buf, "|%.17g", e);
    canon += buf;
  }
  std::uint64_t hash = 1469598103934665603ull;  // FNV-1a 64
  for (unsigned char c : canon) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

namespace {

std::string record_line(const ExperimentRecord& r) {
  char buf[512];
  std::string tb;
  if (r.T_blowup) {
    char nb[64];
    std::snprintf(nb, sizeof nb, "%.12g", *r.T_blowup);
    tb = nb;
  }
  std::snprintf(buf, sizeof buf, "%.12g,%s,%s,%.12g,%.3f,%s,%s\n", r.eps,
                to_string(r.verdict).c_str(), tb.c_str(), r.h, r.runtime_s,
                r.model_id.c_str(), r.config_hash.c_str());
  return buf;
}

ExperimentRecord execute_one(const SweepSpec& spec, double eps,
                             const MStarProfile* mstar,
                             const std::string& hash) {
  ExperimentRecord rec;
  rec.eps = eps;
  rec.h = spec.solver.h;
  rec.model_id = spec.model.id();
  rec.config_hash = hash;
  InitialData data = spec.data;
  data.eps = eps;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    RunOutcome out = run(spec.model, spec.solver, data, true, mstar);
    rec.verdict = out.verdict;
    rec.T_blowup = out.T_blowup;
    if (spec.grid_check && out.verdict == RunVerdict::blowup) {
      SolverConfig fine = spec.solver;
      fine.h = spec.solver.h / 2.0;
      RunOutcome ref = run(spec.model, fine, data, true, mstar);
      if (ref.T_blowup) rec.T_half_h = *ref.T_blowup;
    }
  } catch (const std::exception&) {
    rec.verdict = RunVerdict::instability;
  }
  rec.runtime_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rec;
}

}  // namespace

std::vector<ExperimentRecord> lifespan_sweep(const SweepSpec& spec) {
  spec.validate();
  const std::string hash = config_hash(spec);
  const std::size_t n = spec.eps_list.size();

  // shared profile for Q_* bookkeeping (immutable across workers)
  std::unique_ptr<MStarProfile> mstar;
  if (std::isfinite(b_infinity(spec.model))) {
    const double t_end = inverse_A(spec.model, spec.solver.s_max) + 1.0;
    GridSpec gs;
    gs.t_end = t_end;
    gs.n = static_cast<int>(
        std::clamp(std::ceil(t_end / 2e-3) + 1.0, 2001.0, 200001.0));
    try {
      mstar = std::make_unique<MStarProfile>(
          build_m_star(spec.model, 2.0 * t_end + 10.0, gs));
    } catch (const NumericalError&) {
      // Q_* stays NaN in the series; the sweep itself is unaffected
    }
  }

  std::ofstream csv;
  if (!spec.out_dir.empty()) {
    std::filesystem::create_directories(spec.out_dir);
    csv.open(spec.out_dir + "/records.csv");
    if (!csv) throw ConfigError("cannot write records.csv in " + spec.out_dir);
    csv << "eps,verdict,T_blowup,h,runtime_s,model_id,config_hash\n";
    csv.flush();
  }

  std::vector<std::optional<ExperimentRecord>> slots(n);
  std::mutex mu;
  std::condition_variable cv;
  std::atomic<std::size_t> next_task{0};

  int workers = spec.parallelism > 0
                    ? spec.parallelism
                    : static_cast<int>(std::max(
                          1u, std::thread::hardware_concurrency()));
  workers = std::min<int>(workers, static_cast<int>(n));

  auto body = [&]() {
    for (;;) {
      const std::size_t i = next_task.fetch_add(1);
      if (i >= n) return;
      ExperimentRecord rec =
          execute_one(spec, spec.eps_list[i], mstar.get(), hash);
      {
        std::lock_guard<std::mutex> lock(mu);
        slots[i] = std::move(rec);
      }
      cv.notify_all();
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int i = 0; i < workers; ++i) pool.emplace_back(body);

  // commit in eps order as results land — the record stream on disk is
  // deterministic regardless of worker scheduling
  std::vector<ExperimentRecord> records;
  records.reserve(n);
  {
    std::unique_lock<std::mutex> lock(mu);
    for (std::size_t i = 0; i < n; ++i) {
      cv.wait(lock, [&] { return slots[i].has_value(); });
      records.push_back(*slots[i]);
      if (csv.is_open()) {
        csv << record_line(records.back());
        csv.flush();
      }
    }
  }
  for (auto& th : pool) th.join();
  return records;
}

FitResult fit_lifespan_exponent(const std::vector<ExperimentRecord>& records,
                                const ExponentQuery& query) {
  std::vector<double> le, lt;
  for (const ExperimentRecord& r : records) {
    if (r.verdict == RunVerdict::blowup && r.T_blowup && *r.T_blowup > 0.0) {
      le.push_back(std::log(r.eps));
      lt.push_back(std::log(*r.T_blowup));
    }
  }
  if (le.size() < 4) {
    throw ConfigError("lifespan fit needs >= 4 blowup records");
  }

  FitResult fit;
  // the rate is asymptotic in small eps: drop the large-eps half when the
  // log-log relation is visibly curved
  std::vector<double> ue = le, ut = lt;
  if (le.size() >= 6) {
    const QuadraticFit qf = fit_quadratic(le, lt);
    if (qf.c2_stderr > 0.0 && std::abs(qf.c2) > 2.0 * qf.c2_stderr) {
      // records arrive sorted by decreasing eps; keep the small-eps half
      const std::size_t keep = std::max<std::size_t>(4, le.size() / 2);
      ue.assign(le.end() - keep, le.end());
      ut.assign(lt.end() - keep, lt.end());
      fit.curvature_discard = true;
    }
  }
  const LineFit lf = fit_line(ue, ut);
  fit.slope = lf.slope;
  fit.stderr_ = lf.slope_stderr;
  fit.points_used = static_cast<int>(ue.size());

  if (auto ex = lifespan_exponent(query.nu, query.alpha, query.p)) {
    fit.slope_corollary = -*ex;
  }
  const double denom =
      query.nu * (1.0 + query.alpha) - (query.p + 1.0) / (query.p - 1.0);
  if (denom < 0.0) fit.slope_thm1 = 1.0 / denom;

  auto dev = [&](std::optional<double> cand) {
    return cand ? std::abs(fit.slope - *cand) / std::abs(*cand)
                : std::numeric_limits<double>::infinity();
  };
  const double d_cor = dev(fit.slope_corollary);
  const double d_thm = dev(fit.slope_thm1);
  if (d_thm < d_cor) {
    fit.chosen = "thm1";
    fit.deviation = d_thm;
  } else {
    fit.chosen = "corollary";
    fit.deviation = d_cor;
  }
  if (!fit.slope_corollary && !fit.slope_thm1) {
    fit.chosen = "none";
    fit.deviation = 0.0;
  }
  return fit;
}

void write_records_csv(const std::vector<ExperimentRecord>& records,
                       const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open " + path);
  os << "eps,verdict,T_blowup,h,runtime_s,model_id,config_hash\n";
  for (const ExperimentRecord& r : records) os << record_line(r);
}

std::vector<ExperimentRecord> read_records_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open " + path);
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("empty records file " + path);
  std::vector<ExperimentRecord> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cols.push_back(cell);
    while (cols.size() < 7) cols.emplace_back();
    ExperimentRecord r;
    r.eps = std::stod(cols[0]);
    if (cols[1] == "blowup") r.verdict = RunVerdict::blowup;
    else if (cols[1] == "survived") r.verdict = RunVerdict::survived;
    else if (cols[1] == "boundary_breach") r.verdict = RunVerdict::boundary_breach;
    else r.verdict = RunVerdict::instability;
    if (!cols[2].empty()) r.T_blowup = std::stod(cols[2]);
    if (!cols[3].empty()) r.h = std::stod(cols[3]);
    if (!cols[4].empty()) r.runtime_s = std::stod(cols[4]);
    r.model_id = cols[5];
    r.config_hash = cols[6];
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace tdwave
