#ifndef OBILEVEL_HARNESS_HPP
#define OBILEVEL_HARNESS_HPP

#include <json.hpp>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "obilevel/metrics.hpp"
#include "obilevel/problems.hpp"
#include "obilevel/schedules.hpp"

namespace obilevel {

enum class Algo { sogd, zo_sogd, ogd, ema_ogd };

std::string algo_name(Algo a);

struct ProblemSpec {
  std::string name = "drifting-quadratic";
  int dim = 1;
  double a1_scale = 1.0;
  double a2_scale = 1.0;
  long freeze_at = 0;
};

struct RunConfig {
  ProblemSpec problem;
  Algo algo = Algo::sogd;
  bool theory_mode = false;
  std::optional<SmoothnessProfile> profile;  // required in theory mode
  ManualConstants manual;
  bool p_given = false;  // manual.p untouched when false: instance default applies
  long T = 1;
  std::vector<std::uint64_t> seeds{1};
  double noise_std = 0.0;
  std::string out_dir = "out";
  double ema_eta = 0.5;
  std::optional<Vec> x0, y0, v0;
  GridSpec grid;
};

// Diagnostics are empty iff run() would accept the document. Each entry names
// the offending field.
std::vector<std::string> validate_config(const nlohmann::json& doc);
RunConfig parse_config(const nlohmann::json& doc);
nlohmann::json load_json_file(const std::string& path);

std::unique_ptr<BilevelOracle> make_oracle(const ProblemSpec& spec, double noise_std);
Schedule make_schedule(const RunConfig& cfg, const BilevelOracle& oracle);

struct SeedResult {
  std::uint64_t seed = 0;
  double final_blreg = 0;
  double avg_blreg = 0;
  std::optional<double> exponent;
  double delta_T = 0;
  double psi_T = 0;
  double e1 = 0;
  long rounds_completed = 0;
  bool diverged = false;
  std::string csv_file;
};

struct Spread {
  double median = 0, min = 0, max = 0;
};

struct RunSummary {
  std::string algorithm, problem;
  long T = 0;
  Spread final_blreg, avg_blreg, delta_T, psi_T;
  std::optional<Spread> exponent;
  double wall_seconds = 0;
  std::vector<SeedResult> per_seed;
  std::vector<std::uint64_t> diverged_seeds;
};

nlohmann::json summary_to_json(const RunSummary& s);

// Execute every (seed) run, stream one CSV per seed into cfg.out_dir, write
// summary.json alongside. A diverged seed aborts its own run with the CSV
// flushed up to the failing round and is listed in diverged_seeds. Seed-level
// parallelism is controlled by the OBILEVEL_THREADS environment variable.
RunSummary run(const RunConfig& cfg);

double median_of(std::vector<double> values);

}  // namespace obilevel

#endif
