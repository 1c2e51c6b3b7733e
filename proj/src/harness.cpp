#include "obilevel/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include "obilevel/baselines.hpp"
#include "obilevel/sogd.hpp"
#include "obilevel/zo_sogd.hpp"

namespace obilevel {

namespace {

using nlohmann::json;

const char* kCsvHeader = "t,alpha_t,blreg_summand,blreg_cum,V_cum,H2_cum,D_cum,G_cum,x_norm,y_err,v_err";

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::optional<Vec> read_vec(const json& doc, const char* key) {
  if (!doc.contains(key)) return std::nullopt;
  const json& arr = doc.at(key);
  Vec v(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) v[static_cast<Index>(i)] = arr[i].get<double>();
  return v;
}

SmoothnessProfile profile_from_json(const json& p) {
  SmoothnessProfile pr;
  pr.mu_g = p.value("mu_g", 0.0);
  pr.ell_f0 = p.value("ell_f0", 0.0);
  pr.ell_f1 = p.value("ell_f1", 0.0);
  pr.ell_g1 = p.value("ell_g1", 0.0);
  pr.ell_g2 = p.value("ell_g2", 0.0);
  return pr;
}

bool known_problem(const std::string& name) {
  return name == "drifting-quadratic" || name == "least-squares-drift" || name == "demo-cosine";
}

unsigned worker_count(std::size_t jobs) {
  unsigned n = std::thread::hardware_concurrency();
  if (const char* env = std::getenv("OBILEVEL_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) n = static_cast<unsigned>(v);
  }
  if (n < 1) n = 1;
  return static_cast<unsigned>(std::min<std::size_t>(n, jobs));
}

}  // namespace

std::string algo_name(Algo a) {
  switch (a) {
    case Algo::sogd: return "sogd";
    case Algo::zo_sogd: return "zo-sogd";
    case Algo::ogd: return "ogd";
    case Algo::ema_ogd: return "ema-ogd";
  }
  return "?";
}

std::vector<std::string> validate_config(const json& doc) {
  std::vector<std::string> diags;
  auto push = [&](const std::string& msg) { diags.push_back(msg); };

  if (!doc.is_object()) {
    push("config must be a JSON object");
    return diags;
  }

  std::string problem_name;
  if (!doc.contains("problem") || !doc["problem"].is_object() ||
      !doc["problem"].contains("name")) {
    push("missing problem.name");
  } else {
    problem_name = doc["problem"]["name"].get<std::string>();
    if (!known_problem(problem_name)) push("unknown problem '" + problem_name + "'");
    if (doc["problem"].value("dim", 1) < 1) push("problem.dim must be >= 1");
    if (doc["problem"].value("freeze_at", 0) < 0) push("problem.freeze_at must be >= 0");
  }

  std::string algo;
  if (!doc.contains("algorithm")) {
    push("missing algorithm");
  } else {
    algo = doc["algorithm"].get<std::string>();
    if (algo != "sogd" && algo != "zo-sogd" && algo != "ogd" && algo != "ema-ogd")
      push("unknown algorithm '" + algo + "'");
  }
  if (problem_name == "demo-cosine" && !algo.empty())
    push("problem 'demo-cosine' has no outer objective and cannot drive a run");

  if (!doc.contains("T")) {
    push("missing T");
  } else if (!doc["T"].is_number_integer() || doc["T"].get<long>() < 1) {
    push("T must be an integer >= 1");
  }

  if (!doc.contains("seeds") || !doc["seeds"].is_array() || doc["seeds"].empty())
    push("seeds must be a nonempty integer array");

  if (doc.value("noise_std", 0.0) < 0.0) push("noise_std must be >= 0");

  if (!doc.contains("schedule") || !doc["schedule"].is_object()) {
    push("missing schedule");
    return diags;
  }
  const json& sched = doc["schedule"];
  std::string mode = sched.value("mode", "");
  if (mode != "theory" && mode != "manual") {
    push("schedule.mode must be 'theory' or 'manual'");
    return diags;
  }
  const bool needs_full_schedule = (algo == "sogd" || algo == "zo-sogd");
  if (mode == "theory") {
    if (!sched.contains("profile")) {
      push("theory mode requires schedule.profile (SmoothnessProfile)");
    } else {
      try {
        profile_from_json(sched["profile"]).validate();
      } catch (const Error& e) {
        push(std::string("schedule.profile: ") + e.what());
      }
    }
  } else if (needs_full_schedule) {
    for (const char* key : {"c", "c_beta", "c_delta", "c_gamma", "c_eta", "c_lambda"})
      if (!sched.contains(key)) push(std::string("missing ") + key);
    if (algo == "zo-sogd" && !sched.contains("c_v")) push("missing c_v");
    for (const char* key : {"c", "c_beta", "c_delta", "c_gamma", "c_eta", "c_lambda", "c_v", "p"})
      if (sched.contains(key) && !(sched[key].get<double>() > 0))
        push(std::string(key) + " must be positive");
  } else {
    if (!sched.contains("c"))
      push("missing c");
    else if (!(sched["c"].get<double>() > 0))
      push("c must be positive");
  }
  if (algo == "ema-ogd") {
    double eta = doc.value("ema_eta", 0.0);
    if (!(eta > 0.0) || eta > 1.0) push("ema_eta must lie in (0, 1]");
  }
  if (doc.contains("grid") && doc["grid"].value("points_per_dim", 129) < 2)
    push("grid.points_per_dim must be >= 2");
  return diags;
}

RunConfig parse_config(const json& doc) {
  std::vector<std::string> diags = validate_config(doc);
  if (!diags.empty()) {
    std::string all;
    for (const auto& d : diags) {
      if (!all.empty()) all += "; ";
      all += d;
    }
    fail(Errc::invalid_config, all);
  }

  RunConfig cfg;
  const json& prob = doc["problem"];
  cfg.problem.name = prob["name"].get<std::string>();
  cfg.problem.dim = prob.value("dim", 1);
  cfg.problem.a1_scale = prob.value("a1_scale", 1.0);
  cfg.problem.a2_scale = prob.value("a2_scale", 1.0);
  cfg.problem.freeze_at = prob.value("freeze_at", 0);

  std::string algo = doc["algorithm"].get<std::string>();
  cfg.algo = algo == "sogd"      ? Algo::sogd
             : algo == "zo-sogd" ? Algo::zo_sogd
             : algo == "ogd"     ? Algo::ogd
                                 : Algo::ema_ogd;

  cfg.T = doc["T"].get<long>();
  cfg.seeds.clear();
  for (const auto& s : doc["seeds"]) cfg.seeds.push_back(s.get<std::uint64_t>());
  cfg.noise_std = doc.value("noise_std", 0.0);
  cfg.out_dir = doc.value("output", "out");
  cfg.ema_eta = doc.value("ema_eta", 0.5);

  const json& sched = doc["schedule"];
  cfg.theory_mode = sched.value("mode", "manual") == "theory";
  if (cfg.theory_mode) cfg.profile = profile_from_json(sched["profile"]);
  cfg.manual.c = sched.value("c", 2.0);
  cfg.manual.c_beta = sched.value("c_beta", 1.0);
  cfg.manual.c_delta = sched.value("c_delta", 1.0);
  cfg.manual.c_gamma = sched.value("c_gamma", 1.0);
  cfg.manual.c_eta = sched.value("c_eta", 1.0);
  cfg.manual.c_lambda = sched.value("c_lambda", 1.0);
  cfg.manual.c_v = sched.value("c_v", 1.0);
  if (sched.contains("p")) {
    cfg.manual.p = sched["p"].get<double>();
    cfg.p_given = true;
  }

  if (doc.contains("init")) {
    cfg.x0 = read_vec(doc["init"], "x");
    cfg.y0 = read_vec(doc["init"], "y");
    cfg.v0 = read_vec(doc["init"], "v");
  }
  if (doc.contains("grid")) {
    cfg.grid.points_per_dim = doc["grid"].value("points_per_dim", 129);
    cfg.grid.y_half_width = doc["grid"].value("y_half_width", 2.0);
  }
  return cfg;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_failure, "cannot open " + path);
  json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    fail(Errc::invalid_config, std::string("JSON parse error: ") + e.what());
  }
  return doc;
}

std::unique_ptr<BilevelOracle> make_oracle(const ProblemSpec& spec, double noise_std) {
  if (spec.name == "drifting-quadratic") {
    DriftingQuadratic::Options o;
    o.dim = spec.dim;
    o.noise_std = noise_std;
    o.a1_scale = spec.a1_scale;
    o.a2_scale = spec.a2_scale;
    o.freeze_at = spec.freeze_at;
    return std::make_unique<DriftingQuadratic>(o);
  }
  if (spec.name == "least-squares-drift") return std::make_unique<LeastSquaresDrift>(noise_std);
  if (spec.name == "demo-cosine") return std::make_unique<DemoCosine>(noise_std);
  fail(Errc::invalid_config, "unknown problem '" + spec.name + "'");
}

Schedule make_schedule(const RunConfig& cfg, const BilevelOracle& oracle) {
  const int d1 = static_cast<int>(oracle.dim_x());
  const int d2 = static_cast<int>(oracle.dim_y());
  if (cfg.theory_mode) {
    if (!cfg.profile) fail(Errc::invalid_config, "theory mode requires a smoothness profile");
    if (cfg.algo == Algo::zo_sogd)
      return Schedule::zeroth_order_theory(*cfg.profile, cfg.T, d1, d2);
    return Schedule::first_order_theory(*cfg.profile, cfg.T);
  }
  ManualConstants k = cfg.manual;
  if (!cfg.p_given) {
    SmoothnessProfile pr = oracle.profile();
    k.p = pr.ell_f0 / pr.mu_g;
  }
  if (cfg.algo == Algo::zo_sogd) return Schedule::zeroth_order(k, cfg.T, d1, d2);
  return Schedule::first_order(k, cfg.T);
}

double median_of(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  std::size_t n = values.size();
  return (n % 2 == 1) ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

namespace {

Spread spread_of(const std::vector<double>& v) {
  Spread s;
  if (v.empty()) return s;
  s.median = median_of(v);
  s.min = *std::min_element(v.begin(), v.end());
  s.max = *std::max_element(v.begin(), v.end());
  return s;
}

struct InitialState {
  TriState z;
};

InitialState initial_state(const RunConfig& cfg, const BilevelOracle& oracle, double p) {
  TriState z;
  FeasibleSet xset = oracle.leader_set();
  if (cfg.x0) {
    z.x = *cfg.x0;
  } else if (const Box* box = std::get_if<Box>(&xset)) {
    z.x = 0.5 * (box->lower + box->upper);
  } else {
    z.x = Vec::Zero(oracle.dim_x());
  }
  z.y = cfg.y0 ? *cfg.y0 : Vec::Zero(oracle.dim_y());
  z.v = cfg.v0 ? *cfg.v0 : Vec::Zero(oracle.dim_y());
  if (z.x.size() != oracle.dim_x() || z.y.size() != oracle.dim_y() ||
      z.v.size() != oracle.dim_y())
    fail(Errc::invalid_config, "init vectors do not match the problem dimensions");
  if (!contains(xset, z.x, 1e-12)) fail(Errc::invalid_config, "init.x lies outside the leader set");
  if (z.v.norm() > p) fail(Errc::invalid_config, "init.v lies outside the radius-p ball");
  return InitialState{z};
}

SeedResult run_seed(const RunConfig& cfg, const BilevelOracle& oracle, const Schedule& sched,
                    std::uint64_t seed, const std::string& csv_path) {
  SeedResult res;
  res.seed = seed;
  res.csv_file = csv_path;

  std::ofstream csv(csv_path, std::ios::binary);
  if (!csv) fail(Errc::io_failure, "cannot open " + csv_path + " for writing");
  csv << kCsvHeader << "\n";

  const double p = sched.at(1).p;
  SogdConfig scfg{oracle.leader_set(), p};
  TriState z = initial_state(cfg, oracle, p).z;
  MomentumState mem;
  EmaState ema;
  RegretLedger ledger(cfg.grid);

  const bool oracle_inner = (cfg.algo == Algo::ogd || cfg.algo == Algo::ema_ogd);
  bool diverged = false;
  for (long t = 1; t <= cfg.T; ++t) {
    ScheduleEntry e = sched.at(t);
    if (oracle_inner) {
      // Baselines track the follower with a per-round oracle solve.
      z.y = oracle.has_ground_truth() ? oracle.inner_opt(t, z.x) : solve_inner_gd(oracle, t, z.x);
      z.v = oracle.has_ground_truth() ? oracle.system_opt(t, z.x)
                                      : solve_system_cg(oracle, t, z.x, z.y);
    }
    RoundRecord rec = ledger.record_round(oracle, t, z.x, z.y, z.v, e.alpha, e.rho_v);
    csv << t << ',' << fmt17(e.alpha) << ',' << fmt17(rec.blreg_summand) << ','
        << fmt17(rec.blreg_cum) << ',' << fmt17(rec.V_cum) << ',' << fmt17(rec.H2_cum) << ','
        << fmt17(rec.D_cum) << ',' << fmt17(rec.G_cum) << ',' << fmt17(z.x.norm()) << ','
        << fmt17(rec.y_err) << ',' << fmt17(rec.v_err) << "\n";
    res.rounds_completed = t;
    RoundContext ctx{t, seed};
    try {
      switch (cfg.algo) {
        case Algo::sogd:
          sogd_step(oracle, ctx, e, scfg, z, mem);
          break;
        case Algo::zo_sogd:
          zo_sogd_step(oracle, ctx, e, scfg, z, mem);
          break;
        case Algo::ogd:
          z.x = ogd_step(oracle, t, z.x, e.alpha);
          break;
        case Algo::ema_ogd:
          z.x = ema_ogd_step(oracle, t, z.x, ema, e.alpha, cfg.ema_eta);
          break;
      }
    } catch (const Error& err) {
      if (err.code() != Errc::divergence) throw;
      diverged = true;
      break;
    }
  }
  csv.close();

  res.diverged = diverged;
  res.final_blreg = ledger.blreg();
  res.avg_blreg = res.rounds_completed > 0 ? ledger.blreg() / res.rounds_completed : 0.0;
  res.delta_T = ledger.delta_T();
  res.psi_T = ledger.psi_T();
  res.e1 = ledger.e1();
  if (!diverged && cfg.T >= 100) {
    bool degenerate = false;
    res.exponent = regret_exponent(ledger.blreg_cum_trace(), &degenerate);
    if (degenerate) res.exponent.reset();
  }
  return res;
}

}  // namespace

json summary_to_json(const RunSummary& s) {
  auto spread_json = [](const Spread& sp) {
    return json{{"median", sp.median}, {"min", sp.min}, {"max", sp.max}};
  };
  json per_seed = json::array();
  for (const SeedResult& r : s.per_seed) {
    json e{{"seed", r.seed},
           {"final_blreg", r.final_blreg},
           {"avg_blreg", r.avg_blreg},
           {"delta_T", r.delta_T},
           {"psi_T", r.psi_T},
           {"e1", r.e1},
           {"rounds_completed", r.rounds_completed},
           {"diverged", r.diverged},
           {"csv_file", r.csv_file}};
    if (r.exponent)
      e["regret_exponent"] = *r.exponent;
    else
      e["regret_exponent"] = nullptr;
    per_seed.push_back(e);
  }
  json out{{"algorithm", s.algorithm},
           {"problem", s.problem},
           {"T", s.T},
           {"final_blreg", spread_json(s.final_blreg)},
           {"avg_blreg", spread_json(s.avg_blreg)},
           {"delta_T", spread_json(s.delta_T)},
           {"psi_T", spread_json(s.psi_T)},
           {"wall_seconds", s.wall_seconds},
           {"per_seed", per_seed},
           {"diverged_seeds", s.diverged_seeds}};
  if (s.exponent)
    out["regret_exponent"] = spread_json(*s.exponent);
  else
    out["regret_exponent"] = nullptr;
  return out;
}

RunSummary run(const RunConfig& cfg) {
  if (cfg.T < 1) fail(Errc::invalid_config, "T must be >= 1");
  if (cfg.seeds.empty()) fail(Errc::invalid_config, "at least one seed is required");

  auto start = std::chrono::steady_clock::now();
  std::unique_ptr<BilevelOracle> oracle = make_oracle(cfg.problem, cfg.noise_std);
  Schedule sched = make_schedule(cfg, *oracle);

  std::filesystem::create_directories(cfg.out_dir);

  std::vector<SeedResult> results(cfg.seeds.size());
  std::vector<std::string> errors(cfg.seeds.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= cfg.seeds.size()) return;
      std::string path =
          (std::filesystem::path(cfg.out_dir) / ("seed_" + std::to_string(cfg.seeds[i]) + ".csv"))
              .string();
      try {
        results[i] = run_seed(cfg, *oracle, sched, cfg.seeds[i], path);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  unsigned n_workers = worker_count(cfg.seeds.size());
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const std::string& e : errors)
    if (!e.empty()) fail(Errc::solver_failure, e);

  RunSummary summary;
  summary.algorithm = algo_name(cfg.algo);
  summary.problem = cfg.problem.name;
  summary.T = cfg.T;
  summary.per_seed = results;
  std::vector<double> fin, avg, del, psi, expo;
  for (const SeedResult& r : results) {
    fin.push_back(r.final_blreg);
    avg.push_back(r.avg_blreg);
    del.push_back(r.delta_T);
    psi.push_back(r.psi_T);
    if (r.exponent) expo.push_back(*r.exponent);
    if (r.diverged) summary.diverged_seeds.push_back(r.seed);
  }
  summary.final_blreg = spread_of(fin);
  summary.avg_blreg = spread_of(avg);
  summary.delta_T = spread_of(del);
  summary.psi_T = spread_of(psi);
  if (!expo.empty()) summary.exponent = spread_of(expo);
  summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::ofstream sj((std::filesystem::path(cfg.out_dir) / "summary.json").string(),
                   std::ios::binary);
  sj << summary_to_json(summary).dump(2) << "\n";
  sj.close();

  // Divergence is reported through diverged_seeds rather than an exception:
  // partial CSVs and the summary are already flushed at this point.
  return summary;
}

}  // namespace obilevel
