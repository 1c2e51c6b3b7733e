#include "obilevel/obilevel.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "obilevel/harness.hpp"

using nlohmann::json;

struct obl_config_s {
  obilevel::RunConfig cfg;
};

namespace {

thread_local std::string g_last_error;

obl_status status_from(const obilevel::Error& e) {
  using obilevel::Errc;
  switch (e.code()) {
    case Errc::dimension_mismatch: return OBL_E_DIMENSION;
    case Errc::non_finite: return OBL_E_NONFINITE;
    case Errc::infeasible_point: return OBL_E_INFEASIBLE;
    case Errc::invalid_config: return OBL_E_CONFIG;
    case Errc::unsupported: return OBL_E_UNSUPPORTED;
    case Errc::divergence: return OBL_E_DIVERGED;
    case Errc::solver_failure: return OBL_E_SOLVER;
    case Errc::io_failure: return OBL_E_IO;
    default: return OBL_E_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <class Fn>
obl_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const obilevel::Error& e) {
    g_last_error = e.what();
    return status_from(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return OBL_E_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return OBL_E_INTERNAL;
  }
}

}  // namespace

extern "C" {

obl_status obl_config_from_json(const char* json_utf8, obl_config_t** out) {
  if (json_utf8 == nullptr || out == nullptr) {
    g_last_error = "null argument";
    return OBL_E_NULL;
  }
  *out = nullptr;
  return guarded([&]() -> obl_status {
    json doc;
    try {
      doc = json::parse(json_utf8);
    } catch (const std::exception& e) {
      g_last_error = std::string("JSON parse error: ") + e.what();
      return OBL_E_CONFIG;
    }
    auto* handle = new obl_config_s{obilevel::parse_config(doc)};
    *out = handle;
    return OBL_OK;
  });
}

obl_status obl_config_from_file(const char* path, obl_config_t** out) {
  if (path == nullptr || out == nullptr) {
    g_last_error = "null argument";
    return OBL_E_NULL;
  }
  *out = nullptr;
  return guarded([&]() -> obl_status {
    json doc = obilevel::load_json_file(path);
    auto* handle = new obl_config_s{obilevel::parse_config(doc)};
    *out = handle;
    return OBL_OK;
  });
}

void obl_config_free(obl_config_t* cfg) { delete cfg; }

obl_status obl_config_override_seeds(obl_config_t* cfg, const uint64_t* seeds, size_t count) {
  if (cfg == nullptr || (seeds == nullptr && count > 0)) {
    g_last_error = "null argument";
    return OBL_E_NULL;
  }
  if (count == 0) {
    g_last_error = "seed override must contain at least one seed";
    return OBL_E_CONFIG;
  }
  cfg->cfg.seeds.assign(seeds, seeds + count);
  return OBL_OK;
}

obl_status obl_config_set_output_dir(obl_config_t* cfg, const char* dir) {
  if (cfg == nullptr || dir == nullptr) {
    g_last_error = "null argument";
    return OBL_E_NULL;
  }
  cfg->cfg.out_dir = dir;
  return OBL_OK;
}

obl_status obl_validate_json(const char* json_utf8, char** diagnostics_json) {
  if (json_utf8 == nullptr || diagnostics_json == nullptr) {
    g_last_error = "null argument";
    return OBL_E_NULL;
  }
  *diagnostics_json = nullptr;
  return guarded([&]() -> obl_status {
    json doc;
    try {
      doc = json::parse(json_utf8);
    } catch (const std::exception& e) {
      json diags = json::array();
      diags.push_back(std::string("JSON parse error: ") + e.what());
      *diagnostics_json = dup_string(diags.dump());
      return OBL_OK;
    }
    json diags = obilevel::validate_config(doc);
    *diagnostics_json = dup_string(diags.dump());
    return OBL_OK;
  });
}

obl_status obl_run(const obl_config_t* cfg, char** summary_json) {
  if (cfg == nullptr || summary_json == nullptr) {
    g_last_error = "null argument";
    return OBL_E_NULL;
  }
  *summary_json = nullptr;
  return guarded([&]() -> obl_status {
    obilevel::RunSummary summary = obilevel::run(cfg->cfg);
    *summary_json = dup_string(obilevel::summary_to_json(summary).dump(2));
    if (!summary.diverged_seeds.empty()) {
      g_last_error = "run diverged for " + std::to_string(summary.diverged_seeds.size()) +
                     " seed(s); partial CSVs were flushed";
      return OBL_E_DIVERGED;
    }
    return OBL_OK;
  });
}

obl_status obl_constants(const char* profile_json, int d1, int d2, char** ledger_json) {
  if (profile_json == nullptr || ledger_json == nullptr) {
    g_last_error = "null argument";
    return OBL_E_NULL;
  }
  *ledger_json = nullptr;
  return guarded([&]() -> obl_status {
    json doc;
    try {
      doc = json::parse(profile_json);
    } catch (const std::exception& e) {
      g_last_error = std::string("JSON parse error: ") + e.what();
      return OBL_E_CONFIG;
    }
    obilevel::SmoothnessProfile pr;
    pr.mu_g = doc.value("mu_g", 0.0);
    pr.ell_f0 = doc.value("ell_f0", 0.0);
    pr.ell_f1 = doc.value("ell_f1", 0.0);
    pr.ell_g1 = doc.value("ell_g1", 0.0);
    pr.ell_g2 = doc.value("ell_g2", 0.0);
    obilevel::ConstantLedger k = obilevel::derived_constants(pr);
    json out{{"first_order",
              {{"M_f", k.M_f},
               {"M_v", k.M_v},
               {"L_y", k.L_y},
               {"L_v", k.L_v},
               {"L_f", k.L_f},
               {"L_mug", k.L_mug},
               {"L_mug_acute", k.L_mug_acute},
               {"nu", k.nu},
               {"p", k.radius_p},
               {"c_beta", k.c_beta},
               {"c_delta", k.c_delta},
               {"Gamma", k.Gamma},
               {"Upsilon", k.Upsilon},
               {"Phi", k.Phi},
               {"Psi", k.Psi},
               {"Omega", k.Omega},
               {"c_gamma", k.c_gamma},
               {"c_eta", k.c_eta},
               {"c_lambda", k.c_lambda},
               {"c", k.c}}}};
    if (d1 >= 1 && d2 >= 1) {
      obilevel::ZoConstantLedger z = obilevel::derived_constants_zo(pr, d1, d2);
      out["zeroth_order"] = {{"d1", d1},
                             {"d2", d2},
                             {"M_f", z.M_f},
                             {"L_y", z.L_y},
                             {"L_f", z.L_f},
                             {"L_mug", z.L_mug},
                             {"nu", z.nu},
                             {"p", z.radius_p},
                             {"c_beta", z.c_beta},
                             {"c_delta", z.c_delta},
                             {"Gamma", z.Gamma},
                             {"Upsilon", z.Upsilon},
                             {"Phi", z.Phi},
                             {"Psi", z.Psi},
                             {"Omega", z.Omega},
                             {"c_v", z.c_v},
                             {"c_gamma", z.c_gamma},
                             {"c_eta", z.c_eta},
                             {"c_lambda", z.c_lambda},
                             {"c", z.c}};
    }
    *ledger_json = dup_string(out.dump(2));
    return OBL_OK;
  });
}

const char* obl_status_message(obl_status status) {
  switch (status) {
    case OBL_OK: return "ok";
    case OBL_E_NULL: return "null argument";
    case OBL_E_CONFIG: return "invalid configuration";
    case OBL_E_DIVERGED: return "run diverged";
    case OBL_E_DIMENSION: return "dimension mismatch";
    case OBL_E_NONFINITE: return "non-finite value";
    case OBL_E_INFEASIBLE: return "infeasible point";
    case OBL_E_UNSUPPORTED: return "unsupported operation";
    case OBL_E_SOLVER: return "solver failure";
    case OBL_E_IO: return "I/O failure";
    default: return "internal error";
  }
}

const char* obl_last_error(void) { return g_last_error.c_str(); }

void obl_string_free(char* str) { std::free(str); }

}  // extern "C"
