// Command-line front end. Talks to the library exclusively through the C API
// in obilevel/obilevel.h.
#include <CLI11.hpp>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "obilevel/obilevel.h"

namespace {

int exit_code_for(obl_status status) {
  if (status == OBL_OK) return 0;
  if (status == OBL_E_CONFIG || status == OBL_E_NULL) return 2;
  if (status == OBL_E_DIVERGED) return 3;
  return 1;
}

void print_error(obl_status status) {
  std::fprintf(stderr, "error: %s: %s\n", obl_status_message(status), obl_last_error());
}

std::string read_file(const std::string& path, bool* ok) {
  *ok = false;
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (f == nullptr) return {};
  std::string content;
  char buf[4096];
  size_t n;
  while ((n = std::fread(buf, 1, sizeof(buf), f)) > 0) content.append(buf, n);
  std::fclose(f);
  *ok = true;
  return content;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online bilevel optimization benchmark harness"};
  app.require_subcommand(1);

  std::string config_path, out_dir, profile_path;
  std::vector<std::uint64_t> seeds_override;
  int d1 = 0, d2 = 0;

  CLI::App* run_cmd = app.add_subcommand("run", "Execute the runs described by a config file");
  run_cmd->add_option("--config", config_path, "JSON config file")->required();
  run_cmd->add_option("--out", out_dir, "Output directory override");
  run_cmd->add_option("--seeds-override", seeds_override, "Replace the config seed list")
      ->delimiter(',');

  CLI::App* validate_cmd = app.add_subcommand("validate", "Check a config file");
  validate_cmd->add_option("--config", config_path, "JSON config file")->required();

  CLI::App* constants_cmd =
      app.add_subcommand("constants", "Print the derived-constant ledger for a profile");
  constants_cmd->add_option("--profile", profile_path, "JSON smoothness profile")->required();
  constants_cmd->add_option("--d1", d1, "Leader dimension for the zeroth-order ledger");
  constants_cmd->add_option("--d2", d2, "Follower dimension for the zeroth-order ledger");

  CLI11_PARSE(app, argc, argv);

  if (validate_cmd->parsed()) {
    bool ok = false;
    std::string doc = read_file(config_path, &ok);
    if (!ok) {
      std::fprintf(stderr, "error: cannot read %s\n", config_path.c_str());
      return 2;
    }
    char* diags = nullptr;
    obl_status st = obl_validate_json(doc.c_str(), &diags);
    if (st != OBL_OK) {
      print_error(st);
      return exit_code_for(st);
    }
    std::printf("%s\n", diags);
    bool clean = std::string(diags) == "[]";
    obl_string_free(diags);
    return clean ? 0 : 2;
  }

  if (run_cmd->parsed()) {
    obl_config_t* cfg = nullptr;
    obl_status st = obl_config_from_file(config_path.c_str(), &cfg);
    if (st != OBL_OK) {
      print_error(st);
      return exit_code_for(st);
    }
    if (!out_dir.empty()) {
      st = obl_config_set_output_dir(cfg, out_dir.c_str());
      if (st != OBL_OK) {
        print_error(st);
        obl_config_free(cfg);
        return exit_code_for(st);
      }
    }
    if (!seeds_override.empty()) {
      st = obl_config_override_seeds(cfg, seeds_override.data(), seeds_override.size());
      if (st != OBL_OK) {
        print_error(st);
        obl_config_free(cfg);
        return exit_code_for(st);
      }
    }
    char* summary = nullptr;
    st = obl_run(cfg, &summary);
    if (summary != nullptr) {
      std::printf("%s\n", summary);
      obl_string_free(summary);
    }
    obl_config_free(cfg);
    if (st != OBL_OK) print_error(st);
    return exit_code_for(st);
  }

  // constants
  bool ok = false;
  std::string profile = read_file(profile_path, &ok);
  if (!ok) {
    std::fprintf(stderr, "error: cannot read %s\n", profile_path.c_str());
    return 2;
  }
  char* ledger = nullptr;
  obl_status st = obl_constants(profile.c_str(), d1, d2, &ledger);
  if (st != OBL_OK) {
    print_error(st);
    return exit_code_for(st);
  }
  std::printf("%s\n", ledger);
  obl_string_free(ledger);
  return 0;
}
