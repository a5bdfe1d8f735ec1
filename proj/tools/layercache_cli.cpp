// layercache: command-line front end over the C API.
//
// Exit codes: 0 success, 2 validation error (bad config, unknown preset or
// usage), 1 runtime error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "layercache/layercache.h"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitValidation = 2;

int exit_code(lc_status status) {
  switch (status) {
    case LC_OK:
      return 0;
    case LC_ERROR_VALIDATION:
    case LC_ERROR_UNKNOWN_NAME:
    case LC_ERROR_INVALID_ARGUMENT:
      return kExitValidation;
    default:
      return kExitRuntime;
  }
}

int report(lc_status status) {
  if (status != LC_OK) std::cerr << "error: " << lc_last_error() << '\n';
  return exit_code(status);
}

// Owns a string returned by the C API.
struct CString {
  char* p = nullptr;
  ~CString() { lc_string_free(p); }
  std::string str() const { return p == nullptr ? std::string() : std::string(p); }
};

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  out = buffer.str();
  return true;
}

int run_json(const std::string& json, const char* mode, const std::string& out_dir) {
  CString summary;
  const lc_status status =
      lc_config_run(json.c_str(), mode, out_dir.empty() ? nullptr : out_dir.c_str(), &summary.p);
  if (status != LC_OK) return report(status);
  std::cout << summary.str() << '\n';
  return 0;
}

int run_file(const std::string& path, const char* mode, const std::string& out_dir) {
  std::string json;
  if (!read_file(path, json)) {
    std::cerr << "error: cannot read " << path << '\n';
    return kExitRuntime;
  }
  return run_json(json, mode, out_dir);
}

int validate_file(const std::string& path) {
  std::string json;
  if (!read_file(path, json)) {
    std::cerr << "error: cannot read " << path << '\n';
    return kExitRuntime;
  }
  CString problems;
  const lc_status status = lc_config_validate(json.c_str(), &problems.p);
  if (status == LC_OK) {
    std::cout << "ok\n";
    return 0;
  }
  if (status == LC_ERROR_VALIDATION) {
    std::cerr << problems.str();
    return kExitValidation;
  }
  return report(status);
}

int preset(const std::string& name, const std::string& out_dir, bool config_only) {
  CString json;
  const lc_status status = lc_config_preset(name.c_str(), &json.p);
  if (status != LC_OK) return report(status);
  if (config_only) {
    std::cout << json.str() << '\n';
    return 0;
  }
  return run_json(json.str(), nullptr, out_dir);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Layered and multiple-representation cache simulator"};
  app.require_subcommand(1);
  app.footer("Worker threads: set LAYERCACHE_WORKERS (default: hardware concurrency).");

  std::string config_path;
  std::string out_dir;
  std::string preset_name;
  bool config_only = false;

  struct ModeCommand {
    const char* name;
    const char* help;
  };
  const ModeCommand modes[] = {
      {"simulate", "Replay sampled traces through the configured policies"},
      {"approx", "Evaluate the working-set approximation"},
      {"asymptotic", "Evaluate the large-catalog limit and finite catalogs"},
      {"compare", "One hit-rate row per (scenario, B, policy)"},
  };
  for (const auto& m : modes) {
    auto* sub = app.add_subcommand(m.name, m.help);
    sub->add_option("config", config_path, "Experiment config (JSON)")->required();
    sub->add_option("--out", out_dir, "Directory for relative output paths");
  }

  auto* preset_cmd = app.add_subcommand("preset", "Run a figure preset");
  preset_cmd->add_option("name", preset_name, "Preset name (see `presets`)")->required();
  preset_cmd->add_option("--out", out_dir, "Output directory")->default_val(".");
  preset_cmd->add_flag("--config-only", config_only, "Print the resolved config instead of running");

  auto* presets_cmd = app.add_subcommand("presets", "List preset names");

  auto* validate_cmd = app.add_subcommand("validate", "Check a config and list every problem");
  validate_cmd->add_option("config", config_path, "Experiment config (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  for (const auto& m : modes) {
    if (app.got_subcommand(m.name)) return run_file(config_path, m.name, out_dir);
  }
  if (preset_cmd->parsed()) return preset(preset_name, out_dir, config_only);
  if (presets_cmd->parsed()) {
    CString names;
    if (const lc_status status = lc_preset_names(&names.p); status != LC_OK) return report(status);
    std::cout << names.str();
    return 0;
  }
  if (validate_cmd->parsed()) return validate_file(config_path);
  return kExitValidation;
}
