#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int status = -1;
  std::string out;
};

Outcome run(const std::string& args) {
  const std::string command = std::string(LAYERCACHE_CLI) + " " + args + " 2>/dev/null";
  Outcome o;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buffer[4096];
  while (std::fgets(buffer, sizeof buffer, pipe) != nullptr) o.out += buffer;
  const int raw = pclose(pipe);
  o.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return o;
}

fs::path scratch() {
  auto dir = fs::temp_directory_path() / "layercache_cli_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write(const fs::path& path, const std::string& text) {
  std::ofstream(path) << text;
}

const char* kSmall = R"({"name": "cli", "mode": "simulate",
  "scenarios": [{"id": "s", "objects": 8, "versions": 2,
                 "split": {"rule": "two", "alpha": 0.6},
                 "sizes": {"rule": "two-layer", "rho": 0.5}}],
  "policies": ["llru"], "capacities": [2], "requests": 300, "output": "cli.csv"})";

}  // namespace

TEST_CASE("presets and validation") {
  auto o = run("presets");
  CHECK(o.status == 0);
  CHECK(o.out.find("fig11\n") != std::string::npos);

  o = run("preset fig4 --config-only");
  CHECK(o.status == 0);
  CHECK(nlohmann::json::parse(o.out).at("name") == "fig4");
  CHECK(run("preset fig99 --config-only").status == 2);

  const auto dir = scratch();
  write(dir / "ok.json", kSmall);
  auto bad = nlohmann::json::parse(kSmall);
  bad["scenarios"][0]["split"]["alpha"] = 1.2;
  write(dir / "bad.json", bad.dump());
  write(dir / "broken.json", "{ not json");

  CHECK(run("validate " + (dir / "ok.json").string()).status == 0);
  CHECK(run("validate " + (dir / "bad.json").string()).status == 2);
  CHECK(run("validate " + (dir / "broken.json").string()).status == 2);
  CHECK(run("validate " + (dir / "missing.json").string()).status == 1);
  fs::remove_all(dir);
}

TEST_CASE("run subcommands") {
  const auto dir = scratch();
  write(dir / "ok.json", kSmall);
  const auto config = (dir / "ok.json").string();

  auto o = run("simulate " + config + " --out " + dir.string());
  REQUIRE(o.status == 0);
  const auto summary = nlohmann::json::parse(o.out);
  CHECK(fs::exists(summary.at("csv").get<std::string>()));
  CHECK(fs::exists(summary.at("meta").get<std::string>()));
  CHECK(summary.at("rows").get<int>() > 0);

  CHECK(run("approx " + config + " --out " + dir.string()).status == 0);
  CHECK(run("compare " + config + " --out " + dir.string()).status == 0);
  // Simulate-mode settings do not describe a limit model; defaults apply.
  CHECK(run("asymptotic " + config + " --out " + dir.string()).status == 0);

  auto mr = nlohmann::json::parse(kSmall);
  mr["policies"] = {"hlru"};
  write(dir / "mr.json", mr.dump());
  CHECK(run("simulate " + (dir / "mr.json").string()).status == 2);
  fs::remove_all(dir);
}

TEST_CASE("usage errors") {
  CHECK(run("").status == 2);
  CHECK(run("frobnicate").status == 2);
  CHECK(run("simulate").status == 2);
  CHECK(run("--help").status == 0);
}
