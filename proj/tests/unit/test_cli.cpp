#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hycal/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "hycal");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = hycal::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path workdir() {
  const fs::path dir = HYCAL_TEST_TMP;
  fs::create_directories(dir);
  return dir;
}

fs::path make_dataset_and_config() {
  const auto dir = workdir();
  const auto data = dir / "bench.hyeb";
  REQUIRE(run({"synth", "--out", data.string(), "--domains", "3", "--dim", "6", "--train", "12",
               "--test", "6", "--seed", "1"}).code == 0);
  const auto cfg = dir / "run.json";
  std::ofstream(cfg) << R"({"dataset": "bench.hyeb", "setting": {"kind": "FixedShotFSCIL", "fixed_shots": 5},
    "scorers": ["DynamicHybrid", "CosineOnly"], "seeds": [0, 1], "grids": {"alpha": [5, 10]}})";
  return cfg;
}

}  // namespace

TEST_CASE("run writes identical outputs for identical inputs") {
  const auto cfg = make_dataset_and_config();
  const auto a = workdir() / "run_a";
  const auto b = workdir() / "run_b";
  REQUIRE(run({"run", "--config", cfg.string(), "--out", a.string(), "--breakdown"}).code == 0);
  REQUIRE(run({"run", "--config", cfg.string(), "--out", b.string(), "--breakdown"}).code == 0);
  for (const char* name : {"metrics.csv", "metrics.json", "predictions.csv", "curves.csv", "breakdown.csv"}) {
    CHECK(slurp(a / name) == slurp(b / name));
  }
  CHECK(slurp(a / "metrics.csv").rfind("setting,scorer,seed,avg_acc,last_acc,s_adapt,s_last,s_cde", 0) == 0);
  CHECK(fs::exists(a / "snapshot.hyps"));
}

TEST_CASE("sweep then report aggregates across seeds") {
  const auto cfg = make_dataset_and_config();
  const auto dir = workdir() / "sweep";
  REQUIRE(run({"sweep", "--config", cfg.string(), "--out", dir.string()}).code == 0);
  const auto metrics = slurp(dir / "metrics.csv");
  CHECK(std::count(metrics.begin(), metrics.end(), '\n') == 1 + 2 * 2 * 2);
  const auto agg = workdir() / "agg.csv";
  const auto r = run({"report", (dir / "metrics.csv").string(), "--out", agg.string()});
  REQUIRE(r.code == 0);
  const auto text = slurp(agg);
  CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 2 * 2);
  CHECK(text.find(",2,") != std::string::npos);
}

TEST_CASE("diagnose prints a JSON report with a pass flag") {
  auto r = run({"diagnose", "--check", "independence", "--d", "8", "--n", "20000", "--seed", "3"});
  REQUIRE(r.code == 0);
  auto doc = nlohmann::json::parse(r.out);
  CHECK(doc.at("pass").get<bool>());
  r = run({"diagnose", "--check", "mi-gain", "--n", "20000", "--labeler", "xor"});
  REQUIRE(r.code == 0);
  doc = nlohmann::json::parse(r.out);
  CHECK(doc.at("margin").get<double>() > 0.1);
  CHECK(run({"diagnose", "--check", "mi-gain", "--labeler", "nope", "--n", "20000"}).code == 1);
}

TEST_CASE("exit codes") {
  CHECK(run({"--help"}).code == 0);
  const auto bad = run({"run", "--no-such-flag"});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("Usage") != std::string::npos);
  CHECK(run({"run", "--config", "/nonexistent/run.json"}).code == 2);
  CHECK(run({"diagnose", "--d", "1", "--n", "20000"}).code == 1);
}
