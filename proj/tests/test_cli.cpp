#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "diracsea/parallel.hpp"
#include "diracsea/runner.hpp"

using namespace diracsea;
using nlohmann::json;

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("diracsea_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(DIRACSEA_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string config_error_path(const json& doc) {
  try {
    parse_scenario(doc);
  } catch (const ConfigError& e) {
    return e.path;
  }
  return "";
}

}  // namespace

TEST_CASE("scenario parsing reports field paths") {
  CHECK(config_error_path({{"grid", {{"dim", 2}}}}) == "grid");
  CHECK(config_error_path({{"grid", {{"dimension", 1}}}}) == "grid.dimension");
  CHECK(config_error_path({{"bogus", 1}}) == "bogus");
  const json bad_term = {{"potential", {{"terms", {{{"component", 0}, {"amplitude", 1.0}},
                                                   {{"component", 0}, {"amplitude", 1.0}, {"sigma", -1.0}}}}}}};
  CHECK(config_error_path(bad_term) == "potential.terms[1]");
  CHECK(config_error_path({{"evolution", {{"method", "euler"}}}}) == "evolution");
  CHECK(config_error_path({{"experiment", "nope"}}) == "experiment");
}

TEST_CASE("overrides and hashing") {
  json doc = {{"grid", {{"n", 16}}}};
  apply_override(doc, "grid.n=32");
  apply_override(doc, "evolution.method=midpoint");
  apply_override(doc, "scan.sizes=[8,16,32]");
  const auto c = parse_scenario(doc);
  CHECK(c.grid.n == 32);
  CHECK(c.evolution.method == Method::DenseMidpointExp);
  CHECK(c.scan.sizes == std::vector<int>{8, 16, 32});
  CHECK_THROWS_AS(apply_override(doc, "novalue"), ConfigError);
  CHECK(config_hash(doc) == config_hash(json::parse(doc.dump())));
  CHECK(config_hash(doc).size() == 16);
  apply_override(doc, "grid.n=64");
  CHECK(config_hash(doc) != config_hash(json{{"grid", {{"n", 32}}}}));
}

TEST_CASE("shipped scenarios parse") {
  for (const auto& entry : std::filesystem::directory_iterator(DIRACSEA_SCENARIO_DIR)) {
    if (entry.path().extension() != ".json") continue;
    CAPTURE(entry.path().string());
    CHECK_NOTHROW(load_scenario(entry.path().string(), {}));
  }
}

TEST_CASE("spectrum lies outside the mass gap") {
  const auto c = parse_scenario({{"experiment", "spectrum"}, {"physics", {{"mass", 0.7}}}, {"grid", {{"dim", 1}, {"n", 16}}}});
  const auto out = run_experiment(c);
  CHECK(out.summary["min_abs_eigenvalue"].get<double>() == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(out.csv.rfind("site,p_x,p_y,p_z,energy,", 0) == 0);
}

TEST_CASE("scan output is identical across thread counts") {
  const auto c = parse_scenario({{"experiment", "scan"},
                                 {"grid", {{"dim", 1}, {"box_length", 30.0}}},
                                 {"potential",
                                  {{"envelope", {{"kind", "sin_squared"}, {"t_a", 0.0}, {"t_b", 2.0}}},
                                   {"terms", {{{"component", 3}, {"amplitude", 0.2}, {"sigma", 1.0}}}}}},
                                 {"evolution", {{"t1", 1.0}, {"steps", 40}}},
                                 {"scan", {{"sizes", {8, 16, 32}}}}});
  std::string first;
  for (unsigned threads : {1u, 2u, 8u}) {
    set_default_threads(threads);
    const auto out = run_experiment(c);
    if (first.empty()) first = out.csv;
    CHECK(out.csv == first);
  }
  set_default_threads(1);
}

TEST_CASE("artifacts carry the metadata contract") {
  const auto dir = scratch("artifacts");
  const auto c = parse_scenario({{"experiment", "wedge-suite"}, {"seed", 5}, {"wedge", {{"trials", 10}}}});
  write_artifacts(c, run_experiment(c), dir.string(), 0.1, 1);
  const auto meta = json::parse(read_file(dir / "metadata.json"));
  for (const char* key : {"tool", "version", "format", "experiment", "config_hash", "seed", "threads", "thresholds",
                          "tolerances", "summary", "warnings"})
    CHECK(meta.contains(key));
  CHECK(meta["config_hash"] == config_hash(c.source));
  CHECK(meta["seed"] == 5);
  CHECK(meta["summary"]["worst_relative_error"].get<double>() < 1e-10);
}

TEST_CASE("command line exit codes") {
  const auto dir = scratch("cli");
  {
    std::ofstream(dir / "broken.json") << "{ \"grid\": ";
  }
  CHECK(run_cli("spectrum --config " + (dir / "broken.json").string() + " --out " + (dir / "a").string()) == 2);
  CHECK(run_cli("spectrum --set grid.dim=2 --out " + (dir / "b").string()) == 2);
  CHECK(run_cli("evolve --set grid.dim=3 --set grid.n=32 --out " + (dir / "c").string()) == 3);
  CHECK(run_cli("spectrum --set grid.n=8 --out " + (dir / "d").string()) == 0);
  CHECK(std::filesystem::exists(dir / "d" / "results.csv"));
  CHECK(std::filesystem::exists(dir / "d" / "metadata.json"));

  // identical invocations give identical CSV bytes
  const std::string args = "wedge-suite --seed 9 --set wedge.trials=20 --threads ";
  CHECK(run_cli(args + "1 --out " + (dir / "w1").string()) == 0);
  CHECK(run_cli(args + "4 --out " + (dir / "w4").string()) == 0);
  CHECK(read_file(dir / "w1" / "results.csv") == read_file(dir / "w4" / "results.csv"));
}
