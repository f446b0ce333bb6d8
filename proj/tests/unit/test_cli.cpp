#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "flagwave/cli.hpp"
#include "flagwave/config.hpp"

using namespace flagwave;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("flagwave_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

json small_config() {
  return json::parse(R"({
    "version": 1,
    "lattice": {"N": 32, "L": 8.0},
    "scales": {"j_min": -1, "j_max": 5, "k_min": -1, "k_max": 5},
    "corpus": {"flag_gaussian": 2, "band_limited": 1, "synthetic_atom": 1, "variants": 1,
               "band_max": 6, "sigma_min": 0.15, "sigma_max": 0.3},
    "journe": {"sets": 5, "N": 16}
  })");
}

fs::path write_config(const fs::path& dir, const json& j) {
  auto p = dir / "config.json";
  std::ofstream(p) << j.dump(2);
  return p;
}

int run(std::vector<std::string> args) {
  std::vector<char*> argv;
  static std::string prog = "flagwave";
  argv.push_back(prog.data());
  for (auto& a : args) argv.push_back(a.data());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Every file under dir except the timestamped log, keyed by relative path.
std::map<std::string, std::string> tree(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file() || e.path().filename() == "run.log") continue;
    out[fs::relative(e.path(), dir).string()] = slurp(e.path());
  }
  return out;
}

}  // namespace

TEST(Config, DefaultsAndValidation) {
  auto c = parse_config(json{{"version", 1}});
  EXPECT_EQ(c.lattice.N, 256);
  EXPECT_EQ(c.j_min, -2);
  EXPECT_EQ(c.kernel, KernelKind::kLittlewoodPaley);
  EXPECT_EQ(c.corpus.seed, c.seed);
  EXPECT_NO_THROW(validate_config(c));
  EXPECT_EQ(parse_config(config_json(c)).lattice.L, c.lattice.L);

  auto bad = small_config();
  bad["lattice"]["N"] = 33;
  EXPECT_THROW(parse_config(bad), ConfigError);
  bad = small_config();
  bad["lattice"]["N"] = 48;
  EXPECT_THROW(parse_config(bad), ConfigError);
  bad = small_config();
  bad["lattice"]["shape"] = 2;
  EXPECT_THROW(parse_config(bad), ConfigError);
  bad = small_config();
  bad["workers"] = "four";
  EXPECT_THROW(parse_config(bad), ConfigError);
  bad = small_config();
  bad["version"] = 2;
  EXPECT_THROW(parse_config(bad), ConfigError);
  bad = small_config();
  bad["scales"]["j_max"] = 2;  // no longer covers the spectrum
  EXPECT_THROW(parse_config(bad), ConfigError);

  auto schema = config_schema();
  EXPECT_EQ(schema["properties"]["lattice"]["properties"]["N"]["default"], 256);
  EXPECT_TRUE(schema["properties"]["atomic"]["properties"].contains("dilation"));
}

TEST(Cli, ExitCodesAndReport) {
  auto dir = scratch("codes");
  auto bad = small_config();
  bad["lattice"]["N"] = 33;
  auto cfg = write_config(dir, bad);
  auto out = dir / "out";
  EXPECT_EQ(run({"norms", "--config", cfg.string(), "--out", out.string()}), 2);
  auto rep = json::parse(slurp(out / "report.json"));
  EXPECT_EQ(rep["status"], "error");
  EXPECT_NE(rep["message"].get<std::string>().find("lattice.N"), std::string::npos);

  auto empty = small_config();
  empty["corpus"] = {{"flag_gaussian", 0}, {"band_limited", 0}, {"synthetic_atom", 0},
                     {"variants", 0}};
  cfg = write_config(dir, empty);
  EXPECT_EQ(run({"norms", "--config", cfg.string(), "--out", out.string()}), 2);

  EXPECT_EQ(run({"frobnicate", "--config", cfg.string()}), 2);
  EXPECT_EQ(run({"norms", "--out", out.string()}), 2);  // no config

  cfg = write_config(dir, small_config());
  EXPECT_EQ(run({"selftest", "--config", cfg.string(), "--out", out.string()}), 0);
  rep = json::parse(slurp(out / "report.json"));
  EXPECT_EQ(rep["status"], "pass");
  EXPECT_GT(rep["checks"].size(), 0u);
  fs::remove_all(dir);
}

// Artifacts are byte-identical across runs and across worker counts.
TEST(Cli, ArtifactsAreDeterministic) {
  auto dir = scratch("det");
  auto cfg = write_config(dir, small_config()).string();
  std::vector<std::string> commands{"corpus", "norms", "pp", "decompose", "validate",
                                    "reconstruct", "journe"};
  std::map<std::string, std::string> first;
  for (std::string workers : {"1", "1", "8"}) {
    auto out = dir / ("w" + workers);
    fs::remove_all(out);
    for (const auto& c : commands)
      ASSERT_EQ(run({c, "--config", cfg, "--out", out.string(), "--workers", workers}), 0) << c;
    auto t = tree(out);
    ASSERT_GT(t.size(), 10u);
    if (first.empty()) {
      first = t;
    } else {
      ASSERT_EQ(t.size(), first.size());
      for (const auto& [k, v] : first) EXPECT_TRUE(t.at(k) == v) << k;
    }
  }
  EXPECT_TRUE(first.count("norms.csv"));
  EXPECT_TRUE(first.count("decompose.csv"));
  EXPECT_TRUE(first.count("report.json"));
  fs::remove_all(dir);
}
