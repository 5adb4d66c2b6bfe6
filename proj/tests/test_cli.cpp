#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "liouspec/cli/config.hpp"
#include "liouspec/cli/output.hpp"

using namespace liouspec;
using namespace liouspec::cli;
namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("liouspec_test_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = std::string(LIOUSPEC_CLI_BINARY) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

}  // namespace

TEST_CASE("shipped default config equals the built-in defaults") {
  const RunConfig shipped = load_config(LIOUSPEC_DEFAULT_CONFIG);
  CHECK(config_to_json(shipped).dump() == config_to_json(RunConfig{}).dump());
}

TEST_CASE("config round trip and partial documents") {
  RunConfig cfg;
  cfg.params.p = 0.3;
  cfg.sources = {SourceSpec{SourceKind::Random, 17}};
  cfg.grid.min = 0.5;
  cfg.grid.max = 1.5;
  const RunConfig back = config_from_json(config_to_json(cfg));
  CHECK(config_to_json(back).dump() == config_to_json(cfg).dump());

  const RunConfig partial = config_from_json(Json::parse(R"({"model": {"p": 0.25}})"));
  CHECK(partial.params.p == 0.25);
  CHECK(partial.params.j.twice() == 40);
  CHECK(partial.grid.n == 2001);
}

TEST_CASE("config rejects unknown keys and bad values") {
  CHECK_THROWS_AS(config_from_json(Json::parse(R"({"modle": {}})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(Json::parse(R"({"model": {"pp": 0.1}})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(Json::parse(R"({"model": {"p": 1.5}})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(Json::parse(R"({"model": {"j": 0.3}})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(Json::parse(R"({"model": {"p": "high"}})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(Json::parse(R"({"grid": {"n": 1}})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(Json::parse(R"({"grid": {"min": 2, "max": 1}})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(Json::parse(R"([1, 2])")), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/liouspec.json"), ConfigError);
}

TEST_CASE("command-line overrides") {
  RunConfig cfg;
  Overrides o;
  o.j = 2.5;
  o.p = 0.4;
  o.seed = 99;
  o.grid_n = 101;
  o.window_mult = 4.0;
  o.out = "elsewhere";
  apply_overrides(cfg, o);
  CHECK(cfg.params.j.twice() == 5);
  CHECK(cfg.params.p == 0.4);
  REQUIRE(cfg.sweep.p.size() == 1);
  CHECK(cfg.sweep.p[0] == 0.4);
  REQUIRE(cfg.sweep.j.size() == 1);
  CHECK(cfg.eigs.p == std::vector<double>{0.4});
  CHECK(cfg.grid.n == 101);
  CHECK(cfg.fit.window_mult == 4.0);
  CHECK(cfg.out == fs::path("elsewhere"));
  std::size_t random = 0;
  for (const auto& s : cfg.sources) {
    if (s.kind == SourceKind::Random) {
      ++random;
      CHECK(s.seed == 99u);
      CHECK(s.label() == "random_seed99");
    }
  }
  CHECK(random == 1);

  Overrides bad;
  bad.gamma = -1.0;
  CHECK_THROWS_AS(apply_overrides(cfg, bad), ConfigError);
}

TEST_CASE("number formatting and tags") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(std::stod(format_double(M_PI)) == M_PI);
  CHECK(point_tag(SpinLength::from_twice(40), 0.9) == "j20_p0.9");
  CHECK(point_tag(SpinLength::from_twice(5), 0.0) == "j2.5_p0");
  CHECK(json_number(std::numeric_limits<double>::infinity()) == Json("inf"));
  CHECK(json_number(2.0) == Json(2.0));
}

TEST_CASE("csv writer enforces the header width") {
  const fs::path dir = scratch("csv");
  CsvWriter w(dir / "t.csv", {"a", "b"});
  w.cell(1.5).cell(std::string("x"));
  w.end_row();
  w.cell(true);
  CHECK_THROWS_AS(w.end_row(), Error);
  CHECK_THROWS_AS(CsvWriter("/proc/liouspec/none.csv", {"a"}), IoError);
}

TEST_CASE("spectrum output is deterministic and carries fixed headers") {
  const fs::path a = scratch("det_a");
  const fs::path b = scratch("det_b");
  const std::string args = "spectrum --j 2 --p 0.5 --grid-n 401 --seed 7 --threads 1 --out ";
  REQUIRE(run(args + a.string()) == 0);
  REQUIRE(run(args + b.string()) == 0);
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    ++files;
    const fs::path other = b / entry.path().filename();
    REQUIRE(fs::exists(other));
    CHECK(slurp(entry.path()) == slurp(other));
  }
  CHECK(files == 6);
  const fs::path csv = a / "spectrum_j2_p0.5_random_seed7.csv";
  REQUIRE(fs::exists(csv));
  CHECK(first_line(csv) == "omega,S,S_fitA,S_fitB");
  const Json side = Json::parse(slurp(a / "spectrum_j2_p0.5_random_seed7.json"));
  CHECK(side["seed"] == 7);
  CHECK(side["status"] == "ok");
  CHECK(side.contains("fitA"));
  CHECK(side.contains("fitB"));
  CHECK(side.contains("diagnostics"));
  CHECK(side["diagnostics"].contains("r"));
  CHECK(side["diagnostics"].contains("delta_bic"));
}

TEST_CASE("eigs, sweep and synthetic outputs") {
  const fs::path dir = scratch("cmds");
  REQUIRE(run("eigs --j 2 --p 0.5 --out " + dir.string()) == 0);
  CHECK(first_line(dir / "eigs_j2_p0.5.csv") == "re_lambda,im_lambda,re_lambda_over_j,im_lambda_over_j,sector_M,near_degenerate_flag");

  REQUIRE(run("sweep --j 1 --p 0.3 --grid-n 201 --out " + dir.string()) == 0);
  const std::string head = first_line(dir / "sweep.csv");
  CHECK(head.rfind("p,j,source,seed,status,r,delta_bic,delta_aic", 0) == 0);

  REQUIRE(run("synthetic --out " + dir.string()) == 0);
  CHECK(fs::exists(dir / "synthetic_jordan.csv"));
  CHECK(fs::exists(dir / "synthetic_jordan.json"));
  CHECK(fs::exists(dir / "synthetic_beta0.csv"));
  CHECK(first_line(dir / "synthetic_eps_sweep.csv").rfind("epsilon,", 0) == 0);
}

TEST_CASE("exit codes") {
  const fs::path dir = scratch("exit");
  std::ofstream(dir / "bad.json") << R"({"model": {"p": 3}})";
  CHECK(run("spectrum --config " + (dir / "bad.json").string()) == 1);
  std::ofstream(dir / "typo.json") << R"({"mdoel": {}})";
  CHECK(run("eigs --config " + (dir / "typo.json").string()) == 1);
  std::ofstream(dir / "broken.json") << "{ not json";
  CHECK(run("eigs --config " + (dir / "broken.json").string()) == 1);
  CHECK(run("eigs --p 7") == 1);
  CHECK(run("frobnicate") == 1);
  CHECK(run("eigs --j 1 --out /proc/liouspec_cannot_write") == 3);
}
