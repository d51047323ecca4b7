#include "doctest.h"

#include "lorentz/catalog.hpp"
#include "lorentz/cli.hpp"
#include "lorentz/error.hpp"
#include "lorentz/report.hpp"

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace lorentz;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = fs::temp_directory_path() /
            ("lorentz_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

struct Run {
  int code;
  std::string out, err;
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

json load(const fs::path& p) { return json::parse(slurp(p)); }

Run run_cli(const TempDir& dir, const json& config, std::vector<std::string> args) {
  const auto cfg = dir.path() / "config.json";
  std::ofstream(cfg) << config.dump();
  std::vector<std::string> full = {"lorentz_orbits", "--config", cfg.string(), "--out", (dir.path() / "out").string()};
  full.insert(full.end(), args.begin(), args.end());
  std::ostringstream out, err;
  const int code = cli::run(full, out, err);
  return {code, out.str(), err.str()};
}

json pulse_config() {
  return {{"potential", {{"catalog", "gaussian_pulse"}}},
          {"period", 1.0},
          {"grid_size", 64},
          {"box", {{"half_width", 2.0}, {"points_per_axis", 9}, {"time_nodes", 8}}},
          {"witness", {{"grid_size", 128}}}};
}

}  // namespace

TEST_CASE("exit code mapping") {
  CHECK(cli::exit_code_for(ErrorKind::ConfigError) == 2);
  CHECK(cli::exit_code_for(ErrorKind::PreconditionViolated) == 2);
  CHECK(cli::exit_code_for(ErrorKind::SingularPoint) == 3);
  CHECK(cli::exit_code_for(ErrorKind::SingularEncounter) == 3);
  CHECK(cli::exit_code_for(ErrorKind::NonFinite) == 3);
  CHECK(cli::exit_code_for(ErrorKind::NotAdmissible) == 4);
  CHECK(cli::exit_code_for(ErrorKind::UnboundedAbove) == 4);
  CHECK(cli::exit_code_for(ErrorKind::LineSearchFailed) == 5);
  CHECK(cli::exit_code_for(ErrorKind::AllStartsFailed) == 5);
}

TEST_CASE("load_config") {
  const auto rc = cli::load_config(pulse_config(), {7, 32, "strict"});
  CHECK(rc.seed == 7);
  CHECK(rc.grid_size == 32);
  CHECK(rc.minimize.grid_size == 32);
  CHECK(rc.tol.profile == "strict");
  CHECK(rc.minimize.grad_tol == 1e-7);
  CHECK(rc.effective["grid_override"] == true);

  auto bad = pulse_config();
  bad["grid_size"] = 9;
  CHECK_THROWS_AS(cli::load_config(bad), Error);
  bad = pulse_config();
  bad["potential"] = {{"catalog", "no_such_pair"}};
  CHECK_THROWS_AS(cli::load_config(bad), Error);
  CHECK_THROWS_AS(cli::load_config(json::array()), Error);
  CHECK_THROWS_AS(cli::load_config(json{{"period", 1.0}}), Error);
}

TEST_CASE("config_hash") {
  const auto a = pulse_config();
  auto b = a;
  b["seed"] = 1;
  CHECK(cli::config_hash(a) == cli::config_hash(a));
  CHECK(cli::config_hash(a) != cli::config_hash(b));
  CHECK(cli::config_hash(a).size() == 16);
}

TEST_CASE("fields") {
  TempDir dir;
  SUBCASE("zero potential") {
    const auto r = run_cli(dir, {{"potential", {{"catalog", "zero"}}}}, {"fields", "--t", "0.3", "--x", "1", "2", "3"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["E"] == json::array({0.0, 0.0, 0.0}));
    CHECK(j["B"] == json::array({0.0, 0.0, 0.0}));
  }
  SUBCASE("pulse at the origin") {
    const auto r = run_cli(dir, pulse_config(), {"fields", "--t", "0", "--x", "0", "0", "0"});
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["E"][0].get<double>() == doctest::Approx(-2 * std::numbers::pi).epsilon(1e-12));
  }
  SUBCASE("singular centre") {
    const auto r = run_cli(dir, {{"potential", {{"catalog", "coulomb"}}}}, {"fields", "--x", "0", "0", "0"});
    CHECK(r.code == 3);
    const auto e = json::parse(r.err);
    CHECK(e["error"] == "SingularPoint");
    CHECK(e["exit_code"] == 3);
    CHECK(e["message"].get<std::string>().find("singular ball #0") != std::string::npos);
  }
}

TEST_CASE("configuration errors exit with 2") {
  TempDir dir;
  std::ostringstream out, err;
  CHECK(cli::run({"lorentz_orbits", "--config", (dir.path() / "missing.json").string(), "fields"}, out, err) == 2);
  CHECK(json::parse(err.str())["error"] == "ConfigError");

  std::ofstream(dir.path() / "broken.json") << "{ not json";
  err.str("");
  CHECK(cli::run({"lorentz_orbits", "--config", (dir.path() / "broken.json").string(), "fields"}, out, err) == 2);

  auto odd = pulse_config();
  odd["grid_size"] = 15;
  CHECK(run_cli(dir, odd, {"fields"}).code == 2);
  CHECK(run_cli(dir, pulse_config(), {"teleport"}).code == 2);
  CHECK(run_cli(dir, pulse_config(), {"--tol-profile", "lax", "fields"}).code == 2);
  CHECK(run_cli(dir, pulse_config(), {"witness", "--mode", "sideways"}).code == 2);
  CHECK(run_cli(dir, pulse_config(), {"gauge"}).code == 2);
}

TEST_CASE("admissible") {
  TempDir dir;
  const auto ok = run_cli(dir, pulse_config(), {"admissible"});
  REQUIRE(ok.code == 0);
  const auto rep = load(dir.path() / "out" / "admissible.json");
  CHECK(rep["result"]["admissible"] == true);
  CHECK(rep["meta"]["command"] == "admissible");

  auto mag = pulse_config();
  mag["potential"] = {{"catalog", "magnetostatic"}};
  const auto r = run_cli(dir, mag, {"admissible"});
  CHECK(r.code == 4);
  CHECK(json::parse(r.err)["message"] == "pair not admissible: zero electric field");
}

TEST_CASE("witness reports and metadata") {
  TempDir dir;
  const auto r = run_cli(dir, pulse_config(), {"witness"});
  REQUIRE(r.code == 0);
  const auto rep = load(dir.path() / "out" / "witness.json");
  CHECK(rep["result"]["negative"] == true);
  CHECK(rep["result"]["action_value"].get<double>() < 0.0);
  const auto& m = rep["meta"];
  CHECK(m["grid_size"] == 64);
  CHECK(m["witness_grid_size"] == 128);
  CHECK(m["box"]["points_per_axis"] == 9);
  CHECK(m["tolerances"]["profile"] == "default");
  CHECK(m["tolerances"].contains("tol_quad"));
  CHECK(m["config_hash"].get<std::string>().size() == 16);
  CHECK(fs::exists(dir.path() / "out" / "witness_trajectory.csv"));
  // timestamps are kept out of the report itself
  CHECK(load(dir.path() / "out" / "witness.meta.json").contains("started_utc"));
  CHECK_FALSE(rep["meta"].contains("started_utc"));

  SUBCASE("theorem2 writes the ratio table") {
    auto cfg = pulse_config();
    cfg["witness"] = {{"grid_size", 256}, {"bases", {{2, 0, 0}, {3, 0, 0}, {4, 0, 0}}}};
    const auto t2 = run_cli(dir, cfg, {"witness", "--mode", "theorem2"});
    CHECK(t2.code == 0);
    const auto csv = slurp(dir.path() / "out" / "ratios.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  }
  SUBCASE("divergence probe") {
    auto cfg = pulse_config();
    cfg["potential"] = {{"sum", {{{"catalog", "gaussian_pulse"}}, {{"catalog", "coulomb"}, {"params", {{"charge", 0.5}}}}}}};
    cfg["normalize_phi"] = false;
    CHECK(run_cli(dir, cfg, {"witness", "--mode", "divergence"}).code == 0);
    CHECK(fs::exists(dir.path() / "out" / "divergence.csv"));
  }
}

TEST_CASE("overrides are recorded") {
  TempDir dir;
  const auto r = run_cli(dir, pulse_config(), {"--grid", "32", "--seed", "11", "--tol-profile", "strict", "witness"});
  REQUIRE(r.code == 0);
  const auto m = load(dir.path() / "out" / "witness.json")["meta"];
  CHECK(m["grid_size"] == 32);
  CHECK(m["witness_grid_size"] == 32);
  CHECK(m["seed"] == 11);
  CHECK(m["tolerances"]["profile"] == "strict");
  CHECK(m["tolerances"]["tol_quad"] == 1e-8);
}

TEST_CASE("reports are byte-identical across runs") {
  TempDir a, b;
  REQUIRE(run_cli(a, pulse_config(), {"--seed", "3", "witness"}).code == 0);
  REQUIRE(run_cli(b, pulse_config(), {"--seed", "3", "witness"}).code == 0);
  // the config path differs between the two runs but is not part of the report
  CHECK(slurp(a.path() / "out" / "witness.json") == slurp(b.path() / "out" / "witness.json"));
  CHECK(slurp(a.path() / "out" / "witness_trajectory.csv") == slurp(b.path() / "out" / "witness_trajectory.csv"));
}

TEST_CASE("minimize, then simulate and verify the result") {
  TempDir dir;
  const auto r = run_cli(dir, pulse_config(), {"minimize"});
  REQUIRE(r.code == 0);
  const auto out = dir.path() / "out";
  const auto rep = load(out / "minimize.json");
  CHECK(rep["result"]["certification"]["negative_action"] == true);
  CHECK(rep["result"]["certification"]["non_constant"] == true);
  CHECK(rep["meta"]["optimizer"]["grid_size"] == 64);
  CHECK(fs::exists(out / "iterates.csv"));

  const auto traj = (out / "trajectory.csv").string();
  REQUIRE(run_cli(dir, pulse_config(), {"verify", "--trajectory", traj}).code == 0);
  const auto ver = load(out / "verify.json")["result"];
  CHECK(ver["in_K"] == true);
  CHECK(ver["total"].get<double>() ==
        doctest::Approx(rep["result"]["action"]["total"].get<double>()).epsilon(1e-12));
  CHECK(ver["el_residual_sup"].get<double>() <= 1e-3);

  REQUIRE(run_cli(dir, pulse_config(), {"simulate", "--trajectory", traj}).code == 0);
  const auto sim = load(out / "simulate.json")["result"];
  CHECK(sim["periodicity"]["residual"].get<double>() ==
        doctest::Approx(rep["result"]["periodicity_residual"].get<double>()).epsilon(1e-9));
  const auto orbit = slurp(out / "orbit.csv");
  CHECK(std::count(orbit.begin(), orbit.end(), '\n') > 64);
}

TEST_CASE("minimize rejects and failures") {
  TempDir dir;
  auto mag = pulse_config();
  mag["potential"] = {{"catalog", "magnetostatic"}};
  const auto r = run_cli(dir, mag, {"minimize"});
  CHECK(r.code == 4);
  CHECK(json::parse(r.err)["message"] == "pair not admissible: zero electric field");

  SUBCASE("Coulomb plus pulse stays clear of the ball") {
    auto cfg = pulse_config();
    cfg["potential"] = {{"sum",
                         {{{"catalog", "gaussian_pulse"}},
                          {{"catalog", "coulomb"}, {"params", {{"charge", 0.1}, {"center", {6, 0, 0}}}}}}}};
    REQUIRE(run_cli(dir, cfg, {"minimize"}).code == 0);
    const auto traj = report::load_trajectory((dir.path() / "out" / "trajectory.csv").string());
    const auto pair = catalog::from_json(cfg["potential"], 1.0);
    CHECK(lambda_distance(traj, pair) >= default_lambda_margin(1.0));
  }
}

TEST_CASE("gauge") {
  TempDir dir;
  const auto r = run_cli(dir, pulse_config(), {"gauge", "--f", "x1*sin(2*pi*t)"});
  REQUIRE(r.code == 0);
  const auto rep = load(dir.path() / "out" / "gauge.json")["result"];
  CHECK(rep["agree"] == true);
  CHECK(rep["max_delta_E"].get<double>() <= 1e-4);
  CHECK(rep["probes"] == 100);
  // the written config loads and produces the gauged pair
  const auto rc = cli::load_config(load(dir.path() / "out" / "gauge_config.json"));
  const Vec3 x(0.3, -0.2, 0.5);
  const auto f0 = eval_fields(catalog::gaussian_pulse({}, 1.0), 0.4, x);
  const auto f1 = eval_fields(rc.pair, 0.4, x);
  CHECK((f0.electric - f1.electric).norm() <= 1e-4);
  CHECK((f0.magnetic - f1.magnetic).norm() <= 1e-4);

  const auto np = run_cli(dir, pulse_config(), {"gauge", "--f", "t*x1"});
  CHECK(np.code == 2);
}
