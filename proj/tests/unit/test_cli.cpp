#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "lamebie/config.hpp"
#include "lamebie/nonlinear_system.hpp"

using namespace lamebie;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "lamebie");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

// fresh scratch directory per test case
fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("lamebie_cli_" + std::to_string(::getpid())) / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string write_config(const fs::path& dir, const json& j, const std::string& name = "config.json") {
  const fs::path p = dir / name;
  std::ofstream(p) << j.dump(2);
  return p.string();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<json> json_lines(const fs::path& p) {
  std::vector<json> out;
  std::ifstream in(p);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(json::parse(line));
  }
  return out;
}

std::vector<std::vector<std::string>> csv_rows(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::ifstream in(p);
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

json default_json() { return json::parse(default_config_text()); }

// B = 0, G(t, u) = u - (0.7, -0.4): the branch is the constant state
json trivial_json() {
  json j = default_json();
  j["B"] = {{0, 0}, {0, 0}};
  j["traction_law"] = {{"family", "affine"}, {"K", {{1, 0}, {0, 1}}}, {"c", {0.7, -0.4}}, {"xi_guess", {0, 0}}};
  j["grid"]["N"] = 64;
  j["uniqueness"]["trials"] = 3;
  return j;
}

}  // namespace

TEST_CASE("default-config prints the built-in configuration") {
  const Result r = invoke({"default-config"});
  CHECK(r.code == 0);
  CHECK(json::parse(r.out) == default_json());
}

TEST_CASE("verify passes on the default configuration and records every oracle") {
  const fs::path d = scratch("verify");
  const std::string cfg = write_config(d, default_json());
  const Result r = invoke({"--config", cfg, "--out", d.string(), "verify"});
  CHECK(r.code == cli::kOk);
  const auto lines = json_lines(d / "verify.jsonl");
  CHECK(lines.size() == 12);
  const std::string hash = config_hash(parse_config(default_config_text()));
  for (const json& l : lines) {
    CHECK(l.at("config_hash") == hash);
    CHECK(l.at("pass") == true);
    CHECK(l.at("error").get<double>() <= l.at("tol").get<double>());
  }
  CHECK(r.out.find("FAIL") == std::string::npos);
}

TEST_CASE("verify reports oracle failures with exit code 4") {
  const fs::path d = scratch("verify_fail");
  json j = default_json();
  j["ewald"]["target_tol"] = 1e-3;
  const Result r = invoke({"--config", write_config(d, j), "--out", d.string(), "verify"});
  CHECK(r.code == cli::kOracleError);
  int failed = 0;
  for (const json& l : json_lines(d / "verify.jsonl")) failed += l.at("pass") == false;
  CHECK(failed > 0);
}

TEST_CASE("configuration and usage errors exit with code 2") {
  const fs::path d = scratch("errors");
  json j = default_json();
  j["lame"]["omega"] = -0.9;
  Result r = invoke({"--config", write_config(d, j, "omega.json"), "verify"});
  CHECK(r.code == cli::kConfigError);
  CHECK(r.err.find("omega > 1 - 2/n = 0") != std::string::npos);

  j = default_json();
  j["sweep"]["eps"] = {0.0, 3.0};
  r = invoke({"--config", write_config(d, j, "far.json"), "sweep"});
  CHECK(r.code == cli::kConfigError);
  CHECK(r.err.find("eps0 = 2.5") != std::string::npos);

  const std::string good = write_config(d, default_json());
  CHECK(invoke({"verify"}).code == cli::kConfigError);
  CHECK(invoke({"--config", (d / "missing.json").string(), "verify"}).code == cli::kConfigError);
  CHECK(invoke({"--config", good, "frobnicate"}).code == cli::kConfigError);
  CHECK(invoke({"--config", good, "solve"}).code == cli::kConfigError);
  CHECK(invoke({"--config", good, "--out", d.string(), "solve", "--eps", "5"}).code == cli::kConfigError);
  CHECK(invoke({"--config", good, "--threads", "-2", "verify"}).code == cli::kConfigError);
}

TEST_CASE("solve on the constant branch and the eps = 0 path") {
  const fs::path d = scratch("solve");
  const Result r = invoke({"--config", write_config(d, trivial_json()), "--out", d.string(), "solve", "--eps", "0.02"});
  REQUIRE(r.code == cli::kOk);
  const auto rec = json_lines(d / "solve.jsonl");
  REQUIRE(rec.size() == 1);
  CHECK(rec[0].at("status") == "ok");
  CHECK(rec[0].at("eps").get<double>() == 0.02);
  CHECK(std::abs(rec[0].at("xi")[0].get<double>() - 0.7) <= 1e-11);
  CHECK(std::abs(rec[0].at("xi")[1].get<double>() + 0.4) <= 1e-11);
  CHECK(rec[0].at("theta").size() == 64);
  for (const json& row : rec[0].at("theta")) {
    CHECK(std::abs(row[0].get<double>()) <= 1e-11);
    CHECK(std::abs(row[1].get<double>()) <= 1e-11);
  }

  // eps = 0 writes exactly the limiting solve
  const fs::path d0 = scratch("solve0");
  const std::string cfg = write_config(d0, default_json());
  REQUIRE(invoke({"--config", cfg, "--out", d0.string(), "solve", "--eps", "0"}).code == cli::kOk);
  const json z = json_lines(d0 / "solve.jsonl").at(0);
  const RunConfig rc = parse_config(default_config_text());
  const TractionSystem sys(make_problem(rc));
  const SystemState s = solve_limiting(sys, rc.xi_guess);
  CHECK(z.at("xi")[0].get<double>() == s.xi[0]);
  CHECK(z.at("xi")[1].get<double>() == s.xi[1]);
  double worst = 0.0;
  for (int i = 0; i < sys.grid().n; ++i) {
    for (int c = 0; c < 2; ++c) worst = std::max(worst, std::abs(z.at("theta")[i][c].get<double>() - s.theta(i, c)));
  }
  CHECK(worst == 0.0);
}

TEST_CASE("solve is bit-identical on rerun") {
  const fs::path d = scratch("rerun");
  const std::string cfg = write_config(d, default_json());
  REQUIRE(invoke({"--config", cfg, "--threads", "1", "--out", (d / "a").string(), "solve", "--eps", "0.02"}).code == 0);
  REQUIRE(invoke({"--config", cfg, "--threads", "1", "--out", (d / "b").string(), "solve", "--eps", "0.02"}).code == 0);
  const std::string a = slurp(d / "a" / "solve.jsonl");
  CHECK(a.size() > 1000);
  CHECK(a == slurp(d / "b" / "solve.jsonl"));
}

TEST_CASE("solver failures are recorded and exit with code 3") {
  const fs::path d = scratch("solve_fail");
  json j = default_json();
  // G = 1 + u .* u has no real root
  j["traction_law"] = {{"family", "polynomial"},
                       {"c", {0, 0}},
                       {"g0", {1, 1}},
                       {"terms", {{{"degree", 2}, {"coef", {1, 1}}}}},
                       {"xi_guess", {0.5, 0.5}}};
  const Result r = invoke({"--config", write_config(d, j), "--out", d.string(), "solve", "--eps", "0.01"});
  CHECK(r.code == cli::kSolverError);
  const auto rec = json_lines(d / "solve.jsonl");
  REQUIRE(rec.size() == 1);
  CHECK(rec[0].at("status") == "error");
  CHECK_FALSE(rec[0].at("message").get<std::string>().empty());
}

TEST_CASE("sweep on the constant branch") {
  const fs::path d = scratch("sweep_trivial");
  const Result r = invoke({"--config", write_config(d, trivial_json()), "--out", d.string(), "sweep"});
  REQUIRE(r.code == cli::kOk);
  const auto rows = csv_rows(d / "branch.csv");
  REQUIRE(rows.size() == 12);
  CHECK(rows[0] == std::vector<std::string>{"config_hash", "eps", "xi_1", "xi_2", "residual", "iterations",
                                            "continuation"});
  int negative = 0;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const double eps = std::stod(rows[k][1]);
    if (eps < 0) {
      ++negative;
      CHECK(rows[k][6] == "true");
    }
    CHECK(std::abs(std::stod(rows[k][2]) - 0.7) <= 1e-11);
  }
  CHECK(negative == 5);

  const json fit = json::parse(slurp(d / "fit.json"));
  CHECK(fit.at("degree") == 6);
  const json& coef = fit.at("coefficients");
  for (std::size_t k = 1; k < coef.size(); ++k) {
    CHECK(std::abs(coef[k][0].get<double>()) <= 1e-11);
    CHECK(std::abs(coef[k][1].get<double>()) <= 1e-11);
  }
  CHECK(fit.at("truncated") == false);
  CHECK(fit.at("uniqueness").at("returned") == 3);
}

TEST_CASE("sweep, eval and hash checks on the reference branch") {
  const fs::path d = scratch("sweep_ref");
  const std::string cfg = write_config(d, default_json());
  REQUIRE(invoke({"--config", cfg, "--out", d.string(), "sweep"}).code == cli::kOk);
  const json fit = json::parse(slurp(d / "fit.json"));
  CHECK(fit.at("max_residual").get<double>() <= 1e-6);
  CHECK(fit.at("uniqueness").at("returned") == 20);
  CHECK(fit.at("eps_min_attained").get<double>() == -0.05);
  const auto branch = json_lines(d / "branch.jsonl");
  CHECK(branch.size() == 11);

  std::ofstream(d / "points.csv") << "tag,x1,x2\nmacro,0.1,0.2\nmicro,2,0\nmacro,0.1,0.2\nmicro,0.05,0\n"
                                     "macro,0.501,0.5\n";
  const Result r = invoke({"--config", cfg, "--out", d.string(), "eval", "--branch", (d / "branch.jsonl").string(),
                           "--points", (d / "points.csv").string()});
  REQUIRE(r.code == cli::kOk);
  const auto rows = csv_rows(d / "field.csv");
  REQUIRE(rows.size() == 1 + 5 * 11);
  CHECK(rows[0] == std::vector<std::string>{"config_hash", "tag", "x1", "x2", "eps", "u1", "u2", "continuation",
                                            "status"});
  const RunConfig rc = parse_config(default_config_text());
  json xi0;
  for (const json& b : branch) {
    if (b.at("eps").get<double>() == 0.0) xi0 = b.at("xi");
  }
  const Eigen::Vector2d xi(xi0[0].get<double>(), xi0[1].get<double>());
  const Eigen::Vector2d macro0 = rc.B * (Eigen::Vector2d(0.1, 0.2) - rc.p) + xi;  // unit cell: q^{-1} = I
  for (int k = 0; k < 11; ++k) {
    const auto& m = rows[1 + k];
    const auto& mu = rows[1 + 11 + k];
    const auto& dup = rows[1 + 22 + k];
    const auto& inside = rows[1 + 33 + k];
    const auto& close = rows[1 + 44 + k];
    CHECK(m[1] == "macro");
    CHECK(mu[1] == "micro");
    CHECK(std::vector<std::string>(m.begin(), m.end()) == dup);
    CHECK(inside[8] == "inside_hole");
    CHECK(inside[5] == "nan");
    CHECK(close[8] == "too_close_to_holes");
    if (std::stod(m[4]) == 0.0) {
      CHECK(std::abs(std::stod(m[5]) - macro0[0]) <= 1e-12);
      CHECK(std::abs(std::stod(m[6]) - macro0[1]) <= 1e-12);
      CHECK(std::stod(mu[5]) == xi[0]);
      CHECK(std::stod(mu[6]) == xi[1]);
    }
    CHECK(m[7] == (std::stod(m[4]) < 0 ? "true" : "false"));
  }

  // a branch from a different configuration is refused
  json other = default_json();
  other["lame"]["omega"] = 1.5;
  const Result bad = invoke({"--config", write_config(d, other, "other.json"), "--out", d.string(), "eval", "--branch",
                             (d / "branch.jsonl").string(), "--points", (d / "points.csv").string()});
  CHECK(bad.code == cli::kConfigError);
  CHECK(bad.err.find("does not match") != std::string::npos);

  std::ofstream(d / "bad_points.csv") << "tag,x1,x2\nmeso,0.1,0.2\n";
  CHECK(invoke({"--config", cfg, "--out", d.string(), "eval", "--branch", (d / "branch.jsonl").string(), "--points",
                (d / "bad_points.csv").string()})
            .code == cli::kConfigError);
}

TEST_CASE("truncated sweeps exit with code 3") {
  const fs::path d = scratch("truncated");
  json j = default_json();
  j["grid"]["N"] = 64;
  j["newton"]["max_iter"] = 1;
  j["uniqueness"]["trials"] = 0;
  const Result r = invoke({"--config", write_config(d, j), "--out", d.string(), "sweep"});
  CHECK(r.code == cli::kSolverError);
  CHECK(r.out.find("truncated") != std::string::npos);
  const json fit = json::parse(slurp(d / "fit.json"));
  CHECK(fit.at("truncated") == true);
}

TEST_CASE("installed binary exit codes") {
  const fs::path d = scratch("binary");
  json j = default_json();
  j["grid"]["N"] = 15;
  const std::string bad = write_config(d, j);
  const std::string bin = LAMEBIE_CLI_PATH;
  int st = std::system((bin + " default-config > " + (d / "out.json").string()).c_str());
  CHECK(WEXITSTATUS(st) == 0);
  st = std::system((bin + " --config " + bad + " verify 2> " + (d / "err.txt").string()).c_str());
  CHECK(WEXITSTATUS(st) == 2);
  CHECK(slurp(d / "err.txt").find("grid.N") != std::string::npos);
}
