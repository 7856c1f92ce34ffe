#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "lamebie/errors.hpp"
#include "lamebie/field.hpp"
#include "output.hpp"

namespace lamebie::cli {

namespace fs = std::filesystem;

namespace {

std::ofstream open_output(const std::string& dir, const std::string& name) {
  fs::create_directories(dir);
  const fs::path path = fs::path(dir) / name;
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path.string());
  return f;
}

JsonLine state_record(const std::string& hash, double eps, const SystemState& s, const SolveInfo& info) {
  JsonLine r;
  r.add("config_hash", hash).add("eps", eps).add("status", "ok").add("xi", Eigen::VectorXd(s.xi));
  r.add("residual", info.residual).add("iterations", info.iterations).add("theta", s.theta);
  return r;
}

}  // namespace

int cmd_verify(const RunConfig& cfg, const std::string& out_dir, std::ostream& log) {
  const std::string hash = config_hash(cfg);
  const std::vector<OracleCheck> checks = run_oracles(cfg);
  std::ofstream f = open_output(out_dir, "verify.jsonl");
  bool ok = true;
  for (const auto& c : checks) {
    log << (c.pass() ? "PASS " : "FAIL ") << c.name << "  error=" << fmt(c.error) << "  tol=" << fmt(c.tol) << "\n";
    JsonLine r;
    r.add("config_hash", hash).add("oracle", c.name).add("error", c.error).add("tol", c.tol).add("pass", c.pass());
    f << r.str() << "\n";
    ok = ok && c.pass();
  }
  log << (ok ? "all oracles passed\n" : "oracle failures\n");
  return ok ? kOk : kOracleError;
}

int cmd_solve(const RunConfig& cfg, double eps, const std::string& out_dir, std::ostream& log) {
  const std::string hash = config_hash(cfg);
  const TractionSystem sys(make_problem(cfg));
  std::ofstream f = open_output(out_dir, "solve.jsonl");
  try {
    sys.check_eps(eps);
    SolveInfo info;
    SystemState s = solve_limiting(sys, cfg.xi_guess, &info);
    if (eps != 0.0) {
      // short march from the limiting state; a direct jump to large eps may leave the basin
      for (double frac : {0.25, 0.5, 1.0}) s = newton_solve(sys, frac * eps, s, &info);
    }
    f << state_record(hash, eps, s, info).str() << "\n";
    log << "eps=" << fmt(eps) << " xi=(" << fmt(s.xi[0]) << ", " << fmt(s.xi[1]) << ") residual=" << fmt(info.residual)
        << " iterations=" << info.iterations << "\n";
    return kOk;
  } catch (const SolverError& e) {
    JsonLine r;
    r.add("config_hash", hash).add("eps", eps).add("status", "error").add("message", std::string(e.what()));
    f << r.str() << "\n";
    log << "solver failure: " << e.what() << "\n";
    return kSolverError;
  }
}

int cmd_sweep(const RunConfig& cfg, const std::string& out_dir, std::ostream& log) {
  const std::string hash = config_hash(cfg);
  const TractionSystem sys(make_problem(cfg));
  const SolutionBranch branch = continuation_sweep(sys, cfg.eps_list, cfg.xi_guess);
  if (branch.truncated) {
    log << "warning: branch truncated, attained eps in [" << fmt(branch.eps_min_attained) << ", "
        << fmt(branch.eps_max_attained) << "]: " << branch.message << "\n";
  }

  std::ofstream csv = open_output(out_dir, "branch.csv");
  std::ofstream jl = open_output(out_dir, "branch.jsonl");
  csv << "config_hash,eps,xi_1,xi_2,residual,iterations,continuation\n";
  for (const auto& pt : branch.points) {
    csv << hash << "," << fmt(pt.eps) << "," << fmt(pt.state.xi[0]) << "," << fmt(pt.state.xi[1]) << ","
        << fmt(pt.info.residual) << "," << pt.info.iterations << "," << (pt.eps < 0.0 ? "true" : "false") << "\n";
    jl << state_record(hash, pt.eps, pt.state, pt.info).str() << "\n";
  }

  // analyticity evidence: U_r at the probe point and Xi, fitted in eps
  std::vector<std::pair<double, Eigen::VectorXd>> micro, xi;
  for (const auto& [e, v] : microscopic_trace(sys, branch, cfg.micro_probe)) micro.emplace_back(e, v);
  for (const auto& pt : branch.points) xi.emplace_back(pt.eps, pt.state.xi);
  const int m = static_cast<int>(micro.size());
  int degree = cfg.fit_degree;
  if (m < degree + 3) {
    degree = std::max(0, m - 3);
    log << "warning: " << m << " branch points support a fit of degree " << degree << " only\n";
  }
  JsonLine fit;
  fit.add("config_hash", hash).add("micro_probe", Eigen::VectorXd(cfg.micro_probe)).add("degree", degree);
  if (m >= 3) {
    const PolyFit f = analyticity_fit(micro, degree);
    Eigen::VectorXd by_degree(degree + 1);
    for (int d = 0; d <= degree; ++d) by_degree[d] = analyticity_fit(micro, d).max_residual;
    fit.add("coefficients", f.coefficients).add("max_residual", f.max_residual).add("residual_by_degree", by_degree);
    fit.add("xi_coefficients", analyticity_fit(xi, degree).coefficients);
    log << "degree " << degree << " fit of U_r at (" << fmt(cfg.micro_probe[0]) << ", " << fmt(cfg.micro_probe[1])
        << "): max residual " << fmt(f.max_residual) << "\n";
  }
  const Eigen::Vector2d xi0 = branch.at(0.0).state.xi;
  double c_lin = 0.0;
  for (const auto& pt : branch.points) {
    if (pt.eps != 0.0) c_lin = std::max(c_lin, (pt.state.xi - xi0).norm() / std::abs(pt.eps));
  }
  fit.add("xi_linear_constant", c_lin);
  fit.add("eps_min_attained", branch.eps_min_attained).add("eps_max_attained", branch.eps_max_attained);
  fit.add("truncated", branch.truncated);

  if (cfg.probe_trials > 0 && std::abs(cfg.probe_eps) <= std::max(-branch.eps_min_attained, branch.eps_max_attained)) {
    // start from the nearest branch point when probe eps is not on the grid
    const BranchPoint* near = &branch.points.front();
    for (const auto& pt : branch.points) {
      if (std::abs(pt.eps - cfg.probe_eps) < std::abs(near->eps - cfg.probe_eps)) near = &pt;
    }
    const SystemState base = newton_solve(sys, cfg.probe_eps, near->state);
    const UniquenessReport rep = uniqueness_probe(sys, cfg.probe_eps, base, cfg.probe_radius, cfg.probe_trials);
    JsonLine u;
    u.add("eps", cfg.probe_eps).add("radius", cfg.probe_radius).add("trials", rep.trials).add("returned", rep.returned);
    u.add("max_distance", rep.max_distance);
    fit.raw("uniqueness", u.str());
    log << "uniqueness probe at eps=" << fmt(cfg.probe_eps) << ": " << rep.returned << "/" << rep.trials
        << " starts returned\n";
  }
  open_output(out_dir, "fit.json") << fit.str() << "\n";
  log << "sweep: " << branch.points.size() << " branch points written to " << (fs::path(out_dir) / "branch.csv").string()
      << "\n";
  return branch.truncated ? kSolverError : kOk;
}

SolutionBranch read_branch(const std::string& path, const std::string& hash) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read branch file '" + path + "'");
  SolutionBranch b;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(lineno);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(where + ": " + e.what());
    }
    if (j.value("config_hash", "") != hash) {
      throw ConfigError(where + ": config hash " + j.value("config_hash", "?") + " does not match the config (" +
                        hash + ")");
    }
    if (j.value("status", "") != "ok") continue;
    BranchPoint pt;
    pt.eps = j.at("eps").get<double>();
    const auto& th = j.at("theta");
    pt.state.theta.resize(static_cast<Eigen::Index>(th.size()), 2);
    for (std::size_t i = 0; i < th.size(); ++i) {
      pt.state.theta(i, 0) = th[i][0].get<double>();
      pt.state.theta(i, 1) = th[i][1].get<double>();
    }
    pt.state.xi << j.at("xi")[0].get<double>(), j.at("xi")[1].get<double>();
    pt.info.residual = j.value("residual", 0.0);
    pt.info.iterations = j.value("iterations", 0);
    b.points.push_back(pt);
  }
  if (b.points.empty()) throw ConfigError(path + ": no branch records");
  std::sort(b.points.begin(), b.points.end(), [](const auto& a, const auto& c) { return a.eps < c.eps; });
  b.eps_min_attained = b.points.front().eps;
  b.eps_max_attained = b.points.back().eps;
  return b;
}

int cmd_eval(const RunConfig& cfg, const std::string& branch_file, const std::string& points_file,
             const std::string& out_dir, std::ostream& log) {
  const std::string hash = config_hash(cfg);
  const SolutionBranch branch = read_branch(branch_file, hash);
  const TractionSystem sys(make_problem(cfg));
  for (const auto& pt : branch.points) {
    if (pt.state.theta.rows() != sys.grid().n) throw ConfigError(branch_file + ": density size does not match grid.N");
  }

  std::ifstream in(points_file);
  if (!in) throw ConfigError("cannot read points file '" + points_file + "'");
  std::ofstream out = open_output(out_dir, "field.csv");
  out << "config_hash,tag,x1,x2,eps,u1,u2,continuation,status\n";
  std::string line;
  int lineno = 0, rows = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line.rfind("tag", 0) == 0 || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string tag, a, b;
    std::getline(ss, tag, ',');
    std::getline(ss, a, ',');
    std::getline(ss, b, ',');
    Eigen::Vector2d x;
    try {
      x << std::stod(a), std::stod(b);
    } catch (const std::exception&) {
      throw ConfigError(points_file + ":" + std::to_string(lineno) + ": expected tag,x1,x2");
    }
    if (tag != "macro" && tag != "micro") {
      throw ConfigError(points_file + ":" + std::to_string(lineno) + ": tag must be macro or micro, got '" + tag + "'");
    }
    std::vector<std::pair<double, Eigen::Vector2d>> trace;
    std::string status = "ok";
    try {
      trace = tag == "macro" ? macroscopic_trace(sys, branch, x) : microscopic_trace(sys, branch, x);
    } catch (const DomainError&) {
      status = tag == "macro" ? "too_close_to_holes" : "inside_hole";
    }
    const std::string prefix = hash + "," + tag + "," + fmt(x[0]) + "," + fmt(x[1]) + ",";
    if (status != "ok") {
      for (const auto& pt : branch.points) {
        out << prefix << fmt(pt.eps) << ",nan,nan," << (pt.eps < 0.0 ? "true" : "false") << "," << status << "\n";
      }
      log << "warning: " << points_file << ":" << lineno << ": " << status << "\n";
      continue;
    }
    for (const auto& [e, u] : trace) {
      out << prefix << fmt(e) << "," << fmt(u[0]) << "," << fmt(u[1]) << "," << (e < 0.0 ? "true" : "false") << ",ok\n";
    }
    ++rows;
  }
  log << "eval: " << rows << " points evaluated over " << branch.points.size() << " eps values\n";
  return kOk;
}

}  // namespace lamebie::cli
