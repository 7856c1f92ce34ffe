#include <iostream>
#include <thread>

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cli.hpp"
#include "lamebie/errors.hpp"

namespace lamebie::cli {

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Periodic Lame traction problem: boundary-integral solver"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  int threads = 0;
  app.add_option("--config", config_path, "configuration file (JSON)");
  app.add_option("--threads", threads, "worker threads (default: logical cores)")->check(CLI::NonNegativeNumber);
  app.add_option("--out", out_dir, "output directory (overrides outputs.dir)");

  auto* verify = app.add_subcommand("verify", "run the oracle suite");
  auto* solve = app.add_subcommand("solve", "solve at one eps");
  double eps = 0.0;
  solve->add_option("--eps", eps, "perturbation parameter")->required();
  auto* sweep = app.add_subcommand("sweep", "continuation sweep and analyticity fit");
  auto* eval = app.add_subcommand("eval", "macroscopic / microscopic field traces");
  std::string branch_file, points_file;
  eval->add_option("--branch", branch_file, "branch.jsonl written by sweep")->required();
  eval->add_option("--points", points_file, "CSV of tag,x1,x2 with tag macro or micro")->required();
  auto* defaults = app.add_subcommand("default-config", "print the default configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  if (defaults->parsed()) {
    out << default_config_text();
    return kOk;
  }
#ifdef _OPENMP
  omp_set_num_threads(threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency())));
#endif
  try {
    if (config_path.empty()) throw ConfigError("--config is required");
    const RunConfig cfg = parse_config_file(config_path);
    const std::string dir = out_dir.empty() ? cfg.out_dir : out_dir;
    if (verify->parsed()) return cmd_verify(cfg, dir, out);
    if (solve->parsed()) return cmd_solve(cfg, eps, dir, out);
    if (sweep->parsed()) return cmd_sweep(cfg, dir, out);
    if (eval->parsed()) return cmd_eval(cfg, branch_file, points_file, dir, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const GeometryError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const SolverError& e) {
    err << "solver failure: " << e.what() << "\n";
    return kSolverError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kSolverError;
  }
  return kOk;
}

}  // namespace lamebie::cli
