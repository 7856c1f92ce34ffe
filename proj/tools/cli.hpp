#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lamebie/config.hpp"
#include "lamebie/nonlinear_system.hpp"

namespace lamebie::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kSolverError = 3, kOracleError = 4 };

struct OracleCheck {
  std::string name;
  double error = 0.0;
  double tol = 0.0;
  bool pass() const { return error <= tol; }  // false for NaN
};

/// Verification suite run by `verify`: kernel identities, layer-potential
/// constants, jump relations and the integral identities.
std::vector<OracleCheck> run_oracles(const RunConfig& cfg);

int cmd_verify(const RunConfig& cfg, const std::string& out_dir, std::ostream& log);
int cmd_solve(const RunConfig& cfg, double eps, const std::string& out_dir, std::ostream& log);
int cmd_sweep(const RunConfig& cfg, const std::string& out_dir, std::ostream& log);
int cmd_eval(const RunConfig& cfg, const std::string& branch_file, const std::string& points_file,
             const std::string& out_dir, std::ostream& log);

/// Reads branch.jsonl; every record must carry `hash`.
SolutionBranch read_branch(const std::string& path, const std::string& hash);

/// Full command line entry point (argv[0] is the program name).
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

/// %.17g
std::string fmt(double v);

}  // namespace lamebie::cli
