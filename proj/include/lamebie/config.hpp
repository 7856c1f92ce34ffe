#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "lamebie/geometry.hpp"
#include "lamebie/nonlinear_system.hpp"

namespace lamebie {

/// Parsed run configuration. The JSON layout is documented in docs/formats.md.
struct RunConfig {
  Eigen::Vector2d q_diag{1.0, 1.0};
  int n = 2;
  double omega = 1.0;
  nlohmann::json shape;  // {"family": ..., parameters}
  Eigen::Vector2d p{0.5, 0.5};
  nlohmann::json traction_law;  // law table without xi_guess
  Eigen::Vector2d xi_guess = Eigen::Vector2d::Zero();
  Eigen::Matrix2d B = Eigen::Matrix2d::Zero();
  int grid_n = 128;
  double ewald_tol = 1e-12;
  double ewald_split = 0.0;  // 0 selects the default split
  std::vector<double> eps_list;  // sorted, contains 0
  int fit_degree = 6;
  Eigen::Vector2d micro_probe{2.0, 0.0};
  double newton_tol = 1e-11;
  int newton_max_iter = 25;
  double probe_radius = 0.05;
  int probe_trials = 20;
  double probe_eps = 1e-3;
  std::string out_dir = ".";
};

ShapePtr make_shape(const nlohmann::json& spec);

/// Parses and validates; throws ConfigError with the offending field path.
RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);

nlohmann::json config_to_json(const RunConfig& cfg);
/// Canonical text form; parse_config(serialize_config(c)) reproduces c.
std::string serialize_config(const RunConfig& cfg);

/// FNV-1a 64-bit hash of the canonical compact form, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

Problem make_problem(const RunConfig& cfg);

/// Default configuration text used by the CLI examples and tests: unit cell,
/// circle of radius 0.2 at the cell centre, omega = 1, N = 128.
std::string default_config_text();

}  // namespace lamebie
