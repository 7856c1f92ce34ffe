#include "lamebie/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "lamebie/errors.hpp"
#include "lamebie/json_eigen.hpp"
#include "lamebie/traction_law.hpp"

namespace lamebie {

using nlohmann::json;
using namespace jsonio;

namespace {

const json* optional(const json& j, const std::string& key) { return j.contains(key) ? &j.at(key) : nullptr; }

std::string at_line(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

std::vector<double> sweep_from_range(const json& s) {
  const double lo = number(field(s, "min", "sweep"), "sweep.min");
  const double hi = number(field(s, "max", "sweep"), "sweep.max");
  const int count = integer(field(s, "count", "sweep"), "sweep.count");
  bool symmetric = true;
  if (s.contains("symmetric")) {
    if (!s.at("symmetric").is_boolean()) throw ConfigError("sweep.symmetric: expected true or false");
    symmetric = s.at("symmetric").get<bool>();
  }
  if (!(lo > 0.0) || !(hi >= lo)) throw ConfigError("sweep: need 0 < min <= max");
  if (count < 1) throw ConfigError("sweep.count: must be >= 1");
  std::vector<double> eps{0.0};
  for (int k = 0; k < count; ++k) {
    const double e = count == 1 ? hi : lo * std::pow(hi / lo, double(k) / (count - 1));
    eps.push_back(e);
    if (symmetric) eps.push_back(-e);
  }
  return eps;
}

}  // namespace

ShapePtr make_shape(const json& spec) {
  const std::string path = "shape";
  const auto& fam = field(spec, "family", path);
  if (!fam.is_string()) throw ConfigError("shape.family: expected a string");
  const std::string family = fam.get<std::string>();
  try {
    if (family == "circle") {
      reject_unknown(spec, {"family", "radius"}, path);
      return std::make_shared<CircleShape>(number(field(spec, "radius", path), "shape.radius"));
    }
    if (family == "ellipse") {
      reject_unknown(spec, {"family", "semi_x", "semi_y"}, path);
      return std::make_shared<EllipseShape>(number(field(spec, "semi_x", path), "shape.semi_x"),
                                            number(field(spec, "semi_y", path), "shape.semi_y"));
    }
    if (family == "star") {
      reject_unknown(spec, {"family", "r0", "amplitude", "lobes"}, path);
      return std::make_shared<StarShape>(number(field(spec, "r0", path), "shape.r0"),
                                         number(field(spec, "amplitude", path), "shape.amplitude"),
                                         integer(field(spec, "lobes", path), "shape.lobes"));
    }
    if (family == "fourier") {
      reject_unknown(spec, {"family", "cos_x", "sin_x", "cos_y", "sin_y"}, path);
      auto tab = [&](const char* k) {
        const Eigen::VectorXd v = vector(field(spec, k, path), path + "." + k);
        return std::vector<double>(v.data(), v.data() + v.size());
      };
      return std::make_shared<FourierShape>(tab("cos_x"), tab("sin_x"), tab("cos_y"), tab("sin_y"));
    }
  } catch (const GeometryError& e) {
    throw ConfigError(std::string("shape: ") + e.what());
  }
  throw ConfigError("shape.family: unknown shape '" + family + "' (circle, ellipse, star, fourier)");
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config is not valid JSON at " + at_line(text, e.byte) + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  reject_unknown(j, {"cell", "lame", "shape", "placement", "B", "traction_law", "grid", "ewald", "sweep", "newton",
                     "uniqueness", "outputs"},
                 "");

  RunConfig c;
  const auto& cell = field(j, "cell", "config");
  reject_unknown(cell, {"q_diag"}, "cell");
  c.q_diag = vec2(field(cell, "q_diag", "cell"), "cell.q_diag");
  for (int k = 0; k < 2; ++k) {
    if (!(c.q_diag[k] > 0.0)) throw ConfigError("cell.q_diag[" + std::to_string(k) + "]: periods must be positive");
  }

  const auto& lame = field(j, "lame", "config");
  reject_unknown(lame, {"n", "omega"}, "lame");
  c.n = lame.contains("n") ? integer(lame.at("n"), "lame.n") : 2;
  if (c.n != 2) throw ConfigError("lame.n: only n = 2 is supported, got " + std::to_string(c.n));
  c.omega = number(field(lame, "omega", "lame"), "lame.omega");
  {
    const double lower = 1.0 - 2.0 / c.n;
    if (!(c.omega > lower)) {
      std::ostringstream os;
      os << "lame.omega: omega = " << c.omega << " violates omega > 1 - 2/n = " << lower;
      throw ConfigError(os.str());
    }
  }

  c.shape = field(j, "shape", "config");
  const ShapePtr shape = make_shape(c.shape);

  const auto& pl = field(j, "placement", "config");
  reject_unknown(pl, {"p"}, "placement");
  c.p = vec2(field(pl, "p", "placement"), "placement.p");

  if (const json* b = optional(j, "B")) c.B = mat2(*b, "B");

  json law = field(j, "traction_law", "config");
  if (!law.is_object()) throw ConfigError("traction_law: expected an object");
  c.xi_guess = vec2(field(law, "xi_guess", "traction_law"), "traction_law.xi_guess");
  law.erase("xi_guess");
  c.traction_law = law;
  make_traction_law(c.traction_law);

  if (const json* g = optional(j, "grid")) {
    reject_unknown(*g, {"N"}, "grid");
    c.grid_n = integer(field(*g, "N", "grid"), "grid.N");
  }
  if (c.grid_n < 16 || c.grid_n % 2 != 0) {
    throw ConfigError("grid.N: must be even and >= 16, got " + std::to_string(c.grid_n));
  }

  if (const json* e = optional(j, "ewald")) {
    reject_unknown(*e, {"target_tol", "split_parameter"}, "ewald");
    if (const json* v = optional(*e, "target_tol")) c.ewald_tol = number(*v, "ewald.target_tol");
    if (const json* v = optional(*e, "split_parameter")) c.ewald_split = number(*v, "ewald.split_parameter");
  }
  if (!(c.ewald_tol > 0.0) || c.ewald_tol > 1e-3) throw ConfigError("ewald.target_tol: must lie in ]0, 1e-3]");
  if (c.ewald_split < 0.0) throw ConfigError("ewald.split_parameter: must be >= 0 (0 selects the default)");

  if (const json* s = optional(j, "sweep")) {
    reject_unknown(*s, {"eps", "min", "max", "count", "symmetric", "fit_degree", "micro_probe"}, "sweep");
    if (s->contains("eps")) {
      const Eigen::VectorXd v = vector(s->at("eps"), "sweep.eps");
      c.eps_list.assign(v.data(), v.data() + v.size());
    } else if (s->contains("min")) {
      c.eps_list = sweep_from_range(*s);
    }
    if (const json* v = optional(*s, "fit_degree")) c.fit_degree = integer(*v, "sweep.fit_degree");
    if (const json* v = optional(*s, "micro_probe")) c.micro_probe = vec2(*v, "sweep.micro_probe");
  }
  if (c.eps_list.empty()) c.eps_list = {0.0};
  c.eps_list.push_back(0.0);
  std::sort(c.eps_list.begin(), c.eps_list.end());
  c.eps_list.erase(std::unique(c.eps_list.begin(), c.eps_list.end()), c.eps_list.end());
  if (c.fit_degree < 0) throw ConfigError("sweep.fit_degree: must be >= 0");

  if (const json* nw = optional(j, "newton")) {
    reject_unknown(*nw, {"tol", "max_iter"}, "newton");
    if (const json* v = optional(*nw, "tol")) c.newton_tol = number(*v, "newton.tol");
    if (const json* v = optional(*nw, "max_iter")) c.newton_max_iter = integer(*v, "newton.max_iter");
  }
  if (!(c.newton_tol > 0.0)) throw ConfigError("newton.tol: must be positive");
  if (c.newton_max_iter < 1) throw ConfigError("newton.max_iter: must be >= 1");

  if (const json* u = optional(j, "uniqueness")) {
    reject_unknown(*u, {"eps", "radius", "trials"}, "uniqueness");
    if (const json* v = optional(*u, "eps")) c.probe_eps = number(*v, "uniqueness.eps");
    if (const json* v = optional(*u, "radius")) c.probe_radius = number(*v, "uniqueness.radius");
    if (const json* v = optional(*u, "trials")) c.probe_trials = integer(*v, "uniqueness.trials");
  }
  if (!(c.probe_radius >= 0.0)) throw ConfigError("uniqueness.radius: must be >= 0");
  if (c.probe_trials < 0) throw ConfigError("uniqueness.trials: must be >= 0");

  if (const json* o = optional(j, "outputs")) {
    reject_unknown(*o, {"dir"}, "outputs");
    if (const json* v = optional(*o, "dir")) {
      if (!v->is_string()) throw ConfigError("outputs.dir: expected a string");
      c.out_dir = v->get<std::string>();
    }
  }

  // geometry: the grid must be valid and every eps admissible
  const LatticeCell lc(c.q_diag);
  double eps0;
  try {
    build_grid(shape, c.grid_n);
    eps0 = compute_eps0(*shape, lc, c.p);
  } catch (const GeometryError& e) {
    throw ConfigError(std::string("shape/placement: ") + e.what());
  }
  double emax = 0.0;
  for (double e : c.eps_list) emax = std::max(emax, std::abs(e));
  emax = std::max(emax, std::abs(c.probe_eps));
  if (!(emax < eps0)) {
    std::ostringstream os;
    os << "sweep: max |eps| = " << emax << " is not below eps0 = " << eps0
       << " (the scaled hole would leave the cell)";
    throw ConfigError(os.str());
  }
  return c;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

json config_to_json(const RunConfig& c) {
  json law = c.traction_law;
  law["xi_guess"] = to_json(Eigen::VectorXd(c.xi_guess));
  return {
      {"cell", {{"q_diag", to_json(Eigen::VectorXd(c.q_diag))}}},
      {"lame", {{"n", c.n}, {"omega", c.omega}}},
      {"shape", c.shape},
      {"placement", {{"p", to_json(Eigen::VectorXd(c.p))}}},
      {"B", mat_to_json(c.B)},
      {"traction_law", law},
      {"grid", {{"N", c.grid_n}}},
      {"ewald", {{"target_tol", c.ewald_tol}, {"split_parameter", c.ewald_split}}},
      {"sweep",
       {{"eps", c.eps_list}, {"fit_degree", c.fit_degree}, {"micro_probe", to_json(Eigen::VectorXd(c.micro_probe))}}},
      {"newton", {{"tol", c.newton_tol}, {"max_iter", c.newton_max_iter}}},
      {"uniqueness", {{"eps", c.probe_eps}, {"radius", c.probe_radius}, {"trials", c.probe_trials}}},
      {"outputs", {{"dir", c.out_dir}}},
  };
}

std::string serialize_config(const RunConfig& cfg) { return config_to_json(cfg).dump(2) + "\n"; }

std::string config_hash(const RunConfig& cfg) {
  json j = config_to_json(cfg);
  // the output location does not change the computation
  j.erase("outputs");
  const std::string s = j.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Problem make_problem(const RunConfig& c) {
  const LatticeCell cell(c.q_diag);
  Problem pb{cell, LameParams(c.n, c.omega), make_shape(c.shape), c.p, c.B, make_traction_law(c.traction_law),
             c.grid_n, EwaldParams::adaptive(cell, c.ewald_tol, c.ewald_split), NewtonOptions{}};
  pb.newton.tol = c.newton_tol;
  pb.newton.max_iter = c.newton_max_iter;
  return pb;
}

std::string default_config_text() {
  return R"({
  "cell": {"q_diag": [1.0, 1.0]},
  "lame": {"n": 2, "omega": 1.0},
  "shape": {"family": "circle", "radius": 0.2},
  "placement": {"p": [0.5, 0.5]},
  "B": [[0.1, 0.0], [0.0, -0.05]],
  "traction_law": {
    "family": "polynomial",
    "c": [0.3, -0.2],
    "terms": [{"degree": 1, "coef": [1.0, 1.0]}, {"degree": 2, "coef": [0.1, 0.1]}],
    "xi_guess": [0.3, -0.2]
  },
  "grid": {"N": 128},
  "ewald": {"target_tol": 1e-12},
  "sweep": {"eps": [-0.05, -0.02, -0.01, -0.003, -0.001, 0.0, 0.001, 0.003, 0.01, 0.02, 0.05],
            "fit_degree": 6, "micro_probe": [2.0, 0.0]},
  "newton": {"tol": 1e-11, "max_iter": 25},
  "uniqueness": {"eps": 0.001, "radius": 0.05, "trials": 20},
  "outputs": {"dir": "."}
}
)";
}

}  // namespace lamebie
