#include <doctest.h>

#include <sstream>
#include <string>

#include "lamebie/config.hpp"
#include "lamebie/errors.hpp"

using namespace lamebie;
using nlohmann::json;

namespace {

json default_json() { return json::parse(default_config_text()); }

// message of the ConfigError thrown by parsing `j`, or "" if it parses
std::string rejection(const json& j) {
  try {
    parse_config(j.dump(2));
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST_CASE("default configuration") {
  const RunConfig c = parse_config(default_config_text());
  CHECK(c.grid_n == 128);
  CHECK(c.omega == 1.0);
  CHECK(c.xi_guess == Eigen::Vector2d(0.3, -0.2));
  CHECK(c.B(1, 1) == -0.05);
  REQUIRE(c.eps_list.size() == 11);
  CHECK(c.eps_list.front() == -0.05);
  CHECK(c.eps_list[5] == 0.0);
  CHECK(c.traction_law.contains("xi_guess") == false);
  CHECK(c.probe_trials == 20);
}

TEST_CASE("configurations survive a serialize/parse round trip") {
  std::vector<json> cases{default_json()};
  json ranged = default_json();
  ranged["sweep"] = {{"min", 1e-4}, {"max", 0.05}, {"count", 6}, {"symmetric", true}, {"fit_degree", 5}};
  cases.push_back(ranged);
  json other = default_json();
  other["cell"]["q_diag"] = {1.0, 1.5};
  other["lame"]["omega"] = 2.5;
  other["shape"] = {{"family", "fourier"}, {"cos_x", {0.0, 0.3}}, {"sin_x", {0.0, 0.0}}, {"cos_y", {0.0, 0.0}},
                    {"sin_y", {0.0, 0.25}}};
  other["placement"]["p"] = {0.4, 0.7};
  other["traction_law"] = {{"family", "affine"}, {"K", {{2, 0.1}, {0.1, 3}}}, {"c", {0.1, 1.0 / 3.0}},
                           {"xi_guess", {0, 0}}};
  other["grid"]["N"] = 64;
  cases.push_back(other);
  for (const json& j : cases) {
    const RunConfig a = parse_config(j.dump());
    const std::string text = serialize_config(a);
    const RunConfig b = parse_config(text);
    CHECK(serialize_config(b) == text);
    CHECK(config_hash(a) == config_hash(b));
    CHECK(b.eps_list == a.eps_list);
    CHECK(b.traction_law == a.traction_law);
  }
}

TEST_CASE("range sweeps are geometric and symmetric") {
  json j = default_json();
  j["sweep"] = {{"min", 1e-3}, {"max", 1e-1}, {"count", 3}};
  const RunConfig c = parse_config(j.dump());
  REQUIRE(c.eps_list.size() == 7);
  CHECK(c.eps_list[0] == doctest::Approx(-0.1));
  CHECK(c.eps_list[2] == doctest::Approx(-1e-3));
  CHECK(c.eps_list[3] == 0.0);
  CHECK(c.eps_list[5] == doctest::Approx(1e-2));
  j["sweep"]["symmetric"] = false;
  CHECK(parse_config(j.dump()).eps_list.size() == 4);
  j["sweep"]["symmetric"] = "yes";
  CHECK(contains(rejection(j), "sweep.symmetric"));
}

TEST_CASE("material constraint is enforced") {
  json j = default_json();
  j["lame"]["omega"] = -0.9;
  const std::string msg = rejection(j);
  CHECK(contains(msg, "omega = -0.9"));
  CHECK(contains(msg, "omega > 1 - 2/n = 0"));
  j["lame"]["omega"] = 0.0;
  CHECK_FALSE(rejection(j).empty());
  j["lame"]["omega"] = 1e-3;
  CHECK(rejection(j).empty());
  j["lame"]["n"] = 3;
  CHECK(contains(rejection(j), "lame.n"));
}

TEST_CASE("eps beyond the admissible range is rejected with eps0 in the message") {
  json j = default_json();
  // a circle of radius 0.2 centred in the unit cell leaves the cell beyond eps = 2.5
  const double eps0 = compute_eps0(CircleShape(0.2), LatticeCell(Eigen::Vector2d(1, 1)), Eigen::Vector2d(0.5, 0.5));
  std::ostringstream os;
  os << "eps0 = " << eps0;
  j["sweep"]["eps"] = {-0.01, 0.0, 0.01, 3.0};
  CHECK(contains(rejection(j), os.str()));
  j["sweep"]["eps"] = {-eps0, 0.0};
  CHECK(contains(rejection(j), "eps0"));
  j["sweep"]["eps"] = {0.0, 0.01};
  j["uniqueness"]["eps"] = 4.0;
  CHECK(contains(rejection(j), "eps0"));
}

TEST_CASE("grid size rules") {
  json j = default_json();
  for (int n : {15, 127, 8, 0, -4}) {
    j["grid"]["N"] = n;
    CHECK(contains(rejection(j), "grid.N"));
  }
  j["grid"]["N"] = 16;
  CHECK(rejection(j).empty());
}

TEST_CASE("unknown and missing fields are reported by path") {
  json j = default_json();
  j["extra"] = 1;
  CHECK(contains(rejection(j), "extra: unknown field"));

  j = default_json();
  j["grid"]["n_nodes"] = 64;
  CHECK(contains(rejection(j), "grid.n_nodes"));

  j = default_json();
  j["traction_law"]["Kk"] = 1;
  CHECK(contains(rejection(j), "traction_law.Kk"));

  j = default_json();
  j["traction_law"]["terms"][1]["power"] = 2;
  CHECK(contains(rejection(j), "traction_law.terms[1].power"));

  j = default_json();
  j["shape"]["r"] = 0.2;
  CHECK(contains(rejection(j), "shape.r"));

  j = default_json();
  j["traction_law"].erase("xi_guess");
  CHECK(contains(rejection(j), "traction_law.xi_guess"));

  j = default_json();
  j.erase("cell");
  CHECK(contains(rejection(j), "cell"));

  j = default_json();
  j["B"] = {1, 2, 3};
  CHECK(contains(rejection(j), "B"));
}

TEST_CASE("invalid geometry and law data") {
  json j = default_json();
  j["shape"] = {{"family", "star"}, {"r0", 0.2}, {"amplitude", 0.5}, {"lobes", 3}};
  CHECK(contains(rejection(j), "shape"));
  j = default_json();
  j["shape"]["family"] = "blob";
  CHECK(contains(rejection(j), "unknown shape"));
  j = default_json();
  j["cell"]["q_diag"] = {1.0, -1.0};
  CHECK(contains(rejection(j), "cell.q_diag[1]"));
  j = default_json();
  j["traction_law"]["family"] = "cubic";
  CHECK(contains(rejection(j), "unknown law"));
  j = default_json();
  j["newton"]["tol"] = 0.0;
  CHECK(contains(rejection(j), "newton.tol"));
  j = default_json();
  j["uniqueness"]["radius"] = -1.0;
  CHECK(contains(rejection(j), "uniqueness.radius"));
}

TEST_CASE("syntax errors name the line") {
  const std::string text = "{\n  \"cell\": {\"q_diag\": [1, 1]},\n  \"lame\": {\"omega\": 1.0,,}\n}\n";
  try {
    parse_config(text);
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(contains(e.what(), "line 3"));
  }
  CHECK_THROWS_AS(parse_config("[1, 2]"), ConfigError);
  CHECK_THROWS_AS(parse_config_file("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("config hash") {
  const RunConfig a = parse_config(default_config_text());
  const std::string h = config_hash(a);
  CHECK(h.size() == 16);
  CHECK(h.find_first_not_of("0123456789abcdef") == std::string::npos);
  CHECK(config_hash(parse_config(default_config_text())) == h);

  // key order and whitespace in the input do not matter
  CHECK(config_hash(parse_config(default_json().dump())) == h);

  // the output directory does not enter the hash; physics does
  json j = default_json();
  j["outputs"]["dir"] = "/tmp/elsewhere";
  CHECK(config_hash(parse_config(j.dump())) == h);
  j["lame"]["omega"] = 1.0 + 1e-15;
  CHECK(config_hash(parse_config(j.dump())) != h);
}

TEST_CASE("problem assembly from a configuration") {
  const RunConfig c = parse_config(default_config_text());
  const Problem pb = make_problem(c);
  CHECK(pb.n_nodes == 128);
  CHECK(pb.B == c.B);
  CHECK(pb.p == c.p);
  CHECK(pb.law->family() == "polynomial");
  CHECK(pb.newton.tol == c.newton_tol);
  CHECK(pb.ewald.has_value());
}
