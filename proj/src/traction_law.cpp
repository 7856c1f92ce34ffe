#include "lamebie/traction_law.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <sstream>

#include "lamebie/errors.hpp"
#include "lamebie/json_eigen.hpp"

namespace lamebie {

AffineLaw::AffineLaw(Eigen::Matrix2d K, Eigen::Vector2d c, Eigen::Vector2d g0, Eigen::Matrix2d Gt)
    : K_(K), c_(c), g0_(g0), Gt_(Gt) {}

Eigen::Vector2d AffineLaw::value(const Eigen::Vector2d& t, const Eigen::Vector2d& u) const {
  return K_ * (u - c_) + g0_ + Gt_ * t;
}

Eigen::Matrix2d AffineLaw::jacobian(const Eigen::Vector2d&, const Eigen::Vector2d&) const { return K_; }

nlohmann::json AffineLaw::to_json() const {
  return {{"family", "affine"},
          {"K", jsonio::mat_to_json(K_)},
          {"c", jsonio::to_json(c_)},
          {"g0", jsonio::to_json(g0_)},
          {"Gt", jsonio::mat_to_json(Gt_)}};
}

PolynomialLaw::PolynomialLaw(Eigen::Vector2d c, std::vector<Term> terms, Eigen::Vector2d g0, Eigen::Matrix2d Gt)
    : c_(c), terms_(std::move(terms)), g0_(g0), Gt_(Gt) {
  for (const auto& t : terms_) {
    if (t.degree < 1 || t.degree > 16) throw ConfigError("polynomial law degrees must lie in 1..16");
  }
}

Eigen::Vector2d PolynomialLaw::value(const Eigen::Vector2d& t, const Eigen::Vector2d& u) const {
  Eigen::Vector2d g = g0_ + Gt_ * t;
  const Eigen::Vector2d d = u - c_;
  for (const auto& term : terms_) {
    const Eigen::Vector2d a = term.coef + term.t_coef * t;
    for (int i = 0; i < 2; ++i) g[i] += a[i] * std::pow(d[i], term.degree);
  }
  return g;
}

Eigen::Matrix2d PolynomialLaw::jacobian(const Eigen::Vector2d& t, const Eigen::Vector2d& u) const {
  Eigen::Matrix2d j = Eigen::Matrix2d::Zero();
  const Eigen::Vector2d d = u - c_;
  for (const auto& term : terms_) {
    const Eigen::Vector2d a = term.coef + term.t_coef * t;
    for (int i = 0; i < 2; ++i) j(i, i) += a[i] * term.degree * std::pow(d[i], term.degree - 1);
  }
  return j;
}

nlohmann::json PolynomialLaw::to_json() const {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : terms_) {
    terms.push_back({{"degree", t.degree}, {"coef", jsonio::to_json(t.coef)}, {"t_coef", jsonio::mat_to_json(t.t_coef)}});
  }
  return {{"family", "polynomial"},
          {"c", jsonio::to_json(c_)},
          {"terms", terms},
          {"g0", jsonio::to_json(g0_)},
          {"Gt", jsonio::mat_to_json(Gt_)}};
}

void validate_law(const TractionLaw& law, double t_scale, double u_scale, double rel_tol) {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const double h = 1e-5 * u_scale;
  for (int trial = 0; trial < 8; ++trial) {
    const Eigen::Vector2d t(t_scale * uni(rng), t_scale * uni(rng));
    const Eigen::Vector2d u(u_scale * uni(rng), u_scale * uni(rng));
    const Eigen::Matrix2d jac = law.jacobian(t, u);
    Eigen::Matrix2d fd;
    for (int k = 0; k < 2; ++k) {
      Eigen::Vector2d e = Eigen::Vector2d::Zero();
      e[k] = h;
      fd.col(k) = (law.value(t, u + e) - law.value(t, u - e)) / (2.0 * h);
    }
    const double scale = std::max(1.0, jac.cwiseAbs().maxCoeff());
    if ((fd - jac).cwiseAbs().maxCoeff() > rel_tol * scale) {
      std::ostringstream os;
      os << "traction law '" << law.family() << "': Jacobian disagrees with finite differences by "
         << (fd - jac).cwiseAbs().maxCoeff();
      throw ConfigError(os.str());
    }
  }
}

namespace {

std::map<std::string, LawFactory>& registry() {
  static std::map<std::string, LawFactory> r;
  return r;
}

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

Eigen::Vector2d vec_or_zero(const nlohmann::json& j, const std::string& key, const std::string& path) {
  return j.contains(key) ? jsonio::vec2(j.at(key), path + "." + key) : Eigen::Vector2d::Zero();
}

Eigen::Matrix2d mat_or_zero(const nlohmann::json& j, const std::string& key, const std::string& path) {
  return j.contains(key) ? jsonio::mat2(j.at(key), path + "." + key) : Eigen::Matrix2d::Zero();
}

LawPtr affine_factory(const nlohmann::json& j) {
  const std::string p = "traction_law";
  jsonio::reject_unknown(j, {"family", "K", "c", "g0", "Gt"}, p);
  return std::make_shared<AffineLaw>(jsonio::mat2(jsonio::field(j, "K", p), p + ".K"),
                                     jsonio::vec2(jsonio::field(j, "c", p), p + ".c"), vec_or_zero(j, "g0", p),
                                     mat_or_zero(j, "Gt", p));
}

LawPtr polynomial_factory(const nlohmann::json& j) {
  const std::string p = "traction_law";
  jsonio::reject_unknown(j, {"family", "c", "terms", "g0", "Gt"}, p);
  const auto& terms = jsonio::field(j, "terms", p);
  if (!terms.is_array()) throw ConfigError(p + ".terms: expected an array");
  std::vector<PolynomialLaw::Term> out;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const std::string tp = p + ".terms[" + std::to_string(k) + "]";
    jsonio::reject_unknown(terms[k], {"degree", "coef", "t_coef"}, tp);
    PolynomialLaw::Term t;
    t.degree = jsonio::integer(jsonio::field(terms[k], "degree", tp), tp + ".degree");
    t.coef = jsonio::vec2(jsonio::field(terms[k], "coef", tp), tp + ".coef");
    t.t_coef = mat_or_zero(terms[k], "t_coef", tp);
    out.push_back(t);
  }
  return std::make_shared<PolynomialLaw>(jsonio::vec2(jsonio::field(j, "c", p), p + ".c"), out,
                                         vec_or_zero(j, "g0", p), mat_or_zero(j, "Gt", p));
}

void ensure_builtins() {
  static std::once_flag flag;
  std::call_once(flag, [] {
    registry()["affine"] = affine_factory;
    registry()["polynomial"] = polynomial_factory;
  });
}

}  // namespace

void register_traction_law(const std::string& name, LawFactory factory) {
  ensure_builtins();
  std::lock_guard<std::mutex> lock(registry_mutex());
  registry()[name] = std::move(factory);
}

LawPtr make_traction_law(const nlohmann::json& spec) {
  ensure_builtins();
  const std::string family = [&] {
    const auto& f = jsonio::field(spec, "family", "traction_law");
    if (!f.is_string()) throw ConfigError("traction_law.family: expected a string");
    return f.get<std::string>();
  }();
  LawFactory factory;
  {
    std::lock_guard<std::mutex> lock(registry_mutex());
    auto it = registry().find(family);
    if (it == registry().end()) throw ConfigError("traction_law.family: unknown law '" + family + "'");
    factory = it->second;
  }
  LawPtr law = factory(spec);
  validate_law(*law);
  return law;
}

std::vector<std::string> registered_laws() {
  ensure_builtins();
  std::lock_guard<std::mutex> lock(registry_mutex());
  std::vector<std::string> names;
  for (const auto& [k, v] : registry()) names.push_back(k);
  return names;
}

}  // namespace lamebie
