#pragma once

// Small converters between JSON arrays and fixed-size Eigen objects. Errors
// name the offending field path.

#include <set>
#include <string>

#include <Eigen/Dense>
#include <json.hpp>

#include "lamebie/errors.hpp"

namespace lamebie::jsonio {

inline const nlohmann::json& field(const nlohmann::json& j, const std::string& key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(path + "." + key + ": missing required field");
  return j.at(key);
}

inline void reject_unknown(const nlohmann::json& j, const std::set<std::string>& allowed, const std::string& path) {
  if (!j.is_object()) throw ConfigError((path.empty() ? "config" : path) + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) throw ConfigError((path.empty() ? "" : path + ".") + it.key() + ": unknown field");
  }
}

inline double number(const nlohmann::json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path + ": expected a number");
  return j.get<double>();
}

inline int integer(const nlohmann::json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path + ": expected an integer");
  return j.get<int>();
}

inline Eigen::VectorXd vector(const nlohmann::json& j, const std::string& path, int size = -1) {
  if (!j.is_array()) throw ConfigError(path + ": expected an array");
  if (size >= 0 && static_cast<int>(j.size()) != size) {
    throw ConfigError(path + ": expected " + std::to_string(size) + " entries, got " + std::to_string(j.size()));
  }
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = number(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

inline Eigen::Vector2d vec2(const nlohmann::json& j, const std::string& path) { return vector(j, path, 2); }

inline Eigen::Matrix2d mat2(const nlohmann::json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(path + ": expected a 2x2 array of rows");
  Eigen::Matrix2d m;
  for (int i = 0; i < 2; ++i) m.row(i) = vec2(j[i], path + "[" + std::to_string(i) + "]").transpose();
  return m;
}

inline nlohmann::json to_json(const Eigen::VectorXd& v) {
  nlohmann::json a = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

inline nlohmann::json mat_to_json(const Eigen::Matrix2d& m) {
  return nlohmann::json::array({{m(0, 0), m(0, 1)}, {m(1, 0), m(1, 1)}});
}

}  // namespace lamebie::jsonio
