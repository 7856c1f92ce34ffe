#pragma once

// Minimal JSON-lines writer. Floats are always printed with 17 significant
// digits, which nlohmann's shortest round-trip formatter does not do.

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lamebie/layer_potentials.hpp"

namespace lamebie::cli {

std::string fmt(double v);

class JsonLine {
 public:
  JsonLine& add(const std::string& key, double v);
  JsonLine& add(const std::string& key, int v);
  JsonLine& add(const std::string& key, bool v);
  JsonLine& add(const std::string& key, const std::string& v);
  JsonLine& add(const std::string& key, const char* v) { return add(key, std::string(v)); }
  JsonLine& add(const std::string& key, const Eigen::VectorXd& v);
  JsonLine& add(const std::string& key, const Density& rows);
  JsonLine& add(const std::string& key, const Eigen::MatrixXd& rows);
  JsonLine& raw(const std::string& key, const std::string& json_text);
  std::string str() const { return "{" + body_ + "}"; }

 private:
  void key(const std::string& k);
  std::string body_;
};

}  // namespace lamebie::cli
