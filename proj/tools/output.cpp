#include "output.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace lamebie::cli {

std::string fmt(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

// JSON has no NaN; non-finite values become null
std::string num(double v) { return std::isfinite(v) ? fmt(v) : "null"; }

}  // namespace

void JsonLine::key(const std::string& k) {
  if (!body_.empty()) body_ += ",";
  body_ += nlohmann::json(k).dump() + ":";
}

JsonLine& JsonLine::add(const std::string& k, double v) {
  key(k);
  body_ += num(v);
  return *this;
}

JsonLine& JsonLine::add(const std::string& k, int v) {
  key(k);
  body_ += std::to_string(v);
  return *this;
}

JsonLine& JsonLine::add(const std::string& k, bool v) {
  key(k);
  body_ += v ? "true" : "false";
  return *this;
}

JsonLine& JsonLine::add(const std::string& k, const std::string& v) {
  key(k);
  body_ += nlohmann::json(v).dump();
  return *this;
}

JsonLine& JsonLine::add(const std::string& k, const Eigen::VectorXd& v) {
  key(k);
  body_ += "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) body_ += (i ? "," : "") + num(v[i]);
  body_ += "]";
  return *this;
}

JsonLine& JsonLine::add(const std::string& k, const Eigen::MatrixXd& rows) {
  key(k);
  body_ += "[";
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    body_ += i ? ",[" : "[";
    for (Eigen::Index j = 0; j < rows.cols(); ++j) body_ += (j ? "," : "") + num(rows(i, j));
    body_ += "]";
  }
  body_ += "]";
  return *this;
}

JsonLine& JsonLine::add(const std::string& k, const Density& rows) { return add(k, Eigen::MatrixXd(rows)); }

JsonLine& JsonLine::raw(const std::string& k, const std::string& json_text) {
  key(k);
  body_ += json_text;
  return *this;
}

}  // namespace lamebie::cli
