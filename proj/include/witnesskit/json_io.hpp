#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "witnesskit/error.hpp"
#include "witnesskit/random.hpp"

namespace witnesskit::json_io {

using nlohmann::json;

inline json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw Error(error_kind::kParse, "complex value must be a two-element numeric array");
  const Complex z(j[0].get<double>(), j[1].get<double>());
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw Error(error_kind::kParse, "complex value is not finite");
  return z;
}

inline json vector_to_json(const CVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

inline CVector vector_from_json(const json& j) {
  if (!j.is_array()) throw Error(error_kind::kParse, "expected an array of complex values");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
  return v;
}

/// Row-major nested arrays.
inline json matrix_to_json(const CMatrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(vector_to_json(m.row(i).transpose()));
  return out;
}

inline CMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw Error(error_kind::kParse, "expected a nonempty matrix");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].is_array() ? j[0].size() : 0);
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw Error(error_kind::kParse, "ragged matrix rows");
    m.row(i) = vector_from_json(row).transpose();
  }
  return m;
}

inline json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(error_kind::kIo, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(error_kind::kParse, path + ": " + e.what());
  }
}

inline json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(error_kind::kParse, e.what());
  }
}

}  // namespace witnesskit::json_io
