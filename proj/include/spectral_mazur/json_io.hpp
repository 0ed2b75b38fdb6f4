#pragma once

// Matrix JSON: {"dim": n, "data": [[[re, im], ...], ...]}, row-major.
// nlohmann/json renders doubles in shortest round-trip form, so a matrix
// written and read back is bit-identical.

#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "error.hpp"
#include "matnorm.hpp"

namespace spectral_mazur {

using Json = nlohmann::json;

inline Json matrix_to_json(const Matrix& a) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::DimensionMismatch, "matrix JSON needs a square matrix");
  if (!a.allFinite()) throw Error(ErrorCode::InvalidArgument, "matrix JSON cannot hold non-finite entries");
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back(Json::array({a(i, j).real(), a(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return Json{{"dim", a.rows()}, {"data", std::move(rows)}};
}

inline Matrix matrix_from_json(const Json& j) {
  auto fail = [](const std::string& why) { return Error(ErrorCode::ParseError, "matrix JSON: " + why); };
  if (!j.is_object() || !j.contains("dim") || !j.contains("data")) throw fail("expected {\"dim\", \"data\"}");
  if (!j["dim"].is_number_integer() || j["dim"].get<long long>() < 1) throw fail("dim must be a positive integer");
  const auto n = static_cast<Eigen::Index>(j["dim"].get<long long>());
  const Json& data = j["data"];
  if (!data.is_array() || static_cast<Eigen::Index>(data.size()) != n) throw fail("data must have dim rows");
  Matrix a(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const Json& row = data[r];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) throw fail("each row must have dim entries");
    for (Eigen::Index c = 0; c < n; ++c) {
      const Json& z = row[c];
      if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
        throw fail("entries must be [re, im] number pairs");
      }
      a(r, c) = Complex(z[0].get<double>(), z[1].get<double>());
    }
  }
  return a;
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

inline void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  out << j.dump(2) << '\n';
}

inline Matrix read_matrix_file(const std::string& path) { return matrix_from_json(read_json_file(path)); }

}  // namespace spectral_mazur
