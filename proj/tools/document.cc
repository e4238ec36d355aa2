// Copyright 2026 The povmclean Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "document.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace povm::cli {

namespace {

constexpr const char* kFormatVersion = "1";

void require(bool ok, const std::string& message) {
  if (!ok) throw DocumentError(message);
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw DocumentError(std::string("JSON parse error: ") + e.what());
  }
}

void check_header(const Json& j) {
  require(j.is_object(), "document must be a JSON object");
  require(j.contains("format_version"), "missing field 'format_version'");
  require(j["format_version"].is_string() && j["format_version"].get<std::string>() == kFormatVersion,
          "unsupported format_version (expected \"1\")");
}

Index read_dim(const Json& j) {
  require(j.contains("dim"), "missing field 'dim'");
  require(j["dim"].is_number_integer() && j["dim"].get<long long>() > 0, "'dim' must be a positive integer");
  return static_cast<Index>(j["dim"].get<long long>());
}

std::vector<Matrix> read_matrices(const Json& j, const char* field, Index dim) {
  require(j.contains(field) && j[field].is_array(), std::string("missing array '") + field + "'");
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < j[field].size(); ++i) {
    const std::string where = std::string(field) + "[" + std::to_string(i) + "]";
    Matrix m = decode_matrix(j[field][i], where);
    require(m.rows() == dim && m.cols() == dim,
            where + " is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ", expected " +
                std::to_string(dim) + "x" + std::to_string(dim));
    out.push_back(std::move(m));
  }
  return out;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace

Json encode_matrix(const Matrix& m) {
  Json rows = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json encode_real_matrix(const RealMatrix& m) {
  Json rows = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix decode_matrix(const Json& j, const std::string& where) {
  require(j.is_array() && !j.empty(), where + ": matrix must be a non-empty array of rows");
  const auto rows = static_cast<Index>(j.size());
  require(j[0].is_array() && !j[0].empty(), where + ": rows must be non-empty arrays");
  const auto cols = static_cast<Index>(j[0].size());
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    require(row.is_array() && static_cast<Index>(row.size()) == cols, where + ": ragged rows");
    for (Index c = 0; c < cols; ++c) {
      const Json& z = row[static_cast<std::size_t>(c)];
      require(z.is_array() && z.size() == 2 && z[0].is_number() && z[1].is_number(),
              where + ": entries must be [re, im] number pairs");
      m(r, c) = Complex(z[0].get<double>(), z[1].get<double>());
    }
  }
  return m;
}

Povm PovmDocument::to_povm() const {
  try {
    return Povm(SampleSpace(outcomes), effects);
  } catch (const std::invalid_argument& e) {
    throw DocumentError(e.what());
  }
}

PovmDocument PovmDocument::from_povm(const Povm& nu) {
  PovmDocument doc;
  doc.dim = nu.dim();
  doc.outcomes = nu.space().labels();
  doc.effects = nu.atoms();
  return doc;
}

PovmDocument parse_povm_document(const std::string& text) {
  const Json j = parse_json(text);
  check_header(j);
  PovmDocument doc;
  doc.dim = read_dim(j);
  require(j.contains("outcomes") && j["outcomes"].is_array(), "missing array 'outcomes'");
  std::set<std::string> seen;
  for (const auto& label : j["outcomes"]) {
    require(label.is_string(), "outcome labels must be strings");
    require(seen.insert(label.get<std::string>()).second, "duplicate outcome label '" + label.get<std::string>() + "'");
    doc.outcomes.push_back(label.get<std::string>());
  }
  doc.effects = read_matrices(j, "effects", doc.dim);
  require(!doc.effects.empty(), "'effects' must not be empty");
  require(doc.effects.size() == doc.outcomes.size(), "'effects' and 'outcomes' differ in length");
  if (j.contains("tolerance")) {
    require(j["tolerance"].is_number() && j["tolerance"].get<double>() > 0, "'tolerance' must be a positive number");
    doc.tolerance = j["tolerance"].get<double>();
  }
  return doc;
}

OperatorListDocument parse_operator_list(const std::string& text) {
  const Json j = parse_json(text);
  check_header(j);
  OperatorListDocument doc;
  doc.dim = read_dim(j);
  doc.operators = read_matrices(j, "operators", doc.dim);
  require(!doc.operators.empty(), "'operators' must not be empty");
  return doc;
}

Json to_json(const PovmDocument& doc) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["dim"] = doc.dim;
  j["outcomes"] = doc.outcomes;
  Json effects = Json::array();
  for (const auto& m : doc.effects) effects.push_back(encode_matrix(m));
  j["effects"] = std::move(effects);
  if (doc.tolerance) j["tolerance"] = *doc.tolerance;
  return j;
}

Json to_json(const OperatorListDocument& doc) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["dim"] = doc.dim;
  Json ops = Json::array();
  for (const auto& m : doc.operators) ops.push_back(encode_matrix(m));
  j["operators"] = std::move(ops);
  return j;
}

std::string serialize(const PovmDocument& doc) { return dump(to_json(doc)); }

std::string serialize(const OperatorListDocument& doc) { return dump(to_json(doc)); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DocumentError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace povm::cli
