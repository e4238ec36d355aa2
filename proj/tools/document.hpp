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

#ifndef POVMCLEAN_TOOLS_DOCUMENT_HPP
#define POVMCLEAN_TOOLS_DOCUMENT_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "povm/povm.hpp"

namespace povm::cli {

using Json = nlohmann::ordered_json;

/// Malformed or inconsistent input document.
class DocumentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// On-disk POVM:
///
///   {"format_version": "1", "dim": d, "outcomes": [labels...],
///    "effects": [matrix...], "tolerance": eq (optional)}
///
/// Matrices are row-major nested arrays of [re, im] pairs.
struct PovmDocument {
  Index dim = 0;
  std::vector<std::string> outcomes;
  std::vector<Matrix> effects;
  std::optional<double> tolerance;

  Povm to_povm() const;
  static PovmDocument from_povm(const Povm& nu);
};

/// List of square matrices of a common size, used for the L_j of `norm`:
///
///   {"format_version": "1", "dim": p, "operators": [matrix...]}
struct OperatorListDocument {
  Index dim = 0;
  std::vector<Matrix> operators;
};

Json encode_matrix(const Matrix& m);
Matrix decode_matrix(const Json& j, const std::string& where);
Json encode_real_matrix(const RealMatrix& m);

PovmDocument parse_povm_document(const std::string& text);
OperatorListDocument parse_operator_list(const std::string& text);

Json to_json(const PovmDocument& doc);
Json to_json(const OperatorListDocument& doc);

/// Canonical text form: two-space indentation and a trailing newline.
std::string serialize(const PovmDocument& doc);
std::string serialize(const OperatorListDocument& doc);

std::string read_file(const std::string& path);

}  // namespace povm::cli

#endif  // POVMCLEAN_TOOLS_DOCUMENT_HPP
