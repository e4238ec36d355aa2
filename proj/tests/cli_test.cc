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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "commands.hpp"
#include "document.hpp"

using namespace povm;
using namespace povm::cli;

namespace {

std::string fixture(const std::string& name) { return std::string(POVMCLEAN_FIXTURE_DIR) + "/" + name; }

struct Run {
  int code = 0;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Run run_tool(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  Run r;
  r.code = run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

}  // namespace

TEST(document, canonical_round_trip) {
  for (const char* name : {"projective.json", "smeared.json", "diagonal_pair.json", "rotated_pair.json", "split.json",
                           "single.json", "complex_projective.json", "not_a_povm.json"}) {
    const std::string text = read_file(fixture(name));
    EXPECT_EQ(serialize(parse_povm_document(text)), text) << name;
  }
  const std::string ops = read_file(fixture("operators.json"));
  EXPECT_EQ(serialize(parse_operator_list(ops)), ops);
}

TEST(document, decodes_complex_entries_row_major) {
  const auto doc = parse_povm_document(read_file(fixture("complex_projective.json")));
  EXPECT_EQ(doc.dim, 2);
  EXPECT_EQ(doc.outcomes, (std::vector<std::string>{"plus", "minus"}));
  EXPECT_EQ(doc.effects[0](0, 1), Complex(0, -0.5));
  EXPECT_EQ(doc.effects[0](1, 0), Complex(0, 0.5));
  EXPECT_FALSE(doc.tolerance.has_value());
  EXPECT_EQ(parse_povm_document(read_file(fixture("single.json"))).tolerance, std::optional<double>(1e-9));
}

TEST(document, generated_documents_round_trip) {
  const Povm nu({Matrix::Identity(3, 3) * Complex(0.25, 0), Matrix::Identity(3, 3) * Complex(0.75, 0)});
  const std::string text = serialize(PovmDocument::from_povm(nu));
  EXPECT_EQ(serialize(parse_povm_document(text)), text);
  const Povm back = parse_povm_document(text).to_povm();
  EXPECT_EQ(back.space().labels(), nu.space().labels());
  EXPECT_EQ(back.atom(1), nu.atom(1));
}

TEST(document, rejects_malformed_input) {
  EXPECT_THROW(parse_povm_document(read_file(fixture("malformed.json"))), DocumentError);
  EXPECT_THROW(parse_povm_document("[]"), DocumentError);
  EXPECT_THROW(parse_povm_document(R"({"format_version": "2", "dim": 1, "outcomes": ["a"], "effects": [[[[1, 0]]]]})"),
               DocumentError);
  EXPECT_THROW(parse_povm_document(R"({"format_version": "1", "dim": 0, "outcomes": [], "effects": []})"),
               DocumentError);
  // Wrong shape, ragged rows, bad entries, duplicate labels, length mismatch.
  EXPECT_THROW(parse_povm_document(R"({"format_version": "1", "dim": 2, "outcomes": ["a"], "effects": [[[[1, 0]]]]})"),
               DocumentError);
  EXPECT_THROW(
      parse_povm_document(
          R"({"format_version": "1", "dim": 2, "outcomes": ["a"], "effects": [[[[1, 0], [0, 0]], [[0, 0]]]]})"),
      DocumentError);
  EXPECT_THROW(parse_povm_document(R"({"format_version": "1", "dim": 1, "outcomes": ["a"], "effects": [[[1]]]})"),
               DocumentError);
  EXPECT_THROW(parse_povm_document(
                   R"({"format_version": "1", "dim": 1, "outcomes": ["a", "a"], "effects": [[[[1, 0]]], [[[0, 0]]]]})"),
               DocumentError);
  EXPECT_THROW(parse_povm_document(R"({"format_version": "1", "dim": 1, "outcomes": ["a", "b"], "effects": [[[[1, 0]]]]})"),
               DocumentError);
  EXPECT_THROW(parse_operator_list(R"({"format_version": "1", "dim": 1, "operators": []})"), DocumentError);
}

TEST(analyze, projective_document_is_clean) {
  const auto r = run_tool({"analyze", fixture("projective.json"), "--json", "--no-timestamp"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = r.json();
  EXPECT_EQ(j["verdict"], "ApproximatelyClean");
  EXPECT_EQ(j["decomposition_route"]["decomposition"]["h0_dim"], 0);
  EXPECT_EQ(j["feasibility_route"]["outcome"]["status"], "Feasible");
  EXPECT_TRUE(j["spectral_route"]["all_pass"].get<bool>());
  EXPECT_FALSE(j.contains("timestamp"));
}

TEST(analyze, diagonal_pair_reports_spectral_obstruction) {
  const auto r = run_tool({"analyze", fixture("diagonal_pair.json"), "--json", "--no-timestamp"});
  ASSERT_EQ(r.code, 1) << r.err;
  const Json j = r.json();
  EXPECT_EQ(j["verdict"], "NotApproximatelyClean");
  EXPECT_NEAR(j["povm"]["atoms"][0]["lambda_max"].get<double>(), 0.75, 1e-12);
  EXPECT_TRUE(j["decomposition_route"].contains("no_basis"));
  EXPECT_TRUE(j["feasibility_route"].contains("witness"));

  const auto text = run_tool({"analyze", fixture("diagonal_pair.json")});
  EXPECT_NE(text.out.find("lambda_max = 0.75"), std::string::npos) << text.out;
}

TEST(analyze, split_projection_reports_both_obstructions) {
  const auto r = run_tool({"analyze", fixture("split.json"), "--json", "--no-timestamp"});
  ASSERT_EQ(r.code, 1) << r.err;
  const Json j = r.json();
  EXPECT_EQ(j["decomposition_route"]["obstruction"]["quantity"], "basis residual norm");
  EXPECT_NEAR(j["decomposition_route"]["obstruction"]["value"].get<double>(), 0.5, 1e-9);
  const Json& w = j["feasibility_route"]["witness"];
  EXPECT_GT(w["gap"].get<double>(), 0.4);
  EXPECT_FALSE(j["spectral_route"]["all_pass"].get<bool>());
}

TEST(analyze, single_outcome_is_clean_and_uses_document_tolerance) {
  const auto r = run_tool({"analyze", fixture("single.json"), "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = r.json();
  EXPECT_DOUBLE_EQ(j["tolerances"]["eq"].get<double>(), 1e-9);
  EXPECT_TRUE(j.contains("timestamp"));
  const auto loose = run_tool({"analyze", fixture("single.json"), "--json", "--tol", "1e-6"});
  EXPECT_DOUBLE_EQ(loose.json()["tolerances"]["norm"].get<double>(), 1e-4);
}

TEST(analyze, input_errors_exit_64) {
  EXPECT_EQ(run_tool({"analyze", fixture("malformed.json")}).code, 64);
  const auto bad = run_tool({"analyze", fixture("not_a_povm.json")});
  EXPECT_EQ(bad.code, 64);
  EXPECT_NE(bad.err.find("not a POVM"), std::string::npos);
  EXPECT_EQ(run_tool({"analyze", fixture("does_not_exist.json")}).code, 64);
  EXPECT_EQ(run_tool({"analyze", fixture("projective.json"), "--seed", "xyz"}).code, 64);
  EXPECT_EQ(run_tool({"analyze"}).code, 64);
  EXPECT_EQ(run_tool({}).code, 64);
  EXPECT_EQ(run_tool({"--help"}).code, 0);
}

TEST(analyze, deterministic_output) {
  const std::vector<std::string> args{"analyze", fixture("split.json"), "--json", "--no-timestamp", "--seed", "0x1234"};
  const auto a = run_tool(args);
  const auto b = run_tool(args);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.json()["seed"], "0x1234");
}

TEST(analyze, writes_report_to_file) {
  const auto path = std::filesystem::temp_directory_path() / "povmclean_cli_test_report.json";
  const auto r = run_tool({"analyze", fixture("projective.json"), "--json", "--no-timestamp", "--out", path.string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  const Json j = Json::parse(read_file(path.string()));
  EXPECT_EQ(j["verdict"], "ApproximatelyClean");
  std::filesystem::remove(path);
}

TEST(compare, identical_documents_are_equivalent) {
  const auto r = run_tool({"compare", fixture("split.json"), fixture("split.json"), "--json", "--no-timestamp"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.json()["result"], "equivalent");
}

TEST(compare, projective_against_its_smearing_is_one_way) {
  const auto r = run_tool({"compare", fixture("projective.json"), fixture("smeared.json"), "--json", "--no-timestamp"});
  EXPECT_EQ(r.code, 1) << r.err;
  const Json j = r.json();
  EXPECT_EQ(j["result"], "first cleaner");
  EXPECT_EQ(j["second_cleaner_or_equal_to_first"]["certificate"]["status"], "Feasible");
  EXPECT_EQ(j["first_cleaner_or_equal_to_second"]["certificate"]["status"], "InfeasibleWitness");
}

TEST(compare, unitary_conjugates_are_equivalent) {
  const auto r = run_tool({"compare", fixture("diagonal_pair.json"), fixture("rotated_pair.json")});
  EXPECT_EQ(r.code, 0) << r.err << r.out;
}

TEST(compare, label_mismatch_is_an_input_error) {
  const auto r = run_tool({"compare", fixture("projective.json"), fixture("diagonal_pair.json")});
  EXPECT_EQ(r.code, 64);
  EXPECT_NE(r.err.find("labels"), std::string::npos);
}

TEST(dilate, prints_roundtrip_residual) {
  const auto r = run_tool({"dilate", fixture("diagonal_pair.json"), "--json", "--no-timestamp"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = r.json();
  EXPECT_EQ(j["dilation"]["k_dim"], 4);
  EXPECT_LE(j["verification"]["roundtrip_error"].get<double>(), 1e-12);
  const Json& omega = j["dilation"]["omega"];
  EXPECT_EQ(omega["outcomes"], Json({"a", "b"}));
  const auto text = run_tool({"dilate", fixture("diagonal_pair.json")});
  EXPECT_NE(text.out.find("roundtrip residual"), std::string::npos);
}

TEST(norm, projective_case_takes_the_max) {
  const auto r = run_tool({"norm", fixture("projective.json"), fixture("operators.json"), "--json", "--no-timestamp"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = r.json();
  EXPECT_EQ(j["case"], "projections");
  // ||[[1, 2], [0, 1]]|| = 1 + sqrt(2) < ||[[0, 0], [3, 0]]|| = 3.
  EXPECT_NEAR(j["norm"].get<double>(), 3.0, 1e-9);
  EXPECT_NEAR(j["max_l_norm"].get<double>(), 3.0, 1e-9);
  EXPECT_TRUE(j["projection_matches"].get<bool>());
}

TEST(norm, commuting_case_and_count_mismatch) {
  const auto r = run_tool({"norm", fixture("smeared.json"), fixture("operators.json"), "--json", "--no-timestamp"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.json()["case"], "commuting");
  EXPECT_TRUE(r.json()["joint_spectrum_matches"].get<bool>());
  EXPECT_EQ(run_tool({"norm", fixture("split.json"), fixture("operators.json")}).code, 64);
}

TEST(decompose, projective_gives_dirac_measures) {
  const auto r = run_tool({"decompose", fixture("projective.json"), "--json", "--no-timestamp"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = r.json();
  EXPECT_TRUE(j["perfect"].get<bool>());
  EXPECT_TRUE(j["atom_basis"]["perfect"].get<bool>());
  const Json& rows = j["signed_measures"];
  ASSERT_EQ(rows.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t x = 0; x < 2; ++x) {
      EXPECT_NEAR(rows[i]["values"][x].get<double>(), i == x ? 1.0 : 0.0, 1e-12);
    }
  }
}

TEST(decompose, split_has_mass_two_and_no_basis_for_pair) {
  const auto r = run_tool({"decompose", fixture("split.json"), "--json", "--no-timestamp"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_FALSE(r.json()["perfect"].get<bool>());
  EXPECT_NEAR(r.json()["signed_measures"][0]["total"].get<double>(), 2.0, 1e-9);
  EXPECT_EQ(run_tool({"decompose", fixture("diagonal_pair.json")}).code, 1);
}
