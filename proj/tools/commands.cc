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

#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "document.hpp"
#include "povm/cleanness.hpp"
#include "povm/tensor_norms.hpp"

namespace povm::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

struct Flags {
  std::optional<double> tol;
  std::string seed = "0xC1EA11";
  std::optional<std::size_t> max_iter;
  std::optional<std::size_t> max_atoms;
  bool json = false;
  bool no_timestamp = false;
  std::string out;
};

struct Settings {
  Tolerances tol;
  std::uint64_t seed = 0;
  CleannessOptions opts;
};

struct Report {
  Json json;
  std::ostringstream text;
  int exit_code = 0;
};

std::uint64_t parse_seed(const std::string& s) {
  std::string digits = s;
  if (digits.rfind("0x", 0) == 0 || digits.rfind("0X", 0) == 0) digits = digits.substr(2);
  if (digits.empty() || digits.size() > 16 ||
      !std::all_of(digits.begin(), digits.end(), [](unsigned char c) { return std::isxdigit(c) != 0; })) {
    throw DocumentError("--seed expects a hexadecimal value, got '" + s + "'");
  }
  return std::stoull(digits, nullptr, 16);
}

std::string hex(std::uint64_t v) {
  std::ostringstream os;
  os << "0x" << std::uppercase << std::hex << v;
  return os.str();
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

Settings make_settings(const Flags& f, std::optional<double> document_tol) {
  Settings s;
  if (f.tol) {
    s.tol = Tolerances::with_eq(*f.tol);
  } else if (document_tol) {
    s.tol = Tolerances::with_eq(*document_tol);
  }
  s.seed = parse_seed(f.seed);
  s.opts.solver.witness.seed = s.seed;
  s.opts.basis.positivity.seed = s.seed;
  if (f.max_iter) s.opts.solver.max_iterations = *f.max_iter;
  if (f.max_atoms) s.opts.basis.max_atoms = *f.max_atoms;
  return s;
}

Json header(const std::string& command, const Flags& f, const Settings& s) {
  Json j;
  j["tool"] = "povmclean";
  j["version"] = kVersion;
  j["command"] = command;
  if (!f.no_timestamp) j["timestamp"] = utc_timestamp();
  j["tolerances"] = {{"psd", s.tol.psd}, {"spec", s.tol.spec}, {"eq", s.tol.eq}, {"norm", s.tol.norm}};
  j["seed"] = hex(s.seed);
  j["max_iterations"] = s.opts.solver.max_iterations;
  j["max_atoms"] = s.opts.basis.max_atoms;
  return j;
}

Povm load_povm(const std::string& path, std::optional<double>* doc_tol = nullptr) {
  const auto doc = parse_povm_document(read_file(path));
  if (doc_tol != nullptr) *doc_tol = doc.tolerance;
  return doc.to_povm();
}

void require_valid_input(const Povm& nu, const Tolerances& tol, const std::string& path) {
  const auto r = validate(nu, tol);
  if (r.ok) return;
  std::ostringstream os;
  os << path << ": not a POVM (completeness error " << r.completeness_error;
  for (std::size_t i = 0; i < r.atom_psd.size(); ++i) {
    if (!r.atom_psd[i]) os << "; effect '" << nu.space().label(i) << "' has eigenvalue " << r.atom_min_eigenvalue[i];
  }
  os << ")";
  throw DocumentError(os.str());
}

Json labels_of(const Event& e, const SampleSpace& space) {
  Json out = Json::array();
  for (auto i : e.indices()) out.push_back(space.label(i));
  return out;
}

std::string braces(const Event& e, const SampleSpace& space) {
  std::string s = "{";
  for (auto i : e.indices()) {
    if (s.size() > 1) s += ",";
    s += space.label(i);
  }
  return s + "}";
}

Json encode_witness(const NormWitness& w) {
  Json l = Json::array();
  for (const auto& m : w.l) l.push_back(encode_matrix(m));
  return {{"p", w.p}, {"source_norm", w.source_norm}, {"target_norm", w.target_norm}, {"gap", w.gap}, {"l", l}};
}

Json encode_choi(const ChoiMatrix& c) {
  return {{"source_dim", c.source_dim}, {"target_dim", c.target_dim}, {"matrix", encode_matrix(c.c)}};
}

Json encode_outcome(const FeasibilityOutcome& outcome) {
  Json j;
  j["status"] = status_name(outcome);
  if (const auto* f = std::get_if<Feasible>(&outcome)) {
    j["iterations"] = f->iterations;
    j["affine_residual"] = f->affine_residual;
    j["interpolation_error"] = f->interpolation_error;
    j["unitality_error"] = f->unitality_error;
    j["choi"] = encode_choi(f->choi);
    Json k = Json::array();
    for (const auto& m : f->kraus) k.push_back(encode_matrix(m));
    j["kraus"] = std::move(k);
  } else if (const auto* w = std::get_if<InfeasibleWitness>(&outcome)) {
    j["iterations"] = w->iterations;
    j["linear"] = w->linear;
    j["witness"] = encode_witness(w->witness);
  } else if (const auto* u = std::get_if<Undetermined>(&outcome)) {
    j["iterations"] = u->iterations;
    j["distance"] = u->distance;
    j["witness_search_ran"] = u->witness_search_ran;
  }
  return j;
}

Json encode_basis(const MeasurementBasis& b, const SampleSpace& space, const Tolerances& tol) {
  Json events = Json::array();
  for (const auto& e : b.events) events.push_back(labels_of(e, space));
  Json positivity = Json::array();
  for (const auto& f : b.positivity.functionals) positivity.push_back(to_string(f.status));
  return {{"events", events},
          {"residual_event", labels_of(b.residual_event, space)},
          {"residual_norm", linalg::operator_norm(b.residual)},
          {"residual_trivial", residual_is_trivial(b, tol)},
          {"positivity", positivity}};
}

Json encode_spectral(const BasisSpectralReport& r) {
  return {{"passes", r.passes},
          {"residual_trivial", r.residual_trivial},
          {"residual_norm", r.residual_norm},
          {"max_gaps", r.max_gaps},
          {"min_gaps", r.min_gaps}};
}

Json encode_decomposition(const ProjectiveDecomposition& d) {
  Json q = Json::array();
  for (const auto& m : d.q_blocks) q.push_back(encode_matrix(m));
  Json y = Json::array();
  for (const auto& m : d.y_blocks) y.push_back(encode_matrix(m));
  return {{"q_dims", d.q_dims},   {"h0_dim", d.h0_dim},   {"offblock_error", d.offblock_error},
          {"unitary", encode_matrix(d.unitary)}, {"q_blocks", q}, {"y_blocks", y}};
}

std::string basis_list(const MeasurementBasis& b, const SampleSpace& space) {
  std::string s;
  for (const auto& e : b.events) s += (s.empty() ? "" : " ") + braces(e, space);
  return s;
}

// Commands -----------------------------------------------------------------

void cmd_analyze(const std::string& path, const Flags& f, Report& r) {
  std::optional<double> doc_tol;
  const Povm nu = load_povm(path, &doc_tol);
  const Settings s = make_settings(f, doc_tol);
  require_valid_input(nu, s.tol, path);
  const auto& space = nu.space();
  auto& j = r.json = header("analyze", f, s);
  auto& t = r.text;
  j["input"] = path;

  const auto val = validate(nu, s.tol);
  const auto ms = measurement_space(nu);
  const auto zero = null_atoms(nu, s.tol);
  Json atoms = Json::array();
  for (std::size_t x = 0; x < nu.outcomes(); ++x) {
    const auto b = linalg::spectral_bounds(nu.atom(x));
    atoms.push_back({{"label", space.label(x)}, {"lambda_min", b.min}, {"lambda_max", b.max}, {"null", static_cast<bool>(zero[x])}});
  }
  j["povm"] = {{"dim", nu.dim()},
               {"outcomes", nu.outcomes()},
               {"completeness_error", val.completeness_error},
               {"measurement_space_dim", ms.dim},
               {"projective", is_projective(nu, s.tol)},
               {"informationally_complete", is_informationally_complete(nu)},
               {"atoms", atoms}};
  t << "POVM: d = " << nu.dim() << ", n = " << nu.outcomes() << ", dim T = " << ms.dim
    << (is_projective(nu, s.tol) ? ", projective" : "") << "\n";
  for (const auto& a : atoms) {
    t << "  atom " << a["label"].get<std::string>() << ": lambda_min = " << a["lambda_min"].get<double>()
      << ", lambda_max = " << a["lambda_max"].get<double>() << (a["null"].get<bool>() ? " (null)" : "") << "\n";
  }

  const auto v = is_approximately_clean(nu, s.opts, s.tol);

  Json spectral;
  if (v.bases) {
    Json bases = Json::array();
    for (std::size_t i = 0; i < v.bases->size(); ++i) {
      Json b = encode_basis((*v.bases)[i], space, s.tol);
      b["spectral"] = encode_spectral(v.spectral[i]);
      bases.push_back(std::move(b));
    }
    spectral["bases"] = std::move(bases);
    const bool all = std::all_of(v.spectral.begin(), v.spectral.end(), [](const auto& x) { return x.passes; });
    spectral["all_pass"] = !v.spectral.empty() && all;
    t << "spectral route: " << v.bases->size() << " measurement bases";
    if (!v.spectral.empty()) t << ", " << (all ? "all pass" : "some fail");
    t << "\n";
    for (std::size_t i = 0; i < v.bases->size(); ++i) {
      t << "  basis " << basis_list((*v.bases)[i], space) << ": residual " << v.spectral[i].residual_norm << ", "
        << (v.spectral[i].passes ? "passes" : "fails") << "\n";
    }
  }
  if (v.basis_note) {
    spectral["note"] = *v.basis_note;
    t << "  note: " << *v.basis_note << "\n";
  }
  j["spectral_route"] = std::move(spectral);

  Json decomposition;
  const auto extracted = extract_basis(nu, s.opts.basis, s.tol);
  if (const auto* b = std::get_if<MeasurementBasis>(&extracted)) {
    decomposition["basis"] = encode_basis(*b, space, s.tol);
    const auto d = projective_decomposition(nu, *b, s.tol);
    if (const auto* pd = std::get_if<ProjectiveDecomposition>(&d)) {
      decomposition["decomposition"] = encode_decomposition(*pd);
      t << "decomposition route: basis " << basis_list(*b, space) << ", K dim " << pd->k_dim() << ", h0_dim "
        << pd->h0_dim << "\n";
    } else {
      const auto& o = std::get<Obstruction>(d);
      Json oj = {{"quantity", o.quantity}, {"value", o.value}};
      if (o.index) oj["index"] = *o.index;
      decomposition["obstruction"] = std::move(oj);
      t << "decomposition route: obstruction " << o.quantity << " = " << o.value << "\n";
    }
  } else {
    const auto& nb = std::get<NoBasisFound>(extracted);
    decomposition["no_basis"] = {{"families_examined", nb.families_examined}, {"reason", nb.reason}};
    t << "decomposition route: no measurement basis (" << nb.reason << ")\n";
  }
  j["decomposition_route"] = std::move(decomposition);

  Json feas = {{"route", v.route},
               {"dilation_dim", v.dilation.k_dim},
               {"outcome", encode_outcome(v.feasibility)}};
  if (v.dilation_certificate) feas["dilation_certificate"] = encode_choi(*v.dilation_certificate);
  if (v.witness) feas["witness"] = encode_witness(*v.witness);
  j["feasibility_route"] = std::move(feas);
  t << "feasibility route: " << status_name(v.feasibility);
  if (v.witness) t << ", witness gap " << v.witness->gap << " at block size " << v.witness->p;
  t << "\n";

  j["verdict"] = to_string(v.verdict);
  t << "verdict: " << to_string(v.verdict) << "\n";
  r.exit_code = v.verdict == Cleanness::ApproximatelyClean  ? kExitClean
                : v.verdict == Cleanness::NotApproximatelyClean ? kExitNotClean
                                                                 : kExitUndetermined;
}

void cmd_compare(const std::string& path1, const std::string& path2, const Flags& f, Report& r) {
  std::optional<double> doc_tol;
  const Povm nu1 = load_povm(path1, &doc_tol);
  const Povm nu2 = load_povm(path2);
  const Settings s = make_settings(f, doc_tol);
  require_valid_input(nu1, s.tol, path1);
  require_valid_input(nu2, s.tol, path2);
  if (!(nu1.space() == nu2.space())) throw DocumentError("outcome labels differ between the two documents");

  auto& j = r.json = header("compare", f, s);
  auto& t = r.text;
  j["inputs"] = {path1, path2};
  const auto forward = cleaner_approx(nu1, nu2, s.opts.solver, s.tol);
  const auto backward = cleaner_approx(nu2, nu1, s.opts.solver, s.tol);
  j["second_cleaner_or_equal_to_first"] = {{"relation", to_string(forward.relation)},
                                           {"certificate", encode_outcome(forward.certificate)}};
  j["first_cleaner_or_equal_to_second"] = {{"relation", to_string(backward.relation)},
                                           {"certificate", encode_outcome(backward.certificate)}};
  t << "second <= first: " << to_string(forward.relation) << " (" << status_name(forward.certificate) << ")\n";
  t << "first <= second: " << to_string(backward.relation) << " (" << status_name(backward.certificate) << ")\n";

  const bool fw = forward.relation == Relation::CleanerOrEqual;
  const bool bw = backward.relation == Relation::CleanerOrEqual;
  const bool fw_no = forward.relation == Relation::NotCleaner;
  const bool bw_no = backward.relation == Relation::NotCleaner;
  std::string result;
  if (fw && bw) {
    result = "equivalent";
    r.exit_code = 0;
  } else if ((fw && bw_no) || (bw && fw_no)) {
    result = fw ? "first cleaner" : "second cleaner";
    r.exit_code = 1;
  } else if (fw_no && bw_no) {
    result = "incomparable";
    r.exit_code = 2;
  } else {
    result = "undetermined";
    r.exit_code = 2;
  }
  j["result"] = result;
  t << "result: " << result << "\n";
}

void cmd_dilate(const std::string& path, const Flags& f, Report& r) {
  std::optional<double> doc_tol;
  const Povm nu = load_povm(path, &doc_tol);
  const Settings s = make_settings(f, doc_tol);
  require_valid_input(nu, s.tol, path);
  auto& j = r.json = header("dilate", f, s);
  j["input"] = path;
  const auto dil = dilate(nu, s.tol);
  const auto rep = verify_dilation(nu, dil, s.tol);
  j["dilation"] = {{"source_dim", dil.source_dim},
                   {"k_dim", dil.k_dim},
                   {"isometry", encode_matrix(dil.isometry)},
                   {"block_of_atom", dil.block_of_atom},
                   {"omega", to_json(PovmDocument::from_povm(dil.omega))}};
  j["verification"] = {{"isometry_error", rep.isometry_error},
                       {"projectivity_error", rep.projectivity_error},
                       {"roundtrip_error", rep.roundtrip_error},
                       {"worst_atom", nu.space().label(rep.worst_atom)},
                       {"ok", rep.ok}};
  r.text << "dilation: " << dil.source_dim << " -> " << dil.k_dim << "\n"
         << "  isometry error " << rep.isometry_error << "\n"
         << "  projectivity error " << rep.projectivity_error << "\n"
         << "  roundtrip residual " << rep.roundtrip_error << "\n"
         << (rep.ok ? "ok" : "FAILED") << "\n";
  r.exit_code = rep.ok ? 0 : 1;
}

void cmd_norm(const std::string& path, const std::string& l_path, const Flags& f, Report& r) {
  std::optional<double> doc_tol;
  const Povm nu = load_povm(path, &doc_tol);
  const auto l = parse_operator_list(read_file(l_path));
  const Settings s = make_settings(f, doc_tol);
  if (l.operators.size() != nu.outcomes()) {
    throw DocumentError("operator list has " + std::to_string(l.operators.size()) + " entries, POVM has " +
                        std::to_string(nu.outcomes()) + " outcomes");
  }
  auto& j = r.json = header("norm", f, s);
  j["inputs"] = {path, l_path};
  const auto rep = resolution_norm_report(nu.atoms(), l.operators, s.tol);
  const char* which = rep.projections ? "projections" : rep.commuting ? "commuting" : "general";
  j["norm"] = rep.norm;
  j["max_l_norm"] = rep.max_l_norm;
  j["case"] = which;
  j["bound_holds"] = rep.bound_holds;
  j["commuting"] = rep.commuting;
  if (rep.spectrum_norm) {
    j["joint_spectrum_norm"] = *rep.spectrum_norm;
    j["joint_spectrum_matches"] = *rep.spectrum_matches;
  }
  j["projections"] = rep.projections;
  if (rep.projection_matches) j["projection_matches"] = *rep.projection_matches;
  r.text << "norm: " << rep.norm << "\n"
         << "max ||L_j||: " << rep.max_l_norm << "\n"
         << "case: " << which << "\n"
         << "bound holds: " << (rep.bound_holds ? "yes" : "no") << "\n";
  if (rep.spectrum_norm) r.text << "joint-spectrum norm: " << *rep.spectrum_norm << "\n";
  const bool consistent = rep.bound_holds && rep.spectrum_matches.value_or(true) && rep.projection_matches.value_or(true);
  r.exit_code = consistent ? 0 : 1;
}

void cmd_decompose(const std::string& path, const Flags& f, Report& r) {
  std::optional<double> doc_tol;
  const Povm nu = load_povm(path, &doc_tol);
  const Settings s = make_settings(f, doc_tol);
  require_valid_input(nu, s.tol, path);
  const auto& space = nu.space();
  auto& j = r.json = header("decompose", f, s);
  auto& t = r.text;
  j["input"] = path;
  const auto extracted = extract_basis(nu, s.opts.basis, s.tol);
  if (const auto* nb = std::get_if<NoBasisFound>(&extracted)) {
    j["no_basis"] = {{"families_examined", nb->families_examined}, {"reason", nb->reason}};
    t << "no measurement basis: " << nb->reason << "\n";
    r.exit_code = 1;
    return;
  }
  const auto& b = std::get<MeasurementBasis>(extracted);
  const auto table = signed_measure_decomposition(nu, b, s.tol);
  const std::size_t n = nu.outcomes();
  bool unit = true;
  Json rows = Json::array();
  t << "basis " << basis_list(b, space) << "\n";
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double total = table(i, Event::all(n));
    unit = unit && std::abs(total - 1.0) <= s.tol.eq;
    std::vector<double> row(table.values.cols());
    for (Index x = 0; x < table.values.cols(); ++x) row[static_cast<std::size_t>(x)] = table.values(static_cast<Index>(i), x);
    rows.push_back({{"event", labels_of(b.events[i], space)}, {"values", row}, {"total", total}});
    t << "  upsilon_" << i + 1 << " " << braces(b.events[i], space) << ":";
    for (double v : row) t << " " << v;
    t << "  (total " << total << ")\n";
  }
  const bool perfect = unit && table.nonnegative(s.tol.eq);
  const auto pb = perfect_basis_check(nu, s.tol);
  j["basis"] = encode_basis(b, space, s.tol);
  j["outcomes"] = space.labels();
  j["signed_measures"] = std::move(rows);
  j["solve_residual"] = table.solve_residual;
  j["perfect"] = perfect;
  j["atom_basis"] = {{"dim_equals_n", pb.dim_equals_n},
                     {"atoms_form_basis", pb.atoms_form_basis},
                     {"perfect", pb.is_perfect_atom_basis},
                     {"applicable", pb.applicable},
                     {"equivalence_holds", pb.equivalence_holds}};
  t << "perfect: " << (perfect ? "true" : "false") << "\n";
  r.exit_code = 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cleanness analysis of finite-dimensional POVMs", "povmclean"};
  app.require_subcommand(1);
  Flags f;
  const auto add_flags = [&f](CLI::App* c) {
    c->add_option("--tol", f.tol, "Equality tolerance; the other tolerances scale with it")
        ->check(CLI::PositiveNumber);
    c->add_option("--seed", f.seed, "Seed for randomized searches (hex)");
    c->add_option("--max-iter", f.max_iter, "Solver iteration budget");
    c->add_option("--max-atoms", f.max_atoms, "Largest outcome count for basis enumeration");
    c->add_flag("--json", f.json, "Emit the machine-readable report");
    c->add_flag("--no-timestamp", f.no_timestamp, "Omit the timestamp field");
    c->add_option("--out", f.out, "Write the report to a file");
  };
  std::string in1;
  std::string in2;
  auto* analyze = app.add_subcommand("analyze", "Decide cleanness of a POVM (exit 0 clean, 1 not clean, 2 undetermined)");
  analyze->add_option("input", in1, "POVM document")->required();
  auto* compare = app.add_subcommand("compare", "Compare two POVMs in the cleaner-than order");
  compare->add_option("first", in1, "POVM document")->required();
  compare->add_option("second", in2, "POVM document")->required();
  auto* dil = app.add_subcommand("dilate", "Naimark dilation");
  dil->add_option("input", in1, "POVM document")->required();
  auto* norm = app.add_subcommand("norm", "Operator norm of sum_j M_j (x) L_j");
  norm->add_option("input", in1, "POVM document")->required();
  norm->add_option("operators", in2, "Operator list document")->required();
  auto* decompose = app.add_subcommand("decompose", "Signed-measure decomposition over a measurement basis");
  decompose->add_option("input", in1, "POVM document")->required();
  for (auto* c : {analyze, compare, dil, norm, decompose}) add_flags(c);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitInputError;
  }

  Report r;
  try {
    if (analyze->parsed()) cmd_analyze(in1, f, r);
    if (compare->parsed()) cmd_compare(in1, in2, f, r);
    if (dil->parsed()) cmd_dilate(in1, f, r);
    if (norm->parsed()) cmd_norm(in1, in2, f, r);
    if (decompose->parsed()) cmd_decompose(in1, f, r);
  } catch (const DocumentError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternalError;
  }

  r.json["exit_code"] = r.exit_code;
  const std::string body = f.json ? r.json.dump(2) + "\n" : r.text.str();
  if (f.out.empty()) {
    out << body;
  } else {
    std::ofstream file(f.out, std::ios::binary);
    if (!file) {
      err << "error: cannot write '" << f.out << "'\n";
      return kExitInputError;
    }
    file << body;
  }
  return r.exit_code;
}

}  // namespace povm::cli
