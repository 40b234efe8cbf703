// Command-line front end: verification, construction, enumeration,
// classification and continuation for Auerbach bases of l^n_p.
//
// Exit codes: 0 success / checked-true, 1 checked-false, 2 usage or
// parse or domain error.

#include "auerbach/classification.hpp"
#include "auerbach/constructions.hpp"
#include "auerbach/document.hpp"
#include "auerbach/orthogonality.hpp"
#include "auerbach/solver.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace auerbach;
using nlohmann::json;

ToleranceConfig tolerances_from_env() {
  ToleranceConfig tol;
  if (const char* env = std::getenv("AUERBACH_TOL")) {
    try {
      tol.residual_tol = std::stod(env);
      tol.validate();
    } catch (const std::exception&) {
      throw std::invalid_argument("AUERBACH_TOL: not a positive number");
    }
  }
  return tol;
}

json class_to_json(const CanonicalClass& c) {
  json j;
  j["label"] = c.label.empty() ? "OTHER" : c.label;
  json rows = json::array();
  for (Eigen::Index i = 0; i < c.representative.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < c.representative.cols(); ++k) row.push_back(c.representative(i, k));
    rows.push_back(std::move(row));
  }
  j["representative"] = std::move(rows);
  j["residual"] = c.residual;
  return j;
}

/// Re-polishes a quantized canonical representative into a full-precision
/// solution at its own p (which must be > 2).
BasisMatrix polish(const CanonicalClass& c, const ToleranceConfig& tol) {
  const SolveReport rep = newton_solve(BasisMatrix(c.representative, c.p), tol);
  if (rep.status != SolveStatus::Converged) {
    throw std::runtime_error("failed to re-polish canonical representative");
  }
  return *rep.solution;
}

int cmd_verify(const std::string& file, const std::string& p_arg, double tol_override) {
  ToleranceConfig tol = tolerances_from_env();
  if (tol_override > 0) tol.residual_tol = tol_override;
  MatrixDocument doc = load_document(file);
  if (!p_arg.empty()) doc.p = PExponent::parse(p_arg);
  const AuerbachReport rep = is_auerbach(doc.to_basis(), tol);
  json out;
  out["auerbach"] = rep.auerbach;
  out["p"] = doc.p.str();
  out["n"] = doc.n;
  out["residuals"] = {{"row_norm", rep.max_row_norm_residual},
                      {"dual_norm", rep.max_dual_norm_residual},
                      {"gradient_system", rep.eq_system_residual}};
  if (!rep.reason.empty()) out["reason"] = rep.reason;
  std::cout << out.dump(2) << "\n";
  return rep.auerbach ? 0 : 1;
}

int cmd_construct(const std::string& kind, int n, const std::string& p_arg, double t,
                  const std::vector<std::string>& inputs, const std::string& format) {
  const ToleranceConfig tol = tolerances_from_env();
  BasisMatrix B = [&] {
    if (kind == "identity") return identity_basis(n, PExponent::parse(p_arg));
    if (kind == "hadamard2") return hadamard2_basis(PExponent::parse(p_arg));
    if (kind == "jp") return jp_basis(PExponent::parse(p_arg));
    if (kind == "twisted") return twisted_block_basis(PExponent::parse(p_arg));
    if (kind == "jinf") return jinf_basis(t);
    if (kind == "block" || kind == "sylvester") {
      if (inputs.empty()) throw std::invalid_argument(kind + " requires --input");
      std::vector<BasisMatrix> parts;
      for (const auto& f : inputs) parts.push_back(load_document(f).to_basis());
      if (kind == "block") return block_basis(parts);
      if (parts.size() != 1) throw std::invalid_argument("sylvester takes exactly one --input");
      return sylvester_double(parts.front(), tol);
    }
    throw std::invalid_argument("unknown construction kind: " + kind);
  }();

  MatrixDocument doc = MatrixDocument::from_basis(B);
  doc.label = kind;
  doc.provenance = "construct " + kind;
  doc.residual = is_auerbach(B, tol).worst();
  if (format == "text") {
    std::cout << format_text(doc);
  } else {
    std::cout << to_json(doc).dump(2) << "\n";
  }
  return 0;
}

int cmd_enumerate(int n, const std::string& p_arg, int seeds, std::uint64_t rng) {
  const ToleranceConfig tol = tolerances_from_env();
  const PExponent p = PExponent::parse(p_arg);
  if (!p.is_smooth_finite() || std::abs(p.value() - 2.0) < 0.05) {
    throw std::invalid_argument("enumerate: continuum at p=2 (and infinitely many at p=1, inf); "
                                "finite p with |p-2| >= 0.05 required");
  }
  if (n < 1 || n > 4) throw std::invalid_argument("enumerate: 1 <= n <= 4");

  const bool dual_route = p.value() < 2.0;
  const PExponent solve_p = dual_route ? p.dual() : p;
  std::vector<CanonicalClass> classes = multistart_enumerate(n, solve_p, seeds, rng, tol);
  if (dual_route) {
    std::vector<CanonicalClass> dualized;
    for (const auto& c : classes) {
      const BasisMatrix dual = dualize_solution(polish(c, tol), tol);
      CanonicalClass d = canonical_form(dual, tol);
      d.label = c.label;
      d.residual = is_auerbach(dual, tol).worst();
      dualized.push_back(std::move(d));
    }
    std::sort(dualized.begin(), dualized.end(), [](const auto& a, const auto& b) {
      return detail::lex_less(a.representative, b.representative);
    });
    classes = std::move(dualized);
  }

  json out;
  out["p"] = p.str();
  out["n"] = n;
  out["seeds"] = seeds;
  out["rng"] = rng;
  out["count"] = classes.size();
  json arr = json::array();
  for (const auto& c : classes) arr.push_back(class_to_json(c));
  out["classes"] = std::move(arr);
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_classify(const std::string& file, const std::string& p_arg) {
  const ToleranceConfig tol = tolerances_from_env();
  MatrixDocument doc = load_document(file);
  if (!p_arg.empty()) doc.p = PExponent::parse(p_arg);
  const BasisMatrix B = doc.to_basis();
  if (!is_auerbach(B, tol).auerbach) {
    std::cout << json{{"auerbach", false}}.dump(2) << "\n";
    return 1;
  }
  const L3Classification cls = classify_l3_basis(B, tol);
  json out;
  out["auerbach"] = true;
  out["label"] = to_string(cls.label);
  if (cls.label == L3Label::JinfFamily) out["t"] = cls.t;
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_rp(const std::string& p_arg) {
  const RpRoot root = solve_rp(PExponent::parse(p_arg));
  std::cout.precision(15);
  std::cout << root.value << "\n";
  return 0;
}

int cmd_strong(const std::string& file, const std::string& p_arg) {
  const ToleranceConfig tol = tolerances_from_env();
  MatrixDocument doc = load_document(file);
  if (!p_arg.empty()) doc.p = PExponent::parse(p_arg);
  const BasisMatrix B = doc.to_basis();
  const bool strong = is_strong_auerbach(B, tol);
  json out;
  out["strong"] = strong;
  json rows = json::array();
  for (int i = 0; i < B.n(); ++i) {
    switch (classify_strong_vector(B.row(i), B.p, tol)) {
      case StrongVectorClass::Axis: rows.push_back("AXIS"); break;
      case StrongVectorClass::Pair: rows.push_back("PAIR"); break;
      case StrongVectorClass::None: rows.push_back("NONE"); break;
    }
  }
  out["rows"] = std::move(rows);
  std::cout << out.dump(2) << "\n";
  return strong ? 0 : 1;
}

int cmd_continuation(double p0, double p1, int steps, int n, int seeds, std::uint64_t rng) {
  const ToleranceConfig tol = tolerances_from_env();
  if (p0 <= 2.0 || p1 <= 2.0) {
    throw std::invalid_argument("continuation: p0 and p1 must both be > 2");
  }
  const auto classes = multistart_enumerate(n, PExponent::finite(p0), seeds, rng, tol);
  const ContinuationTrace trace = continuation_track(classes, p0, p1, steps, tol);
  json out;
  out["p_grid"] = trace.p_grid;
  out["class_counts"] = trace.class_counts;
  json surv = json::array();
  for (std::size_t i = 0; i < trace.survived.size(); ++i) {
    surv.push_back({{"label", classes[i].label},
                    {"survived", static_cast<bool>(trace.survived[i])},
                    {"max_path_residual", trace.max_path_residual[i]}});
  }
  out["paths"] = std::move(surv);
  std::cout << out.dump(2) << "\n";
  const bool all = std::all_of(trace.survived.begin(), trace.survived.end(),
                               [](bool b) { return b; });
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Auerbach bases of l^n_p: verify, construct, enumerate, classify"};
  app.require_subcommand(1);

  std::string file, p_arg, kind, format = "json";
  double tol_override = 0, t = 0, p0 = 2.5, p1 = 4;
  int n = 3, seeds = 1000, steps = 16;
  std::uint64_t rng = 0;
  std::vector<std::string> inputs;

  auto* verify = app.add_subcommand("verify", "verify a matrix document (Eq. criterion)");
  verify->add_option("file", file, "document path, or - for stdin")->required();
  verify->add_option("--p", p_arg, "override the document's p");
  verify->add_option("--tol", tol_override, "residual tolerance override");

  auto* construct = app.add_subcommand("construct", "emit a known construction");
  construct->add_option("kind", kind, "identity|hadamard2|block|jp|twisted|jinf|sylvester")
      ->required();
  construct->add_option("--n", n, "dimension (identity)");
  construct->add_option("--p", p_arg, "norm exponent");
  construct->add_option("--t", t, "family parameter (jinf)");
  construct->add_option("--input", inputs, "input document(s) (block, sylvester)");
  construct->add_option("--format", format, "json|text");

  auto* enumerate = app.add_subcommand("enumerate", "multistart census of Auerbach bases");
  enumerate->add_option("--n", n, "dimension (<= 4)")->required();
  enumerate->add_option("--p", p_arg, "norm exponent")->required();
  enumerate->add_option("--seeds", seeds, "number of Newton starts");
  enumerate->add_option("--rng", rng, "random seed (census is deterministic per seed)");

  auto* classify = app.add_subcommand("classify", "classify an l^3 basis document");
  classify->add_option("file", file, "document path, or - for stdin")->required();
  classify->add_option("--p", p_arg, "override the document's p");

  auto* rp_cmd = app.add_subcommand("rp", "the structural constant r_p");
  rp_cmd->add_option("--p", p_arg, "norm exponent")->required();

  auto* strong = app.add_subcommand("strong", "strong-Auerbach check");
  strong->add_option("file", file, "document path, or - for stdin")->required();
  strong->add_option("--p", p_arg, "override the document's p");

  auto* cont = app.add_subcommand("continuation", "track census classes in p");
  cont->add_option("--p0", p0, "start exponent (> 2)")->required();
  cont->add_option("--p1", p1, "end exponent (> 2)")->required();
  cont->add_option("--steps", steps, "grid steps");
  cont->add_option("--n", n, "dimension");
  cont->add_option("--seeds", seeds, "census seeds at p0");
  cont->add_option("--rng", rng, "random seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) return cmd_verify(file, p_arg, tol_override);
    if (construct->parsed()) return cmd_construct(kind, n, p_arg, t, inputs, format);
    if (enumerate->parsed()) return cmd_enumerate(n, p_arg, seeds, rng);
    if (classify->parsed()) return cmd_classify(file, p_arg);
    if (rp_cmd->parsed()) return cmd_rp(p_arg);
    if (strong->parsed()) return cmd_strong(file, p_arg);
    if (cont->parsed()) return cmd_continuation(p0, p1, steps, n, seeds, rng);
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
