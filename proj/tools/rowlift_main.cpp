// rowlift command line: fock-space reports, dilation construction,
// commutant lifting solves, Nevanlinna-Pick interpolation and the
// infeasibility experiment, with machine-readable JSON sidecars.
//
// Exit codes: 0 success / feasible, 1 error, 2 certified infeasible,
// 3 indeterminate.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rowlift/dilation.hpp"
#include "rowlift/fock.hpp"
#include "rowlift/lifting.hpp"
#include "rowlift/matrix_io.hpp"
#include "rowlift/pick.hpp"
#include "rowlift/row_operator.hpp"
#include "rowlift/sampling.hpp"

using nlohmann::json;
using namespace rowlift;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitIndeterminate = 3;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void print_header(const std::string& command) {
  std::time_t now = std::time(nullptr);
  char stamp[64];
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  std::cout << "# rowlift " << command << "\n";
  std::cout << "# timestamp: " << stamp << "\n";
}

void write_sidecar(const std::string& path, const json& doc) {
  if (path.empty()) return;
  write_text_file(path, doc.dump(2) + "\n");
  std::cout << "sidecar: " << path << "\n";
}

json matrix_node(const Mat& A) { return json::parse(matrix_to_json(A)); }

json dilation_node(const DilationResult& dil) {
  json j;
  j["kind"] = dil.kind == DilationKind::isometric_coext  ? "isometric_coext"
              : dil.kind == DilationKind::arveson_pure   ? "arveson_pure"
                                                         : "assembled";
  j["trunc_degree"] = dil.trunc_degree;
  j["multiplicity"] = dil.multiplicity;
  j["embed_defect"] = dil.embed_defect;
  j["purity_tail"] = dil.purity_tail;
  j["embed"] = matrix_node(dil.embed);
  json blocks = json::array();
  for (const Mat& b : dil.V.blocks()) blocks.push_back(matrix_node(b));
  j["blocks"] = std::move(blocks);
  if (dil.mult_structure) {
    j["structure"] = {{"n", dil.mult_structure->n},
                      {"d", dil.mult_structure->d},
                      {"alpha", dil.mult_structure->alpha}};
  }
  return j;
}

DilationResult dilation_from_node(const json& j) {
  std::vector<Mat> blocks;
  for (const json& b : j.at("blocks")) blocks.push_back(matrix_from_json(b.dump()));
  DilationKind kind = DilationKind::assembled;
  std::string ks = j.at("kind").get<std::string>();
  if (ks == "isometric_coext") kind = DilationKind::isometric_coext;
  if (ks == "arveson_pure") kind = DilationKind::arveson_pure;
  DilationResult dil{RowOperator(std::move(blocks)),
                     matrix_from_json(j.at("embed").dump()),
                     j.at("trunc_degree").get<int>(),
                     kind,
                     j.at("multiplicity").get<int>(),
                     j.value("embed_defect", 0.0),
                     j.value("purity_tail", 0.0),
                     std::nullopt,
                     std::nullopt};
  if (j.contains("structure")) {
    const json& s = j.at("structure");
    dil.mult_structure = MultModelStructure{s.at("n").get<int>(), s.at("d").get<int>(),
                                            s.at("alpha").get<int>()};
  }
  return dil;
}

std::string verdict_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "feasible";
    case SolveStatus::infeasible_affine: return "infeasible-affine";
    default: return "indeterminate";
  }
}

// ---------------------------------------------------------------------------

int cmd_fock(int n, int d, const std::string& sidecar) {
  print_header("fock");
  TruncatedFock F(n, d);
  std::cout << "n = " << n << ", d = " << d << "\n";
  std::cout << "full_dim  = " << F.full_dim() << "\n";
  std::cout << "sym_dim   = " << F.sym_dim() << "\n";

  json counts = json::array();
  std::cout << "multinomial counts |P_k|:\n";
  for (Eigen::Index s = 0; s < F.sym_dim(); ++s) {
    const MultiIndex& k = F.multi_at(s);
    std::uint64_t c = multinomial_count(k);
    if (s < 20) {
      std::cout << "  k = (";
      for (std::size_t i = 0; i < k.size(); ++i)
        std::cout << k[i] << (i + 1 < k.size() ? "," : "");
      std::cout << ")  |P_k| = " << c << "\n";
    }
    counts.push_back({{"k", k}, {"count", c}});
  }
  if (F.sym_dim() > 20) std::cout << "  ... (" << F.sym_dim() << " total)\n";

  RowOperator M(multiplier_row(F));
  double rn = row_norm(M);
  std::cout << "multiplier row norm = " << fmt(rn) << "\n";

  write_sidecar(sidecar, json{{"command", "fock"},
                              {"config", {{"n", n}, {"d", d}}},
                              {"results",
                               {{"full_dim", F.full_dim()},
                                {"sym_dim", F.sym_dim()},
                                {"multiplier_row_norm", rn},
                                {"counts", std::move(counts)}}}});
  return kExitOk;
}

int cmd_dilate(const std::string& input, const std::string& kind, int d, double tol,
               const std::string& output, const std::string& sidecar) {
  print_header("dilate");
  RowOperator T = read_row_operator_file(input);
  std::cout << "input: n = " << T.n() << ", dim = " << T.dim()
            << ", row norm = " << fmt(row_norm(T)) << "\n";

  DilationResult dil = (kind == "frazho") ? frazho_bunce(T, d, tol) : arveson_pure(T, d);
  std::cout << "kind = " << kind << ", d = " << d << "\n";
  std::cout << "dilation dim = " << dil.V.dim() << ", multiplicity = " << dil.multiplicity
            << "\n";

  double coext = 0.0;
  for (int i = 1; i <= T.n(); ++i)
    coext = std::max(coext, spectral_norm(Mat(dil.embed.adjoint() * dil.V.block(i) -
                                              T.block(i) * dil.embed.adjoint())));
  std::cout << "co-extension residual = " << fmt(coext) << "\n";
  std::cout << "embed isometry defect = " << fmt(dil.embed_defect) << "\n";
  std::cout << "purity tail           = " << fmt(dil.purity_tail) << "\n";

  if (!output.empty()) {
    write_text_file(output, dilation_node(dil).dump(2) + "\n");
    std::cout << "dilation written: " << output << "\n";
  }
  write_sidecar(sidecar, json{{"command", "dilate"},
                              {"config", {{"kind", kind}, {"d", d}, {"input", input}}},
                              {"results",
                               {{"dim", dil.V.dim()},
                                {"multiplicity", dil.multiplicity},
                                {"coextension_residual", coext},
                                {"embed_defect", dil.embed_defect},
                                {"purity_tail", dil.purity_tail}}}});
  return kExitOk;
}

json solution_node(const LiftingSolution& sol) {
  return json{{"status", verdict_name(sol.status)},
              {"achieved_norm", sol.achieved_norm},
              {"norm_X", sol.norm_X},
              {"norm_X_compressed", sol.norm_X_compressed},
              {"norm_gap", sol.norm_gap},
              {"commutation_residual", sol.commutation_residual},
              {"dilation_residual", sol.dilation_residual},
              {"iterations", sol.iterations},
              {"probes", sol.probes},
              {"final_gap", sol.final_gap},
              {"affine_infeasibility", sol.affine_infeasibility},
              {"certified_infeasible_below", sol.certified_infeasible_below}};
}

void print_solution(const LiftingSolution& sol) {
  std::cout << "verdict: " << verdict_name(sol.status) << "\n";
  std::cout << "achieved norm = " << fmt(sol.achieved_norm) << ", ||X|| = " << fmt(sol.norm_X)
            << ", gap = " << fmt(sol.norm_gap) << "\n";
  std::cout << "residuals: commutation = " << fmt(sol.commutation_residual)
            << ", dilation = " << fmt(sol.dilation_residual) << "\n";
  std::cout << "iterations = " << sol.iterations << ", probes = " << sol.probes << "\n";
}

int cmd_lift(const std::string& dilation_path, const std::string& x_path,
             const std::string& form_name, double tol, long max_iter,
             const std::string& output, const std::string& sidecar) {
  print_header("lift");
  DilationResult dil = dilation_from_node(json::parse(read_text_file(dilation_path)));
  Mat X = read_matrix_file(x_path);
  DilationConstraintForm form = (form_name == "compression")
                                    ? DilationConstraintForm::compression
                                    : DilationConstraintForm::co_extension;
  LiftingProblem problem = make_commutant_problem(dil, X, form);
  LiftingOptions opts;
  opts.tol = tol;
  opts.max_iter = max_iter;
  LiftingSolution sol = min_norm_lifting(problem, opts);
  print_solution(sol);

  if (!output.empty() && sol.Z.size() > 0) {
    write_matrix_file(output, sol.Z);
    std::cout << "Z written: " << output << "\n";
  }
  write_sidecar(sidecar,
                json{{"command", "lift"},
                     {"config",
                      {{"dilation", dilation_path}, {"x", x_path}, {"form", form_name},
                       {"tol", tol}, {"max_iter", max_iter}}},
                     {"results", solution_node(sol)}});
  if (sol.status == SolveStatus::infeasible_affine) return kExitInfeasible;
  if (sol.status == SolveStatus::indeterminate) return kExitIndeterminate;
  return kExitOk;
}

int cmd_np(const std::string& input, int d, double tol, const std::string& sidecar) {
  print_header("np");
  PickSystem sys = read_pick_system_file(input);
  std::cout << "nodes = " << sys.count() << ", variables = " << sys.n()
            << ", target dim = " << sys.target_dim() << "\n";
  NPOptions opts;
  opts.lifting.tol = tol;
  NPSolution sol = solve_np(sys, d, opts);
  std::cout << "pick min eigenvalue = " << fmt(sol.pick_min_eigenvalue) << "\n";
  std::cout << "||X|| = " << fmt(sol.norm_X) << "\n";

  json results{{"pick_min_eigenvalue", sol.pick_min_eigenvalue},
               {"norm_X", sol.norm_X},
               {"feasible", sol.feasible}};
  if (!sol.feasible) {
    std::cout << "verdict: infeasible (negative Pick eigenvalue)\n";
    write_sidecar(sidecar, json{{"command", "np"},
                                {"config", {{"input", input}, {"d", d}}},
                                {"results", std::move(results)}});
    return kExitInfeasible;
  }

  std::cout << "verdict: feasible\n";
  std::cout << "achieved multiplier norm = " << fmt(sol.achieved_norm) << "\n";
  std::cout << "coefficients (|coeff| > 1e-10):\n";
  json coeffs = json::array();
  for (std::size_t s = 0; s < sol.coefficients.size(); ++s) {
    double mag = sol.coefficients[s].norm();
    coeffs.push_back({{"k", sol.coeff_index[s]}, {"value", matrix_node(sol.coefficients[s])}});
    if (mag > 1e-10) {
      std::cout << "  k = (";
      for (std::size_t i = 0; i < sol.coeff_index[s].size(); ++i)
        std::cout << sol.coeff_index[s][i] << (i + 1 < sol.coeff_index[s].size() ? "," : "");
      Complex lead = sol.coefficients[s](0, 0);
      std::cout << ")  " << fmt(lead.real()) << (lead.imag() < 0 ? " - " : " + ")
                << fmt(std::abs(lead.imag())) << "i\n";
    }
  }
  double worst = 0.0;
  for (double r : sol.node_residuals) worst = std::max(worst, r);
  std::cout << "max node residual = " << fmt(worst) << "\n";

  results["achieved_norm"] = sol.achieved_norm;
  results["node_residuals"] = sol.node_residuals;
  results["coefficients"] = std::move(coeffs);
  results["lifting"] = solution_node(sol.lifting);
  write_sidecar(sidecar, json{{"command", "np"},
                              {"config", {{"input", input}, {"d", d}, {"tol", tol}}},
                              {"results", std::move(results)}});
  if (sol.lifting.status == SolveStatus::indeterminate) return kExitIndeterminate;
  return kExitOk;
}

int cmd_counterexample(double r, double eps, int d, double tol,
                       const std::vector<double>& sweep, const std::string& sidecar) {
  print_header("counterexample");
  CounterexampleOperators ce = counterexample_operators(r, eps);
  std::cout << "r = " << fmt(r) << ", eps = " << fmt(eps) << ", d = " << d << "\n";
  std::cout << "commutator residual of the extension pair = "
            << fmt(is_commuting(ce.B).max_residual) << "\n";
  std::cout << "row norm of the extension pair = " << fmt(ce.row_norm_B)
            << (ce.contraction ? " (contraction)" : " (NOT a contraction)") << "\n";
  if (!ce.contraction) {
    std::cout << "error: eps too large for a row contraction\n";
    return kExitError;
  }

  ObstructionReport obs = counterexample_obstruction(r, eps);
  std::cout << "algebraic obstruction: zeros at y = " << fmt(obs.zero_first) << " and y = "
            << fmt(obs.zero_second) << ", minimax margin = " << fmt(obs.minimax) << "\n";

  LiftingProblem problem = make_counterexample_problem(r, eps, d);
  auto cs = build_constraints(problem);
  LiftingOptions opts;
  opts.tol = tol;
  ProbeResult probe = probe_feasibility(*cs, 1.0, opts);
  std::cout << "solver probe at t = 1: "
            << (probe.verdict == ProbeVerdict::feasible     ? "feasible"
                : probe.verdict == ProbeVerdict::infeasible ? "infeasible"
                                                            : "indeterminate")
            << " (gap " << fmt(probe.gap) << ", " << probe.iterations << " iterations)\n";

  LiftingSolution sol = min_norm_lifting(problem, opts);
  double margin = sol.achieved_norm - 1.0;
  std::cout << "minimum lifting norm = " << fmt(sol.achieved_norm)
            << "  (margin above 1: " << fmt(margin) << ")\n";
  std::cout << "residuals: commutation = " << fmt(sol.commutation_residual)
            << ", dilation = " << fmt(sol.dilation_residual) << "\n";
  bool agree = (margin > 0) == (obs.minimax > 0);
  std::cout << "margins agree in sign: " << (agree ? "yes" : "NO") << "\n";

  json sweep_node = json::array();
  if (!sweep.empty()) {
    std::cout << "obstruction margin sweep:\n";
    for (double e : sweep) {
      double m = counterexample_obstruction(r, e).minimax;
      std::cout << "  eps = " << fmt(e) << "  margin = " << fmt(m) << "\n";
      sweep_node.push_back({{"eps", e}, {"margin", m}});
    }
  }

  write_sidecar(sidecar,
                json{{"command", "counterexample"},
                     {"config", {{"r", r}, {"eps", eps}, {"d", d}, {"tol", tol}}},
                     {"results",
                      {{"row_norm_B", ce.row_norm_B},
                       {"obstruction_minimax", obs.minimax},
                       {"obstruction_y_star", obs.y_star},
                       {"probe_at_one",
                        probe.verdict == ProbeVerdict::feasible     ? "feasible"
                        : probe.verdict == ProbeVerdict::infeasible ? "infeasible"
                                                                    : "indeterminate"},
                       {"probe_gap", probe.gap},
                       {"solver_margin", margin},
                       {"margins_agree", agree},
                       {"sweep", std::move(sweep_node)},
                       {"lifting", solution_node(sol)}}}});

  if (probe.verdict == ProbeVerdict::indeterminate) return kExitIndeterminate;
  if (probe.verdict == ProbeVerdict::infeasible && margin > 0) return kExitInfeasible;
  return kExitOk;
}

int cmd_vn_check(const std::string& mode, int n, int m, int d, int degree, int count,
                 unsigned long seed, double tol, const std::string& sidecar) {
  print_header("vn-check");
  std::cout << "mode = " << mode << ", n = " << n << ", m = " << m << ", d = " << d
            << ", degree <= " << degree << ", count = " << count << ", seed = " << seed
            << "\n";
  Rng rng(seed);
  int failures = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  json trials = json::array();
  for (int trial = 0; trial < count; ++trial) {
    RowOperator T = (mode == "free") ? random_row_contraction(n, m, 0.9, rng)
                                     : random_commuting_row_contraction(n, m, 0.9, rng);
    PolynomialSpec p = (mode == "free") ? random_free_poly(n, degree, 4, rng)
                                        : random_symmetric_poly(n, degree, 4, rng);
    VonNeumannReport rep = von_neumann_check(T, p, d, tol);
    bool monotone = rep.rhs_d <= rep.rhs_d1 + 1e-12;
    if (!rep.pass || !monotone) ++failures;
    worst_margin = std::min(worst_margin, rep.margin);
    trials.push_back({{"lhs", rep.lhs},
                      {"rhs_d", rep.rhs_d},
                      {"rhs_d1", rep.rhs_d1},
                      {"margin", rep.margin},
                      {"pass", rep.pass && monotone}});
  }
  std::cout << "failures = " << failures << "/" << count
            << ", worst margin = " << fmt(worst_margin) << "\n";
  std::cout << (failures == 0 ? "PASS" : "FAIL") << "\n";
  write_sidecar(sidecar, json{{"command", "vn-check"},
                              {"config",
                               {{"mode", mode}, {"n", n}, {"m", m}, {"d", d},
                                {"degree", degree}, {"count", count}, {"seed", seed}}},
                              {"results",
                               {{"failures", failures},
                                {"worst_margin", worst_margin},
                                {"trials", std::move(trials)}}}});
  return failures == 0 ? kExitOk : kExitError;
}

int cmd_selftest(unsigned long seed, const std::string& sidecar) {
  print_header("selftest");
  Rng rng(seed);
  int failures = 0;
  json checks = json::array();
  auto check = [&](const std::string& name, bool ok, double value) {
    std::cout << (ok ? "  ok   " : "  FAIL ") << name << " (" << fmt(value) << ")\n";
    checks.push_back({{"name", name}, {"pass", ok}, {"value", value}});
    if (!ok) ++failures;
  };

  {
    TruncatedFock F(2, 4);
    RowOperator M(multiplier_row(F));
    double rn = row_norm(M);
    check("multiplier row norm is 1", std::abs(rn - 1.0) < 1e-10, rn);
    double comm = is_commuting(M).max_residual;
    check("multipliers commute", comm < 1e-12, comm);
  }
  {
    RowOperator T = random_commuting_row_contraction(2, 3, 0.6, rng);
    auto dil = frazho_bunce(T, 4);
    double coext = 0.0;
    for (int i = 1; i <= 2; ++i)
      coext = std::max(coext, spectral_norm(Mat(dil.embed.adjoint() * dil.V.block(i) -
                                                T.block(i) * dil.embed.adjoint())));
    check("frazho-bunce co-extension", coext < 1e-10, coext);
  }
  {
    RowOperator T = random_commuting_row_contraction(2, 3, 0.6, rng);
    auto dil = arveson_pure(T, 8);
    Mat tail = phi_power(T, 9, Mat::Identity(3, 3));
    Vec v = random_matrix(3, 1, rng).col(0);
    double lhs = (dil.embed * v).squaredNorm();
    double rhs = v.squaredNorm() - std::real(v.dot(tail * v));
    check("model embedding norm identity", std::abs(lhs - rhs) < 1e-10, lhs - rhs);
  }
  {
    ObstructionReport obs = counterexample_obstruction(0.5, 0.1);
    check("obstruction margin 2ab/(a+b)", std::abs(obs.minimax - 0.016) < 1e-12, obs.minimax);
  }
  {
    RowOperator T = random_commuting_row_contraction(2, 2, 0.5, rng);
    Mat X = random_polynomial_of(T, 2, rng);
    LiftingSolution sol = min_norm_lifting(make_commutant_problem(arveson_pure(T, 6), X));
    check("small lifting preserves the norm",
          sol.status == SolveStatus::converged && sol.norm_gap <= 1e-3, sol.norm_gap);
  }
  {
    PickSystem sys = PickSystem::scalar_system(
        {Vec::Zero(1), (Vec(1) << Complex(0.5, 0.0)).finished()}, {0.0, 0.5});
    double mineig = pick_feasibility(sys).min_eigenvalue;
    check("classical pick matrix is singular PSD", std::abs(mineig) < 1e-10, mineig);
  }
  std::cout << (failures == 0 ? "PASS" : "FAIL") << "\n";
  write_sidecar(sidecar, json{{"command", "selftest"},
                              {"config", {{"seed", seed}}},
                              {"results", {{"failures", failures}, {"checks", std::move(checks)}}}});
  return failures == 0 ? kExitOk : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  // keep LAPACK single threaded: reports must be reproducible
  setenv("OPENBLAS_NUM_THREADS", "1", 0);

  CLI::App app{"numerical workbench for dilations, commutant lifting and "
               "Nevanlinna-Pick interpolation on the Drury-Arveson space"};
  app.require_subcommand(1);

  int n = 2, d = 4, m = 3, degree = 3, count = 50;
  double tol = 1e-8, r = 0.5, eps = 0.1;
  long max_iter = 20000;
  unsigned long seed = 20260801;
  std::string input, output, sidecar, kind = "arveson", form = "co_extension",
              mode = "commuting";
  std::vector<double> sweep;

  auto* fock = app.add_subcommand("fock", "dimensions, counts and operator norms");
  fock->add_option("--n", n, "number of variables")->check(CLI::PositiveNumber);
  fock->add_option("--d", d, "truncation degree")->check(CLI::NonNegativeNumber);
  fock->add_option("--json", sidecar, "machine-readable report path");

  auto* dilate = app.add_subcommand("dilate", "construct a dilation from a row operator file");
  dilate->add_option("--input", input, "row operator JSON file")->required();
  dilate->add_option("--kind", kind, "frazho | arveson")
      ->check(CLI::IsMember({"frazho", "arveson"}));
  dilate->add_option("--d", d, "truncation degree")->check(CLI::PositiveNumber);
  dilate->add_option("--tol", tol, "contraction tolerance");
  dilate->add_option("--output", output, "dilation JSON output path");
  dilate->add_option("--json", sidecar, "machine-readable report path");

  auto* lift = app.add_subcommand("lift", "minimum-norm commutant lifting");
  std::string xfile;
  lift->add_option("--dilation", input, "dilation JSON file")->required();
  lift->add_option("--x", xfile, "matrix file with X")->required();
  lift->add_option("--mode", form, "co_extension | compression")
      ->check(CLI::IsMember({"co_extension", "compression"}));
  lift->add_option("--tol", tol, "solver gap tolerance");
  lift->add_option("--max-iter", max_iter, "iteration cap per probe");
  lift->add_option("--output", output, "solution matrix output path");
  lift->add_option("--json", sidecar, "machine-readable report path");

  auto* np = app.add_subcommand("np", "Nevanlinna-Pick feasibility and recovery");
  np->add_option("--input", input, "pick system JSON file")->required();
  np->add_option("--d", d, "truncation degree for recovery")->check(CLI::PositiveNumber);
  np->add_option("--tol", tol, "solver gap tolerance");
  np->add_option("--json", sidecar, "machine-readable report path");

  auto* ce = app.add_subcommand("counterexample", "the failure of general commutant lifting");
  ce->add_option("--r", r, "diagonal parameter, 0 < r < 1");
  ce->add_option("--eps", eps, "perturbation parameter, 0 < eps != r");
  ce->add_option("--d", d, "truncation degree")->check(CLI::PositiveNumber);
  ce->add_option("--tol", tol, "solver gap tolerance");
  ce->add_option("--sweep", sweep, "additional eps values for the margin sweep");
  ce->add_option("--json", sidecar, "machine-readable report path");

  auto* vn = app.add_subcommand("vn-check", "randomized von Neumann inequality suite");
  vn->add_option("--mode", mode, "commuting | free")
      ->check(CLI::IsMember({"commuting", "free"}));
  vn->add_option("--n", n, "number of variables")->check(CLI::PositiveNumber);
  vn->add_option("--m", m, "matrix dimension")->check(CLI::PositiveNumber);
  vn->add_option("--d", d, "model truncation degree")->check(CLI::PositiveNumber);
  vn->add_option("--degree", degree, "max polynomial degree");
  vn->add_option("--count", count, "number of random trials");
  vn->add_option("--seed", seed, "random seed");
  vn->add_option("--tol", tol, "inequality slack");
  vn->add_option("--json", sidecar, "machine-readable report path");

  auto* st = app.add_subcommand("selftest", "fast cross-module invariant suite");
  st->add_option("--seed", seed, "random seed");
  st->add_option("--json", sidecar, "machine-readable report path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (fock->parsed()) return cmd_fock(n, d, sidecar);
    if (dilate->parsed()) return cmd_dilate(input, kind, d, tol, output, sidecar);
    if (lift->parsed()) return cmd_lift(input, xfile, form, tol, max_iter, output, sidecar);
    if (np->parsed()) return cmd_np(input, d, tol, sidecar);
    if (ce->parsed()) return cmd_counterexample(r, eps, d, tol, sweep, sidecar);
    if (vn->parsed()) return cmd_vn_check(mode, n, m, d, degree, count, seed, tol, sidecar);
    if (st->parsed()) return cmd_selftest(seed, sidecar);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
