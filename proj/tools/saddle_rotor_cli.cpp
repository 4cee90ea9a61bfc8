// saddle_rotor: block-diagonalization of saddle-point matrices by direct
// rotation. Subcommands: diagonalize, riccati, stokes, verify.
#include "saddle_rotor/matrix_market.hpp"
#include "saddle_rotor/stokes.hpp"
#include "saddle_rotor/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>

namespace sr = saddle_rotor;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitParse = 2;
constexpr int kExitClassification = 3;
constexpr int kExitInvariant = 4;

sr::Matrix matrix_from_json(const json& j, const std::string& name) {
  if (j.is_string()) return sr::read_matrix_market_file(j.get<std::string>());
  if (!j.is_array() || j.empty())
    throw sr::ParseError(name + ": expected a path or a 2D array");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  sr::Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (static_cast<Eigen::Index>(j[i].size()) != cols)
      throw sr::ParseError(name + ": ragged rows");
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = j[i][k].get<double>();
  }
  return m;
}

struct Problem {
  sr::Matrix a_plus, a_minus, w;
  double tol = 1e-10;
};

Problem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw sr::ParseError("cannot open problem file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw sr::ParseError(std::string("problem file is not valid JSON: ") + e.what());
  }
  Problem p;
  p.a_plus = matrix_from_json(j.at("aPlus"), "aPlus");
  p.a_minus = matrix_from_json(j.at("aMinus"), "aMinus");
  p.w = matrix_from_json(j.at("w"), "w");
  p.tol = j.value("tol", 1e-10);
  return p;
}

void emit(const json& report, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << report.dump(2) << std::endl;
  } else {
    std::ofstream out(out_path);
    out << report.dump(2) << std::endl;
  }
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

int max_stokes_n() {
  if (const char* env = std::getenv("SADDLE_ROTOR_MAX_N")) {
    const int n = std::atoi(env);
    if (n >= 2) return n;
  }
  return 48;
}

int cmd_diagonalize(const std::string& input, const std::string& out_path,
                    const std::string& out_u, const std::string& out_bhat,
                    bool no_timings) {
  const auto t0 = std::chrono::steady_clock::now();
  Problem prob = load_problem(input);
  sr::SaddlePointMatrix b(prob.a_plus, prob.a_minus, prob.w);
  const double norm_b = std::max(sr::sym_spectral_norm(b.full()), 1.0);

  const sr::SpectralSplit split = sr::spectral_split(b);
  const sr::KernelSplitReport kr = sr::kernel_split_check(b, split);
  const sr::Matrix q = split.projector_plus();
  sr::Matrix p = sr::Matrix::Zero(b.size(), b.size());
  p.topLeftCorner(b.dec().dim_plus, b.dec().dim_plus).setIdentity();
  const sr::AngularOperator x = sr::angular_from_projector(q, b.dec());
  const sr::DirectRotation rot = sr::direct_rotation_closed(x);
  const sr::BlockDiagonalization bd = sr::block_diagonalize(b, rot);
  const double riccati_res = sr::riccati_residual_angular(b, x.x);
  const double qp = sr::projector_distance(q, p);

  const bool pass = kr.pass && x.norm_x <= 1.0 + prob.tol &&
                    qp <= std::numbers::sqrt2 / 2.0 + prob.tol &&
                    bd.offdiag_residual <= prob.tol * norm_b &&
                    riccati_res <= prob.tol * norm_b;

  json report = {
      {"input", input},
      {"tol", prob.tol},
      {"dims", {{"plus", b.dec().dim_plus}, {"minus", b.dec().dim_minus}}},
      {"eigenvalues",
       {{"min", split.eigenvalues.minCoeff()},
        {"max", split.eigenvalues.maxCoeff()},
        {"dimLPlus", split.basis_plus.cols()},
        {"dimLMinus", split.basis_minus.cols()}}},
      {"normX", x.norm_x},
      {"qpDistance", qp},
      {"offDiagResidual", bd.offdiag_residual},
      {"riccatiResidual", riccati_res},
      {"kernelDims", {kr.dim_plus, kr.dim_minus}},
      {"pass", pass},
  };
  if (!no_timings) report["timingsMs"] = elapsed_ms(t0);

  if (!out_u.empty()) sr::write_matrix_market_file(out_u, rot.u);
  if (!out_bhat.empty()) sr::write_matrix_market_file(out_bhat, bd.bhat);
  emit(report, out_path);
  return pass ? kExitOk : kExitInvariant;
}

int cmd_riccati(const std::string& input, double damping, int max_iter,
                double tol, const std::string& x0_path,
                const std::string& out_path, const std::string& csv_path,
                bool printed_sign, bool no_timings) {
  const auto t0 = std::chrono::steady_clock::now();
  Problem prob = load_problem(input);
  sr::SaddlePointMatrix b(prob.a_plus, prob.a_minus, prob.w);

  sr::Matrix x0 = sr::Matrix::Zero(b.dec().dim_minus, b.dec().dim_plus);
  if (!x0_path.empty()) x0 = sr::read_matrix_market_file(x0_path);

  sr::FixedPointOptions opt;
  opt.damping = damping;
  opt.max_iter = max_iter;
  opt.tol = tol;
  opt.sign = printed_sign ? sr::RiccatiSign::kPrinted : sr::RiccatiSign::kCorrected;
  const sr::RiccatiReport rep = sr::fixed_point_solve(b, x0, opt);

  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    csv << "iter,residual,oracle_distance\n";
    csv.precision(17);
    for (size_t i = 0; i < rep.residual_history.size(); ++i)
      csv << i << "," << rep.residual_history[i] << ","
          << rep.oracle_history[i] << "\n";
  }

  json report = {
      {"input", input},
      {"damping", damping},
      {"tol", tol},
      {"converged", rep.converged},
      {"iterations", rep.iterations},
      {"finalResidual", rep.residual_history.back()},
      {"oracleDistance", rep.oracle_distance},
      {"normX", rep.solution.norm_x},
  };
  if (!no_timings) report["timingsMs"] = elapsed_ms(t0);
  emit(report, out_path);
  return kExitOk;
}

int cmd_stokes(int n, double nu, double vstar, const std::string& out_path,
               const std::string& csv_path, bool no_timings) {
  const auto t0 = std::chrono::steady_clock::now();
  sr::StokesProblem prob{n, nu, vstar};
  prob.validate();
  const sr::StokesReport rep = sr::verify_bounds(prob);

  json report = {
      {"n", rep.n},
      {"nu", rep.nu},
      {"vstar", rep.vstar},
      {"lambda1", rep.lambda1},
      {"lambda1Continuum", rep.lambda1_continuum},
      {"reStar", rep.re_star},
      {"reStarContinuum", rep.re_star_continuum},
      {"normX", rep.norm_x},
      {"bound", rep.bound},
      {"maxAngle", rep.max_angle},
      {"tan2Theta", rep.tan_two_theta},
      {"qpDistance", rep.qp_distance},
      {"kernelDims", {rep.kernel_dim_plus, rep.kernel_dim_minus}},
      {"normBoundPass", rep.norm_bound_pass},
      {"angleBoundPass", rep.angle_bound_pass},
      {"kernelPass", rep.kernel_pass},
      {"pass", rep.pass()},
  };

  if (!csv_path.empty()) {
    const sr::Matrix l = sr::dirichlet_laplacian_2d(n);
    const sr::Vector lam = sr::eigh(l).values;
    const sr::SaddlePointMatrix b = sr::assemble_stokes(prob);
    const sr::SpectralSplit split =
        sr::spectral_split(b, 1e-10 * sr::sym_spectral_norm(b.full()));
    const sr::AngularOperator x =
        sr::angular_from_projector(split.projector_plus(), b.dec());
    const sr::Vector sv = sr::singular_values(x.x);
    std::ofstream csv(csv_path);
    csv << "k,sigma_k,lambda_k\n";
    csv.precision(17);
    const Eigen::Index rows = std::max(sv.size(), lam.size());
    for (Eigen::Index k = 0; k < rows; ++k) {
      csv << (k + 1) << ",";
      if (k < sv.size()) csv << sv(k);
      csv << ",";
      if (k < lam.size()) csv << lam(k);
      csv << "\n";
    }
  }

  if (!no_timings) report["timingsMs"] = elapsed_ms(t0);
  emit(report, out_path);
  return rep.pass() ? kExitOk : kExitInvariant;
}

int cmd_verify(std::uint64_t seed, int cases, Eigen::Index n_max,
               bool printed_sign) {
  if (cases == 0) {
    std::cout << "warning: --cases 0, vacuous pass\n";
    return kExitOk;
  }
  sr::VerifyOptions opt;
  opt.seed = seed;
  opt.cases = cases;
  opt.n_max = n_max;
  opt.sign = printed_sign ? sr::RiccatiSign::kPrinted : sr::RiccatiSign::kCorrected;
  const sr::VerifySummary sum = sr::run_verify_suite(opt);
  for (const auto& [name, pf] : sum.counts)
    std::cout << (pf.second == 0 ? "PASS" : "FAIL") << "  " << name << "  ("
              << pf.first << " pass, " << pf.second << " fail)\n";
  if (sum.reclassified > 0)
    std::cout << "note: " << sum.reclassified
              << " draw(s) redone (ambiguous eigenvalue band)\n";
  return sum.all_pass() ? kExitOk : kExitInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Block-diagonalization of saddle-point matrices by direct rotation"};
  app.require_subcommand(1);
  app.fallthrough();  // allow global flags after the subcommand name
  bool no_timings = false;
  app.add_flag("--no-timings", no_timings,
               "omit timings from reports (byte-identical reruns)");

  auto* diag = app.add_subcommand("diagonalize",
                                  "spectral split, angular operator, direct "
                                  "rotation and block diagonalization");
  std::string diag_input, diag_out, diag_out_u, diag_out_bhat;
  diag->add_option("input", diag_input, "problem JSON file")->required();
  diag->add_option("--out", diag_out, "report JSON path (default: stdout)");
  diag->add_option("--out-u", diag_out_u, "write U as Matrix Market");
  diag->add_option("--out-bhat", diag_out_bhat, "write U'BU as Matrix Market");

  auto* ric = app.add_subcommand("riccati", "damped fixed-point Riccati solve");
  std::string ric_input, ric_out, ric_csv, ric_x0;
  double ric_damping = 0.5, ric_tol = 1e-10;
  int ric_max_iter = 200;
  bool ric_printed = false;
  ric->add_option("input", ric_input, "problem JSON file")->required();
  ric->add_option("--damping", ric_damping, "damping factor in (0,1]")
      ->check(CLI::Range(1e-12, 1.0));
  ric->add_option("--max-iter", ric_max_iter, "iteration cap");
  ric->add_option("--tol", ric_tol, "residual tolerance (relative to ||B||)");
  ric->add_option("--x0", ric_x0, "initial iterate (Matrix Market)");
  ric->add_option("--out", ric_out, "report JSON path (default: stdout)");
  ric->add_option("--csv", ric_csv, "residual history CSV path");
  ric->add_flag("--printed-sign", ric_printed,
                "use the uncorrected fixed-point map (fault injection)")
      ->group("");

  auto* stokes = app.add_subcommand("stokes",
                                    "discrete Stokes operator bound checks");
  int st_n = 16;
  double st_nu = 1.0, st_vstar = 1.0;
  std::string st_out, st_csv;
  stokes->add_option("--n", st_n, "interior grid points per axis")
      ->check(CLI::Range(2, max_stokes_n()));
  stokes->add_option("--nu", st_nu, "viscosity")->check(CLI::PositiveNumber);
  stokes->add_option("--vstar", st_vstar, "coupling v*")
      ->check(CLI::NonNegativeNumber);
  stokes->add_option("--out", st_out, "report JSON path (default: stdout)");
  stokes->add_option("--csv", st_csv, "CSV of (k, sigma_k, lambda_k)");

  auto* verify = app.add_subcommand("verify", "randomized invariant suite");
  std::uint64_t v_seed = 42;
  int v_cases = 100;
  Eigen::Index v_nmax = 64;
  bool v_printed = false;
  verify->add_option("--seed", v_seed, "RNG seed");
  verify->add_option("--cases", v_cases, "number of random instances")
      ->check(CLI::NonNegativeNumber);
  verify->add_option("--nmax", v_nmax, "maximum total dimension");
  verify->add_flag("--printed-sign", v_printed,
                   "use the uncorrected fixed-point map (fault injection)")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the usage error
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (diag->parsed())
      return cmd_diagonalize(diag_input, diag_out, diag_out_u, diag_out_bhat,
                             no_timings);
    if (ric->parsed())
      return cmd_riccati(ric_input, ric_damping, ric_max_iter, ric_tol, ric_x0,
                         ric_out, ric_csv, ric_printed, no_timings);
    if (stokes->parsed())
      return cmd_stokes(st_n, st_nu, st_vstar, st_out, st_csv, no_timings);
    if (verify->parsed()) return cmd_verify(v_seed, v_cases, v_nmax, v_printed);
  } catch (const sr::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const sr::DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const sr::ClassificationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitClassification;
  } catch (const sr::SingularityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitClassification;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
