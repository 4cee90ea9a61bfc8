// Riccati residuals in operator and angular form, the damped fixed-point
// iteration, and Schatten-norm / singular-value-decay utilities.
#pragma once

#include "saddle_rotor/subspace.hpp"

#include <optional>

namespace saddle_rotor {

// ||AY - YA - YVY + V|| for Y = [[0,-X'],[X,0]].
inline double riccati_residual_operator(const SaddlePointMatrix& b,
                                        const Matrix& y) {
  const Eigen::Index n = b.size();
  if (y.rows() != n || y.cols() != n)
    throw DimensionError("riccati_residual_operator: Y size mismatch");
  if ((y + y.transpose()).norm() > kSymTol * std::max(y.norm(), 1.0))
    throw DimensionError("riccati_residual_operator: Y is not skew-symmetric");
  const Matrix j = b.j();
  if ((j * y + y * j).norm() > kSymTol * std::max(y.norm(), 1.0))
    throw DimensionError("riccati_residual_operator: Y is not off-diagonal");
  const Matrix a = b.diagonal_part();
  const Matrix v = b.offdiagonal_part();
  return spectral_norm(a * y - y * a - y * v * y + v);
}

// ||X A+ + A- X + X W' X - W||, the angular form of the same equation.
inline double riccati_residual_angular(const SaddlePointMatrix& b,
                                       const Matrix& x) {
  if (x.rows() != b.dec().dim_minus || x.cols() != b.dec().dim_plus)
    throw DimensionError("riccati_residual_angular: X size mismatch");
  return spectral_norm(x * b.a_plus() + b.a_minus() * x +
                       x * b.w().transpose() * x - b.w());
}

enum class RiccatiSign {
  kCorrected,  // uses (W - A_- X); consistent with the angular equation
  kPrinted,    // uses (W + A_- X); kept for fault-injection tests
};

// One application of the fixed-point map
//   G(X)' = A+^{-1/2} F^{-1} ((W -+ A- X) A+^{-1/2})',
//   F     = I + A+^{-1/2} X' W A+^{-1/2}.
// Returns nullopt when F is numerically singular.
inline std::optional<Matrix> fixed_point_map(
    const SaddlePointMatrix& b, const Matrix& x,
    RiccatiSign sign = RiccatiSign::kCorrected) {
  const Matrix ap_inv_sqrt = psd_inv_sqrt(b.a_plus());
  const Eigen::Index np = b.dec().dim_plus;
  const Matrix f = Matrix::Identity(np, np) +
                   ap_inv_sqrt * x.transpose() * b.w() * ap_inv_sqrt;
  Eigen::FullPivLU<Matrix> lu(f);
  if (lu.rcond() < 1e-14) return std::nullopt;
  const Matrix coupled = (sign == RiccatiSign::kCorrected)
                             ? Matrix(b.w() - b.a_minus() * x)
                             : Matrix(b.w() + b.a_minus() * x);
  const Matrix xt = ap_inv_sqrt * lu.solve((coupled * ap_inv_sqrt).transpose());
  return xt.transpose();
}

struct RiccatiReport {
  AngularOperator solution;
  std::vector<double> residual_history;
  int iterations = 0;
  bool converged = false;
  double oracle_distance = 0.0;  // ||X_iter - X_spectral||
  std::vector<double> oracle_history;
};

struct FixedPointOptions {
  double damping = 0.5;  // undamped (1.0) provably oscillates on the scalar benchmark
  double tol = 1e-10;    // on the angular residual, relative to ||B||
  int max_iter = 200;
  RiccatiSign sign = RiccatiSign::kCorrected;
};

// Damped iteration X_{k+1} = (1-a) X_k + a G(X_k). Requires A+ > 0.
// Convergence is declared on the residual; the report always carries the
// distance to the spectral solution so a wrong fixed point is visible.
inline RiccatiReport fixed_point_solve(const SaddlePointMatrix& b,
                                       const Matrix& x0,
                                       const FixedPointOptions& opt = {}) {
  {
    EigDecomposition d = eigh(b.a_plus());
    const double scale = std::max(d.values.maxCoeff(), 1.0);
    if (d.values(0) < kPsdTol * scale)
      throw SingularityError(
          "fixed_point_solve: A+ must be positive definite (min eigenvalue " +
          std::to_string(d.values(0)) + ")");
  }
  const double norm_b = sym_spectral_norm(b.full());
  const Matrix x_oracle = spectral_angular(b, spectral_split(b)).x;

  RiccatiReport rep;
  Matrix x = x0;
  rep.residual_history.push_back(riccati_residual_angular(b, x));
  rep.oracle_history.push_back(spectral_norm(x - x_oracle));
  while (rep.iterations < opt.max_iter &&
         rep.residual_history.back() > opt.tol * norm_b) {
    auto g = fixed_point_map(b, x, opt.sign);
    if (!g) break;  // F singular; abort with history intact
    x = (1.0 - opt.damping) * x + opt.damping * (*g);
    ++rep.iterations;
    rep.residual_history.push_back(riccati_residual_angular(b, x));
    rep.oracle_history.push_back(spectral_norm(x - x_oracle));
  }
  rep.converged = rep.residual_history.back() <= opt.tol * norm_b;
  rep.solution = make_angular(x);
  rep.oracle_distance = rep.oracle_history.back();
  return rep;
}

// (sum sigma_k^p)^{1/p}.
inline double schatten_norm(const Matrix& m, double p) {
  if (p < 1.0)
    throw DimensionError("schatten_norm: p must be >= 1");
  const Vector sv = singular_values(m);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) acc += std::pow(sv(i), p);
  return std::pow(acc, 1.0 / p);
}

// Least-squares slope of log sigma_k vs log k over k in [k_lo, k_hi]
// (1-based, inclusive).
inline double decay_exponent(const Vector& sigmas, Eigen::Index k_lo,
                             Eigen::Index k_hi) {
  if (k_lo < 1 || k_hi > sigmas.size() || k_hi <= k_lo)
    throw DimensionError("decay_exponent: invalid k range");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double count = static_cast<double>(k_hi - k_lo + 1);
  for (Eigen::Index k = k_lo; k <= k_hi; ++k) {
    if (!(sigmas(k - 1) > 0.0))
      throw DimensionError("decay_exponent: nonpositive value in fit range");
    const double lx = std::log(static_cast<double>(k));
    const double ly = std::log(sigmas(k - 1));
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
  }
  return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

}  // namespace saddle_rotor
