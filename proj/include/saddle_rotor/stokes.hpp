// Finite-difference model of the block Stokes operator on the unit square
// (collocated grid, homogeneous Dirichlet velocity) and the bound checks
// for its positive spectral subspace.
#pragma once

#include "saddle_rotor/riccati.hpp"

#include <numbers>

namespace saddle_rotor {

struct StokesProblem {
  int n = 16;          // interior grid points per axis
  double nu = 1.0;     // viscosity
  double vstar = 1.0;  // coupling v*

  double h() const { return 1.0 / (n + 1); }
  Eigen::Index velocity_dim() const {
    return 2 * static_cast<Eigen::Index>(n) * n;
  }
  Eigen::Index pressure_dim() const {
    return static_cast<Eigen::Index>(n) * n;
  }

  void validate() const {
    if (n < 2) throw DimensionError("StokesProblem: n must be >= 2");
    if (!(nu > 0.0)) throw DimensionError("StokesProblem: nu must be positive");
    if (vstar < 0.0)
      throw DimensionError("StokesProblem: vstar must be nonnegative");
  }
};

namespace detail {

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// 1D second difference, Dirichlet: tridiag(-1, 2, -1).
inline Matrix second_difference_1d(int n) {
  Matrix t = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    t(i, i) = 2.0;
    if (i + 1 < n) {
      t(i, i + 1) = -1.0;
      t(i + 1, i) = -1.0;
    }
  }
  return t;
}

// 1D centered first difference with reflected ghost values, so that the
// constant vector is annihilated exactly.
inline Matrix centered_difference_1d(int n, double h) {
  Matrix d = Matrix::Zero(n, n);
  const double c = 1.0 / (2.0 * h);
  for (int i = 0; i < n; ++i) {
    if (i + 1 < n)
      d(i, i + 1) = c;
    else
      d(i, i) += c;  // reflected ghost p_{n+1} = p_n
    if (i - 1 >= 0)
      d(i, i - 1) = -c;
    else
      d(i, i) -= c;  // reflected ghost p_0 = p_1
  }
  return d;
}

}  // namespace detail

// Scalar 5-point Dirichlet Laplacian on the n x n interior grid, scaled by
// 1/h^2. SPD with eigenvalues (4/h^2)(sin^2(k pi h/2) + sin^2(l pi h/2)).
// Grid ordering is x-fastest: node (i,j) -> j*n + i.
inline Matrix dirichlet_laplacian_2d(int n) {
  if (n < 2) throw DimensionError("dirichlet_laplacian_2d: n must be >= 2");
  const double h = 1.0 / (n + 1);
  const Matrix t = detail::second_difference_1d(n);
  const Matrix id = Matrix::Identity(n, n);
  return (detail::kron(id, t) + detail::kron(t, id)) / (h * h);
}

// Smallest eigenvalue of dirichlet_laplacian_2d(n), in closed form.
inline double dirichlet_laplacian_lambda1(int n) {
  const double h = 1.0 / (n + 1);
  const double s = std::sin(std::numbers::pi * h / 2.0);
  return 8.0 / (h * h) * s * s;
}

// Discrete gradient from pressure nodes to velocity nodes, stacking the x-
// and y-difference operators. G * ones = 0 holds bit-exactly; the discrete
// divergence is D = -G'.
inline Matrix gradient_matrix(int n) {
  if (n < 2) throw DimensionError("gradient_matrix: n must be >= 2");
  const double h = 1.0 / (n + 1);
  const Matrix d = detail::centered_difference_1d(n, h);
  const Matrix id = Matrix::Identity(n, n);
  const Eigen::Index nn = static_cast<Eigen::Index>(n) * n;
  Matrix g(2 * nn, nn);
  g.topRows(nn) = detail::kron(id, d);     // d/dx
  g.bottomRows(nn) = detail::kron(d, id);  // d/dy
  return g;
}

// B = [[nu (I_2 (x) L), v* G],[v* G', 0]]: velocity block SPD, pressure
// block zero, coupling the discrete gradient.
inline SaddlePointMatrix assemble_stokes(const StokesProblem& prob) {
  prob.validate();
  const Matrix l = dirichlet_laplacian_2d(prob.n);
  const Eigen::Index nn = prob.pressure_dim();
  Matrix a_plus = Matrix::Zero(2 * nn, 2 * nn);
  a_plus.topLeftCorner(nn, nn) = prob.nu * l;
  a_plus.bottomRightCorner(nn, nn) = prob.nu * l;
  const Matrix a_minus = Matrix::Zero(nn, nn);
  const Matrix w = prob.vstar * gradient_matrix(prob.n).transpose();
  return SaddlePointMatrix(a_plus, a_minus, w);
}

struct StokesReport {
  int n = 0;
  double nu = 0.0;
  double vstar = 0.0;
  double lambda1 = 0.0;            // discrete lambda_1 of the scalar Laplacian
  double lambda1_continuum = 0.0;  // 2 pi^2 for the unit square
  double re_star = 0.0;            // 2 v* / (nu sqrt(lambda1)), discrete lambda1
  double re_star_continuum = 0.0;
  double norm_x = 0.0;
  double bound = 0.0;  // tan(arctan(Re*)/2)
  double max_angle = 0.0;
  double tan_two_theta = 0.0;
  double qp_distance = 0.0;  // ||Q - P||
  Eigen::Index kernel_dim_plus = 0;
  Eigen::Index kernel_dim_minus = 0;
  bool angle_bound_pass = false;
  bool norm_bound_pass = false;
  bool kernel_pass = false;

  bool pass() const { return angle_bound_pass && norm_bound_pass && kernel_pass; }
};

inline constexpr double kStokesBoundTol = 1e-8;

// Full pipeline: assemble, split, extract X, and test the discrete analogue
// of the tan(arctan(Re*)/2) bound together with the kernel structure.
inline StokesReport verify_bounds(const StokesProblem& prob) {
  prob.validate();
  StokesReport rep;
  rep.n = prob.n;
  rep.nu = prob.nu;
  rep.vstar = prob.vstar;
  rep.lambda1 = dirichlet_laplacian_lambda1(prob.n);
  rep.lambda1_continuum = 2.0 * std::numbers::pi * std::numbers::pi;
  rep.re_star = 2.0 * prob.vstar / (prob.nu * std::sqrt(rep.lambda1));
  rep.re_star_continuum =
      2.0 * prob.vstar / (prob.nu * std::sqrt(rep.lambda1_continuum));
  rep.bound = std::tan(0.5 * std::atan(rep.re_star));

  const SaddlePointMatrix b = assemble_stokes(prob);
  const EigDecomposition d = eigh(b.full());
  const double norm_b = d.values.cwiseAbs().maxCoeff();
  // The kernel (constant pressures) is exact by construction, so a tight
  // zero tolerance keeps the small negative Schur eigenvalues out of the
  // ambiguous band.
  const SpectralSplit split = spectral_split_from(b, d, 1e-10 * norm_b);

  const KernelSplitReport kr = kernel_split_check(b, split);
  rep.kernel_dim_plus = kr.dim_plus;
  rep.kernel_dim_minus = kr.dim_minus;
  rep.kernel_pass = kr.pass && kr.dim_plus == 0 && kr.dim_minus == 1;

  const Matrix q = split.projector_plus();
  const AngularOperator x = angular_from_projector(q, b.dec());
  rep.norm_x = x.norm_x;

  Matrix p = Matrix::Zero(b.size(), b.size());
  p.topLeftCorner(b.dec().dim_plus, b.dec().dim_plus).setIdentity();
  rep.qp_distance = projector_distance(q, p);
  rep.max_angle = operator_angle(p, q).max_angle;
  rep.tan_two_theta = std::tan(2.0 * rep.max_angle);

  rep.norm_bound_pass = rep.norm_x <= rep.bound + kStokesBoundTol;
  rep.angle_bound_pass = rep.tan_two_theta <= rep.re_star + kStokesBoundTol;
  return rep;
}

struct DecayAnalysis {
  Vector laplacian_eigenvalues;  // ascending
  Vector x_singular_values;      // descending
  double laplacian_slope = 0.0;  // log lambda_k vs log k; ~ +1 in 2D
  double x_slope = 0.0;          // log sigma_k(X) vs log k; <= -0.45 expected
};

inline DecayAnalysis decay_analysis(const StokesProblem& prob,
                                    Eigen::Index k_lo, Eigen::Index k_hi) {
  prob.validate();
  DecayAnalysis out;
  const Matrix l = dirichlet_laplacian_2d(prob.n);
  out.laplacian_eigenvalues = eigh_values(l);
  out.laplacian_slope = decay_exponent(out.laplacian_eigenvalues, k_lo, k_hi);

  const SaddlePointMatrix b = assemble_stokes(prob);
  const EigDecomposition d = eigh(b.full());
  const SpectralSplit split =
      spectral_split_from(b, d, 1e-10 * d.values.cwiseAbs().maxCoeff());
  const AngularOperator x = angular_from_projector(split.projector_plus(), b.dec());
  out.x_singular_values = singular_values(x.x);
  out.x_slope = decay_exponent(out.x_singular_values, k_lo, k_hi);
  return out;
}

}  // namespace saddle_rotor
