// Dense symmetric eigendecomposition, SVD, PSD matrix functions and the
// polar decomposition. Everything downstream is built on these kernels.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#ifdef SADDLE_ROTOR_USE_LAPACKE
#include <lapacke.h>
#endif

namespace saddle_rotor {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SingularityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Eigenvalue too close to a classification boundary to call.
struct ClassificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr double kSymTol = 1e-12;  // relative symmetry tolerance
inline constexpr double kPsdTol = 1e-12;  // relative PSD / invertibility floor

struct EigDecomposition {
  Vector values;   // ascending
  Matrix vectors;  // orthonormal columns, S * vectors = vectors * diag(values)
};

inline Vector singular_values(const Matrix& m);

inline double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return singular_values(m)(0);
}

inline void require_symmetric(const Matrix& s, const std::string& name) {
  if (s.rows() != s.cols())
    throw DimensionError(name + ": expected square matrix, got " +
                         std::to_string(s.rows()) + "x" + std::to_string(s.cols()));
  const double scale = s.norm();
  if ((s - s.transpose()).norm() > kSymTol * std::max(scale, 1.0))
    throw DimensionError(name + ": matrix is not symmetric");
}

// Symmetric eigendecomposition, values ascending. The input is symmetrized
// as (S+S')/2 after the symmetry check to absorb round-off.
inline EigDecomposition eigh(const Matrix& s) {
  require_symmetric(s, "eigh");
  Matrix sym = 0.5 * (s + s.transpose());
  EigDecomposition d;
#ifdef SADDLE_ROTOR_USE_LAPACKE
  const lapack_int n = static_cast<lapack_int>(sym.rows());
  d.values.resize(n);
  d.vectors = sym;  // dsyevd overwrites with eigenvectors
  lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n,
                                   d.vectors.data(), n, d.values.data());
  if (info != 0)
    throw SingularityError("eigh: dsyevd failed with info=" + std::to_string(info));
#else
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success)
    throw SingularityError("eigh: eigensolver did not converge");
  d.values = es.eigenvalues();
  d.vectors = es.eigenvectors();
#endif
  return d;
}

// Eigenvalues only (ascending) of a symmetric matrix; cheaper than eigh.
inline Vector eigh_values(const Matrix& s) {
  require_symmetric(s, "eigh_values");
  Matrix sym = 0.5 * (s + s.transpose());
#ifdef SADDLE_ROTOR_USE_LAPACKE
  const lapack_int n = static_cast<lapack_int>(sym.rows());
  Vector values(n);
  lapack_int info =
      LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', n, sym.data(), n, values.data());
  if (info != 0)
    throw SingularityError("eigh_values: dsyevd failed with info=" +
                           std::to_string(info));
  return values;
#else
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
#endif
}

// max |eig| of a symmetric matrix; equals the spectral norm.
inline double sym_spectral_norm(const Matrix& s) {
  if (s.size() == 0) return 0.0;
  return eigh_values(s).cwiseAbs().maxCoeff();
}

// Singular values in descending order; sigma_1 is the spectral norm.
inline Vector singular_values(const Matrix& m) {
#ifdef SADDLE_ROTOR_USE_LAPACKE
  const lapack_int rows = static_cast<lapack_int>(m.rows());
  const lapack_int cols = static_cast<lapack_int>(m.cols());
  Matrix a = m;
  Vector s(std::min(rows, cols));
  Matrix u(1, 1), vt(1, 1);
  lapack_int info = LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'N', rows, cols, a.data(),
                                   rows, s.data(), u.data(), 1, vt.data(), 1);
  if (info != 0)
    throw SingularityError("singular_values: dgesdd failed with info=" +
                           std::to_string(info));
  return s;
#else
  return m.jacobiSvd().singularValues();
#endif
}

namespace detail {

// f applied to the spectrum of a symmetric matrix; minEig guards against
// applying f outside its domain.
template <class F>
Matrix symmetric_function(const Matrix& s, F f, double min_eig,
                          const std::string& what) {
  EigDecomposition d = eigh(s);
  const double floor = min_eig * std::max(d.values.cwiseAbs().maxCoeff(), 1.0);
  Vector fv(d.values.size());
  for (Eigen::Index i = 0; i < d.values.size(); ++i) {
    if (d.values(i) < floor)
      throw SingularityError(what + ": eigenvalue " + std::to_string(d.values(i)) +
                             " below tolerance " + std::to_string(floor));
    fv(i) = f(d.values(i));
  }
  return d.vectors * fv.asDiagonal() * d.vectors.transpose();
}

}  // namespace detail

inline Matrix psd_sqrt(const Matrix& s) {
  return detail::symmetric_function(
      s, [](double x) { return std::sqrt(std::max(x, 0.0)); }, -kPsdTol,
      "psd_sqrt");
}

inline Matrix psd_inv_sqrt(const Matrix& s) {
  return detail::symmetric_function(
      s, [](double x) { return 1.0 / std::sqrt(x); }, kPsdTol, "psd_inv_sqrt");
}

// Orthogonal factor of the polar decomposition M = U * (M'M)^{1/2}.
inline Matrix polar_orthogonal(const Matrix& m) {
  if (m.rows() != m.cols())
    throw DimensionError("polar_orthogonal: expected square matrix");
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  if (sv.size() == 0 || sv(sv.size() - 1) < kPsdTol * std::max(sv(0), 1.0))
    throw SingularityError("polar_orthogonal: matrix is rank deficient");
  return svd.matrixU() * svd.matrixV().transpose();
}

// Operator-norm distance between two orthogonal projectors.
inline double projector_distance(const Matrix& p, const Matrix& q) {
  if (p.rows() != q.rows() || p.cols() != q.cols())
    throw DimensionError("projector_distance: shape mismatch");
  return sym_spectral_norm(p - q);
}

// Orthonormal basis of the null space of m at relative tolerance tol.
inline Matrix null_space(const Matrix& m, double tol) {
  if (m.size() == 0) return Matrix::Identity(m.cols(), m.cols());
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  Eigen::Index rank = 0;
  for (; rank < sv.size(); ++rank)
    if (sv(rank) <= tol) break;
  return svd.matrixV().rightCols(m.cols() - rank);
}

}  // namespace saddle_rotor
