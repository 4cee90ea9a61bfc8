// Spectral splitting of a saddle-point matrix into the semi-definite
// subspaces L+ and L-, kernel splitting analysis and regularized projectors.
#pragma once

#include "saddle_rotor/blockform.hpp"

namespace saddle_rotor {

struct SpectralSplit {
  Matrix basis_plus;    // orthonormal columns spanning L+
  Matrix basis_minus;   // orthonormal columns spanning L-
  Matrix kernel_plus;   // basis of Ker(B) in the H+ coordinate block
  Matrix kernel_minus;  // basis of Ker(B) in the H- coordinate block
  Vector eigenvalues;   // ascending, all of B
  double zero_tol = 0.0;

  Matrix projector_plus() const { return basis_plus * basis_plus.transpose(); }
  Matrix projector_minus() const { return basis_minus * basis_minus.transpose(); }
};

inline double default_zero_tol(double norm_b) {
  return 1e-8 * std::max(norm_b, 1.0);
}

namespace detail {

// Orthonormal basis of the column space of m at tolerance tol.
inline Matrix column_space(const Matrix& m, double tol) {
  if (m.cols() == 0) return Matrix(m.rows(), 0);
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const Vector& sv = svd.singularValues();
  Eigen::Index rank = 0;
  for (; rank < sv.size(); ++rank)
    if (sv(rank) <= tol) break;
  return svd.matrixU().leftCols(rank);
}

}  // namespace detail

// Splits H into L+ = ran E_B((0,inf)) + Ker(B) in H+ and the analogous L-.
// Kernel eigenvectors are rotated into coordinate-block form first; the
// splitting Ker(B) = (Ker(B) in H+) + (Ker(B) in H-) is what makes the two
// subspaces complementary.
inline SpectralSplit spectral_split_from(const SaddlePointMatrix& b,
                                         const EigDecomposition& d,
                                         double zero_tol) {
  for (Eigen::Index i = 0; i < d.values.size(); ++i) {
    const double a = std::abs(d.values(i));
    if (a > zero_tol && a < 10.0 * zero_tol)
      throw ClassificationError(
          "spectral_split: eigenvalue " + std::to_string(d.values(i)) +
          " falls in the ambiguous band (" + std::to_string(zero_tol) + ", " +
          std::to_string(10.0 * zero_tol) + ")");
  }

  const Eigen::Index n = b.size();
  const Eigen::Index np = b.dec().dim_plus;
  const Eigen::Index nm = b.dec().dim_minus;

  std::vector<Eigen::Index> pos, neg, ker;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (d.values(i) > zero_tol)
      pos.push_back(i);
    else if (d.values(i) < -zero_tol)
      neg.push_back(i);
    else
      ker.push_back(i);
  }

  Matrix kernel_basis(n, static_cast<Eigen::Index>(ker.size()));
  for (size_t i = 0; i < ker.size(); ++i)
    kernel_basis.col(static_cast<Eigen::Index>(i)) = d.vectors.col(ker[i]);

  // The kernel splits along the coordinate blocks; recover block-aligned
  // bases from the projections of the kernel onto H+ and H-.
  const double block_tol = std::sqrt(zero_tol) * 1e-2;
  Matrix kp = detail::column_space(kernel_basis.topRows(np), block_tol);
  Matrix km = detail::column_space(kernel_basis.bottomRows(nm), block_tol);
  if (kp.cols() + km.cols() != kernel_basis.cols())
    throw ClassificationError(
        "spectral_split: kernel does not split along the coordinate blocks "
        "(dims " + std::to_string(kp.cols()) + "+" + std::to_string(km.cols()) +
        " vs " + std::to_string(kernel_basis.cols()) + ")");

  SpectralSplit split;
  split.eigenvalues = d.values;
  split.zero_tol = zero_tol;
  split.kernel_plus = kp;
  split.kernel_minus = km;

  split.basis_plus.resize(n, static_cast<Eigen::Index>(pos.size()) + kp.cols());
  for (size_t i = 0; i < pos.size(); ++i)
    split.basis_plus.col(static_cast<Eigen::Index>(i)) = d.vectors.col(pos[i]);
  split.basis_plus.rightCols(kp.cols()).setZero();
  split.basis_plus.rightCols(kp.cols()).topRows(np) = kp;

  split.basis_minus.resize(n, static_cast<Eigen::Index>(neg.size()) + km.cols());
  for (size_t i = 0; i < neg.size(); ++i)
    split.basis_minus.col(static_cast<Eigen::Index>(i)) = d.vectors.col(neg[i]);
  split.basis_minus.rightCols(km.cols()).setZero();
  split.basis_minus.rightCols(km.cols()).bottomRows(nm) = km;

  return split;
}

inline SpectralSplit spectral_split(const SaddlePointMatrix& b,
                                    double zero_tol = -1.0) {
  const Matrix full = b.full();
  const EigDecomposition d = eigh(full);
  if (zero_tol < 0.0)
    zero_tol = default_zero_tol(d.values.cwiseAbs().maxCoeff());
  return spectral_split_from(b, d, zero_tol);
}

struct KernelSplitReport {
  Eigen::Index dim_kernel = 0;
  Eigen::Index dim_plus = 0;
  Eigen::Index dim_minus = 0;
  double block_defect = 0.0;   // largest complementary-block component
  double kernel_defect = 0.0;  // largest ||B v|| over block-aligned vectors
  bool pass = false;
};

inline KernelSplitReport kernel_split_check(const SaddlePointMatrix& b,
                                            const SpectralSplit& split) {
  KernelSplitReport r;
  r.dim_plus = split.kernel_plus.cols();
  r.dim_minus = split.kernel_minus.cols();
  for (Eigen::Index i = 0; i < split.eigenvalues.size(); ++i)
    if (std::abs(split.eigenvalues(i)) <= split.zero_tol) ++r.dim_kernel;

  const Matrix full = b.full();
  const Eigen::Index np = b.dec().dim_plus;
  const Eigen::Index nm = b.dec().dim_minus;
  r.block_defect = 0.0;
  r.kernel_defect = 0.0;
  for (Eigen::Index i = 0; i < r.dim_plus; ++i) {
    Vector v = Vector::Zero(full.rows());
    v.head(np) = split.kernel_plus.col(i);
    r.kernel_defect = std::max(r.kernel_defect, (full * v).norm());
  }
  for (Eigen::Index i = 0; i < r.dim_minus; ++i) {
    Vector v = Vector::Zero(full.rows());
    v.tail(nm) = split.kernel_minus.col(i);
    r.kernel_defect = std::max(r.kernel_defect, (full * v).norm());
  }
  r.pass = (r.dim_plus + r.dim_minus == r.dim_kernel) &&
           r.kernel_defect <= 10.0 * split.zero_tol;
  return r;
}

// Ker(B) = (Null(A+) cap Null(W)) + (Null(A-) cap Null(W')) computed
// directly from the blocks, independently of the eigendecomposition.
struct KernelCharacterization {
  Matrix plus;   // basis in H+ coordinates
  Matrix minus;  // basis in H- coordinates
};

inline KernelCharacterization kernel_characterization(
    const SaddlePointMatrix& b, double zero_tol = -1.0) {
  if (zero_tol < 0.0) zero_tol = default_zero_tol(sym_spectral_norm(b.full()));
  const double tol = std::sqrt(zero_tol) * 1e-2;
  KernelCharacterization k;
  Matrix stacked_plus(b.a_plus().rows() + b.w().rows(), b.a_plus().cols());
  stacked_plus << b.a_plus(), b.w();
  k.plus = null_space(stacked_plus, tol);
  Matrix stacked_minus(b.a_minus().rows() + b.w().cols(), b.a_minus().cols());
  stacked_minus << b.a_minus(), b.w().transpose();
  k.minus = null_space(stacked_minus, tol);
  return k;
}

// Spectral projector of the regularized matrix B + J/n onto its positive
// part. For kernel-free B these converge to the projector onto L+.
inline Matrix regularized_projection(const SaddlePointMatrix& b, double n) {
  if (!(n > 0.0))
    throw DimensionError("regularized_projection: n must be positive");
  const Matrix bn = b.full() + b.j() / n;
  EigDecomposition d = eigh(bn);
  const double tol = 1e-14 * std::max(d.values.cwiseAbs().maxCoeff(), 1.0);
  Matrix p = Matrix::Zero(bn.rows(), bn.cols());
  for (Eigen::Index i = 0; i < d.values.size(); ++i) {
    if (std::abs(d.values(i)) <= tol)
      throw ClassificationError(
          "regularized_projection: eigenvalue of B + J/n too close to zero");
    if (d.values(i) > 0.0)
      p += d.vectors.col(i) * d.vectors.col(i).transpose();
  }
  return p;
}

}  // namespace saddle_rotor
