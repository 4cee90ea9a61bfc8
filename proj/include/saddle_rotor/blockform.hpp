// Saddle-point block matrix B = [[A+, W'],[W, -A-]]: assembly, the
// involution J, the diagonal/off-diagonal split and its structure checks.
#pragma once

#include "saddle_rotor/corelin.hpp"

namespace saddle_rotor {

struct BlockDecomposition {
  Eigen::Index dim_plus = 0;
  Eigen::Index dim_minus = 0;

  Eigen::Index total() const { return dim_plus + dim_minus; }
};

// J = diag(I, -I): diagonal parts commute with J, off-diagonal ones
// anticommute.
inline Matrix involution(const BlockDecomposition& dec) {
  Vector d(dec.total());
  d.head(dec.dim_plus).setOnes();
  d.tail(dec.dim_minus).setConstant(-1.0);
  return d.asDiagonal();
}

class SaddlePointMatrix {
 public:
  SaddlePointMatrix(Matrix a_plus, Matrix a_minus, Matrix w)
      : a_plus_(std::move(a_plus)),
        a_minus_(std::move(a_minus)),
        w_(std::move(w)) {
    dec_.dim_plus = a_plus_.rows();
    dec_.dim_minus = a_minus_.rows();
    if (dec_.dim_plus < 1 || dec_.dim_minus < 1)
      throw DimensionError("SaddlePointMatrix: both blocks must be nonempty");
    require_symmetric(a_plus_, "aPlus");
    require_symmetric(a_minus_, "aMinus");
    if (w_.rows() != dec_.dim_minus || w_.cols() != dec_.dim_plus)
      throw DimensionError("SaddlePointMatrix: w must be dimMinus x dimPlus");
    require_psd(a_plus_, "aPlus");
    require_psd(a_minus_, "aMinus");
  }

  const BlockDecomposition& dec() const { return dec_; }
  const Matrix& a_plus() const { return a_plus_; }
  const Matrix& a_minus() const { return a_minus_; }
  const Matrix& w() const { return w_; }

  Eigen::Index size() const { return dec_.total(); }

  // B = A + V
  Matrix full() const {
    Matrix b(size(), size());
    b.topLeftCorner(dec_.dim_plus, dec_.dim_plus) = a_plus_;
    b.topRightCorner(dec_.dim_plus, dec_.dim_minus) = w_.transpose();
    b.bottomLeftCorner(dec_.dim_minus, dec_.dim_plus) = w_;
    b.bottomRightCorner(dec_.dim_minus, dec_.dim_minus) = -a_minus_;
    return b;
  }

  // A = diag(A+, -A-), the diagonal part.
  Matrix diagonal_part() const {
    Matrix a = Matrix::Zero(size(), size());
    a.topLeftCorner(dec_.dim_plus, dec_.dim_plus) = a_plus_;
    a.bottomRightCorner(dec_.dim_minus, dec_.dim_minus) = -a_minus_;
    return a;
  }

  // V = [[0, W'],[W, 0]], the off-diagonal part.
  Matrix offdiagonal_part() const {
    Matrix v = Matrix::Zero(size(), size());
    v.topRightCorner(dec_.dim_plus, dec_.dim_minus) = w_.transpose();
    v.bottomLeftCorner(dec_.dim_minus, dec_.dim_plus) = w_;
    return v;
  }

  // |A| = diag(A+, A-), exact by block construction.
  Matrix abs_diagonal_part() const {
    Matrix a = Matrix::Zero(size(), size());
    a.topLeftCorner(dec_.dim_plus, dec_.dim_plus) = a_plus_;
    a.bottomRightCorner(dec_.dim_minus, dec_.dim_minus) = a_minus_;
    return a;
  }

  Matrix j() const { return involution(dec_); }

 private:
  static void require_psd(const Matrix& s, const std::string& name) {
    EigDecomposition d = eigh(s);
    const double scale = std::max(d.values.cwiseAbs().maxCoeff(), 1.0);
    if (d.values(0) < -kPsdTol * scale * 100)
      throw DimensionError(name + ": block is indefinite (min eigenvalue " +
                           std::to_string(d.values(0)) + ")");
  }

  BlockDecomposition dec_;
  Matrix a_plus_;
  Matrix a_minus_;
  Matrix w_;
};

inline SaddlePointMatrix assemble(const Matrix& a_plus, const Matrix& a_minus,
                                  const Matrix& w) {
  return SaddlePointMatrix(a_plus, a_minus, w);
}

struct StructureDiagnostics {
  double commutator_ja = 0.0;      // ||JA - AJ||, zero by construction
  double anticommutator_jv = 0.0;  // ||JV + VJ||, zero by construction
};

inline StructureDiagnostics check_structure(const SaddlePointMatrix& b) {
  const Matrix j = b.j();
  const Matrix a = b.diagonal_part();
  const Matrix v = b.offdiagonal_part();
  StructureDiagnostics d;
  d.commutator_ja = (j * a - a * j).norm();
  d.anticommutator_jv = (j * v + v * j).norm();
  return d;
}

// Smallest beta with |x'Vx| <= beta * x'(|A|+I)x, computed as the norm of
// the rescaled off-diagonal part R = (|A|+I)^{-1/2} V (|A|+I)^{-1/2}.
inline Matrix rescaled_offdiagonal(const SaddlePointMatrix& b) {
  const Matrix scale = psd_inv_sqrt(b.abs_diagonal_part() +
                                    Matrix::Identity(b.size(), b.size()));
  return scale * b.offdiagonal_part() * scale;
}

inline double form_bound_beta(const SaddlePointMatrix& b) {
  return spectral_norm(rescaled_offdiagonal(b));
}

struct JPlusRGap {
  Matrix r;
  double min_abs_eig = 0.0;  // >= 1 for any off-diagonal symmetric R
};

// Spectrum of J+R stays outside (-1,1) for off-diagonal R; this is the
// finite-dimensional core of the semiboundedness argument.
inline JPlusRGap j_plus_r_gap(const SaddlePointMatrix& b) {
  JPlusRGap out;
  out.r = rescaled_offdiagonal(b);
  const Matrix j = b.j();
  EigDecomposition d = eigh(j + out.r);
  out.min_abs_eig = d.values.cwiseAbs().minCoeff();
  return out;
}

}  // namespace saddle_rotor
