// Graph-subspace machinery: angular operators, operator angles, the direct
// rotation (closed form and polar form, cross-checked) and block
// diagonalization of a saddle-point matrix.
#pragma once

#include "saddle_rotor/spectral.hpp"

namespace saddle_rotor {

struct AngularOperator {
  Matrix x;  // dimMinus x dimPlus, graph(X) = { u + Xu : u in H+ }
  double norm_x = 0.0;
};

inline AngularOperator make_angular(Matrix x) {
  AngularOperator a;
  a.norm_x = spectral_norm(x);
  a.x = std::move(x);
  return a;
}

struct DirectRotation {
  Matrix u;           // orthogonal, diagonal blocks symmetric PSD
  Matrix y;           // skew-symmetric off-diagonal generator
  Matrix abs_factor;  // |I+Y|, so that I+Y = U |I+Y|
};

// Y = [[0, -X'],[X, 0]]; skew-symmetric and J-anticommuting.
inline Matrix skew_from_angular(const Matrix& x) {
  const Eigen::Index np = x.cols();
  const Eigen::Index nm = x.rows();
  Matrix y = Matrix::Zero(np + nm, np + nm);
  y.topRightCorner(np, nm) = -x.transpose();
  y.bottomLeftCorner(nm, np) = x;
  return y;
}

struct GraphProjectors {
  Matrix q;
  Matrix q_perp;
};

// Orthogonal projector onto graph(X) via the 2x2 block formula built on
// (I + X'X)^{-1}.
inline GraphProjectors graph_projector(const AngularOperator& ang) {
  const Matrix& x = ang.x;
  const Eigen::Index np = x.cols();
  const Eigen::Index nm = x.rows();
  const Matrix inner =
      (Matrix::Identity(np, np) + x.transpose() * x).ldlt().solve(
          Matrix::Identity(np, np));
  GraphProjectors p;
  p.q.resize(np + nm, np + nm);
  p.q.topLeftCorner(np, np) = inner;
  p.q.topRightCorner(np, nm) = inner * x.transpose();
  p.q.bottomLeftCorner(nm, np) = x * inner;
  p.q.bottomRightCorner(nm, nm) = x * inner * x.transpose();
  p.q_perp = Matrix::Identity(np + nm, np + nm) - p.q;
  return p;
}

// Recovers X from a projector whose range is a graph over H+:
// X = Q21 * Q11^{-1}. Rejects subspaces that are not graphs over H+.
inline AngularOperator angular_from_projector(const Matrix& q,
                                              const BlockDecomposition& dec) {
  if (q.rows() != dec.total() || q.cols() != dec.total())
    throw DimensionError("angular_from_projector: projector size mismatch");
  const Matrix q11 = q.topLeftCorner(dec.dim_plus, dec.dim_plus);
  EigDecomposition d = eigh(q11);
  const double max_eig = d.values.maxCoeff();
  if (max_eig <= 0.0 || d.values.minCoeff() < 1e-12 * max_eig)
    throw SingularityError(
        "angular_from_projector: range is not a graph subspace over H+ "
        "(Q11 numerically singular)");
  const Matrix q11_inv =
      d.vectors * d.values.cwiseInverse().asDiagonal() * d.vectors.transpose();
  return make_angular(q.bottomLeftCorner(dec.dim_minus, dec.dim_plus) * q11_inv);
}

struct OperatorAngle {
  Matrix theta;            // PSD, spectrum in [0, pi/2], on ran(P) coordinates
  double max_angle = 0.0;  // radians; tan(max_angle) = ||X|| for graphs
};

// Theta = arcsin sqrt(P Q_perp P |_{ran P}).
inline OperatorAngle operator_angle(const Matrix& p, const Matrix& q) {
  if (p.rows() != q.rows() || p.cols() != q.cols())
    throw DimensionError("operator_angle: projector size mismatch");
  // Orthonormal basis of ran(P).
  EigDecomposition dp = eigh(p);
  std::vector<Eigen::Index> ran;
  for (Eigen::Index i = 0; i < dp.values.size(); ++i)
    if (dp.values(i) > 0.5) ran.push_back(i);
  Matrix basis(p.rows(), static_cast<Eigen::Index>(ran.size()));
  for (size_t i = 0; i < ran.size(); ++i)
    basis.col(static_cast<Eigen::Index>(i)) = dp.vectors.col(ran[i]);

  // Sines of the principal angles are the singular values of Q_perp
  // restricted to ran(P); this avoids squaring, which would cap the
  // attainable accuracy at sqrt(machine epsilon) for small angles.
  const Matrix q_perp = Matrix::Identity(q.rows(), q.cols()) - q;
  Eigen::BDCSVD<Matrix> svd(q_perp * basis, Eigen::ComputeThinV);
  const Vector& sines = svd.singularValues();
  Vector angles(sines.size());
  for (Eigen::Index i = 0; i < sines.size(); ++i)
    angles(i) = std::asin(std::clamp(sines(i), 0.0, 1.0));
  OperatorAngle out;
  const Matrix v = svd.matrixV();
  out.theta = v * angles.asDiagonal() * v.transpose();
  out.max_angle = angles.size() ? angles.maxCoeff() : 0.0;
  return out;
}

// Direct rotation from H+ to graph(X) via the four-block closed form.
inline DirectRotation direct_rotation_closed(const AngularOperator& ang) {
  const Matrix& x = ang.x;
  const Eigen::Index np = x.cols();
  const Eigen::Index nm = x.rows();
  const Matrix cp =
      psd_inv_sqrt(Matrix::Identity(np, np) + x.transpose() * x);
  const Matrix cm = psd_inv_sqrt(Matrix::Identity(nm, nm) + x * x.transpose());
  DirectRotation rot;
  rot.u.resize(np + nm, np + nm);
  rot.u.topLeftCorner(np, np) = cp;
  rot.u.topRightCorner(np, nm) = -x.transpose() * cm;
  rot.u.bottomLeftCorner(nm, np) = x * cp;
  rot.u.bottomRightCorner(nm, nm) = cm;
  rot.y = skew_from_angular(x);
  const Matrix iy = Matrix::Identity(np + nm, np + nm) + rot.y;
  rot.abs_factor = psd_sqrt(iy.transpose() * iy);
  return rot;
}

// Same rotation through the polar decomposition I+Y = U |I+Y|. Kept as an
// independent route; the two constructions must agree.
inline DirectRotation direct_rotation_polar(const AngularOperator& ang) {
  DirectRotation rot;
  rot.y = skew_from_angular(ang.x);
  const Eigen::Index n = rot.y.rows();
  const Matrix iy = Matrix::Identity(n, n) + rot.y;
  rot.abs_factor = psd_sqrt(iy.transpose() * iy);
  rot.u = polar_orthogonal(iy);
  return rot;
}

struct BlockDiagonalization {
  Matrix bhat;        // U' B U
  Matrix bhat_plus;   // top-left block, PSD up to tolerance
  Matrix bhat_minus;  // minus the bottom-right block, PSD up to tolerance
  double offdiag_residual = 0.0;
};

inline BlockDiagonalization block_diagonalize(const SaddlePointMatrix& b,
                                              const DirectRotation& rot) {
  BlockDiagonalization out;
  out.bhat = rot.u.transpose() * b.full() * rot.u;
  const Eigen::Index np = b.dec().dim_plus;
  const Eigen::Index nm = b.dec().dim_minus;
  out.bhat_plus = out.bhat.topLeftCorner(np, np);
  out.bhat_minus = -out.bhat.bottomRightCorner(nm, nm);
  out.offdiag_residual =
      spectral_norm(out.bhat.bottomLeftCorner(nm, np));
  return out;
}

struct SimilarityResiduals {
  double forward = 0.0;    // ||(A+V)(I+Y) - (I+Y)(A+VY)||
  double backward = 0.0;   // ||(I-Y)(A+V) - (A-YV)(I-Y)||
  double offdiag_of_similarity = 0.0;  // off-diagonal part of A - YV
};

// The similarity identities behind the graph-subspace reduction; all three
// residuals vanish together with the Riccati residual.
inline SimilarityResiduals similarity_identity_residuals(
    const SaddlePointMatrix& b, const AngularOperator& ang) {
  const Matrix a = b.diagonal_part();
  const Matrix v = b.offdiagonal_part();
  const Matrix y = skew_from_angular(ang.x);
  const Eigen::Index n = a.rows();
  const Matrix id = Matrix::Identity(n, n);
  SimilarityResiduals r;
  r.forward = spectral_norm((a + v) * (id + y) - (id + y) * (a + v * y));
  r.backward = spectral_norm((id - y) * (a + v) - (a - y * v) * (id - y));
  const Matrix sim = a - y * v;
  const Eigen::Index np = b.dec().dim_plus;
  const Eigen::Index nm = b.dec().dim_minus;
  Matrix off = Matrix::Zero(n, n);
  off.topRightCorner(np, nm) = sim.topRightCorner(np, nm);
  off.bottomLeftCorner(nm, np) = sim.bottomLeftCorner(nm, np);
  r.offdiag_of_similarity = spectral_norm(off);
  return r;
}

// Angular operator of the spectral subspace L+ of b.
inline AngularOperator spectral_angular(const SaddlePointMatrix& b,
                                        const SpectralSplit& split) {
  return angular_from_projector(split.projector_plus(), b.dec());
}

}  // namespace saddle_rotor
