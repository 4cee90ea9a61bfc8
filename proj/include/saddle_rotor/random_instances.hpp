// Deterministic random saddle-point instances for property suites:
// Gram-matrix diagonal blocks, scaled Gaussian coupling, and optionally
// engineered kernel directions.
#pragma once

#include "saddle_rotor/blockform.hpp"

#include <random>

namespace saddle_rotor {

struct InstanceOptions {
  Eigen::Index dim_plus = 4;
  Eigen::Index dim_minus = 4;
  double coupling = 1.0;
  Eigen::Index kernel_plus = 0;   // engineered Ker(B) directions in H+
  Eigen::Index kernel_minus = 0;  // engineered Ker(B) directions in H-
};

inline Matrix gaussian_matrix(std::mt19937_64& rng, Eigen::Index rows,
                              Eigen::Index cols) {
  std::normal_distribution<double> normal;
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

// A+- = M'M; kernels engineered by zeroing the leading rows/columns of the
// corresponding blocks consistently, which puts the chosen coordinate
// directions into Null(A+-) and Null(W)/Null(W').
inline SaddlePointMatrix random_instance(std::mt19937_64& rng,
                                         const InstanceOptions& opt) {
  const Eigen::Index np = opt.dim_plus;
  const Eigen::Index nm = opt.dim_minus;
  Matrix mp = gaussian_matrix(rng, np, np);
  Matrix mm = gaussian_matrix(rng, nm, nm);
  Matrix w = opt.coupling * gaussian_matrix(rng, nm, np);
  for (Eigen::Index k = 0; k < opt.kernel_plus && k < np; ++k) {
    mp.col(k).setZero();
    w.col(k).setZero();
  }
  for (Eigen::Index k = 0; k < opt.kernel_minus && k < nm; ++k) {
    mm.col(k).setZero();
    w.row(k).setZero();
  }
  return SaddlePointMatrix(mp.transpose() * mp, mm.transpose() * mm, w);
}

}  // namespace saddle_rotor
