// Randomized invariant suite shared by the CLI `verify` subcommand and the
// acceptance tests. Deterministic for a fixed seed.
#pragma once

#include "saddle_rotor/random_instances.hpp"
#include "saddle_rotor/riccati.hpp"

#include <map>

namespace saddle_rotor {

struct VerifyOptions {
  std::uint64_t seed = 42;
  int cases = 100;
  Eigen::Index n_max = 64;
  RiccatiSign sign = RiccatiSign::kCorrected;
};

struct VerifySummary {
  // invariant name -> (pass count, fail count)
  std::map<std::string, std::pair<int, int>> counts;
  int reclassified = 0;  // draws redone due to the ambiguous eigenvalue band

  bool all_pass() const {
    for (const auto& [name, pf] : counts)
      if (pf.second > 0) return false;
    return true;
  }

  void tally(const std::string& name, bool ok) {
    auto& pf = counts[name];
    (ok ? pf.first : pf.second)++;
  }
};

inline void verify_one_instance(const SaddlePointMatrix& b, VerifySummary& sum,
                                RiccatiSign sign) {
  const Matrix full = b.full();
  const double norm_b = std::max(sym_spectral_norm(full), 1.0);
  const SpectralSplit split = spectral_split(b);
  const Matrix q = split.projector_plus();
  Matrix p = Matrix::Zero(b.size(), b.size());
  p.topLeftCorner(b.dec().dim_plus, b.dec().dim_plus).setIdentity();

  sum.tally("contraction ||Q-P|| <= sqrt(2)/2",
            projector_distance(q, p) <= std::numbers::sqrt2 / 2.0 + 1e-10);

  const KernelSplitReport kr = kernel_split_check(b, split);
  const KernelCharacterization kc = kernel_characterization(b);
  sum.tally("kernel splitting",
            kr.pass && kc.plus.cols() == kr.dim_plus &&
                kc.minus.cols() == kr.dim_minus);

  const AngularOperator x = angular_from_projector(q, b.dec());
  sum.tally("angular operator is a contraction", x.norm_x <= 1.0 + 1e-10);

  const OperatorAngle angle = operator_angle(p, q);
  sum.tally("tan ||Theta|| = ||X||",
            std::abs(std::tan(angle.max_angle) - x.norm_x) <= 1e-10 * (1.0 + x.norm_x));

  const DirectRotation rot = direct_rotation_closed(x);
  const DirectRotation rot_polar = direct_rotation_polar(x);
  sum.tally("rotation cross-check (closed vs polar)",
            (rot.u - rot_polar.u).norm() <= 1e-10 * rot.u.rows());
  sum.tally("U orthogonal",
            (rot.u.transpose() * rot.u -
             Matrix::Identity(b.size(), b.size())).norm() <= 1e-10 * b.size());
  sum.tally("intertwining ||Q U P - U P||",
            spectral_norm(q * rot.u * p - rot.u * p) <= 1e-10);

  const BlockDiagonalization bd = block_diagonalize(b, rot);
  sum.tally("block diagonalization residual",
            bd.offdiag_residual <= 1e-9 * norm_b);

  // eig(Bhat+) and -eig(Bhat-) together must reproduce eig(B).
  Vector merged(b.size());
  merged.head(bd.bhat_plus.rows()) = eigh(bd.bhat_plus).values;
  merged.tail(bd.bhat_minus.rows()) = -eigh(bd.bhat_minus).values.reverse();
  std::sort(merged.begin(), merged.end());
  sum.tally("spectrum preserved by rotation",
            (merged - split.eigenvalues).cwiseAbs().maxCoeff() <= 1e-9 * norm_b);
  sum.tally("diagonal blocks semi-definite",
            eigh(bd.bhat_plus).values(0) >= -1e-9 * norm_b &&
                eigh(bd.bhat_minus).values(0) >= -1e-9 * norm_b);

  const double res_ang = riccati_residual_angular(b, x.x);
  const double res_op = riccati_residual_operator(b, skew_from_angular(x.x));
  sum.tally("spectral X solves the Riccati equation", res_ang <= 1e-9 * norm_b);
  sum.tally("operator/angular residual equivalence",
            res_op <= 2.0 * res_ang + 1e-12 * norm_b &&
                res_ang <= 2.0 * res_op + 1e-12 * norm_b);

  sum.tally("J+R spectral gap", j_plus_r_gap(b).min_abs_eig >= 1.0 - 1e-10);

  // Fixed-point verification identity G(X) = X, valid when A+ > 0.
  if (eigh(b.a_plus()).values(0) > 1e-8 * norm_b) {
    auto g = fixed_point_map(b, x.x, sign);
    sum.tally("fixed-point identity G(X)=X",
              g && spectral_norm(*g - x.x) <= 1e-9 * (1.0 + norm_b));
  }
}

inline VerifySummary run_verify_suite(const VerifyOptions& opt) {
  VerifySummary sum;
  std::mt19937_64 rng(opt.seed);
  for (int c = 0; c < opt.cases; ++c) {
    std::uniform_int_distribution<Eigen::Index> dim(2, std::max<Eigen::Index>(2, opt.n_max / 2));
    std::uniform_real_distribution<double> coupling(0.1, 3.0);
    InstanceOptions io;
    io.dim_plus = dim(rng);
    io.dim_minus = dim(rng);
    io.coupling = coupling(rng);
    if (c % 4 == 1) io.kernel_plus = 1;
    if (c % 4 == 2) io.kernel_minus = 1;
    if (c % 4 == 3) { io.kernel_plus = 1; io.kernel_minus = 2; }
    for (int attempt = 0;; ++attempt) {
      SaddlePointMatrix b = random_instance(rng, io);
      try {
        verify_one_instance(b, sum, opt.sign);
        break;
      } catch (const ClassificationError&) {
        // Eigenvalue in the ambiguous band: precondition violated, redraw.
        ++sum.reclassified;
        if (attempt >= 10) throw;
      }
    }
  }
  return sum;
}

}  // namespace saddle_rotor
