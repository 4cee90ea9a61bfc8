#include "saddle_rotor/stokes.hpp"

#include <doctest.h>

using namespace saddle_rotor;

TEST_CASE("1D second difference and 2D Laplacian eigenvalues") {
  Matrix t = detail::second_difference_1d(3);
  Matrix expected(3, 3);
  expected << 2, -1, 0, -1, 2, -1, 0, -1, 2;
  CHECK((t - expected).norm() == 0.0);

  // eigenvalues of L for n = 3: (4/h^2)(sin^2(k pi h/2) + sin^2(l pi h/2))
  const int n = 3;
  const double h = 1.0 / (n + 1);
  Matrix l = dirichlet_laplacian_2d(n);
  Vector ev = eigh_values(l);
  std::vector<double> expected_ev;
  for (int k = 1; k <= n; ++k)
    for (int ll = 1; ll <= n; ++ll) {
      const double sk = std::sin(k * std::numbers::pi * h / 2.0);
      const double sl = std::sin(ll * std::numbers::pi * h / 2.0);
      expected_ev.push_back(4.0 / (h * h) * (sk * sk + sl * sl));
    }
  std::sort(expected_ev.begin(), expected_ev.end());
  for (int i = 0; i < n * n; ++i)
    CHECK(ev(i) == doctest::Approx(expected_ev[i]).epsilon(1e-12));

  CHECK(dirichlet_laplacian_lambda1(n) ==
        doctest::Approx(ev(0)).epsilon(1e-12));
  // lambda1 approaches the continuum value 2 pi^2 from above
  CHECK(dirichlet_laplacian_lambda1(64) ==
        doctest::Approx(2.0 * std::numbers::pi * std::numbers::pi)
            .epsilon(2e-4));
  CHECK(dirichlet_laplacian_lambda1(64) >
        2.0 * std::numbers::pi * std::numbers::pi - 0.01);
}

TEST_CASE("gradient annihilates constants bit-exactly and only constants") {
  for (int n : {2, 3, 8}) {
    Matrix g = gradient_matrix(n);
    Vector ones = Vector::Ones(n * n);
    CHECK((g * ones).cwiseAbs().maxCoeff() == 0.0);
    Matrix ns = null_space(g, 1e-10);
    CHECK(ns.cols() == 1);
    // the null vector is the normalized constant
    Vector c = ones.normalized();
    CHECK(std::abs(std::abs(ns.col(0).dot(c)) - 1.0) <= 1e-12);
  }
}

TEST_CASE("gradient is first-order consistent on a linear pressure field") {
  const int n = 6;
  const double h = 1.0 / (n + 1);
  Vector p(n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) p(j * n + i) = 3.0 * (i + 1) * h;  // p = 3x
  Vector gp = gradient_matrix(n) * p;
  // d/dx = 3 at interior nodes (centered difference is exact on linears);
  // boundary rows use reflected ghosts and deviate, so check interior only
  for (int j = 0; j < n; ++j)
    for (int i = 1; i < n - 1; ++i)
      CHECK(gp(j * n + i) == doctest::Approx(3.0).epsilon(1e-12));
  // d/dy of a function of x alone vanishes at interior rows
  for (int j = 1; j < n - 1; ++j)
    for (int i = 0; i < n; ++i)
      CHECK(std::abs(gp(n * n + j * n + i)) <= 1e-12);
}

TEST_CASE("assembled operator has the stated block structure") {
  StokesProblem prob;
  prob.n = 4;
  prob.nu = 0.7;
  prob.vstar = 1.3;
  SaddlePointMatrix b = assemble_stokes(prob);
  CHECK(b.dec().dim_plus == 32);
  CHECK(b.dec().dim_minus == 16);
  CHECK((b.a_minus()).norm() == 0.0);
  Matrix l = dirichlet_laplacian_2d(4);
  CHECK((b.a_plus().topLeftCorner(16, 16) - 0.7 * l).norm() == 0.0);
  CHECK((b.a_plus().bottomRightCorner(16, 16) - 0.7 * l).norm() == 0.0);
  CHECK((b.a_plus().topRightCorner(16, 16)).norm() == 0.0);
  CHECK((b.w() - 1.3 * gradient_matrix(4).transpose()).norm() == 0.0);

  StokesProblem bad;
  bad.n = 1;
  CHECK_THROWS_AS(assemble_stokes(bad), DimensionError);
  StokesProblem bad2;
  bad2.nu = 0.0;
  CHECK_THROWS_AS(assemble_stokes(bad2), DimensionError);
}

TEST_CASE("decoupled problem: v* = 0 gives X = 0 and zero angle") {
  StokesProblem prob;
  prob.n = 4;
  prob.vstar = 0.0;
  StokesReport rep = verify_bounds(prob);
  CHECK(rep.re_star == 0.0);
  CHECK(rep.bound == 0.0);
  CHECK(rep.norm_x <= 1e-10);
  CHECK(rep.tan_two_theta <= 1e-8);
  CHECK(rep.norm_bound_pass);
  CHECK(rep.angle_bound_pass);
  // with no coupling the whole pressure space is in the kernel, not just
  // the constants
  CHECK(rep.kernel_dim_plus == 0);
  CHECK(rep.kernel_dim_minus == 16);
}

TEST_CASE("bounds hold on a small grid across couplings") {
  for (double vstar : {0.25, 1.0, 4.0}) {
    StokesProblem prob;
    prob.n = 6;
    prob.nu = 1.0;
    prob.vstar = vstar;
    StokesReport rep = verify_bounds(prob);
    CHECK(rep.pass());
    CHECK(rep.kernel_dim_plus == 0);
    CHECK(rep.kernel_dim_minus == 1);
    CHECK(rep.norm_x <= rep.bound + kStokesBoundTol);
    CHECK(rep.tan_two_theta <= rep.re_star + kStokesBoundTol);
    // X norm also satisfies the cruder contraction bound
    CHECK(rep.norm_x < 1.0);
    // consistency: tan(max angle) = ||X||
    CHECK(std::tan(rep.max_angle) == doctest::Approx(rep.norm_x).epsilon(1e-8));
    // ||Q - P|| = sin(max angle) < sqrt(2)/2
    CHECK(rep.qp_distance ==
          doctest::Approx(std::sin(rep.max_angle)).epsilon(1e-8));
    CHECK(rep.qp_distance < std::numbers::sqrt2 / 2.0);
  }
}

TEST_CASE("bound scales with viscosity: Re* halves when nu doubles") {
  StokesProblem a;
  a.n = 5;
  a.nu = 1.0;
  a.vstar = 1.0;
  StokesProblem b = a;
  b.nu = 2.0;
  StokesReport ra = verify_bounds(a);
  StokesReport rb = verify_bounds(b);
  CHECK(rb.re_star == doctest::Approx(ra.re_star / 2.0).epsilon(1e-14));
  CHECK(rb.norm_x < ra.norm_x);
  CHECK(ra.pass());
  CHECK(rb.pass());
}

TEST_CASE("decay analysis: Laplacian eigenvalue growth near linear in k") {
  StokesProblem prob;
  prob.n = 10;
  DecayAnalysis da = decay_analysis(prob, 4, 40);
  // 2D Weyl law: lambda_k ~ k, so the log-log slope is near +1
  CHECK(da.laplacian_slope > 0.7);
  CHECK(da.laplacian_slope < 1.3);
  // singular values of X decay; slope clearly negative
  CHECK(da.x_slope < -0.3);
  // sigma_k are descending
  for (Eigen::Index k = 1; k < da.x_singular_values.size(); ++k)
    CHECK(da.x_singular_values(k) <= da.x_singular_values(k - 1) + 1e-14);
}
