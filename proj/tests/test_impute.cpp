#include <ardnet/impute.hpp>
#include <ardnet/sphere.hpp>

#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <numeric>

using namespace ardnet;

TEST_SUITE("impute") {
  TEST_CASE("an exact covariate match is copied") {
    Vector nu(3);
    nu << -1.0, -0.5, 0.2;
    PointSet z(3, 3);
    z << 1, 0, 0, 0, 1, 0, 0, 0, 1;
    Matrix dist(1, 3);
    dist << 0.7, 0.0, 0.3;
    const auto out = impute_non_ard(nu, z, dist, 1);
    CHECK(out.nu(0) == -0.5);
    CHECK((out.z.row(0) - z.row(1)).norm() == 0.0);
    // with k = 3 the exact match still dominates
    const auto dominated = impute_non_ard(nu, z, dist, 3);
    CHECK(dominated.nu(0) == doctest::Approx(-0.5).epsilon(1e-6));
  }

  TEST_CASE("equidistant neighbours average") {
    Vector nu(3);
    nu << 1.0, 3.0, 100.0;
    PointSet z(3, 3);
    z << 1, 0, 0, 0, 1, 0, 0, 0, 1;
    Matrix dist(1, 3);
    dist << 0.5, 0.5, 2.0;
    const auto out = impute_non_ard(nu, z, dist, 2);
    CHECK(out.nu(0) == doctest::Approx(2.0));
    CHECK(out.z(0, 0) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(out.z(0, 1) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(out.z(0, 2) == doctest::Approx(0.0));
  }

  TEST_CASE("ties go to the lower index and cancellation falls back to the nearest") {
    Vector nu(3);
    nu << 0.0, 1.0, 2.0;
    PointSet z(3, 3);
    z << 1, 0, 0, -1, 0, 0, 0, 1, 0;
    Matrix dist(1, 3);
    dist << 1.0, 1.0, 1.0;
    const auto out = impute_non_ard(nu, z, dist, 2);  // picks 0 and 1, which cancel
    CHECK(out.nu(0) == doctest::Approx(0.5));
    CHECK((out.z.row(0) - z.row(0)).norm() == 0.0);
  }

  TEST_CASE("convexity, unit norm and permutation invariance") {
    Rng rng = make_stream(3);
    const int m = 30, non = 40, k = 5;
    Vector nu(m);
    PointSet z(m, 3);
    for (int i = 0; i < m; ++i) {
      nu(i) = standard_normal(rng);
      z.row(i) = sphere::sample_uniform(3, rng).transpose();
    }
    Matrix dist(non, m);
    for (int j = 0; j < non; ++j) {
      for (int i = 0; i < m; ++i) dist(j, i) = 5.0 * uniform01(rng);
    }
    const auto out = impute_non_ard(nu, z, dist, k);
    CHECK((out.z.rowwise().norm().array() - 1.0).abs().maxCoeff() < 1e-9);
    for (int j = 0; j < non; ++j) {
      std::vector<int> order(m);
      std::iota(order.begin(), order.end(), 0);
      std::partial_sort(order.begin(), order.begin() + k, order.end(),
                        [&](int a, int b) { return dist(j, a) < dist(j, b); });
      double lo = 1e300, hi = -1e300;
      for (int a = 0; a < k; ++a) {
        lo = std::min(lo, nu(order[a]));
        hi = std::max(hi, nu(order[a]));
      }
      CHECK(out.nu(j) >= lo - 1e-12);
      CHECK(out.nu(j) <= hi + 1e-12);
    }
    // reverse the ARD order (distances are distinct, so the tie-break is irrelevant)
    std::vector<int> perm(m);
    std::iota(perm.rbegin(), perm.rend(), 0);
    Vector nu_p(m);
    PointSet z_p(m, 3);
    Matrix dist_p(non, m);
    for (int i = 0; i < m; ++i) {
      nu_p(i) = nu(perm[i]);
      z_p.row(i) = z.row(perm[i]);
      dist_p.col(i) = dist.col(perm[i]);
    }
    const auto permuted = impute_non_ard(nu_p, z_p, dist_p, k);
    CHECK((permuted.nu - out.nu).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((permuted.z - out.z).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("uninformative covariates keep the mean") {
    Rng rng = make_stream(4);
    const int m = 200, non = 400;
    Vector nu(m);
    PointSet z(m, 3);
    for (int i = 0; i < m; ++i) {
      nu(i) = -1.27 + 0.5 * standard_normal(rng);
      z.row(i) = sphere::sample_uniform(3, rng).transpose();
    }
    Matrix dist(non, m);
    for (int j = 0; j < non; ++j) {
      for (int i = 0; i < m; ++i) dist(j, i) = uniform01(rng);
    }
    const auto out = impute_non_ard(nu, z, dist, 5);
    const double se = 0.5 / std::sqrt(static_cast<double>(m));
    CHECK(std::abs(out.nu.mean() - nu.mean()) < 2.0 * se);
  }

  TEST_CASE("invalid inputs") {
    Vector nu = Vector::Zero(2);
    PointSet z(2, 3);
    z << 1, 0, 0, 0, 1, 0;
    CHECK_THROWS_AS(impute_non_ard(nu, z, Matrix::Ones(1, 2), 3), ValidationError);
    CHECK_THROWS_AS(impute_non_ard(nu, z, Matrix::Constant(1, 2, -1.0), 1), ValidationError);
    CHECK_THROWS_AS(impute_non_ard(nu, z, Matrix::Ones(1, 3), 1), ValidationError);
  }
}
