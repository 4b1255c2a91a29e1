#include <ardnet/sphere.hpp>

#include <doctest.h>

#include <Eigen/QR>

#include <cmath>
#include <numbers>
#include <vector>

using namespace ardnet;
namespace sp = ardnet::sphere;

namespace {

constexpr double kPi = std::numbers::pi;

Vector unit(int dim, int axis) {
  Vector v = Vector::Zero(dim);
  v(axis) = 1.0;
  return v;
}

// 1 / integral of exp(kappa t) over the sphere in R^dim, by Simpson's rule on
// the cosine t with the marginal weight area(S^{dim-2}) (1 - t^2)^{(dim-3)/2}.
// For dim = 4 the weight has an integrable square-root singularity, so the
// substitution t = cos(phi) is used instead.
double quadrature_norm_const(double kappa, int dim) {
  const double ring = 2.0 * std::pow(kPi, (dim - 1) / 2.0) / std::tgamma((dim - 1) / 2.0);
  const int steps = 20000;
  double sum = 0.0;
  for (int s = 0; s <= steps; ++s) {
    const double phi = kPi * s / steps;
    const double w = (s == 0 || s == steps) ? 1.0 : (s % 2 ? 4.0 : 2.0);
    sum += w * std::exp(kappa * (std::cos(phi) - 1.0)) * std::pow(std::sin(phi), dim - 2);
  }
  const double integral = sum * (kPi / steps) / 3.0 * ring;  // times exp(kappa) factored out
  return 1.0 / integral;
}

Matrix random_rotation(int dim, Rng& rng) {
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) g(i, j) = standard_normal(rng);
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  if (q.determinant() < 0) q.col(0) = -q.col(0);
  return q;
}

}  // namespace

TEST_SUITE("sphere") {
  TEST_CASE("log Bessel I matches reference values") {
    CHECK(std::exp(sp::log_bessel_i(0.0, 1.0)) == doctest::Approx(1.2660658777520082).epsilon(1e-13));
    CHECK(std::exp(sp::log_bessel_i(1.0, 1.0)) == doctest::Approx(0.5651591039924851).epsilon(1e-13));
    // I_{1/2}(x) = sqrt(2 / (pi x)) sinh x, on both sides of the series/asymptotic switch.
    for (double x : {0.01, 3.0, 59.0, 61.0, 150.0, 700.0, 5000.0}) {
      const double exact = 0.5 * std::log(2.0 / (kPi * x)) + x + std::log1p(-std::exp(-2.0 * x)) - std::log(2.0);
      CHECK(sp::log_bessel_i(0.5, x) == doctest::Approx(exact).epsilon(1e-12));
    }
    CHECK(sp::log_bessel_i(0.0, 0.0) == 0.0);
    CHECK(std::isinf(sp::log_bessel_i(1.0, 0.0)));
    CHECK_THROWS_AS(sp::log_bessel_i(0.5, -1.0), ValidationError);
  }

  TEST_CASE("three-dimensional normalizing constant closed form") {
    CHECK(sp::vmf_norm_const(0.0, 3) == doctest::Approx(1.0 / (4.0 * kPi)).epsilon(1e-14));
    CHECK(sp::vmf_norm_const(1e-9, 3) == doctest::Approx(0.0795775).epsilon(1e-6));
    CHECK(sp::vmf_norm_const(1.0, 3) == doctest::Approx(0.06771391313789567).epsilon(1e-12));
    for (double k : {1e-4, 0.3, 2.0, 20.0, 300.0}) {
      // general Bessel route against the D = 3 shortcut
      const double general = 0.5 * std::log(k) - 1.5 * std::log(2.0 * kPi) - sp::log_bessel_i(0.5, k);
      CHECK(sp::log_vmf_norm_const(k, 3) == doctest::Approx(general).epsilon(1e-10));
    }
    CHECK(std::isfinite(sp::log_vmf_norm_const(5000.0, 3)));
    CHECK_THROWS_AS(sp::vmf_norm_const(std::nan(""), 3), ValidationError);
    CHECK_THROWS_AS(sp::vmf_norm_const(-1.0, 3), ValidationError);
    CHECK_THROWS_AS(sp::vmf_norm_const(1.0, 1), ValidationError);
  }

  TEST_CASE("normalizing constant matches quadrature for D in {3,4,5}") {
    for (int dim : {3, 4, 5}) {
      for (double k : {0.0, 0.5, 1.0, 5.0, 20.0, 80.0}) {
        const double log_quad = std::log(quadrature_norm_const(k, dim)) - k;
        CAPTURE(dim);
        CAPTURE(k);
        CHECK(std::abs(sp::log_vmf_norm_const(k, dim) - log_quad) < 1e-6);
      }
    }
  }

  TEST_CASE("continuity at the series/asymptotic switch") {
    for (int dim : {4, 5, 8}) {
      const double nu = dim / 2.0 - 1.0;
      const double s = 60.0 + nu * nu;
      const double h = 1e-7;
      // d/dk log C_D(k) = -A_D(k); whatever remains after the slope is a jump.
      const double jump = sp::log_vmf_norm_const(s + h, dim) - sp::log_vmf_norm_const(s - h, dim) +
                          2.0 * h * sp::mean_resultant_length(s, dim);
      CHECK(std::abs(jump) < 1e-9);
    }
  }

  TEST_CASE("mean resultant length in three dimensions is coth(k) - 1/k") {
    for (double k : {0.2, 1.0, 5.0, 50.0, 400.0}) {
      CHECK(sp::mean_resultant_length(k, 3) == doctest::Approx(1.0 / std::tanh(k) - 1.0 / k).epsilon(1e-10));
    }
    CHECK(sp::mean_resultant_length(0.0, 3) == 0.0);
  }

  TEST_CASE("vMF log density") {
    const Vector e1 = unit(3, 0), e2 = unit(3, 1);
    CHECK(sp::vmf_log_density(e1, e1, 0.0) == doctest::Approx(-std::log(4.0 * kPi)));
    CHECK(sp::vmf_log_density(e2, e1, 7.0) == doctest::Approx(sp::log_vmf_norm_const(7.0, 3)));
    CHECK(sp::vmf_log_density(e1, e1, 5.0) == doctest::Approx(sp::log_vmf_norm_const(5.0, 3) + 5.0));
    CHECK_THROWS_AS(sp::vmf_log_density(e1, unit(4, 0), 1.0), ValidationError);
  }

  TEST_CASE("angle between") {
    const Vector e1 = unit(3, 0), e2 = unit(3, 1);
    CHECK(sp::angle_between(e1, e1) == 0.0);
    CHECK(sp::angle_between(e1, Vector(-e1)) == doctest::Approx(kPi));
    CHECK(sp::angle_between(e1, e2) == doctest::Approx(kPi / 2));
    CHECK(sp::angle_between(e1, Vector(e1 * (1.0 + 1e-15))) < 1e-14);
    // nearly parallel vectors keep full precision (acos of the dot product would give ~1e-8 or 0)
    Vector tilted = e1;
    tilted(1) = 1e-12;
    CHECK(sp::angle_between(e1, Vector(tilted.normalized())) == doctest::Approx(1e-12).epsilon(1e-6));
  }

  TEST_CASE("uniform and vMF draws are unit vectors with the right resultant") {
    Rng rng = make_stream(11);
    for (int dim : {3, 5}) {
      for (double k : {0.0, 1.0, 5.0, 20.0}) {
        const Vector mu = unit(dim, dim - 1);
        const int draws = 20000;
        Vector sum = Vector::Zero(dim);
        double sum_sq = 0.0;
        for (int s = 0; s < draws; ++s) {
          const Vector x = sp::sample_vmf(mu, k, rng);
          REQUIRE(std::abs(x.norm() - 1.0) < 1e-9);
          sum += x;
          sum_sq += std::pow(x.dot(mu), 2);
        }
        const double mean_t = sum.dot(mu) / draws;
        const double var_t = sum_sq / draws - mean_t * mean_t;
        const double se = std::sqrt(var_t / draws);
        CAPTURE(dim);
        CAPTURE(k);
        CHECK(std::abs(mean_t - sp::mean_resultant_length(k, dim)) < 3.0 * se + 1e-12);
      }
    }
    Vector sum = Vector::Zero(3);
    for (int s = 0; s < 100000; ++s) sum += sp::sample_vmf(unit(3, 0), 0.0, rng);
    CHECK((sum / 100000.0).norm() < 0.02);
    Vector m50 = Vector::Zero(3);
    for (int s = 0; s < 2000; ++s) m50 += sp::sample_vmf(unit(3, 0), 50.0, rng);
    CHECK(m50.normalized().dot(unit(3, 0)) > 0.97);
    for (int s = 0; s < 100; ++s) CHECK(std::abs(sp::sample_uniform(4, rng).norm() - 1.0) < 1e-12);
  }

  TEST_CASE("vMF random-walk proposal is symmetric") {
    Rng rng = make_stream(12);
    for (int trial = 0; trial < 50; ++trial) {
      const Vector x = sp::sample_uniform(3, rng);
      const double scale = 0.05 + uniform01(rng);
      const Vector y = sp::propose_vmf_step(x, scale, rng);
      CHECK(std::abs(y.norm() - 1.0) < 1e-9);
      CHECK(sp::vmf_step_log_density(x, y, scale) == doctest::Approx(sp::vmf_step_log_density(y, x, scale)));
    }
    // The cosine between the current point and the proposal has the same law from any start.
    const Vector a = unit(3, 0), b = Vector(Eigen::Vector3d(1, 2, -2).normalized());
    double ma = 0.0, mb = 0.0;
    for (int s = 0; s < 20000; ++s) {
      ma += sp::propose_vmf_step(a, 0.4, rng).dot(a);
      mb += sp::propose_vmf_step(b, 0.4, rng).dot(b);
    }
    CHECK(ma / 20000 == doctest::Approx(mb / 20000).epsilon(0.01));
  }

  TEST_CASE("Procrustes alignment") {
    Rng rng = make_stream(13);
    PointSet targets(4, 3);
    for (int a = 0; a < 4; ++a) targets.row(a) = sp::sample_uniform(3, rng).transpose();

    SUBCASE("already aligned gives the identity") {
      const std::vector<int> idx{0, 1, 2, 3};
      const auto r = sp::procrustes_align(targets, idx, targets);
      CHECK((r.rotation.matrix - Matrix::Identity(3, 3)).norm() < 1e-12);
    }
    SUBCASE("recovers a known rotation and preserves inner products") {
      const Matrix r0 = random_rotation(3, rng);
      PointSet points(10, 3);
      for (int i = 0; i < 10; ++i) points.row(i) = sp::sample_uniform(3, rng).transpose();
      points.topRows(4) = targets * r0.transpose();  // p_a = R0 t_a
      const std::vector<int> idx{0, 1, 2, 3};
      const auto r = sp::procrustes_align(points, idx, targets);
      CHECK((r.rotation.matrix - r0.transpose()).cwiseAbs().maxCoeff() < 1e-6);
      CHECK(r.rotation.matrix.determinant() == doctest::Approx(1.0));
      CHECK((r.rotation.matrix.transpose() * r.rotation.matrix - Matrix::Identity(3, 3)).norm() < 1e-9);
      const Matrix before = points * points.transpose();
      const Matrix after = r.points * r.points.transpose();
      CHECK((before - after).cwiseAbs().maxCoeff() < 1e-9);
      CHECK((r.points.topRows(4) - targets).cwiseAbs().maxCoeff() < 1e-9);
    }
    SUBCASE("degenerate anchors are rejected") {
      PointSet two = targets.topRows(2);
      CHECK_THROWS_AS(sp::validate_anchor_targets(two), ValidationError);
      PointSet antipodal = targets.topRows(3);
      antipodal.row(1) = -antipodal.row(0);
      CHECK_THROWS_AS(sp::validate_anchor_targets(antipodal), ValidationError);
      PointSet circle(3, 3);
      circle << 1, 0, 0, 0, 1, 0, std::sqrt(0.5), std::sqrt(0.5), 0;
      CHECK_THROWS_AS(sp::validate_anchor_targets(circle), ValidationError);
      PointSet good(3, 3);
      good << 1, 0, 0, 0, 1, 0, 0, 0, 1;
      CHECK_NOTHROW(sp::validate_anchor_targets(good));
    }
  }

  TEST_CASE("unit-norm precondition") {
    CHECK_THROWS_AS(sp::require_unit(Vector(Vector::Ones(3))), ValidationError);
    CHECK_NOTHROW(sp::require_unit(unit(3, 2)));
  }
}
