#include "fixtures.hpp"

#include <ardnet/likelihood.hpp>
#include <ardnet/sphere.hpp>

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <numbers>

using namespace ardnet;

namespace {

// Independent D = 3 closed form C(k) = k / (4 pi sinh k).
double c3(double k) { return k == 0 ? 1.0 / (4 * std::numbers::pi) : k / (4 * std::numbers::pi * std::sinh(k)); }

ModelParams one_cell(double d, double b, double zeta, double eta) {
  ModelParams p;
  p.z = PointSet(1, 3);
  p.z << 1, 0, 0;
  p.centers = p.z;
  p.log_d = Vector::Constant(1, std::log(d));
  p.beta = Vector::Constant(1, std::log(b));
  p.eta = Vector::Constant(1, eta);
  p.zeta = zeta;
  return p;
}

}  // namespace

TEST_SUITE("likelihood") {
  TEST_CASE("expected ARD response") {
    CHECK(expected_ard(20, 0.1, 0.3, 5, 0.0, 3) == doctest::Approx(2.5091486231908084).epsilon(1e-12));
    CHECK(expected_ard(20, 0.1, 0.3, 5, 0.0, 3) ==
          doctest::Approx(20 * 0.1 * c3(0.3) * c3(5) / (c3(0) * c3(5.3))).epsilon(1e-12));
    CHECK(expected_ard(12, 0.2, 0.0, 4, 1.0, 3) == doctest::Approx(2.4));
    CHECK(expected_ard(12, 0.2, 0.7, 0, 1.0, 3) == doctest::Approx(2.4));
    // monotone decreasing in the angle, symmetric in (zeta, eta)
    double prev = expected_ard(10, 0.1, 2.0, 3.0, 0.0, 3);
    for (int s = 1; s <= 20; ++s) {
      const double theta = std::numbers::pi * s / 20;
      const double now = expected_ard(10, 0.1, 2.0, 3.0, theta, 3);
      CHECK(now < prev);
      CHECK(now == doctest::Approx(expected_ard(10, 0.1, 3.0, 2.0, theta, 3)));
      prev = now;
    }
    // floor for hopeless configurations
    CHECK(expected_ard(1e-20, 1e-6, 0.1, 1.0, 1.0, 3) == kLambdaFloor);
  }

  TEST_CASE("Poisson log-likelihood") {
    IntMatrix y(1, 1);
    y << 2;
    // lambda = 2 when zeta = 0: d = 20, b = 0.1
    const auto ll = ard_log_likelihood(y, one_cell(20, 0.1, 0.0, 3.0));
    CHECK(ll.value == doctest::Approx(std::log(2.0) - 2.0));
    y << 0;
    CHECK(ard_log_likelihood(y, one_cell(20, 0.1, 0.0, 3.0)).value == doctest::Approx(-2.0));
  }

  TEST_CASE("true positions beat permuted positions") {
    int wins = 0;
    for (int trial = 0; trial < 100; ++trial) {
      Rng sim = make_stream(1000 + static_cast<std::uint64_t>(trial));
      const auto truth = simulate_dgp(ExperimentConfig{}, sim);
      ModelParams p = truth.params;
      const double at_truth = ard_log_likelihood(truth.data.y, p).value;
      Rng rng = make_stream(trial);
      std::vector<int> perm(static_cast<std::size_t>(p.z.rows()));
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      PointSet shuffled = p.z;
      for (std::size_t i = 0; i < perm.size(); ++i) shuffled.row(static_cast<Eigen::Index>(i)) = p.z.row(perm[i]);
      p.z = shuffled;
      if (at_truth > ard_log_likelihood(truth.data.y, p).value) ++wins;
    }
    CHECK(wins >= 95);
  }

  TEST_CASE("posterior: support, additivity and prior terms") {
    const auto truth = fixtures::small_village(50, 5);
    PriorConfig priors;
    ModelParams p = truth.params;
    const auto base = log_posterior(p, truth.data, priors);
    CHECK(std::isfinite(base.value));

    ModelParams bad = p;
    bad.zeta = -0.1;
    CHECK(log_posterior(bad, truth.data, priors).is_zero_probability());
    bad = p;
    bad.eta(1) = -1.0;
    CHECK(log_posterior(bad, truth.data, priors).is_zero_probability());

    // differences split into likelihood + membership + prior
    ModelParams q = p;
    q.zeta = 0.8;
    q.log_d.array() += 0.1;
    const double lhs = log_posterior(q, truth.data, priors).value - base.value;
    const double rhs = (ard_log_likelihood(truth.data.y, q).value - ard_log_likelihood(truth.data.y, p).value) +
                       (membership_log_density(truth.data, q) - membership_log_density(truth.data, p)) +
                       (log_prior(q, priors) - log_prior(p, priors));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));

    // default prior part: Gamma(0.5, 0.5) on zeta and Gamma(5, 0.1) on each eta
    auto gamma_log = [](double x, double a, double b) {
      return a * std::log(b) - std::lgamma(a) + (a - 1) * std::log(x) - b * x;
    };
    ModelParams r = p;
    r.zeta = 0.4;
    r.eta(0) = 12.0;
    const double delta = log_prior(r, priors) - log_prior(p, priors);
    const double expected = gamma_log(0.4, 0.5, 0.5) - gamma_log(p.zeta, 0.5, 0.5) + gamma_log(12.0, 5, 0.1) -
                            gamma_log(p.eta(0), 5, 0.1);
    CHECK(delta == doctest::Approx(expected).epsilon(1e-10));
  }

  TEST_CASE("degree from gregariousness") {
    CHECK(degree_from_nu(Vector::Constant(250, -1.27), 0.0, 250, 3)
              .isApprox(Vector::Constant(250, 250 * std::exp(-2.54)), 1e-12));
    CHECK(degree_from_nu(Vector::Constant(250, -1.27), 0.0, 250, 3)(0) == doctest::Approx(19.72).epsilon(1e-3));
    CHECK(degree_from_nu(Vector::Zero(1), 0.0, 1, 3)(0) == doctest::Approx(1.0));
    CHECK(latent_degree_factor(0.0, 3) == doctest::Approx(1.0));
    // a common shift c scales every degree by exp(2c)
    Rng rng = make_stream(1);
    Vector nu(30);
    for (auto& v : nu) v = -1.0 + 0.4 * standard_normal(rng);
    const Vector d0 = degree_from_nu(nu, 0.3, 30, 3);
    const Vector d1 = degree_from_nu((nu.array() + 0.25).matrix(), 0.3, 30, 3);
    CHECK((d1.array() / d0.array() - std::exp(0.5)).abs().maxCoeff() < 1e-12);
  }

  TEST_CASE("gregariousness from degree inverts the map") {
    Rng rng = make_stream(2);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
      const int n = 1 + static_cast<int>(uniform01(rng) * 300);
      Vector nu(n);
      for (auto& v : nu) v = -2.0 + 1.5 * standard_normal(rng);
      const double zeta = 3.0 * uniform01(rng);
      const Vector back = nu_from_degree(degree_from_nu(nu, zeta, n, 3), zeta, n, 3);
      worst = std::max(worst, (back - nu).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-8);
    const Vector flat = nu_from_degree(Vector::Constant(10, 8.0), 0.0, 250, 3);
    CHECK(flat.isApprox(Vector::Constant(10, 0.5 * std::log(8.0 / 250)), 1e-12));
    Vector d(4);
    d << 3, 7, 11, 20;
    const Vector shifted = nu_from_degree(Vector(4 * d), 0.0, 4, 3) - nu_from_degree(d, 0.0, 4, 3);
    CHECK(shifted.isApprox(Vector::Constant(4, std::log(2.0)), 1e-12));
    CHECK_THROWS_AS(nu_from_degree(Vector::Constant(3, -1.0), 0.0, 3, 3), ValidationError);
  }
}
