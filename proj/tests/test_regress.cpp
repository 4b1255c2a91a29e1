#include <ardnet/regress.hpp>

#include <doctest.h>

#include <cmath>

using namespace ardnet;

TEST_SUITE("regress") {
  TEST_CASE("noiseless data are recovered exactly") {
    Matrix X(6, 2);
    X << 1, 0, 2, 1, 3, 0, 4, 1, 5, 3, 6, 2;
    const Vector y = (1.5 + 2.0 * X.col(0).array() - 0.5 * X.col(1).array()).matrix();
    const auto fit = ols_regress(y, X);
    REQUIRE(fit.coefficients.size() == 3);
    CHECK(fit.coefficients(0) == doctest::Approx(1.5));
    CHECK(fit.coefficients(1) == doctest::Approx(2.0));
    CHECK(fit.coefficients(2) == doctest::Approx(-0.5));
    CHECK(fit.residual_ss < 1e-20);
    CHECK(fit.bootstrap_sd.size() == 0);
    OlsOptions no_intercept;
    no_intercept.add_intercept = false;
    CHECK(ols_regress(y, X, no_intercept).coefficients.size() == 2);
  }

  TEST_CASE("rank deficiency and too few rows are rejected") {
    Matrix X(5, 2);
    X << 1, 2, 2, 4, 3, 6, 4, 8, 5, 10;
    CHECK_THROWS_AS(ols_regress(Vector::Ones(5), X), ValidationError);
    CHECK_THROWS_AS(ols_regress(Vector::Ones(2), Matrix::Ones(2, 1) * 3), ValidationError);
    CHECK_THROWS_AS(ols_regress(Vector::Ones(4), Matrix::Ones(5, 1)), ValidationError);
  }

  TEST_CASE("bootstrap standard errors track the sampling spread") {
    Rng rng = make_stream(11);
    const int n = 400;
    Matrix X(n, 1);
    Vector y(n);
    for (int i = 0; i < n; ++i) {
      X(i, 0) = standard_normal(rng);
      y(i) = 1.0 + 0.5 * X(i, 0) + standard_normal(rng);
    }
    OlsOptions opts;
    opts.bootstrap = 400;
    opts.seed = 3;
    const auto fit = ols_regress(y, X, opts);
    CHECK(fit.bootstrap_draws == 400);
    // sd of the slope is about 1 / sqrt(n)
    CHECK(fit.bootstrap_sd(1) == doctest::Approx(1.0 / std::sqrt(n)).epsilon(0.2));
    const auto again = ols_regress(y, X, opts);
    CHECK(again.bootstrap_sd == fit.bootstrap_sd);
  }

  TEST_CASE("cluster bootstrap widens intervals under shared shocks") {
    Rng rng = make_stream(12);
    const int clusters = 40, per = 10;
    Matrix X(clusters * per, 1);
    Vector y(clusters * per);
    std::vector<int> ids;
    for (int c = 0; c < clusters; ++c) {
      const double xc = standard_normal(rng);
      const double shock = standard_normal(rng);
      for (int r = 0; r < per; ++r) {
        const int i = c * per + r;
        X(i, 0) = xc;
        y(i) = 0.5 * xc + shock + 0.1 * standard_normal(rng);
        ids.push_back(c);
      }
    }
    OlsOptions plain;
    plain.bootstrap = 300;
    OlsOptions clustered = plain;
    clustered.clusters = ids;
    CHECK(ols_regress(y, X, clustered).bootstrap_sd(1) > 1.5 * ols_regress(y, X, plain).bootstrap_sd(1));
    clustered.clusters = std::vector<int>(3, 0);
    CHECK_THROWS_AS(ols_regress(y, X, clustered), ValidationError);
  }
}
