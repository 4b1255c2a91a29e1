#include "fixtures.hpp"

#include <ardnet/model.hpp>

#include <doctest.h>

#include <cmath>

using namespace ardnet;

TEST_SUITE("model") {
  TEST_CASE("well-formed simulated data validates unchanged and idempotently") {
    const auto truth = fixtures::small_village(60, 5, 0.7);
    const auto once = validate_dataset(truth.data);
    CHECK(once.data == truth.data);
    CHECK_FALSE(once.excluded);
    const auto twice = validate_dataset(once.data);
    CHECK(twice.data == once.data);
  }

  TEST_CASE("violations are listed with their location") {
    auto data = fixtures::small_village(40, 4).data;
    data.y(3, 2) = -1;
    try {
      validate_dataset(data);
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("y[3][2]") != std::string::npos);
    }
    auto bad_shape = fixtures::small_village(40, 4, 0.5).data;
    bad_shape.covariate_distance.conservativeResize(bad_shape.covariate_distance.rows() - 1, Eigen::NoChange);
    CHECK_THROWS_AS(validate_dataset(bad_shape), ValidationError);
    auto bad_sizes = fixtures::small_village(40, 4).data;
    bad_sizes.group_sizes(0) += 1;
    CHECK_THROWS_AS(validate_dataset(bad_sizes), ValidationError);
    CHECK_THROWS_AS(validate_dataset(fixtures::small_village(40, 4).data, 0.0, 5), ValidationError);
  }

  TEST_CASE("villages below the sampling floor are flagged") {
    const auto data = fixtures::small_village(100, 4, 0.05).data;
    const auto v = validate_dataset(data, 0.2);
    CHECK(v.excluded);
    CHECK_FALSE(v.warnings.empty());
  }

  TEST_CASE("prevalence from the census") {
    Vector sizes(3);
    sizes << 25, 0, 250;
    const auto r = fix_group_prevalence(sizes, 250);
    CHECK(r.b(0) == doctest::Approx(0.1));
    REQUIRE(r.empty_groups.size() == 1);
    CHECK(r.empty_groups.front() == 1);
    const auto all = fix_group_prevalence(Vector::Constant(4, 250.0), 250);
    CHECK(all.b.isApprox(Vector::Ones(4)));
    CHECK_FALSE(all.warnings.empty());
    const auto truth = fixtures::small_village();
    const auto fitted = fix_group_prevalence(truth.data.group_sizes, truth.data.n);
    const Vector freq = truth.traits.cast<double>().colwise().mean().transpose();
    CHECK((fitted.b - freq).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("dropping groups removes columns consistently") {
    const auto data = fixtures::small_village(40, 5).data;
    const auto dropped = drop_groups(data, {1, 3});
    CHECK(dropped.K() == 3);
    CHECK(dropped.y.col(1) == data.y.col(2));
    CHECK(dropped.census_traits.col(2) == data.census_traits.col(4));
    CHECK(dropped.group_sizes(0) == data.group_sizes(0));
  }

  TEST_CASE("priors") {
    const PriorConfig priors;
    CHECK(std::isinf(priors.zeta.log_density(-0.1)));
    CHECK(priors.zeta.mean() == doctest::Approx(1.0));
    CHECK(priors.eta.mean() == doctest::Approx(50.0));
    // Gamma(5, 0.1) at 40 against the closed form.
    const double expected = 5 * std::log(0.1) - std::lgamma(5.0) + 4 * std::log(40.0) - 0.1 * 40.0;
    CHECK(priors.eta.log_density(40.0) == doctest::Approx(expected));
    const auto u = ScalarPrior::uniform(1.0, 3.0);
    CHECK(u.log_density(2.0) == doctest::Approx(-std::log(2.0)));
    CHECK(std::isinf(u.log_density(3.5)));
    PriorConfig odd;
    odd.T = 11;
    CHECK_THROWS_AS(odd.validate(), ValidationError);
    PriorConfig bad_gamma;
    bad_gamma.zeta = ScalarPrior::gamma(0.0, 1.0);
    CHECK_THROWS_AS(bad_gamma.validate(), ValidationError);
  }

  TEST_CASE("initialization") {
    const auto truth = fixtures::small_village(60, 5);
    PriorConfig priors;
    const AnchorSpec anchors = truth.anchors;

    SUBCASE("deterministic given the seed and valid") {
      Rng a = make_stream(3), b = make_stream(3);
      const auto pa = initialize_params(truth.data, priors, anchors, a);
      const auto pb = initialize_params(truth.data, priors, anchors, b);
      CHECK(pa.z == pb.z);
      CHECK(pa.centers == pb.centers);
      CHECK((pa.z.rowwise().norm().array() - 1.0).abs().maxCoeff() < 1e-9);
      for (std::size_t g = 0; g < anchors.groups.size(); ++g) {
        CHECK((pa.centers.row(anchors.groups[g]) - anchors.targets.row(static_cast<Eigen::Index>(g))).norm() < 1e-12);
      }
      CHECK(pa.zeta == doctest::Approx(priors.zeta.mean()));
      CHECK(pa.eta.isApprox(Vector::Constant(5, priors.eta.mean())));
    }
    SUBCASE("a respondent knowing one group starts at its center") {
      auto data = truth.data;
      data.y.row(0).setZero();
      data.y(0, 3) = 2;
      Rng rng = make_stream(4);
      const auto p = initialize_params(data, priors, anchors, rng);
      CHECK((p.z.row(0) - p.centers.row(3)).norm() < 1e-12);
    }
    SUBCASE("reported degrees are used exactly") {
      auto data = truth.data;
      Vector reported(data.m());
      for (int i = 0; i < data.m(); ++i) reported(i) = 5 + i % 7;
      data.reported_degrees = reported;
      Rng rng = make_stream(5);
      const auto p = initialize_params(data, priors, anchors, rng);
      CHECK((p.degrees() - reported).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("fewer than three anchors is an error") {
      AnchorSpec two;
      two.groups = {0, 1};
      two.targets = anchors.targets.topRows(2);
      Rng rng = make_stream(6);
      CHECK_THROWS_AS(initialize_params(truth.data, priors, two, rng), ValidationError);
    }
  }

  TEST_CASE("concentration distinctness is a warning check") {
    CHECK_FALSE(concentrations_distinct(Vector::Constant(4, 3.0)));
    Vector eta(3);
    eta << 1, 2, 2;
    CHECK(concentrations_distinct(eta));
  }

  TEST_CASE("default anchors are the coordinate axes") {
    const auto a = default_anchors(3);
    CHECK(a.groups == std::vector<int>{0, 1, 2});
    CHECK((a.targets - PointSet::Identity(3, 3)).norm() == 0.0);
  }
}
