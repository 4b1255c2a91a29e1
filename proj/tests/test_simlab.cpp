#include "fixtures.hpp"

#include <ardnet/simlab.hpp>
#include <ardnet/sphere.hpp>

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace ardnet;

TEST_SUITE("simlab") {
  TEST_CASE("configuration validation") {
    ExperimentConfig c;
    CHECK_NOTHROW(c.validate());
    c.psi = 0.0;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c = {};
    c.mixture = MixtureConfig{};
    c.mixture->lambda = 1.5;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c = {};
    c.n_reps = 0;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c = {};
    c.p = 3;
    CHECK_THROWS_AS(c.validate(), ValidationError);  // priors.p disagrees
  }

  TEST_CASE("simulated truth is internally consistent") {
    const auto truth = fixtures::small_village(80, 6, 0.5);
    CHECK(truth.data.m() == 40);
    CHECK(truth.data.non_ard_index().size() == 40);
    CHECK(truth.data.y == construct_ard(truth.graph, truth.traits, truth.data.ard_index));
    CHECK(truth.data.covariate_distance.rows() == 40);
    CHECK((truth.params.z.rowwise().norm().array() - 1.0).abs().maxCoeff() < 1e-9);
    CHECK(truth.anchors.groups.size() == 3);
    CHECK_NOTHROW(validate_dataset(truth.data));
    const auto all = fixtures::small_village(30, 4, 1.0);
    CHECK(all.data.ard_index.size() == 30);
    CHECK(all.data.ard_index.back() == 29);
  }

  TEST_CASE("constructed ARD counts neighbours by trait") {
    const auto g = GraphSample::from_edges(4, {{0, 1}, {0, 2}, {2, 3}});
    IntMatrix traits(4, 2);
    traits << 1, 0, 1, 1, 0, 1, 1, 1;
    const auto y = construct_ard(g, traits, {0, 3});
    CHECK(y(0, 0) == 1);
    CHECK(y(0, 1) == 2);
    CHECK(y(1, 0) == 0);
    CHECK(y(1, 1) == 1);
  }

  TEST_CASE("a zero concentration assigns traits with the uniform density") {
    ExperimentConfig c;
    c.n = 2000;
    c.K = 3;
    c.eta_low = c.eta_high = 0.0;
    c.nu_mean = -3.0;
    Rng rng = make_stream(5);
    const auto truth = simulate_dgp(c, rng);
    const double p = 1.0 / (4.0 * std::numbers::pi);
    const double freq = truth.traits.cast<double>().mean();
    CHECK(std::abs(freq - p) < 3.0 * std::sqrt(p * (1 - p) / (2000.0 * 3)));
  }

  TEST_CASE("clustered centers and mixtures") {
    ExperimentConfig c;
    c.center_layout = CenterLayout::clustered;
    Rng rng = make_stream(6);
    const auto truth = simulate_dgp(c, rng);
    // satellites 4.. sit near their parents 0..3
    for (int k = 4; k < c.K; ++k) {
      const int parent = ((k - 4) / 2) % 4;
      CHECK(truth.params.centers.row(k).dot(truth.params.centers.row(parent)) > 0.5);
    }
    ExperimentConfig mix;
    mix.mixture = MixtureConfig{};
    Rng rng2 = make_stream(7);
    const auto t2 = simulate_dgp(mix, rng2);
    CHECK(t2.params.nu.mean() == doctest::Approx(0.1 * -0.92 + 0.9 * -1.96).epsilon(0.1));
    ExperimentConfig two;
    two.two_communities = true;
    Rng rng3 = make_stream(8);
    const auto t3 = simulate_dgp(two, rng3);
    CHECK(t3.params.z(0, 0) * t3.params.z(1, 0) < 1.0);
    double even = 0.0;
    for (int i = 0; i < two.n; i += 2) even += t3.params.z(i, 0);
    CHECK(even / (two.n / 2) > 0.5);
  }

  TEST_CASE("scaled MSE and confusion matrices") {
    Vector t(4), e(4);
    t << 1, 2, 3, 4;
    e << 1, 2, 3, 6;
    CHECK(scaled_mse(e, t) == doctest::Approx(1.0 / 6.25));
    CHECK(std::isnan(scaled_mse(e, Vector::Zero(4))));
    CHECK_THROWS_AS(scaled_mse(e, Vector::Ones(3)), ValidationError);
    Vector truth(20), est(20);
    for (int i = 0; i < 20; ++i) {
      truth(i) = i;
      est(i) = i;
    }
    auto c = top_decile_confusion(est, truth);
    CHECK(c.tpr == 1.0);
    CHECK(c.counts(0, 0) == 2.0);
    CHECK(c.counts(1, 1) == 18.0);
    est(19) = -1;
    c = top_decile_confusion(est, truth);
    CHECK(c.tpr == 0.5);
    CHECK(c.counts.sum() == 20.0);
    // ties go to the lower node id
    const auto tied = top_decile_confusion(Vector::Zero(20), truth);
    CHECK(tied.counts(1, 0) == 2.0);
  }

  TEST_CASE("experiment grids") {
    ExperimentGrid grid;
    grid.axes = {{"n", {100, 200}}, {"zeta", {0.1, 0.3, 0.5}}};
    CHECK(grid.cell_count() == 6);
    const auto cell = grid.cell(4);
    CHECK(cell[0].second == 200);
    CHECK(cell[1].second == 0.3);
    const auto c = apply_cell(ExperimentConfig{}, {{"lambda", 0.2}, {"p", 3}, {"psi", 0.5}});
    CHECK(c.mixture->lambda == 0.2);
    CHECK(c.priors.p == 3);
    CHECK(c.psi == 0.5);
    CHECK_THROWS_AS(apply_cell(ExperimentConfig{}, {{"bogus", 1.0}}), ValidationError);
    CHECK(ExperimentGrid{}.cell_count() == 1);
  }

  TEST_CASE("replications produce comparison rows") {
    ExperimentConfig c;
    c.n = 60;
    c.K = 5;
    c.psi = 0.5;
    c.priors.T = 100;
    c.graphs = 4;
    const auto out = run_replication(c, 0, 0);
    CHECK(out.graphs.size() == 4);
    CHECK(out.estimated_stats.size() == 4);
    const auto rows = compare_replication(out, 0, 0, {{"n", 60}});
    bool has_ard = false, has_all = false, has_graph = false;
    for (const auto& r : rows) {
      has_ard = has_ard || r.level == "node:ARD";
      has_all = has_all || r.level == "node:all";
      has_graph = has_graph || r.level == "graph";
    }
    CHECK(has_ard);
    CHECK(has_all);
    CHECK(has_graph);
    ExperimentGrid grid;
    grid.axes = {{"zeta", {0.2, 0.4}}};
    c.n_reps = 2;
    const auto all = run_experiment_grid(c, grid);
    std::size_t cells = 0;
    for (const auto& r : all) cells = std::max(cells, r.cell + 1);
    CHECK(cells == 2);
    grid.axes = {{"n", {4.0}}};
    CHECK_THROWS_AS(run_experiment_grid(c, grid), ValidationError);
  }

  TEST_CASE("taxonomy and regression experiments run at small scale") {
    ExperimentConfig c;
    c.n = 60;
    c.K = 5;
    const auto tax = mse_taxonomy(c, 3, 5);
    CHECK(tax.node_mse.count("degree"));
    CHECK(tax.graph_mse.count("n_components"));
    CHECK(tax.link_mse > 0);
    Rng rng = make_stream(9);
    const auto reg = many_networks_regression(c, 12, 5, 1.0, 0.5, 0.1, 50, rng);
    CHECK(std::isfinite(reg.beta_hat));
    CHECK(reg.bootstrap_sd > 0);
  }
}
