#include "stat_checks.hpp"

#include <doctest.h>

#include <iostream>

using namespace ardnet;

TEST_SUITE("oracle") {
  TEST_CASE("every graph on at most six nodes matches the brute-force oracles") {
    std::size_t graphs = 0, cuts = 0;
    std::vector<std::string> mismatches;
    for (int n = 1; n <= 6; ++n) {
      const unsigned long long count = 1ULL << (n * (n - 1) / 2);
      for (unsigned long long code = 0; code < count; ++code) {
        const auto result = checks::compare_with_oracles(oracle::graph_from_code(n, code));
        ++graphs;
        cuts += result.cut_checked ? 1 : 0;
        for (const auto& m : result.mismatches) {
          if (mismatches.size() < 10) mismatches.push_back(m);
        }
      }
    }
    for (const auto& m : mismatches) MESSAGE(m);
    CHECK(mismatches.empty());
    CHECK(graphs == 1 + 2 + 8 + 64 + 1024 + 32768);
    // The cut is left unchecked only where the median split is not unique.
    CHECK(cuts > graphs / 4);
  }

  TEST_CASE("random eight-node graphs match the brute-force oracles") {
    Rng rng = make_stream(808);
    std::vector<std::string> mismatches;
    for (int trial = 0; trial < 100; ++trial) {
      const double density = 0.15 + 0.7 * uniform01(rng);
      Matrix A = Matrix::Zero(8, 8);
      for (int i = 0; i < 8; ++i) {
        for (int j = i + 1; j < 8; ++j) {
          if (uniform01(rng) < density) A(i, j) = A(j, i) = 1.0;
        }
      }
      for (const auto& m : checks::compare_with_oracles(A).mismatches) mismatches.push_back(m);
    }
    for (const auto& m : mismatches) MESSAGE(m);
    CHECK(mismatches.empty());
  }

  TEST_CASE("the oracles agree with hand counts") {
    const Matrix path = oracle::graph_from_code(3, 0b101);  // edges 0-1 and 1-2
    CHECK(oracle::betweenness(path)(1) == 1.0);
    CHECK(oracle::closeness(path)(0) == doctest::Approx(0.75));
    CHECK(oracle::diffusion(path, 1.0, 2)(0) == 3.0);
    const auto [values, vectors] = oracle::jacobi_eigen(path);
    CHECK(values(2) == doctest::Approx(std::sqrt(2.0)));
    CHECK((path * vectors.col(2) - values(2) * vectors.col(2)).norm() < 1e-12);
  }
}
