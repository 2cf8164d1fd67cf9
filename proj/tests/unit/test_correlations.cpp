#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "cwrmt/correlations.hpp"
#include "cwrmt/errors.hpp"

using namespace cwrmt;

namespace {

EnsembleConfig full_cw(std::size_t N, double beta) {
  EnsembleConfig cfg;
  cfg.kind = EnsembleKind::full_cw;
  cfg.N = N;
  cfg.beta = beta;
  return cfg;
}

}  // namespace

TEST_CASE("exact correlations") {
  const auto m2 = magnetization(2.0);
  CHECK(exact_correlation(DeFinettiMeasure::create(curie_weiss_potential(2.0), 1e6), 2) ==
        doctest::Approx(m2 * m2).epsilon(0.01));
  const auto mu = DeFinettiMeasure::create(curie_weiss_potential(0.5), 1e4);
  CHECK(exact_correlation(mu, 0) == 1.0);
  CHECK(exact_correlation(mu, 4) == doctest::Approx(3e-8).epsilon(0.10));
  CHECK(exact_correlation(mu, 3) == 0.0);
}

TEST_CASE("distinct positions") {
  const auto p = distinct_positions(4, 5);
  REQUIRE(p.size() == 5);
  CHECK(p[0] == VertexPair{1, 2});
  CHECK(p[3] == VertexPair{2, 3});
  CHECK_THROWS_AS(distinct_positions(3, 4), PreconditionError);
}

TEST_CASE("mc correlation preconditions") {
  const auto cfg = full_cw(10, 0.5);
  const std::vector<VertexPair> dup{{1, 2}, {2, 1}};
  CHECK_THROWS_AS(mc_correlation(cfg, dup, 200, 1), PreconditionError);
  const std::vector<VertexPair> outside{{1, 11}};
  CHECK_THROWS_AS(mc_correlation(cfg, outside, 200, 1), PreconditionError);
  const std::vector<VertexPair> ok{{1, 2}};
  CHECK_THROWS_AS(mc_correlation(cfg, ok, 99, 1), PreconditionError);
}

TEST_CASE("iid correlations vanish") {
  EnsembleConfig cfg;
  cfg.kind = EnsembleKind::iid;
  cfg.N = 8;
  const auto e = mc_correlation(cfg, distinct_positions(8, 2), 4000, 3);
  CHECK(std::abs(e.mean) < 3.0 * e.standard_error);
}

TEST_CASE("Monte Carlo agrees with quadrature") {
  const auto cfg = full_cw(100, 0.5);
  const std::vector<VertexPair> pos{{1, 2}, {3, 4}};
  const auto e = mc_correlation(cfg, pos, 4000, 17);
  const auto exact = exact_correlation(DeFinettiMeasure::create(curie_weiss_potential(0.5), 1e4), 2);
  CHECK(std::abs(e.mean - exact) < 3.0 * e.standard_error);

  const auto report = correlation_report(full_cw(100, 1.5), 2, 2000, 5, "cw");
  const double m = magnetization(1.5);
  CHECK(std::abs(report.mc_estimate - report.exact) < 3.0 * report.mc_stderr);
  CHECK(std::abs(report.mc_estimate - m * m) < 3.0 * report.mc_stderr + 0.02);
  CHECK(report.scale == 1e4);
  CHECK(report.asymptotic == doctest::Approx(m * m).epsilon(1e-10));
}

TEST_CASE("Monte Carlo trace moment") {
  EnsembleConfig cfg;
  cfg.kind = EnsembleKind::iid;
  cfg.N = 5;
  const auto e = mc_trace_moment(cfg, 4, 0.5, 20000, 9);
  CHECK(std::abs(e.mean - exact_trace_moment(cfg, 4, 0.5)) < 3.0 * e.standard_error);
  const auto two = mc_trace_moment(cfg, 2, 0.5, 100, 9);
  CHECK(two.mean == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("approximately uncorrelated checker") {
  const std::vector<std::int64_t> grid{100, 1000, 10000, 100000};

  const auto full = check_approx_uncorrelated(
      [](std::int64_t N) {
        return DeFinettiMeasure::create(curie_weiss_potential(0.5), double(N) * double(N));
      },
      2, grid);
  CHECK(full.bounded);
  CHECK(full.normalized.at(100000) < 1e-4);
  for (const auto& [N, gap] : full.variance_gap) CHECK(gap == 0.0);

  const auto borderline = check_approx_uncorrelated(
      [](std::int64_t N) { return DeFinettiMeasure::create(curie_weiss_potential(0.5), double(N)); },
      2, grid);
  CHECK(borderline.bounded);
  CHECK(borderline.normalized.at(100000) == doctest::Approx(1.0).epsilon(0.01));
  CHECK(borderline.fitted_constant == doctest::Approx(1.0).epsilon(0.02));

  const auto critical = check_approx_uncorrelated(
      [](std::int64_t N) { return DeFinettiMeasure::create(curie_weiss_potential(1.0), double(N)); },
      2, grid);
  CHECK_FALSE(critical.bounded);
  CHECK(critical.growth_per_decade > 2.0);
}

TEST_CASE("scaling exponents of the K = 2 moment") {
  const std::vector<double> scales{1e3, 1e4, 1e5, 1e6};
  for (auto [beta, slope] : {std::pair{0.5, -1.0}, {0.25, -1.0}, {1.0, -0.5}}) {
    std::vector<double> m;
    for (double S : scales) {
      m.push_back(DeFinettiMeasure::create(curie_weiss_potential(beta), S).moment(2));
    }
    CHECK(loglog_slope(scales, m) == doctest::Approx(slope).epsilon(0.05));
  }
}

TEST_CASE("Laplace ratio on correlation cases") {
  const Potential f = curie_weiss_potential(0.5);
  const auto e = find_minimum(f);
  for (int K : {2, 4, 6}) {
    double previous = 1e9;
    for (double S : {1e3, 1e4, 1e5, 1e6}) {
      const auto mu = DeFinettiMeasure::create(f, S);
      const double gap = std::abs(exact_correlation(mu, K) / laplace_moment_asymptotic(e, K, S) - 1.0);
      CHECK(gap < previous);
      previous = gap;
    }
    CHECK(previous < 0.02);
  }
}

TEST_CASE("correlations CSV") {
  std::ostringstream out;
  const std::vector<CorrelationReport> rows{{2, 1e-4, 1e-4, 1.1e-4, 2e-5, 1e4, "cw"}};
  write_correlations_csv(out, rows);
  CHECK(out.str().rfind("label,K,scale,exact,asymptotic,mc_estimate,mc_stderr\n", 0) == 0);
}
