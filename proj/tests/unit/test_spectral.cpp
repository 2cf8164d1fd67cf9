#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "cwrmt/ensembles.hpp"
#include "cwrmt/errors.hpp"
#include "cwrmt/spectral.hpp"

using namespace cwrmt;

namespace {

// Simpson in theta with x = 2 sin(theta), which removes the square-root edges.
double semicircle_integral(double upper, const std::function<double(double)>& f = {}) {
  const double lo = -std::numbers::pi / 2;
  const double hi = std::asin(std::clamp(upper / 2.0, -1.0, 1.0));
  constexpr int n = 20000;
  const double h = (hi - lo) / n;
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double th = lo + i * h;
    const double x = 2.0 * std::sin(th);
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * semicircle_pdf(x) * 2.0 * std::cos(th) * (f ? f(x) : 1.0);
  }
  return acc * h / 3.0;
}

std::uint64_t catalan_by_convolution(unsigned k) {
  std::vector<unsigned __int128> c(k + 1, 0);
  c[0] = 1;
  for (unsigned n = 1; n <= k; ++n) {
    for (unsigned i = 0; i < n; ++i) c[n] += c[i] * c[n - 1 - i];
  }
  return static_cast<std::uint64_t>(c[k]);
}

SpinMatrix all_ones(std::size_t N) {
  EnsembleConfig cfg;
  cfg.N = N;
  return SpinMatrix(cfg, std::vector<std::int8_t>(N * N, 1), {});
}

}  // namespace

TEST_CASE("spectra of all-ones matrices") {
  const auto two = eigenvalues(scale(all_ones(2), 0.0));
  CHECK(two[0] == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  CHECK(two[1] == doctest::Approx(2.0).epsilon(1e-14));

  for (std::size_t N : {5u, 17u, 64u}) {
    const auto ev = eigenvalues(scale(all_ones(N), 0.0));
    for (std::size_t i = 0; i + 1 < N; ++i) CHECK(std::abs(ev[i]) < 1e-10 * N);
    CHECK(ev.back() == doctest::Approx(static_cast<double>(N)).epsilon(1e-12));
  }

  const auto g = eigenvalues(scale(all_ones(3), 1.0));
  CHECK(std::abs(g[0]) < 1e-14);
  CHECK(std::abs(g[1]) < 1e-14);
  CHECK(g[2] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("semicircle pdf and cdf") {
  CHECK(semicircle_pdf(0.0) == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-15));
  CHECK(semicircle_pdf(2.0) == 0.0);
  CHECK(semicircle_pdf(-2.0) == 0.0);
  CHECK(semicircle_pdf(3.0) == 0.0);
  CHECK(std::abs(semicircle_integral(2.0) - 1.0) < 1e-9);

  CHECK(semicircle_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(semicircle_cdf(2.0) == 1.0);
  CHECK(semicircle_cdf(-2.0) == 0.0);
  // tests/oracle/derive_constants.py
  CHECK(std::abs(semicircle_cdf(1.0) - 0.80449889052211467904) < 1e-12);
  for (double x : {-1.9, -1.0, -0.3, 0.7, 1.0, 1.99}) {
    CHECK(std::abs(semicircle_cdf(x) - semicircle_integral(x)) < 1e-9);
  }
  double previous = -1.0;
  for (double x = -2.5; x <= 2.5; x += 0.01) {
    CHECK(semicircle_cdf(x) >= previous);
    previous = semicircle_cdf(x);
  }
}

TEST_CASE("Catalan numbers and semicircle moments") {
  CHECK(catalan(0) == 1);
  CHECK(catalan(3) == 5);
  CHECK(catalan(10) == 16796);
  for (unsigned k = 0; k <= 30; ++k) CHECK(catalan(k) == catalan_by_convolution(k));
  CHECK_THROWS_AS(catalan(31), ResourceError);

  CHECK(semicircle_moment(2) == 1.0);
  CHECK(semicircle_moment(4) == 2.0);
  CHECK(semicircle_moment(6) == 5.0);
  CHECK(semicircle_moment(8) == 14.0);
  CHECK(semicircle_moment(7) == 0.0);
  for (unsigned k = 1; k <= 8; ++k) {
    const double q = semicircle_integral(2.0, [k](double x) { return std::pow(x, k); });
    CHECK(std::abs(q - semicircle_moment(k)) < 1e-8);
  }
}

TEST_CASE("KS distance") {
  constexpr int N = 400;
  std::vector<double> quantiles;
  for (int i = 1; i <= N; ++i) {
    const double target = (i - 0.5) / N;
    double lo = -2.0, hi = 2.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (semicircle_cdf(mid) < target ? lo : hi) = mid;
    }
    quantiles.push_back(0.5 * (lo + hi));
  }
  CHECK(ks_distance(quantiles) <= 0.5 / N + 1e-12);
  CHECK(ks_distance(std::vector<double>{0.0}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(ks_distance(std::vector<double>{}), PreconditionError);
}

TEST_CASE("iid Wigner matrix at N = 1000") {
  EnsembleConfig cfg;
  cfg.kind = EnsembleKind::iid;
  cfg.N = 1000;
  cfg.seed = 2024;
  const SpinMatrix X = EnsembleSampler(cfg).sample(0);
  const ScaledMatrix A = scale(X, 0.5);
  const SpectralSummary s = summarize(A, 8);
  CHECK(s.eigenvalues.size() == 1000);
  CHECK(std::is_sorted(s.eigenvalues.begin(), s.eigenvalues.end()));
  CHECK(s.ks_to_semicircle < 0.05);
  CHECK(std::abs(esd_moment(s, 1)) < 0.1);
  CHECK(std::abs(esd_moment(s, 2) - 1.0) < 1e-12);
  CHECK(esd_moment(s, 4) >= 1.8);
  CHECK(esd_moment(s, 4) <= 2.2);
  CHECK(s.operator_norm == std::max(std::abs(s.eigenvalues.front()), std::abs(s.eigenvalues.back())));
  CHECK(s.operator_norm <= std::sqrt(1000.0 * esd_moment(s, 2)));
  CHECK(s.trace_defect < 1e-8);
  CHECK(s.frobenius_defect < 1e-8);
  CHECK(max_eigen_residual(A.dense()) <= 1e-8 * s.operator_norm);
  CHECK_THROWS_AS(esd_moment(s, 0), DomainError);
}

TEST_CASE("second ESD moment is exactly 1 for every spin matrix at gamma 1/2") {
  for (auto kind : {EnsembleKind::full_cw, EnsembleKind::diagonal_cw}) {
    EnsembleConfig cfg;
    cfg.kind = kind;
    cfg.N = 150;
    cfg.beta = 1.7;
    const EnsembleSampler sampler(cfg);
    for (std::uint64_t r = 0; r < 3; ++r) {
      const SpinMatrix X = sampler.sample(r);
      CHECK(std::abs(summarize(scale(X, 0.5), 2).moments[1] - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("odd ESD moments of full Curie-Weiss samples average to zero") {
  EnsembleConfig cfg;
  cfg.kind = EnsembleKind::full_cw;
  cfg.N = 200;
  cfg.beta = 0.5;
  cfg.seed = 5;
  const EnsembleSampler sampler(cfg);
  constexpr int reps = 40;
  for (unsigned k : {1u, 3u, 5u}) {
    double sum = 0.0, sq = 0.0;
    for (int r = 0; r < reps; ++r) {
      const double m = summarize(scale(sampler.sample(r), 0.5), 5).moments[k - 1];
      sum += m;
      sq += m * m;
    }
    const double mean = sum / reps;
    const double se = std::sqrt((sq / reps - mean * mean) / (reps - 1));
    CHECK(std::abs(mean) < 3.0 * se);
  }
}

TEST_CASE("histogram") {
  std::vector<std::vector<double>> spectra{{-1.0, -0.05, 0.05, 1.0}, {0.5, 2.95, 3.5}};
  const auto bins = histogram(spectra);
  REQUIRE(bins.size() == 60);
  CHECK(bins.front().left == doctest::Approx(-3.0));
  CHECK(bins.back().right == doctest::Approx(3.0));
  double mass = 0.0, sc = 0.0;
  for (const auto& b : bins) {
    mass += b.empirical_density * (b.right - b.left);
    sc += b.semicircle_density * (b.right - b.left);
  }
  CHECK(mass == doctest::Approx(6.0 / 7.0));
  CHECK(sc == doctest::Approx(1.0).epsilon(1e-12));

  std::ostringstream csv;
  write_histogram_csv(csv, bins);
  CHECK(csv.str().rfind("bin_left,bin_right,empirical_density,semicircle_density\n", 0) == 0);
  std::ostringstream ev;
  write_eigenvalues_csv(ev, spectra);
  CHECK(ev.str().rfind("replica,index,lambda\n", 0) == 0);
}
