#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>
#include <vector>

#include "cwrmt/circuits.hpp"
#include "cwrmt/errors.hpp"
#include "cwrmt/spectral.hpp"

using namespace cwrmt;

namespace {

// Raw oracle: walk every tuple in {1..N}^k, symmetrize positions, count odd
// multiplicities. No classes, no falling factorials.
double brute_force_trace_moment(const MomentSequence& moments, int N, int k, double gamma) {
  std::vector<int> idx(static_cast<std::size_t>(k), 1);
  double sum = 0.0;
  for (;;) {
    std::map<std::pair<int, int>, int> nu;
    for (int m = 0; m < k; ++m) {
      int a = idx[m], b = idx[(m + 1) % k];
      if (a > b) std::swap(a, b);
      ++nu[{a, b}];
    }
    int odd = 0;
    for (const auto& [p, c] : nu) odd += c & 1;
    sum += moments(odd);
    int pos = 0;
    while (pos < k && idx[pos] == N) idx[pos++] = 1;
    if (pos == k) break;
    ++idx[pos];
  }
  return sum * std::pow(N, -1.0 - k * gamma);
}

}  // namespace

TEST_CASE("circuit statistics examples") {
  const auto a = circuit_stats(std::vector<int>{1, 2, 1, 3});
  CHECK(a.rho == 3);
  CHECK(a.multiplicities.at({1, 2}) == 2);
  CHECK(a.multiplicities.at({1, 3}) == 2);
  CHECK(a.sigma_simple == 0);
  CHECK(a.odd_edge_count == 0);

  const auto b = circuit_stats(std::vector<int>{1, 1});
  CHECK(b.rho == 1);
  CHECK(b.multiplicities.at({1, 1}) == 2);
  CHECK(b.sigma_simple == 0);
  CHECK(b.loop_count == 1);
  CHECK(b.loop_traversals == 2);
  CHECK(b.odd_edge_count == 0);

  const auto c = circuit_stats(std::vector<int>{1, 2, 3});
  CHECK(c.rho == 3);
  CHECK(c.sigma_simple == 3);
  CHECK(c.sigma_simple_proper == 3);
  CHECK(c.odd_edge_count == 3);

  const auto d = circuit_stats(std::vector<int>{1, 1, 2});
  CHECK(d.multiplicities.at({1, 2}) == 2);
  CHECK(d.sigma_simple == 1);
  CHECK(d.sigma_simple_proper == 0);

  CHECK_THROWS_AS(circuit_stats(std::vector<int>{}), PreconditionError);
  CHECK_THROWS_AS(circuit_stats(IndexTuple{{1, 4}, 3}), DomainError);
}

TEST_CASE("multiplicities sum to k") {
  for (int k = 1; k <= 7; ++k) {
    for (const auto& cls : enumerate_classes(k)) {
      int total = 0;
      for (const auto& [p, nu] : cls.stats.multiplicities) total += nu;
      CHECK(total == k);
      CHECK(cls.stats.rho <= k);
      CHECK(cls.stats.sigma_simple <= k);
    }
  }
}

TEST_CASE("class enumeration") {
  const auto k1 = enumerate_classes(1);
  REQUIRE(k1.size() == 1);
  CHECK(k1[0].canonical == std::vector<int>{1});

  const auto k2 = enumerate_classes(2);
  REQUIRE(k2.size() == 2);
  CHECK(k2[0].label() == "1-1");
  CHECK(k2[1].label() == "1-2");

  const auto k3 = enumerate_classes(3);
  std::vector<std::string> labels;
  for (const auto& c : k3) labels.push_back(c.label());
  CHECK(labels == std::vector<std::string>{"1-1-1", "1-1-2", "1-2-1", "1-2-2", "1-2-3"});

  const std::size_t bell[] = {1, 2, 5, 15, 52, 203, 877, 4140};
  for (int k = 1; k <= 8; ++k) CHECK(enumerate_classes(k).size() == bell[k - 1]);

  CHECK_THROWS_AS(enumerate_classes(11), ResourceError);
  CHECK_THROWS_AS(enumerate_classes(0), DomainError);
}

TEST_CASE("partition identity: falling factorials sum to N^k") {
  for (int k = 1; k <= 8; ++k) {
    const auto classes = enumerate_classes(k);
    for (int N = 1; N <= k; ++N) {
      double total = 0.0;
      for (const auto& c : classes) total += c.count_at(N);
      CHECK(total == std::pow(N, k));
    }
  }
}

TEST_CASE("exact trace moment matches raw enumeration") {
  const auto mu = DeFinettiMeasure::create(curie_weiss_potential(1.5), 16.0);
  const MomentSequence sequences[] = {point_mass_moments(0.0), point_mass_moments(0.3),
                                      moments_of(mu)};
  for (const auto& seq : sequences) {
    for (int N = 1; N <= 6; ++N) {
      for (int k = 1; k <= 6; ++k) {
        if (std::pow(N, k) > 50000) continue;
        for (double gamma : {0.5, 1.0}) {
          CAPTURE(N);
          CAPTURE(k);
          const double fast = exact_trace_moment(seq, N, k, gamma);
          const double slow = brute_force_trace_moment(seq, N, k, gamma);
          CHECK(fast == doctest::Approx(slow).epsilon(1e-12).scale(1e-15));
        }
      }
    }
  }
}

TEST_CASE("iid and parity cases") {
  const auto iid = point_mass_moments(0.0);
  for (int N : {1, 3, 10, 200}) CHECK(exact_trace_moment(iid, N, 2, 0.5) == doctest::Approx(1.0));
  for (int k : {1, 3, 5, 7}) CHECK(exact_trace_moment(iid, 9, k, 0.5) == 0.0);
  const auto mu = DeFinettiMeasure::create(curie_weiss_potential(0.7), 100.0);
  for (int k : {1, 3, 5}) CHECK(exact_trace_moment(mu, 8, k, 0.5) == 0.0);
}

TEST_CASE("iid k = 4 values approach the Catalan number") {
  // tests/oracle/derive_constants.py
  const double expected[] = {1.75, 1.875, 1.9375, 1.96875, 1.984375};
  int i = 0;
  double previous = 0.0;
  for (int N : {4, 8, 16, 32, 64}) {
    const double v = exact_trace_moment(point_mass_moments(0.0), N, 4, 0.5);
    CHECK(v == doctest::Approx(expected[i++]).epsilon(1e-14));
    CHECK(v > previous);
    previous = v;
  }
}

TEST_CASE("ensemble dispatch and guards") {
  EnsembleConfig cfg;
  cfg.kind = EnsembleKind::diagonal_cw;
  cfg.N = 5;
  cfg.beta = 0.5;
  CHECK_THROWS_AS(exact_trace_moment(cfg, 4, 0.5), UnsupportedEnsembleError);
  cfg.kind = EnsembleKind::iid;
  CHECK(exact_trace_moment(cfg, 2, 0.5) == doctest::Approx(1.0));
  CHECK_THROWS_AS(exact_trace_moment(point_mass_moments(0.0), 10000, 3, 0.5), ResourceError);
  CHECK_NOTHROW(exact_trace_moment(point_mass_moments(0.0), 10000, 2, 0.5));
}

TEST_CASE("second moment of the normalized trace") {
  // tr A^2 = N exactly for spins, so the square has expectation 1.
  for (int N : {2, 3, 4}) {
    CHECK(exact_trace_second_moment(point_mass_moments(0.0), N, 2, 0.5) == doctest::Approx(1.0));
    CHECK(exact_trace_second_moment(point_mass_moments(0.6), N, 2, 0.5) == doctest::Approx(1.0));
  }
  const auto iid = point_mass_moments(0.0);
  const double m1 = exact_trace_moment(iid, 3, 3, 0.5);
  CHECK(exact_trace_second_moment(iid, 3, 3, 0.5) >= m1 * m1);
  CHECK_THROWS_AS(exact_trace_second_moment(iid, 10, 4, 0.5), ResourceError);
}

TEST_CASE("simple proper edge bound") {
  const auto small = verify_simple_edge_bound(4);
  CHECK(small.violations.empty());
  CHECK(small.classes_checked == 1 + 2 + 5 + 15);

  const auto triangle = circuit_stats(std::vector<int>{1, 2, 3});
  CHECK(triangle.rho > 3.0 / 2.0 + 1.0);
  CHECK(triangle.sigma_simple_proper >= 3);

  const auto full = verify_simple_edge_bound(8);
  CHECK(full.violations.empty());
  CHECK(full.classes_checked == 5295);  // Bell numbers 1..8 summed
  CHECK(full.nontrivial > 0);
}

TEST_CASE("rho - sigma/2 bound with its equality case") {
  const auto report = verify_rho_sigma_bound(8);
  CHECK(report.violations.empty());
  // Equality classes are exactly the doubled planar trees: Catalan(k/2) per even k.
  std::size_t trees = 0;
  for (unsigned k = 2; k <= 8; k += 2) trees += catalan(k / 2);
  CHECK(report.nontrivial == trees);
}

TEST_CASE("doubled tree count") {
  CHECK(doubled_tree_count(2, 2) == 2.0);
  CHECK(doubled_tree_count(4, 3) == 12.0);
  CHECK(doubled_tree_count(2, 1) == 0.0);
  CHECK_THROWS_AS(doubled_tree_count(3, 5), DomainError);
  for (int k = 2; k <= 8; k += 2) {
    for (int N : {k / 2 + 1, k + 3}) {
      double count = 0.0;
      for (const auto& c : enumerate_classes(k)) {
        if (2 * c.stats.rho == k + 2 && c.stats.sigma_simple == 0) count += c.count_at(N);
      }
      CHECK(count == doubled_tree_count(k, N));
    }
  }
}

TEST_CASE("class table CSV") {
  std::ostringstream out;
  write_classes_csv(out, enumerate_classes(3));
  const std::string s = out.str();
  CHECK(s.rfind("k,canonical,rho,sigma_simple,sigma_simple_proper,odd_edge_count\n", 0) == 0);
  CHECK(s.find("3,1-2-3,3,3,3,3\n") != std::string::npos);
}
