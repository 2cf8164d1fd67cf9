#include "cwrmt/circuits.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "cwrmt/errors.hpp"
#include "cwrmt/spectral.hpp"

namespace cwrmt {

namespace {

VertexPair edge(int a, int b) { return a <= b ? VertexPair{a, b} : VertexPair{b, a}; }

void fill_counts(CircuitStats& s) {
  s.sigma_simple = s.sigma_simple_proper = s.odd_edge_count = 0;
  s.loop_count = s.loop_traversals = 0;
  for (const auto& [pair, nu] : s.multiplicities) {
    const bool loop = pair.first == pair.second;
    if (nu == 1) {
      ++s.sigma_simple;
      if (!loop) ++s.sigma_simple_proper;
    }
    if (nu % 2 == 1) ++s.odd_edge_count;
    if (loop) {
      ++s.loop_count;
      s.loop_traversals += nu;
    }
  }
}

}  // namespace

CircuitStats circuit_stats(std::span<const int> values) {
  if (values.empty()) throw PreconditionError("circuit_stats: tuple must be non-empty");
  CircuitStats s;
  s.k = static_cast<int>(values.size());
  for (std::size_t m = 0; m < values.size(); ++m) {
    const int next = values[(m + 1) % values.size()];
    ++s.multiplicities[edge(values[m], next)];
  }
  std::vector<int> vertices(values.begin(), values.end());
  std::sort(vertices.begin(), vertices.end());
  s.rho = static_cast<int>(std::unique(vertices.begin(), vertices.end()) - vertices.begin());
  fill_counts(s);
  if (2 * s.rho - s.sigma_simple > s.k + 2) {
    throw std::logic_error("circuit_stats: rho - sigma/2 <= k/2 + 1 violated");
  }
  return s;
}

CircuitStats circuit_stats(const IndexTuple& t) {
  for (int v : t.values) {
    if (v < 1 || (t.N > 0 && v > t.N)) {
      throw DomainError("circuit_stats: index " + std::to_string(v) + " outside 1.." +
                        std::to_string(t.N));
    }
  }
  return circuit_stats(std::span<const int>(t.values));
}

double falling_factorial(std::int64_t N, int r) {
  if (r < 0) throw DomainError("falling_factorial: r must be non-negative");
  if (r > N) return 0.0;
  double acc = 1.0;
  for (int j = 0; j < r; ++j) acc *= static_cast<double>(N - j);
  return acc;
}

std::string CircuitClass::label() const {
  std::string out;
  for (std::size_t i = 0; i < canonical.size(); ++i) {
    if (i) out += '-';
    out += std::to_string(canonical[i]);
  }
  return out;
}

std::vector<CircuitClass> enumerate_classes(int k) {
  if (k < 1) throw DomainError("enumerate_classes: k must be at least 1");
  if (k > kMaxCircuitLength) {
    throw ResourceError("enumerate_classes: k = " + std::to_string(k) + " exceeds the limit of " +
                        std::to_string(kMaxCircuitLength));
  }
  // Restricted growth strings: position m may reuse any label seen so far or
  // open the next one. Depth-first order is lexicographic.
  std::vector<CircuitClass> out;
  std::vector<int> current(static_cast<std::size_t>(k));
  auto recurse = [&](auto&& self, int pos, int max_label) -> void {
    if (pos == k) {
      out.push_back({current, circuit_stats(std::span<const int>(current))});
      return;
    }
    for (int label = 1; label <= max_label + 1; ++label) {
      current[static_cast<std::size_t>(pos)] = label;
      self(self, pos + 1, std::max(max_label, label));
    }
  };
  current[0] = 1;
  recurse(recurse, 1, 1);
  return out;
}

double exact_trace_moment(const MomentSequence& moments, std::int64_t N, int k, double gamma) {
  if (N < 1) throw DomainError("exact_trace_moment: N must be positive");
  if (std::pow(static_cast<double>(N), k) > 1e8) {
    throw ResourceError("exact_trace_moment: N^k = " + std::to_string(N) + "^" + std::to_string(k) +
                        " exceeds the 1e8 enumeration guard");
  }
  std::vector<double> moment_cache(static_cast<std::size_t>(k) + 1);
  for (int K = 0; K <= k; ++K) moment_cache[static_cast<std::size_t>(K)] = moments(K);

  double sum = 0.0;
  for (const auto& cls : enumerate_classes(k)) {
    const double weight = cls.count_at(N);
    if (weight == 0.0) continue;
    sum += weight * moment_cache[static_cast<std::size_t>(cls.stats.odd_edge_count)];
  }
  return sum * std::pow(static_cast<double>(N), -1.0 - k * gamma);
}

double exact_trace_moment(const DeFinettiMeasure& measure, std::int64_t N, int k, double gamma) {
  return exact_trace_moment(moments_of(measure), N, k, gamma);
}

double exact_trace_moment(const EnsembleConfig& cfg, int k, double gamma) {
  cfg.validate();
  const auto n = static_cast<std::int64_t>(cfg.N);
  switch (cfg.kind) {
    case EnsembleKind::iid:
      return exact_trace_moment(point_mass_moments(0.0), n, k, gamma);
    case EnsembleKind::full_cw:
    case EnsembleKind::generalized:
      return exact_trace_moment(
          DeFinettiMeasure::create(*cfg.mixing_potential(), cfg.mixing_scale()), n, k, gamma);
    case EnsembleKind::diagonal_cw:
      break;
  }
  throw UnsupportedEnsembleError(
      "exact_trace_moment: diagonal_cw has one latent t per diagonal; only shared-t ensembles are "
      "supported");
}

double exact_trace_second_moment(const MomentSequence& moments, std::int64_t N, int k,
                                 double gamma) {
  if (N < 1 || k < 1) throw DomainError("exact_trace_second_moment: N and k must be positive");
  if (std::pow(static_cast<double>(N), 2 * k) > 1e7) {
    throw ResourceError("exact_trace_second_moment: N^(2k) exceeds the 1e7 enumeration guard");
  }
  std::vector<double> moment_cache(static_cast<std::size_t>(2 * k) + 1);
  for (int K = 0; K <= 2 * k; ++K) moment_cache[static_cast<std::size_t>(K)] = moments(K);

  const auto len = static_cast<std::size_t>(2 * k);
  std::vector<int> idx(len, 1);
  double sum = 0.0;
  std::map<VertexPair, int> nu;
  for (;;) {
    nu.clear();
    for (std::size_t half = 0; half < 2; ++half) {
      const std::size_t base = half * static_cast<std::size_t>(k);
      for (int m = 0; m < k; ++m) {
        const int a = idx[base + static_cast<std::size_t>(m)];
        const int b = idx[base + static_cast<std::size_t>((m + 1) % k)];
        ++nu[edge(a, b)];
      }
    }
    int odd = 0;
    for (const auto& [pair, count] : nu) odd += count % 2;
    sum += moment_cache[static_cast<std::size_t>(odd)];

    std::size_t pos = 0;
    while (pos < len && idx[pos] == N) idx[pos++] = 1;
    if (pos == len) break;
    ++idx[pos];
  }
  return sum * std::pow(static_cast<double>(N), -2.0 - 2.0 * k * gamma);
}

GraphBoundReport verify_simple_edge_bound(int k_max) {
  if (k_max > kMaxCircuitLength) {
    throw ResourceError("verify_simple_edge_bound: k_max exceeds " +
                        std::to_string(kMaxCircuitLength));
  }
  GraphBoundReport report;
  report.k_max = k_max;
  for (int k = 1; k <= k_max; ++k) {
    for (const auto& cls : enumerate_classes(k)) {
      ++report.classes_checked;
      const int r = cls.stats.rho;
      const int k_proper = k - cls.stats.loop_traversals;
      // Largest integer t with r > k'/2 + t, i.e. 2t < 2r - k'.
      const int t_max = (2 * r - k_proper - 1) / 2;
      if (2 * r - k_proper <= 2) continue;
      ++report.nontrivial;
      if (cls.stats.sigma_simple_proper < 2 * t_max + 1) {
        report.violations.push_back("class " + cls.label() + ": r=" + std::to_string(r) +
                                    " k'=" + std::to_string(k_proper) + " t=" +
                                    std::to_string(t_max) + " simple proper edges=" +
                                    std::to_string(cls.stats.sigma_simple_proper));
      }
    }
  }
  return report;
}

GraphBoundReport verify_rho_sigma_bound(int k_max) {
  if (k_max > kMaxCircuitLength) {
    throw ResourceError("verify_rho_sigma_bound: k_max exceeds " +
                        std::to_string(kMaxCircuitLength));
  }
  GraphBoundReport report;
  report.k_max = k_max;
  for (int k = 1; k <= k_max; ++k) {
    for (const auto& cls : enumerate_classes(k)) {
      ++report.classes_checked;
      // Doubled: 2 rho - sigma <= k + 2.
      const int lhs = 2 * cls.stats.rho - cls.stats.sigma_simple;
      const bool equality = lhs == k + 2;
      const bool tree_like = 2 * cls.stats.rho == k + 2 && cls.stats.sigma_simple == 0;
      if (equality) ++report.nontrivial;
      if (lhs > k + 2) {
        report.violations.push_back("class " + cls.label() + ": rho - sigma/2 exceeds k/2 + 1");
      } else if (equality != tree_like) {
        report.violations.push_back("class " + cls.label() +
                                    ": equality case does not match rho = k/2 + 1, sigma = 0");
      }
    }
  }
  return report;
}

double doubled_tree_count(int k, std::int64_t N) {
  if (k < 0 || k % 2 != 0) throw DomainError("doubled_tree_count: k must be even and non-negative");
  return static_cast<double>(catalan(static_cast<unsigned>(k / 2))) * falling_factorial(N, k / 2 + 1);
}

void write_classes_csv(std::ostream& out, std::span<const CircuitClass> classes) {
  out << "k,canonical,rho,sigma_simple,sigma_simple_proper,odd_edge_count\n";
  for (const auto& c : classes) {
    out << c.stats.k << ',' << c.label() << ',' << c.stats.rho << ',' << c.stats.sigma_simple << ','
        << c.stats.sigma_simple_proper << ',' << c.stats.odd_edge_count << '\n';
  }
}

}  // namespace cwrmt
