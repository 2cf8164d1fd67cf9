#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cwrmt/definetti.hpp"
#include "cwrmt/ensembles.hpp"

namespace cwrmt {

// (i_1, ..., i_k) read as the closed walk i_1 -> i_2 -> ... -> i_k -> i_1.
struct IndexTuple {
  std::vector<int> values;  // 1-based vertex labels
  int N = 0;
};

using VertexPair = std::pair<int, int>;  // unordered, stored with first <= second

struct CircuitStats {
  int k = 0;
  int rho = 0;                  // distinct vertices
  int sigma_simple = 0;         // positions traversed exactly once, loops included
  int sigma_simple_proper = 0;  // same, loops excluded
  int odd_edge_count = 0;       // positions traversed an odd number of times
  int loop_count = 0;           // distinct loop positions {v, v}
  int loop_traversals = 0;      // total traversals of loop positions
  std::map<VertexPair, int> multiplicities;
};

// Throws PreconditionError for an empty tuple.
CircuitStats circuit_stats(std::span<const int> values);
CircuitStats circuit_stats(const IndexTuple& t);

// N (N-1) ... (N-r+1); 0 when r > N.
double falling_factorial(std::int64_t N, int r);

struct CircuitClass {
  std::vector<int> canonical;  // first-occurrence labelling, starts with 1
  CircuitStats stats;

  // Number of tuples over {1..N} in this class.
  double count_at(std::int64_t N) const { return falling_factorial(N, stats.rho); }
  std::string label() const;  // "1-2-1-3"
};

inline constexpr int kMaxCircuitLength = 10;

// One representative per equivalence class of length-k circuits, in
// lexicographic order of the canonical sequence. Throws ResourceError for
// k > 10 and DomainError for k < 1.
std::vector<CircuitClass> enumerate_classes(int k);

// E[(1/N) tr (X / N^gamma)^k] for an ensemble whose entries share one latent
// t with the given moments. Requires N^k <= 1e8 (ResourceError otherwise).
double exact_trace_moment(const MomentSequence& moments, std::int64_t N, int k, double gamma);
double exact_trace_moment(const DeFinettiMeasure& measure, std::int64_t N, int k, double gamma);
// iid -> point mass at 0; full_cw / generalized -> their mixture;
// diagonal_cw -> UnsupportedEnsembleError.
double exact_trace_moment(const EnsembleConfig& cfg, int k, double gamma);

// E[((1/N) tr (X / N^gamma)^k)^2] by enumerating pairs of tuples. Requires
// N^(2k) <= 1e7.
double exact_trace_second_moment(const MomentSequence& moments, std::int64_t N, int k, double gamma);

struct GraphBoundReport {
  int k_max = 0;
  std::size_t classes_checked = 0;
  std::size_t nontrivial = 0;  // classes where some t >= 1 applies
  std::vector<std::string> violations;
};

// For every class with k <= k_max: delete loops, then for every positive
// integer t with rho > k'/2 + t require at least 2t + 1 simple proper edges.
GraphBoundReport verify_simple_edge_bound(int k_max);

// rho - sigma/2 <= k/2 + 1 on every class, with equality exactly when
// rho = k/2 + 1 and sigma = 0.
GraphBoundReport verify_rho_sigma_bound(int k_max);

// Number of tuples whose circuit is a doubled planar tree:
// catalan(k/2) * N (N-1) ... (N - k/2). Throws DomainError for odd k.
double doubled_tree_count(int k, std::int64_t N);

// CSV: k,canonical,rho,sigma_simple,sigma_simple_proper,odd_edge_count
void write_classes_csv(std::ostream& out, std::span<const CircuitClass> classes);

}  // namespace cwrmt
