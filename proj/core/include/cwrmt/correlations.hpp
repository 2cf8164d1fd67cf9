#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "cwrmt/circuits.hpp"
#include "cwrmt/definetti.hpp"
#include "cwrmt/ensembles.hpp"

namespace cwrmt {

struct Estimate {
  double mean = 0.0;
  double standard_error = 0.0;
};

struct CorrelationReport {
  int K = 0;
  double exact = 0.0;       // quadrature
  double asymptotic = 0.0;  // Laplace
  double mc_estimate = 0.0;
  double mc_stderr = 0.0;
  double scale = 0.0;
  std::string label;
};

// E(X_1 ... X_K) at K distinct positions: the K-th moment of the mixture.
double exact_correlation(const DeFinettiMeasure& measure, int K);

// Sample mean and standard error of prod X(p) over `replicas` matrices of the
// ensemble. Positions are 1-based unordered pairs; duplicates after
// symmetrization, out-of-range indices, or replicas < 100 throw
// PreconditionError.
Estimate mc_correlation(const EnsembleConfig& cfg, std::span<const VertexPair> positions,
                        std::size_t replicas, std::uint64_t seed);

// The first K upper-triangle off-diagonal positions in row order: (1,2), (1,3), ...
std::vector<VertexPair> distinct_positions(std::size_t N, int K);

// Monte Carlo estimate of E[(1/N) tr (X / N^gamma)^k] by direct matrix powers.
Estimate mc_trace_moment(const EnsembleConfig& cfg, int k, double gamma, std::size_t samples,
                         std::uint64_t seed);

CorrelationReport correlation_report(const EnsembleConfig& cfg, int K, std::size_t replicas,
                                     std::uint64_t seed, std::string label);

struct UncorrelatedFit {
  int ell = 0;
  std::map<std::int64_t, double> observed;    // |integral of t^ell d mu_N|
  std::map<std::int64_t, double> normalized;  // N^(ell/2) * observed
  std::map<std::int64_t, double> variance_gap;  // |E(prod X^2) - 1|, zero for spins
  double fitted_constant = 0.0;  // max of normalized over the grid
  double growth_per_decade = 0.0;  // between the two largest grid points
  bool bounded = false;
};

// Checks the decay |E(X_1 ... X_ell)| <= C / N^(ell/2) along a family of
// mixtures. "Bounded" means either the normalized sequence is not strictly
// increasing over the largest three grid points and peaks before the last
// one, or it grows by less than 5% per decade at the top of the grid.
UncorrelatedFit check_approx_uncorrelated(
    const std::function<DeFinettiMeasure(std::int64_t)>& family, int ell,
    std::span<const std::int64_t> N_grid);

// Least-squares slope of log|y| against log x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

// CSV: label,K,scale,exact,asymptotic,mc_estimate,mc_stderr
void write_correlations_csv(std::ostream& out, std::span<const CorrelationReport> rows);

}  // namespace cwrmt
