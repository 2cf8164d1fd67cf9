#include "cwrmt/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <set>

#include <Eigen/Core>

#include "cwrmt/errors.hpp"
#include "cwrmt/parallel.hpp"

namespace cwrmt {

namespace {

Estimate mean_and_stderr(std::span<const double> xs) {
  Estimate e;
  if (xs.empty()) return e;
  const auto n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  e.mean = sum / n;
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - e.mean) * (x - e.mean);
    e.standard_error = std::sqrt(ss / (n - 1.0) / n);
  }
  return e;
}

}  // namespace

double exact_correlation(const DeFinettiMeasure& measure, int K) { return measure.moment(K); }

std::vector<VertexPair> distinct_positions(std::size_t N, int K) {
  std::vector<VertexPair> out;
  for (std::size_t i = 1; i <= N && static_cast<int>(out.size()) < K; ++i) {
    for (std::size_t j = i + 1; j <= N && static_cast<int>(out.size()) < K; ++j) {
      out.emplace_back(static_cast<int>(i), static_cast<int>(j));
    }
  }
  if (static_cast<int>(out.size()) < K) {
    throw PreconditionError("distinct_positions: N = " + std::to_string(N) + " has fewer than " +
                            std::to_string(K) + " off-diagonal positions");
  }
  return out;
}

Estimate mc_correlation(const EnsembleConfig& cfg, std::span<const VertexPair> positions,
                        std::size_t replicas, std::uint64_t seed) {
  if (replicas < 100) throw PreconditionError("mc_correlation: need at least 100 replicas");
  std::set<VertexPair> seen;
  for (auto [a, b] : positions) {
    if (a < 1 || b < 1 || static_cast<std::size_t>(std::max(a, b)) > cfg.N) {
      throw PreconditionError("mc_correlation: position outside the matrix");
    }
    if (!seen.insert(a <= b ? VertexPair{a, b} : VertexPair{b, a}).second) {
      throw PreconditionError("mc_correlation: positions must be distinct after symmetrization");
    }
  }

  EnsembleConfig base = cfg;
  base.seed = seed;
  const EnsembleSampler sampler(base);
  std::vector<double> values(replicas);
  parallel_for(replicas, [&](std::size_t r) {
    const SpinMatrix X = sampler.sample(r);
    int product = 1;
    for (auto [a, b] : positions) {
      product *= X(static_cast<std::size_t>(a - 1), static_cast<std::size_t>(b - 1));
    }
    values[r] = product;
  });
  return mean_and_stderr(values);
}

Estimate mc_trace_moment(const EnsembleConfig& cfg, int k, double gamma, std::size_t samples,
                         std::uint64_t seed) {
  if (k < 1) throw DomainError("mc_trace_moment: k must be positive");
  if (samples < 2) throw PreconditionError("mc_trace_moment: need at least 2 samples");
  EnsembleConfig base = cfg;
  base.seed = seed;
  const EnsembleSampler sampler(base);
  std::vector<double> values(samples);
  const double n = static_cast<double>(cfg.N);
  parallel_for(samples, [&](std::size_t r) {
    const SpinMatrix X = sampler.sample(r);
    const Eigen::MatrixXd A = scale(X, gamma).dense();
    Eigen::MatrixXd power = A;
    for (int j = 1; j < k; ++j) power = power * A;
    values[r] = power.trace() / n;
  });
  return mean_and_stderr(values);
}

CorrelationReport correlation_report(const EnsembleConfig& cfg, int K, std::size_t replicas,
                                     std::uint64_t seed, std::string label) {
  cfg.validate();
  const auto potential = cfg.mixing_potential();
  if (!potential || cfg.kind == EnsembleKind::diagonal_cw) {
    throw UnsupportedEnsembleError("correlation_report: needs a shared-t ensemble");
  }
  const double s = cfg.mixing_scale();
  const DeFinettiMeasure measure = DeFinettiMeasure::create(*potential, s);

  CorrelationReport row;
  row.K = K;
  row.scale = s;
  row.label = std::move(label);
  row.exact = exact_correlation(measure, K);
  row.asymptotic = laplace_moment_asymptotic(find_minimum(*potential), K, s);
  if (K == 0) {
    row.mc_estimate = 1.0;
  } else {
    const auto positions = distinct_positions(cfg.N, K);
    const Estimate mc = mc_correlation(cfg, positions, replicas, seed);
    row.mc_estimate = mc.mean;
    row.mc_stderr = mc.standard_error;
  }
  return row;
}

UncorrelatedFit check_approx_uncorrelated(
    const std::function<DeFinettiMeasure(std::int64_t)>& family, int ell,
    std::span<const std::int64_t> N_grid) {
  if (ell < 1) throw DomainError("check_approx_uncorrelated: ell must be positive");
  if (N_grid.empty()) throw PreconditionError("check_approx_uncorrelated: empty grid");
  std::vector<std::int64_t> grid(N_grid.begin(), N_grid.end());
  std::sort(grid.begin(), grid.end());

  UncorrelatedFit fit;
  fit.ell = ell;
  std::vector<double> normalized;
  for (auto N : grid) {
    const double m = std::abs(family(N).moment(ell));
    const double v = std::pow(static_cast<double>(N), ell / 2.0) * m;
    fit.observed[N] = m;
    fit.normalized[N] = v;
    fit.variance_gap[N] = 0.0;  // X^2 = 1 for spins
    normalized.push_back(v);
  }
  fit.fitted_constant = *std::max_element(normalized.begin(), normalized.end());

  const std::size_t n = normalized.size();
  bool rising_tail = false;
  if (n >= 3) {
    rising_tail = normalized[n - 3] < normalized[n - 2] && normalized[n - 2] < normalized[n - 1];
  } else if (n == 2) {
    rising_tail = normalized[0] < normalized[1];
  }
  const bool peak_before_end =
      std::max_element(normalized.begin(), normalized.end()) != normalized.end() - 1 || n == 1;
  if (n >= 2 && normalized[n - 2] > 0.0) {
    const double decades = std::log10(static_cast<double>(grid[n - 1]) / grid[n - 2]);
    fit.growth_per_decade = std::pow(normalized[n - 1] / normalized[n - 2], 1.0 / decades) - 1.0;
  }
  fit.bounded = (!rising_tail && peak_before_end) || fit.growth_per_decade < 0.05;
  return fit;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw PreconditionError("loglog_slope: need at least two matching points");
  }
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(std::abs(y[i]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void write_correlations_csv(std::ostream& out, std::span<const CorrelationReport> rows) {
  out << "label,K,scale,exact,asymptotic,mc_estimate,mc_stderr\n" << std::setprecision(17);
  for (const auto& r : rows) {
    out << r.label << ',' << r.K << ',' << r.scale << ',' << r.exact << ',' << r.asymptotic << ','
        << r.mc_estimate << ',' << r.mc_stderr << '\n';
  }
}

}  // namespace cwrmt
