#include "cwrmt/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>

#include <Eigen/Eigenvalues>

#include "cwrmt/errors.hpp"

namespace cwrmt {

std::vector<double> eigenvalues(const Eigen::MatrixXd& symmetric) {
  if (symmetric.rows() != symmetric.cols()) throw PreconditionError("eigenvalues: matrix not square");
  if (symmetric.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericError("eigenvalues: symmetric QR iteration failed to converge for N = " +
                       std::to_string(symmetric.rows()));
  }
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

std::vector<double> eigenvalues(const ScaledMatrix& A) { return eigenvalues(A.dense()); }

double max_eigen_residual(const Eigen::MatrixXd& symmetric, int pairs) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw NumericError("max_eigen_residual: solver failed");
  const Eigen::Index n = symmetric.rows();
  const double norm = std::max(std::abs(solver.eigenvalues()(0)), std::abs(solver.eigenvalues()(n - 1)));
  double worst = 0.0;
  const Eigen::Index count = std::min<Eigen::Index>(pairs, n);
  for (Eigen::Index p = 0; p < count; ++p) {
    const Eigen::Index j = count == 1 ? 0 : p * (n - 1) / (count - 1);
    const Eigen::VectorXd v = solver.eigenvectors().col(j);
    const double r = (symmetric * v - solver.eigenvalues()(j) * v).norm();
    worst = std::max(worst, r / std::max(norm, 1e-300));
  }
  return worst;
}

double semicircle_pdf(double x) {
  if (std::abs(x) >= 2.0) return 0.0;
  return std::sqrt(4.0 - x * x) / (2.0 * std::numbers::pi);
}

double semicircle_cdf(double x) {
  if (x <= -2.0) return 0.0;
  if (x >= 2.0) return 1.0;
  const double v = 0.5 + x * std::sqrt(4.0 - x * x) / (4.0 * std::numbers::pi) +
                   std::asin(x / 2.0) / std::numbers::pi;
  return std::clamp(v, 0.0, 1.0);
}

std::uint64_t catalan(unsigned k) {
  if (k > 30) throw ResourceError("catalan: k = " + std::to_string(k) + " overflows 64 bits");
  // C_{n+1} = C_n * 2 (2n + 1) / (n + 2), exact at every step.
  std::uint64_t c = 1;
  for (unsigned n = 0; n < k; ++n) c = c * 2 * (2 * n + 1) / (n + 2);
  return c;
}

double semicircle_moment(unsigned k) {
  if (k % 2 == 1) return 0.0;
  return static_cast<double>(catalan(k / 2));
}

double ks_distance(std::span<const double> ascending) {
  if (ascending.empty()) throw PreconditionError("ks_distance: empty spectrum");
  const auto n = static_cast<double>(ascending.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < ascending.size(); ++i) {
    const double f = semicircle_cdf(ascending[i]);
    worst = std::max({worst, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return worst;
}

double ks_distance(const SpectralSummary& s) { return ks_distance(s.eigenvalues); }

double esd_moment(std::span<const double> eigenvalues, unsigned k) {
  if (k == 0) throw DomainError("esd_moment: k must be at least 1");
  if (eigenvalues.empty()) throw PreconditionError("esd_moment: empty spectrum");
  double acc = 0.0;
  for (double l : eigenvalues) {
    double p = 1.0;
    for (unsigned j = 0; j < k; ++j) p *= l;
    acc += p;
  }
  return acc / static_cast<double>(eigenvalues.size());
}

double esd_moment(const SpectralSummary& s, unsigned k) { return esd_moment(s.eigenvalues, k); }

SpectralSummary summarize(std::vector<double> ascending, double scaling_exponent, unsigned k_max) {
  SpectralSummary s;
  s.eigenvalues = std::move(ascending);
  s.scaling_exponent = scaling_exponent;
  for (unsigned k = 1; k <= k_max; ++k) s.moments.push_back(esd_moment(s.eigenvalues, k));
  s.ks_to_semicircle = ks_distance(s.eigenvalues);
  s.operator_norm = std::max(std::abs(s.eigenvalues.front()), std::abs(s.eigenvalues.back()));
  return s;
}

SpectralSummary summarize(const ScaledMatrix& A, unsigned k_max) {
  const Eigen::MatrixXd dense = A.dense();
  SpectralSummary s = summarize(eigenvalues(dense), A.exponent(), k_max);

  const double n = static_cast<double>(A.source().N());
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double l : s.eigenvalues) {
    sum += l;
    sum_sq += l * l;
  }
  const double trace = dense.trace();
  const double frobenius_sq = dense.squaredNorm();
  s.trace_defect = std::abs(sum - trace) / (n * std::max(s.operator_norm, 1e-300));
  s.frobenius_defect = std::abs(sum_sq - frobenius_sq) / std::max(frobenius_sq, 1e-300);
  return s;
}

std::vector<HistogramBin> histogram(std::span<const std::vector<double>> spectra, double lo,
                                    double hi, double width) {
  if (!(hi > lo) || !(width > 0.0)) throw DomainError("histogram: need lo < hi and width > 0");
  const auto bins = static_cast<std::size_t>(std::llround((hi - lo) / width));
  std::vector<double> counts(bins, 0.0);
  double total = 0.0;
  for (const auto& spectrum : spectra) {
    for (double l : spectrum) {
      total += 1.0;
      if (l < lo || l >= hi) continue;
      auto idx = static_cast<std::size_t>(std::floor((l - lo) / width));
      counts[std::min(idx, bins - 1)] += 1.0;
    }
  }
  std::vector<HistogramBin> out;
  out.reserve(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    const double left = lo + width * static_cast<double>(b);
    const double right = lo + width * static_cast<double>(b + 1);
    const double emp = total > 0.0 ? counts[b] / (total * width) : 0.0;
    const double sc = (semicircle_cdf(right) - semicircle_cdf(left)) / width;
    out.push_back({left, right, emp, sc});
  }
  return out;
}

void write_eigenvalues_csv(std::ostream& out, std::span<const std::vector<double>> spectra) {
  out << "replica,index,lambda\n" << std::setprecision(17);
  for (std::size_t r = 0; r < spectra.size(); ++r) {
    for (std::size_t i = 0; i < spectra[r].size(); ++i) {
      out << r << ',' << i << ',' << spectra[r][i] << '\n';
    }
  }
}

void write_histogram_csv(std::ostream& out, std::span<const HistogramBin> bins) {
  out << "bin_left,bin_right,empirical_density,semicircle_density\n" << std::setprecision(17);
  for (const auto& b : bins) {
    out << b.left << ',' << b.right << ',' << b.empirical_density << ',' << b.semicircle_density
        << '\n';
  }
}

}  // namespace cwrmt
