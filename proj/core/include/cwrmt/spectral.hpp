#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "cwrmt/ensembles.hpp"

namespace cwrmt {

// Ascending spectrum of a dense symmetric matrix. Throws NumericError if the
// eigensolver does not converge.
std::vector<double> eigenvalues(const ScaledMatrix& A);
std::vector<double> eigenvalues(const Eigen::MatrixXd& symmetric);

// max ||A v - lambda v|| / ||A|| over up to `pairs` eigenpairs spread across
// the spectrum. Used to spot-check the solver.
double max_eigen_residual(const Eigen::MatrixXd& symmetric, int pairs = 8);

double semicircle_pdf(double x);
double semicircle_cdf(double x);
// Catalan number; throws ResourceError for k > 30.
std::uint64_t catalan(unsigned k);
// catalan(k / 2) for even k, 0 for odd k.
double semicircle_moment(unsigned k);

struct SpectralSummary {
  std::vector<double> eigenvalues;  // ascending
  std::vector<double> moments;      // moments[k-1] = (1/N) sum lambda^k, k = 1..k_max
  double ks_to_semicircle = 0.0;
  double operator_norm = 0.0;
  double scaling_exponent = 0.5;
  // Relative violation of the trace / Frobenius identities.
  double trace_defect = 0.0;
  double frobenius_defect = 0.0;
};

SpectralSummary summarize(const ScaledMatrix& A, unsigned k_max = 8);
// Summary of a precomputed ascending spectrum (identity defects left at 0).
SpectralSummary summarize(std::vector<double> ascending, double scaling_exponent, unsigned k_max = 8);

// sup_x |ESD(x) - semicircle_cdf(x)|, evaluated at the jump points.
double ks_distance(std::span<const double> ascending);
double ks_distance(const SpectralSummary& s);

// (1/N) sum lambda^k. Throws DomainError for k = 0.
double esd_moment(std::span<const double> eigenvalues, unsigned k);
double esd_moment(const SpectralSummary& s, unsigned k);

struct HistogramBin {
  double left;
  double right;
  double empirical_density;
  double semicircle_density;  // bin average of the semicircle density
};

// Pools the spectra and bins them; eigenvalues outside [lo, hi] count toward
// the normalization but not toward any bin.
std::vector<HistogramBin> histogram(std::span<const std::vector<double>> spectra, double lo = -3.0,
                                    double hi = 3.0, double width = 0.1);

// CSV writers for the eigenvalue dump (replica, index, lambda) and the histogram.
void write_eigenvalues_csv(std::ostream& out, std::span<const std::vector<double>> spectra);
void write_histogram_csv(std::ostream& out, std::span<const HistogramBin> bins);

}  // namespace cwrmt
