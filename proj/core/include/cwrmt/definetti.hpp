#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cwrmt/random.hpp"

namespace cwrmt {

// A potential F on (-1, 1). The mixing density of a generalized Curie-Weiss
// measure with scale S is proportional to exp(-S F(t) / 2) / (1 - t^2).
//
// Derivatives are analytic when the constructor supplies them; potentials
// built with make_potential() fall back to central finite differences.
class Potential {
 public:
  using Fn = std::function<double(double)>;

  struct Parts {
    Fn value;
    Fn d1;
    Fn d2;
    Fn d4;
    // Optional G(y) = F(tanh y); lets the quadrature stay accurate where
    // tanh(y) rounds to 1.
    Fn in_rapidity;
    bool even = false;
    std::string label;
  };

  explicit Potential(Parts parts);

  double operator()(double t) const { return parts_.value(t); }
  double derivative(int order, double t) const;
  double at_rapidity(double y) const;

  bool even() const noexcept { return parts_.even; }
  const std::string& label() const noexcept { return parts_.label; }

 private:
  Parts parts_;
};

// F_beta(t) = (1/beta) artanh(t)^2 + ln(1 - t^2), the Curie-Weiss potential.
// Throws DomainError for beta <= 0.
Potential curie_weiss_potential(double beta);

// Wraps an arbitrary function; derivatives use central differences with step h
// (and 5h for the fourth derivative).
Potential make_potential(Potential::Fn value, bool even, std::string label, double h = 1e-3);

// True when F grows toward both endpoints: F(+-(1 - 1e-6)) > F(+-(1 - 1e-3)).
bool probe_boundary_growth(const Potential& p);

// -S F(t)/2 - ln(1 - t^2). Throws DomainError for |t| >= 1.
double log_density_unnormalized(const Potential& p, double scale, double t);

// Local data of the minimum of an even potential on [0, 1).
struct LaplaceExpansion {
  double a = 0.0;       // minimum location
  double P = 0.0;       // F(t) ~ F(a) + P (t - a)^nu
  int nu = 2;           // 2 (quadratic) or 4 (quartic)
  double lambda = 1.0;  // exponent of the integrand factor phi(t) ~ Q (t - a)^(lambda - 1)
  double Q = 1.0;
  double F_at_a = 0.0;
};

// Minimum of p on [0, 1): grid scan in rapidity, then bisection on F' down to
// 1e-12. |F''(a)| > 1e-8 classifies the minimum as quadratic, otherwise
// F''''(a) > 1e-8 (at a = 0) as quartic. Anything else, or a minimum pinned
// at the right boundary, throws ClassificationError.
LaplaceExpansion find_minimum(const Potential& p);

// m(beta): 0 for beta <= 1, else the positive root of tanh(beta m) = m.
double magnetization(double beta);

// Leading-order Laplace asymptotic of the K-th moment of the mixing measure at
// the given scale. For a minimum at a > 0 the two symmetric wells give
// (a^K + (-a)^K) / 2.
double laplace_moment_asymptotic(const LaplaceExpansion& expansion, int K, double scale);

struct MeasureOptions {
  // Log-density drop (from the global peak) that delimits the support.
  double tail_log_drop = 40.0;
  int initial_panels = 32;
  int max_panels = 4096;
  // Refinement stops once doubling the panel count moves log Z by less than this.
  double log_normalizer_tolerance = 1e-13;
  std::size_t cdf_nodes = 4096;
  // Above this inverse-CDF interpolation error, sampling switches to exact inversion.
  double max_interpolation_error = 1e-6;
};

struct CdfNode {
  double t;
  double cdf;
};

// Normalized mixing measure on (-1, 1) with density
//   exp(-S F(t) / 2) / ((1 - t^2) Z).
// All work happens in the rapidity y = artanh(t) where dt / (1 - t^2) = dy.
// Immutable once built; copies share state.
class DeFinettiMeasure {
 public:
  // Throws IntegrabilityError when the density fails to decay or the
  // normalizer does not converge under refinement.
  static DeFinettiMeasure create(Potential potential, double scale,
                                 const MeasureOptions& options = {});

  const Potential& potential() const;
  double scale() const;
  double log_normalizer() const;

  double log_density_unnormalized(double t) const;
  // Normalized density with respect to dt.
  double density(double t) const;

  // Integral of t^K. Exactly 0 for odd K with an even potential.
  double moment(int K) const;
  double abs_moment() const;
  double expectation(const std::function<double(double)>& f) const;

  double cdf(double t) const;
  std::span<const CdfNode> cdf_table() const;
  bool uses_exact_inversion() const;
  double max_interpolation_error() const;

  double sample_t(RandomStream& rng) const;

  // Mass of [lo, hi].
  double probability(double lo, double hi) const;

  std::size_t quadrature_nodes() const;
  std::size_t panel_count() const;

  struct State;

 private:
  explicit DeFinettiMeasure(std::shared_ptr<const State> state);
  std::shared_ptr<const State> state_;
};

// Moments of a mixing law, K -> integral of t^K. Lets the trace-moment
// oracle treat the i.i.d. case (point mass at 0) and de Finetti measures alike.
using MomentSequence = std::function<double(int)>;

MomentSequence moments_of(const DeFinettiMeasure& measure);
MomentSequence point_mass_moments(double t0);

}  // namespace cwrmt
