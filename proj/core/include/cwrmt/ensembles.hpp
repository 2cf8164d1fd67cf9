#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "cwrmt/definetti.hpp"
#include "cwrmt/random.hpp"

namespace cwrmt {

enum class EnsembleKind { full_cw, diagonal_cw, generalized, iid };

std::string_view to_string(EnsembleKind kind);
// Throws ConfigError on unknown names.
EnsembleKind parse_ensemble_kind(std::string_view name);

// How the law of a length-(N-k) diagonal of the diagonal ensemble is read.
enum class DiagonalLaw {
  marginal_of_n,  // first N-k spins of an N-spin Curie-Weiss law (mixture scale N)
  own_length,     // an (N-k)-spin Curie-Weiss law (mixture scale N-k)
};

inline constexpr std::size_t kMaxDimension = 4096;

struct EnsembleConfig {
  EnsembleKind kind = EnsembleKind::iid;
  std::size_t N = 1;
  double beta = 0.0;   // full_cw, diagonal_cw
  double alpha = 0.0;  // generalized: mixture scale N^alpha
  std::optional<Potential> potential;  // generalized
  std::uint64_t seed = 0;
  std::uint64_t replica_index = 0;
  DiagonalLaw diagonal_law = DiagonalLaw::marginal_of_n;

  // Throws ConfigError naming the first missing or invalid field.
  void validate() const;

  // Potential driving the mixture: F_beta for the Curie-Weiss kinds, the
  // configured potential for generalized. Empty for iid.
  std::optional<Potential> mixing_potential() const;
  // Mixture scale of the shared latent t (N^2 for full_cw, N^alpha for generalized).
  double mixing_scale() const;
};

// Symmetric N x N matrix with entries in {-1, +1}, stored densely row-major.
class SpinMatrix {
 public:
  SpinMatrix(EnsembleConfig config, std::vector<std::int8_t> entries, std::vector<double> latent_t);

  std::size_t N() const noexcept { return n_; }
  int operator()(std::size_t i, std::size_t j) const noexcept {
    return entries_[i * n_ + j];
  }
  const std::vector<std::int8_t>& entries() const noexcept { return entries_; }
  // One value for full/generalized, N values (one per diagonal k) for diagonal_cw, empty for iid.
  const std::vector<double>& latent_t() const noexcept { return latent_t_; }
  const EnsembleConfig& config() const noexcept { return config_; }

  bool is_symmetric() const noexcept;
  bool is_spin_valued() const noexcept;

 private:
  EnsembleConfig config_;
  std::size_t n_;
  std::vector<std::int8_t> entries_;
  std::vector<double> latent_t_;
};

// Non-owning view of X / N^gamma. gamma = 1/2 gives A_N, gamma = 1 gives B_N.
class ScaledMatrix {
 public:
  ScaledMatrix(const SpinMatrix& source, double gamma);

  const SpinMatrix& source() const noexcept { return *source_; }
  double exponent() const noexcept { return gamma_; }
  double factor() const noexcept { return factor_; }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return factor_ * (*source_)(i, j);
  }
  Eigen::MatrixXd dense() const;

 private:
  const SpinMatrix* source_;
  double gamma_;
  double factor_;
};

// Throws DomainError for gamma < 0.
ScaledMatrix scale(const SpinMatrix& X, double gamma);

// Substreams of one replica: the latent draw and the spin draws never share bits.
struct SamplingStreams {
  RandomStream latent;
  RandomStream spins;

  static SamplingStreams for_replica(std::uint64_t seed, std::uint64_t replica);
};

// Draws t from `mixture`, then fills the upper triangle (diagonal included)
// with i.i.d. spins of mean t and mirrors it.
SpinMatrix sample_full_cw(const EnsembleConfig& cfg, const DeFinettiMeasure& mixture,
                          SamplingStreams& streams);
SpinMatrix sample_generalized(const EnsembleConfig& cfg, const DeFinettiMeasure& mixture,
                              SamplingStreams& streams);
// law_for_length(L) returns the mixture for a diagonal holding L entries.
SpinMatrix sample_diagonal_cw(const EnsembleConfig& cfg,
                              const std::function<const DeFinettiMeasure&(std::size_t)>& law_for_length,
                              SamplingStreams& streams);
SpinMatrix sample_iid(const EnsembleConfig& cfg, SamplingStreams& streams);

// Builds the mixing measures for a configuration once and samples replicas
// from them. sample() is const and safe to call concurrently.
class EnsembleSampler {
 public:
  explicit EnsembleSampler(EnsembleConfig config);

  const EnsembleConfig& config() const noexcept { return config_; }
  // Shared-t mixture (full_cw, generalized) or the scale-N diagonal law. Null for iid.
  const DeFinettiMeasure* mixture() const noexcept;

  SpinMatrix sample(std::uint64_t replica) const;

 private:
  EnsembleConfig config_;
  std::optional<DeFinettiMeasure> mixture_;
  std::vector<DeFinettiMeasure> per_length_;  // index L-1, own_length diagonal law only
};

// Plain-text dump: header "N kind beta alpha seed replica latent_t" followed
// by N rows of space-separated +-1. latent_t is "-" when absent and
// comma-separated for the diagonal ensemble.
void write_matrix(std::ostream& out, const SpinMatrix& X);
// Parses a dump. The potential of a generalized ensemble is not recoverable
// and is left empty. Throws IoError on malformed input.
SpinMatrix read_matrix(std::istream& in);

}  // namespace cwrmt
