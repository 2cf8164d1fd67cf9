#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace cwrmt {

// Disjoint uses of randomness within one replica. Each tag owns its own
// substream so that, e.g., changing how spins are drawn never shifts the
// latent-t draw.
enum class Purpose : std::uint64_t {
  latent = 1,
  spins = 2,
  mc = 3,
};

std::string_view to_string(Purpose p);

// Counter-based generator: output n is a SplitMix64 finalizer applied to
// key + n * golden_gamma. Streams with different keys are independent for
// practical purposes and any output can be reached in O(1) via discard().
// Satisfies UniformRandomBitGenerator.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t key) noexcept : key_(key) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept;

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept;

  // Uniform double in the open interval (0, 1).
  double uniform_open() noexcept;

  void discard(std::uint64_t n) noexcept { counter_ += n; }

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t z) noexcept;

// Reproducible stream for one (seed, replica, purpose) triple.
RandomStream seed_stream(std::uint64_t seed, std::uint64_t replica, Purpose purpose) noexcept;

}  // namespace cwrmt
