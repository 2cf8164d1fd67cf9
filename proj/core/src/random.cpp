#include "cwrmt/random.hpp"

namespace cwrmt {

namespace {
constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;
}

std::string_view to_string(Purpose p) {
  switch (p) {
    case Purpose::latent:
      return "latent";
    case Purpose::spins:
      return "spins";
    case Purpose::mc:
      return "mc";
  }
  return "unknown";
}

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

RandomStream::result_type RandomStream::operator()() noexcept {
  ++counter_;
  return mix64(key_ + counter_ * kGoldenGamma);
}

double RandomStream::uniform() noexcept {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform_open() noexcept {
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

RandomStream seed_stream(std::uint64_t seed, std::uint64_t replica, Purpose purpose) noexcept {
  // Chained mixing keeps nearby (seed, replica) pairs far apart in key space.
  std::uint64_t key = mix64(seed ^ 0x243f6a8885a308d3ULL);
  key = mix64(key + (replica + 1) * kGoldenGamma);
  key = mix64(key ^ (static_cast<std::uint64_t>(purpose) * 0x13198a2e03707344ULL));
  return RandomStream(key);
}

}  // namespace cwrmt
