#pragma once

#include <array>
#include <cstdint>

namespace spdekit {

// Counter-based generator (Philox4x32-10). Every draw is a pure function of
// (seed, stream, index, attempt), so results never depend on call order or
// thread scheduling.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint32_t stream) : seed_(seed), stream_(stream) {}

  std::array<std::uint32_t, 4> bits(std::uint64_t index, std::uint32_t attempt = 0) const;

  // Uniform on the open interval (0, 1).
  double uniform(std::uint64_t index, std::uint32_t attempt = 0, int which = 0) const;

  // Standard normal via Box-Muller on one counter block.
  double normal(std::uint64_t index, std::uint32_t attempt = 0) const;

  std::uint64_t seed() const { return seed_; }
  std::uint32_t stream() const { return stream_; }

  // Derives an independent seed, e.g. for replicate r of a study.
  static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt);

 private:
  std::uint64_t seed_;
  std::uint32_t stream_;
};

// Stream identifiers, one per consumer, so different samplers sharing a seed
// never reuse the same counter block.
namespace streams {
inline constexpr std::uint32_t kGmrf = 1;
inline constexpr std::uint32_t kMixing = 2;
inline constexpr std::uint32_t kTypeGNoise = 3;
inline constexpr std::uint32_t kPointProcess = 4;
inline constexpr std::uint32_t kObservations = 5;
inline constexpr std::uint32_t kLocations = 6;
}  // namespace streams

}  // namespace spdekit
