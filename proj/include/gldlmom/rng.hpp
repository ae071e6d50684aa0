#pragma once

#include <cstdint>
#include <random>

namespace gldlmom {

/// SplitMix64 finalizer (Steele, Lea & Flood 2014). Used to derive
/// independent seeds; it is a bijection on 64-bit words.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed for substream `index` of a master seed. Depends only on the pair,
/// so parallel replications reproduce regardless of scheduling.
std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) noexcept;

/// Uniform variates on the open interval (0, 1).
///
/// Backed by std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The conversion to double is done here rather than with
/// std::uniform_real_distribution, whose algorithm is implementation-defined:
/// the top 53 bits k give u = (k + 0.5) / 2^53.
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  double next() noexcept {
    const std::uint64_t k = engine_() >> 11;
    return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gldlmom
