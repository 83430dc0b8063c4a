#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <random>

namespace pencilflow {

/// Named stages that own an independent random substream.
enum class Stream : std::uint64_t {
  scan_rows = 0x7363616e,   // vertical step between scan rows
  stroke = 0x7374726b,      // per-stroke pixel sampling
};

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133eb111ULL;
  return x ^ (x >> 31);
}

/// Derives a substream seed from the master seed, a stage tag and an ordered
/// list of coordinates. The result depends only on its arguments, never on
/// how many draws other streams have made.
inline std::uint64_t derive_seed(std::uint64_t master, Stream stage,
                                 std::initializer_list<std::int64_t> coords) {
  std::uint64_t h = splitmix64(master ^ splitmix64(static_cast<std::uint64_t>(stage)));
  for (std::int64_t c : coords) h = splitmix64(h ^ static_cast<std::uint64_t>(c));
  return h;
}

// Uniform and normal deviates are computed here from raw engine bits instead
// of std::*_distribution, whose output is implementation-defined. This keeps
// stroke logs replayable across standard libraries.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Box-Muller; the paired deviate is cached for the next call.
  double normal(double mean, double stddev) {
    if (has_spare_) {
      has_spare_ = false;
      return mean + stddev * spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(theta);
    has_spare_ = true;
    return mean + stddev * radius * std::cos(theta);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace pencilflow
