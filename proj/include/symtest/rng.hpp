#ifndef SYMTEST_RNG_HPP
#define SYMTEST_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>

namespace symtest {

/// SplitMix64 finalizer, used for seeding and stream derivation.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// xoshiro256** stream. Streams are value types: copy to fork, move between
/// threads, never share one concurrently.
///
/// Independent streams come from derive(master_seed, {keys...}); every
/// replication of every experiment hashes its own key path, so results do not
/// depend on scheduling. Standard normals use the Marsaglia polar method and
/// cache the second variate of each accepted pair.
class RngStream {
public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t seed = 0) noexcept {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
  }

  static RngStream derive(std::uint64_t master_seed, std::initializer_list<std::uint64_t> keys) noexcept {
    std::uint64_t h = master_seed;
    std::uint64_t acc = splitmix64(h);
    for (std::uint64_t key : keys) {
      std::uint64_t mix = acc ^ (key * 0xD1B54A32D192ED03ULL);
      acc = splitmix64(mix);
    }
    return RngStream(acc);
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform on [0,1) with 53 random bits.
  double uniform01() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform on (0,1): never returns 0.
  double uniform_open() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  double standard_normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double x, y, r2;
    do {
      x = 2.0 * uniform01() - 1.0;
      y = 2.0 * uniform01() - 1.0;
      r2 = x * x + y * y;
    } while (r2 >= 1.0 || r2 == 0.0);
    const double f = std::sqrt(-2.0 * std::log(r2) / r2);
    spare_ = y * f;
    has_spare_ = true;
    return x * f;
  }

private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> s_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace symtest

#endif  // SYMTEST_RNG_HPP
