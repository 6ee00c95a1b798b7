#pragma once

// Fixed-algorithm random numbers. Every distribution here is implemented
// locally so that a (seed, stream) pair yields the same draws with any
// standard library; <random> distributions are implementation-defined.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string_view>
#include <utility>
#include <vector>

namespace prenelab {

inline constexpr std::string_view kRngAlgorithm = "xoshiro256**/splitmix64-seeded v1";

constexpr std::uint64_t splitmix64_next(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Stateless 64-bit mix used to derive independent stream seeds.
constexpr std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) noexcept {
  std::uint64_t state = master;
  std::uint64_t a = splitmix64_next(state);
  state = a ^ (index * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL);
  return splitmix64_next(state);
}

class Xoshiro256ss {
 public:
  using result_type = std::uint64_t;

  explicit constexpr Xoshiro256ss(std::uint64_t seed = 0) noexcept {
    std::uint64_t sm = seed;
    for (auto& word : s_) word = splitmix64_next(sm);
  }

  static constexpr Xoshiro256ss from_state(std::array<std::uint64_t, 4> state) noexcept {
    Xoshiro256ss rng;
    rng.s_ = state;
    return rng;
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    const std::uint64_t result = std::rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = std::rotl(s_[3], 45);
    return result;
  }

  [[nodiscard]] constexpr const std::array<std::uint64_t, 4>& state() const noexcept { return s_; }

  friend constexpr bool operator==(const Xoshiro256ss&, const Xoshiro256ss&) = default;

 private:
  std::array<std::uint64_t, 4> s_{};
};

using Rng = Xoshiro256ss;

/// Stream `index` of the run seeded with `master`.
constexpr Rng derive_stream(std::uint64_t master, std::uint64_t index) noexcept {
  return Rng(mix_seed(master, index));
}

/// Uniform in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) noexcept {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform in (0, 1].
inline double uniform01_open_low(Rng& rng) noexcept {
  return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
}

/// Uniform integer in [0, bound). Lemire's multiply-shift with rejection.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) noexcept {
  if (bound <= 1) return 0;
  unsigned __int128 m = static_cast<unsigned __int128>(rng()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(rng()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

inline bool bernoulli(Rng& rng, double p) noexcept {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return uniform01(rng) < p;
}

/// Number of failures before the first success of a Bernoulli(p) sequence.
/// Saturates at uint64 max when the draw overflows (p tiny).
inline std::uint64_t geometric_failures(Rng& rng, double p) noexcept {
  if (p >= 1.0) return 0;
  if (p <= 0.0) return std::numeric_limits<std::uint64_t>::max();
  const double draw = std::floor(std::log(uniform01_open_low(rng)) / std::log1p(-p));
  if (!(draw < 1.8e19)) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(draw);
}

inline double exponential(Rng& rng, double rate) noexcept {
  return -std::log(uniform01_open_low(rng)) / rate;
}

/// Poisson draw. Knuth's product method below mean 30, PTRS (Hormann 1993) above.
inline std::uint64_t poisson(Rng& rng, double mean) noexcept {
  if (!(mean > 0.0)) return 0;
  if (mean < 30.0) {
    const double limit = std::exp(-mean);
    std::uint64_t k = 0;
    double prod = uniform01(rng);
    while (prod > limit) {
      ++k;
      prod *= uniform01(rng);
    }
    return k;
  }
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = uniform01(rng) - 0.5;
    const double v = uniform01(rng);
    const double us = 0.5 - std::fabs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(invalpha) - std::log(a / (us * us) + b) <=
        -mean + k * loglam - std::lgamma(k + 1.0)) {
      return static_cast<std::uint64_t>(k);
    }
  }
}

/// `count` distinct indices from [0, n), in increasing order.
inline std::vector<std::size_t> sample_without_replacement(Rng& rng, std::size_t n, std::size_t count) {
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  if (count > n) count = n;
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = i + static_cast<std::size_t>(uniform_below(rng, n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace prenelab
