#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace invabc {

/// xoshiro256++ generator with explicit distribution transforms.
///
/// All sampling is implemented in terms of the raw 64-bit stream so that traces
/// are bit-reproducible across standard library implementations, and so that
/// couplings relying on draw alignment (common random numbers) are stable.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {
    std::uint64_t x = seed;
    for (auto& w : s_) w = splitmix64(x);
  }

  /// Derive an independent child stream; used for replicate/thread parallelism.
  Rng substream(std::uint64_t id) const {
    std::uint64_t x = seed_ + 0x9e3779b97f4a7c15ULL * (id + 1);
    return Rng(splitmix64(x));
  }

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1]; safe as a log() argument.
  double uniform_pos() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t uniform_int(std::uint64_t n) {
    // multiply-shift bounded draw; bias < 2^-64, irrelevant for n in use here
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  /// Standard normal via Box-Muller (two uniforms per call, no cached state).
  double normal() {
    const double u1 = uniform_pos();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  double exponential(double rate) {
    if (!(rate > 0.0)) throw std::invalid_argument("exponential: rate must be > 0");
    return -std::log(uniform_pos()) / rate;
  }

  /// Poisson draw: CDF inversion below mu = 30 (one uniform, monotone in mu for
  /// a shared uniform), recursive halving via additivity above.
  long long poisson(double mu) {
    if (!(mu >= 0.0)) throw std::invalid_argument("poisson: mu must be >= 0");
    if (mu == 0.0) return 0;
    if (mu < 30.0) {
      const double u = uniform();
      double p = std::exp(-mu);
      double c = p;
      long long k = 0;
      while (u >= c && k < 4000) {
        ++k;
        p *= mu / static_cast<double>(k);
        c += p;
      }
      return k;
    }
    const long long a = poisson(mu * 0.5);
    return a + poisson(mu * 0.5);
  }

  /// Gamma(shape, rate) via Marsaglia-Tsang; shape < 1 boosted through shape+1.
  double gamma(double shape, double rate) {
    if (!(shape > 0.0) || !(rate > 0.0))
      throw std::invalid_argument("gamma: shape and rate must be > 0");
    if (shape < 1.0)
      return gamma(shape + 1.0, rate) * std::pow(uniform_pos(), 1.0 / shape);
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = normal();
      double v = 1.0 + c * x;
      if (v <= 0.0) continue;
      v = v * v * v;
      const double u = uniform_pos();
      if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v))
        return d * v / rate;
    }
  }

  /// Inverse-Gamma(shape, scale): reciprocal of Gamma(shape, rate = scale).
  double inverse_gamma(double shape, double scale) {
    if (!(scale > 0.0))
      throw std::invalid_argument("inverse_gamma: scale must be > 0");
    return 1.0 / gamma(shape, scale);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  static std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::uint64_t s_[4];
};

}  // namespace invabc
