#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace pcl {

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t hash_name(std::string_view s);

// All randomness goes through this wrapper so streams can be split per trial.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(splitmix64(seed)) {}

  std::uint64_t next() { return engine_(); }
  // Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  bool coin() { return (engine_() >> 63) != 0; }
  bool bernoulli(double p) { return uniform() < p; }

  // Independent child stream keyed by (parent seed, label, index).
  static Rng derive(std::uint64_t seed, std::string_view label, std::uint64_t index);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace pcl
