#pragma once

#include "gafbmo/core.hpp"

#include <cstdint>
#include <initializer_list>

namespace gafbmo {

std::uint64_t splitmix64(std::uint64_t x);

/// Derive an independent key from a master seed and a sequence of tags.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> tags);

// Counter-based stream: the k-th draw depends only on (key, k).
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(splitmix64(key)) {}

  std::uint64_t next_u64();
  /// Uniform on (0, 1].
  double uniform();
  double normal();
  /// Standard complex Gaussian: density exp(-|z|^2)/pi.
  Complex complex_gaussian();
  /// Number of failures before the first success, success probability p.
  std::uint64_t geometric(double p);
  double exponential(double rate);

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// xi_n for the stream keyed by seed; depends only on (seed, n).
Complex complex_gaussian_at(std::uint64_t seed, std::uint64_t n);

}  // namespace gafbmo
