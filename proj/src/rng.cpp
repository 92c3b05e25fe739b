#include "gafbmo/rng.hpp"

#include <cmath>
#include <limits>

namespace gafbmo {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> tags) {
  std::uint64_t h = splitmix64(master ^ 0x5851f42d4c957f2dULL);
  for (auto t : tags) h = splitmix64(h ^ splitmix64(t + 0x632be59bd9b4e019ULL));
  return h;
}

std::uint64_t CounterRng::next_u64() {
  return splitmix64(key_ + 0x9e3779b97f4a7c15ULL * (++counter_));
}

double CounterRng::uniform() {
  return (double((next_u64() >> 11)) + 1.0) * 0x1.0p-53;
}

double CounterRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  const double a = 2.0 * std::numbers::pi * uniform();
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

Complex CounterRng::complex_gaussian() {
  const double r = std::sqrt(-std::log(uniform()));
  const double u = uniform();
  return r * unit_phase(u);
}

std::uint64_t CounterRng::geometric(double p) {
  if (p >= 1.0) return 0;
  const double v = std::floor(std::log(uniform()) / std::log1p(-p));
  if (!(v < 1.8e19)) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(v);
}

double CounterRng::exponential(double rate) { return -std::log(uniform()) / rate; }

Complex complex_gaussian_at(std::uint64_t seed, std::uint64_t n) {
  CounterRng rng(derive_seed(seed, {n}));
  return rng.complex_gaussian();
}

}  // namespace gafbmo
