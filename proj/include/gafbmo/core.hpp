#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gafbmo {

using Index = Eigen::Index;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using ComplexVectorT = Vector<std::complex<Scalar>>;

using RealVector = Vector<double>;
using ComplexVector = ComplexVectorT<double>;
using Complex = std::complex<double>;

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PreconditionError : Error {
  using Error::Error;
};

struct GridTooSmall : Error {
  using Error::Error;
};

struct IntervalTooSmall : Error {
  using Error::Error;
};

struct SearchCapExceeded : Error {
  using Error::Error;
};

struct FrequencyOverlap : Error {
  using Error::Error;
};

struct DepthInfeasible : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

/// Iterative method stopped before reaching tolerance.
struct NonConvergence : Error {
  NonConvergence(const std::string& what, double best, Index iters, double resid)
      : Error(what), best_estimate(best), iterations(iters), residual(resid) {}
  double best_estimate;
  Index iterations;
  double residual;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw PreconditionError(msg);
}

/// exp(2 pi i theta)
template <typename Scalar>
std::complex<Scalar> unit_phase(Scalar theta) {
  const Scalar a = Scalar(2) * std::numbers::pi_v<Scalar> * theta;
  return {std::cos(a), std::sin(a)};
}

inline bool is_pow2(Index n) { return n > 0 && (n & (n - 1)) == 0; }

/// Smallest power of two >= n (n >= 1).
inline Index next_pow2(Index n) {
  Index p = 1;
  while (p < n) p <<= 1;
  return p;
}

/// floor(log2(n)) for n >= 1.
inline int ilog2(Index n) {
  int k = -1;
  while (n > 0) {
    n >>= 1;
    ++k;
  }
  return k;
}

}  // namespace gafbmo
