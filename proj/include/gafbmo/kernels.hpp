#pragma once

#include "gafbmo/core.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cstdint>
#include <vector>

namespace gafbmo {

/// Trigonometric polynomial sum_k coeffs[k - lo] e(k theta).
template <typename Scalar>
struct TrigPolynomial {
  Index lo = 0;
  ComplexVectorT<Scalar> coeffs;

  Index hi() const { return lo + coeffs.size() - 1; }
  Index span() const { return coeffs.size() == 0 ? 0 : coeffs.size() - 1; }

  std::complex<Scalar> operator[](Index k) const {
    const Index i = k - lo;
    if (i < 0 || i >= coeffs.size()) return {};
    return coeffs[i];
  }

  std::complex<Scalar> operator()(Scalar theta) const {
    std::complex<Scalar> s{};
    for (Index i = 0; i < coeffs.size(); ++i) s += coeffs[i] * unit_phase(Scalar(lo + i) * theta);
    return s;
  }

  /// Largest mode with a nonzero coefficient, or lo - 1 if none.
  Index top_mode() const {
    for (Index i = coeffs.size() - 1; i >= 0; --i)
      if (coeffs[i] != std::complex<Scalar>{}) return lo + i;
    return lo - 1;
  }
};

using Polynomial = TrigPolynomial<double>;

/// Analytic polynomial with the given coefficient vector (mode k at index k).
template <typename Derived>
TrigPolynomial<typename Derived::RealScalar> analytic(const Eigen::MatrixBase<Derived>& c) {
  TrigPolynomial<typename Derived::RealScalar> p;
  p.lo = 0;
  p.coeffs = c.template cast<std::complex<typename Derived::RealScalar>>();
  return p;
}

/// Real Fourier multiplier table on modes [lo, hi].
template <typename Scalar>
struct KernelTable {
  Index lo = 0;
  Vector<Scalar> coeffs;

  Index hi() const { return lo + coeffs.size() - 1; }

  Scalar operator()(Index k) const {
    const Index i = k - lo;
    if (i < 0 || i >= coeffs.size()) return Scalar(0);
    return coeffs[i];
  }
};

using KernelCoeffs = KernelTable<double>;

/// Exact multiplier table: coefficient(k) = num[k - lo] / denom.
struct RationalKernel {
  Index lo = 0;
  std::vector<std::int64_t> num;
  std::int64_t denom = 1;

  std::int64_t operator()(Index k) const {
    const Index i = k - lo;
    if (i < 0 || i >= static_cast<Index>(num.size())) return 0;
    return num[static_cast<std::size_t>(i)];
  }
};

namespace detail {

inline std::int64_t ramp(std::int64_t x) { return x > 0 ? x : 0; }

}  // namespace detail

/// Fejer kernel: modes |k| <= n with weight 1 - |k|/(n+1).
template <typename Scalar = double>
KernelTable<Scalar> fejer_coeffs(Index n) {
  require(n >= 0, "fejer_coeffs: n must be non-negative");
  KernelTable<Scalar> t;
  t.lo = -n;
  t.coeffs.resize(2 * n + 1);
  for (Index k = -n; k <= n; ++k)
    t.coeffs[k + n] = Scalar(1) - Scalar(k < 0 ? -k : k) / Scalar(n + 1);
  return t;
}

/// Closed form (1/(n+1)) |1 - z^{n+1}|^2 / |1 - z|^2 at z = e(theta).
template <typename Scalar>
Scalar fejer_eval(Index n, Scalar theta) {
  require(n >= 0, "fejer_eval: n must be non-negative");
  const Scalar pi = std::numbers::pi_v<Scalar>;
  const Scalar frac = theta - std::round(theta);
  const Scalar s = std::sin(pi * frac);
  const Scalar m = Scalar(n + 1);
  if (std::abs(s) < Scalar(1e-300)) return m;
  const Scalar t = std::sin(pi * m * frac);
  return t * t / (m * s * s);
}

/// Analytic Fejer kernel: modes 0..n with weight 1 - k/(n+1).
template <typename Scalar = double>
KernelTable<Scalar> analytic_fejer_coeffs(Index n) {
  require(n >= 0, "analytic_fejer_coeffs: n must be non-negative");
  KernelTable<Scalar> t;
  t.lo = 0;
  t.coeffs.resize(n + 1);
  for (Index k = 0; k <= n; ++k) t.coeffs[k] = Scalar(1) - Scalar(k) / Scalar(n + 1);
  return t;
}

/// Indicator of the dyadic block [2^n, 2^{n+1}).
template <typename Scalar = double>
KernelTable<Scalar> block_coeffs(int n) {
  require(n >= 0 && n < 62, "block_coeffs: block index out of range");
  KernelTable<Scalar> t;
  t.lo = Index(1) << n;
  t.coeffs = Vector<Scalar>::Ones(Index(1) << n);
  return t;
}

/// Numerator of the trapezoid multiplier at mode k over denominator
/// trapezoid_denominator(n).
/// n = 0: 1 + (z + 1/z)/2. n >= 1, A = 2^n: with tri_N(k) = (1 - |k|/N)_+,
/// 2 tri_{4A} - tri_{2A} + tri_{A/2} - 2 tri_A, which equals 1 on [A, 2A],
/// vanishes outside (A/2, 4A) and is linear in between.
inline std::int64_t trapezoid_numerator(int n, std::int64_t k) {
  const std::int64_t m = k < 0 ? -k : k;
  if (n == 0) return m == 0 ? 2 : (m == 1 ? 1 : 0);
  const std::int64_t a = std::int64_t(1) << n;
  return 2 * detail::ramp(4 * a - m) - 2 * detail::ramp(2 * a - m) + 8 * detail::ramp(a / 2 - m) -
         8 * detail::ramp(a - m);
}

inline std::int64_t trapezoid_denominator(int n) { return n == 0 ? 2 : std::int64_t(4) << n; }

/// Exact table of the symmetric trapezoid multiplier.
inline RationalKernel trapezoid_rational(int n, bool analytic_part = false) {
  require(n >= 0 && n <= 40, "trapezoid: index out of range");
  RationalKernel r;
  r.denom = trapezoid_denominator(n);
  const std::int64_t lo = n == 0 ? 1 : (std::int64_t(1) << (n - 1)) + 1;
  const std::int64_t hi = n == 0 ? 1 : (std::int64_t(4) << n) - 1;
  if (analytic_part) {
    r.lo = n == 0 ? 0 : static_cast<Index>(lo);
    for (std::int64_t k = r.lo; k <= hi; ++k) r.num.push_back(trapezoid_numerator(n, k));
  } else {
    r.lo = static_cast<Index>(-hi);
    for (std::int64_t k = -hi; k <= hi; ++k) r.num.push_back(trapezoid_numerator(n, k));
  }
  return r;
}

namespace detail {
template <typename Scalar>
KernelTable<Scalar> to_table(const RationalKernel& r) {
  KernelTable<Scalar> t;
  t.lo = r.lo;
  t.coeffs.resize(static_cast<Index>(r.num.size()));
  for (std::size_t i = 0; i < r.num.size(); ++i)
    t.coeffs[static_cast<Index>(i)] = Scalar(r.num[i]) / Scalar(r.denom);
  return t;
}
}  // namespace detail

template <typename Scalar = double>
KernelTable<Scalar> trapezoid_symmetric_coeffs(int n) {
  return detail::to_table<Scalar>(trapezoid_rational(n, false));
}

/// Trapezoid multiplier restricted to modes >= 0 (used on analytic inputs).
template <typename Scalar = double>
KernelTable<Scalar> trapezoid_coeffs(int n) {
  return detail::to_table<Scalar>(trapezoid_rational(n, true));
}

/// Coefficientwise product: the Fourier side of kernel convolution.
template <typename Scalar>
TrigPolynomial<Scalar> convolve(const TrigPolynomial<Scalar>& f, const KernelTable<Scalar>& k) {
  const Index lo = std::max(f.lo, k.lo);
  const Index hi = std::min(f.hi(), k.hi());
  TrigPolynomial<Scalar> out;
  if (lo > hi) {
    out.lo = std::max<Index>(0, lo);
    out.coeffs = ComplexVectorT<Scalar>::Zero(1);
    return out;
  }
  out.lo = lo;
  out.coeffs.resize(hi - lo + 1);
  for (Index m = lo; m <= hi; ++m) out.coeffs[m - lo] = f.coeffs[m - f.lo] * k(m);
  return out;
}

/// Values at e(j/N) for j in [0, N) by folding modes mod N (aliasing allowed).
template <typename Scalar>
ComplexVectorT<Scalar> eval_roots(const TrigPolynomial<Scalar>& f, Index N,
                                  Eigen::FFT<Scalar>* plan = nullptr) {
  require(is_pow2(N), "grid size must be a power of two");
  ComplexVectorT<Scalar> folded = ComplexVectorT<Scalar>::Zero(N);
  for (Index i = 0; i < f.coeffs.size(); ++i) {
    Index m = (f.lo + i) % N;
    if (m < 0) m += N;
    folded[m] += f.coeffs[i];
  }
  Eigen::FFT<Scalar> local;
  Eigen::FFT<Scalar>& fft = plan ? *plan : local;
  fft.SetFlag(Eigen::FFT<Scalar>::Unscaled);
  ComplexVectorT<Scalar> out(N);
  fft.inv(out, folded);
  return out;
}

/// Values on the uniform N-point circle grid; N must exceed the mode span.
template <typename Scalar>
ComplexVectorT<Scalar> eval_grid(const TrigPolynomial<Scalar>& f, Index N,
                                 Eigen::FFT<Scalar>* plan = nullptr) {
  require(is_pow2(N), "grid size must be a power of two");
  if (N <= f.span()) throw GridTooSmall("grid size does not exceed the mode span");
  return eval_roots(f, N, plan);
}

template <typename Scalar>
ComplexVectorT<Scalar> eval_grid(const KernelTable<Scalar>& k, Index N) {
  TrigPolynomial<Scalar> p;
  p.lo = k.lo;
  p.coeffs = k.coeffs.template cast<std::complex<Scalar>>();
  return eval_grid(p, N);
}

}  // namespace gafbmo
