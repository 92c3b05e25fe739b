#include "gafbmo/seminorms.hpp"

#include <cmath>

namespace gafbmo {

SeminormEstimate star_norm_fejer(const Polynomial& f, Index n_max, const IntervalFamily& fam, Index N) {
  require(n_max >= 0, "star_norm_fejer: n_max >= 0");
  require(f.lo >= 0, "star_norm_fejer: analytic input expected");
  SeminormEstimate best;
  best.grid_size = N;
  best.family = fam.describe() + ",fejer_means<=" + std::to_string(n_max);
  Eigen::FFT<double> plan;
  for (Index m = 0; m <= n_max; ++m) {
    const Polynomial g = convolve(f, analytic_fejer_coeffs<double>(m));
    const ComplexVector v = eval_grid(g, N, &plan);
    best.value = std::max(best.value, star_norm_grid(v, fam).value);
  }
  return best;
}

std::vector<double> default_bloch_radii(Index degree, int per_octave) {
  return bloch_radii(1, degree, per_octave);
}

std::vector<double> bloch_radii(Index lowest_mode, Index top_mode, int per_octave) {
  require(per_octave >= 1, "bloch_radii: per_octave >= 1");
  const int first = std::max(0, ilog2(std::max<Index>(1, lowest_mode)) - 2);
  const int last = ilog2(std::max<Index>(1, top_mode)) + 1;
  std::vector<double> r;
  for (int j = first * per_octave; j <= last * per_octave; ++j)
    r.push_back(1.0 - std::exp2(-double(j) / per_octave));
  return r;
}

SeminormEstimate bloch_norm(const Polynomial& f, const std::vector<double>& radii, Index N) {
  require(f.lo >= 0, "bloch_norm: analytic input expected");
  require(is_pow2(N), "bloch_norm: grid size must be a power of two");
  const Index top = f.top_mode();
  SeminormEstimate e;
  e.grid_size = N;
  e.family = "radial[" + std::to_string(radii.size()) + "]";
  if (top < 1) return e;
  // derivative terms: mode k carries (k+1) f_{k+1}; only nonzero ones are kept
  std::vector<Index> modes;
  std::vector<Complex> d;
  for (Index k = 0; k < top; ++k) {
    const Complex c = f[k + 1];
    if (c != Complex{}) {
      modes.push_back(k);
      d.push_back(double(k + 1) * c);
    }
  }
  std::vector<double> best(radii.size(), 0.0);
  parallel_for(Index(radii.size()), [&](Index i) {
    const double r = radii[std::size_t(i)];
    require(r >= 0.0 && r < 1.0, "bloch_norm: radii must lie in [0, 1)");
    const Index want = r == 0.0 ? 1 : Index(std::ceil(16.0 / (1.0 - r)));
    const Index M = std::min(N, std::max<Index>(64, next_pow2(want)));
    ComplexVector folded = ComplexVector::Zero(M);
    for (std::size_t t = 0; t < modes.size(); ++t) folded[modes[t] % M] += d[t] * std::pow(r, double(modes[t]));
    Eigen::FFT<double> fft;
    fft.SetFlag(Eigen::FFT<double>::Unscaled);
    ComplexVector v(M);
    fft.inv(v, folded);
    double m2 = 0;
    for (Index j = 0; j < M; ++j) m2 = std::max(m2, std::norm(v[j]));
    best[std::size_t(i)] = (1.0 - r * r) * std::sqrt(m2);
  });
  for (double b : best) e.value = std::max(e.value, b);
  return e;
}

namespace {

void check_sledd_grid(const Polynomial& f, Index N) {
  require(f.lo >= 0, "sledd: analytic input expected");
  require(is_pow2(N), "sledd: grid size must be a power of two");
  const Index top = std::max<Index>(0, f.top_mode());
  if (N <= 2 * top) throw GridTooSmall("sledd: grid size must exceed twice the top mode");
}

void accumulate_abs2(const ComplexVector& v, RealVector& acc) {
  for (Index j = 0; j < v.size(); ++j) acc[j] += std::norm(v[j]);
}

}  // namespace

SeminormEstimate sledd_T(const Polynomial& f, Index N, int k_start, SleddOptions opt) {
  check_sledd_grid(f, N);
  require(k_start >= 0, "sledd_T: k_start >= 0");
  const Index top = f.top_mode();
  RealVector acc = RealVector::Zero(N);
  Eigen::FFT<double> plan;
  for (int n = k_start; n <= 40; ++n) {
    const Index lo = n == 0 ? 0 : (Index(1) << (n - 1)) + 1;
    const Index hi = n == 0 ? 1 : (Index(4) << n) - 1;
    if (lo > top) break;
    const Index a = std::max(lo, std::max<Index>(f.lo, opt.include_constant ? 0 : 1));
    const Index b = std::min(hi, top);
    if (a > b) continue;
    Polynomial g;
    g.lo = a;
    g.coeffs.resize(b - a + 1);
    const double den = double(trapezoid_denominator(n));
    for (Index k = a; k <= b; ++k) g.coeffs[k - a] = f[k] * (double(trapezoid_numerator(n, k)) / den);
    accumulate_abs2(eval_grid(g, N, &plan), acc);
  }
  SeminormEstimate e;
  e.value = std::sqrt(acc.maxCoeff());
  e.grid_size = N;
  e.family = "trapezoid,k>=" + std::to_string(k_start);
  return e;
}

RealVector block_square_function(const Polynomial& f, Index N, int k_start) {
  check_sledd_grid(f, N);
  require(k_start >= 0, "block_square_function: k_start >= 0");
  const Index top = f.top_mode();
  RealVector acc = RealVector::Zero(N);
  if (top < 1) return acc;
  Eigen::FFT<double> plan;
  for (int n = k_start; n <= ilog2(top); ++n) {
    const Index lo = std::max(Index(1) << n, f.lo);
    const Index hi = std::min((Index(2) << n) - 1, top);
    if (lo > hi) continue;
    Polynomial g;
    g.lo = lo;
    g.coeffs = f.coeffs.segment(lo - f.lo, hi - lo + 1);
    if (g.coeffs.isZero(0)) continue;
    accumulate_abs2(eval_grid(g, N, &plan), acc);
  }
  return acc;
}

SeminormEstimate sledd_R(const Polynomial& f, Index N, int k_start) {
  SeminormEstimate e;
  e.value = std::sqrt(block_square_function(f, N, k_start).maxCoeff());
  e.grid_size = N;
  e.family = "blocks,k>=" + std::to_string(k_start);
  return e;
}

std::vector<double> vmoa_profile(const Polynomial& f, Index N, int K) {
  check_sledd_grid(f, N);
  require(K >= 0, "vmoa_profile: K >= 0");
  std::vector<double> out(std::size_t(K) + 1, 0.0);
  const Index top = f.top_mode();
  if (top < 1) return out;
  RealVector acc = RealVector::Zero(N);
  Eigen::FFT<double> plan;
  for (int n = ilog2(top); n >= 0; --n) {
    const Index lo = std::max(Index(1) << n, f.lo);
    const Index hi = std::min((Index(2) << n) - 1, top);
    if (lo <= hi) {
      Polynomial g;
      g.lo = lo;
      g.coeffs = f.coeffs.segment(lo - f.lo, hi - lo + 1);
      if (!g.coeffs.isZero(0)) accumulate_abs2(eval_grid(g, N, &plan), acc);
    }
    if (n <= K) out[std::size_t(n)] = std::sqrt(acc.maxCoeff());
  }
  return out;
}

}  // namespace gafbmo
