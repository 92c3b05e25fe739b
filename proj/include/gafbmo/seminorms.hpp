#pragma once

#include "gafbmo/core.hpp"
#include "gafbmo/kernels.hpp"
#include "gafbmo/parallel.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace gafbmo {

/// Arc of grid points [start, start + length] (inclusive, wrapping mod N).
struct GridInterval {
  Index start = 0;
  Index length = 0;
};

/// Arcs of length 2^-j for j in [j_min, j_max] with centres on the lattice
/// of spacing 2^{-j-2}. j_max < 0 means "finest the grid allows".
struct IntervalFamily {
  int j_min = 0;
  int j_max = -1;

  static IntervalFamily dyadic() { return {}; }
  /// Lengths in [2^-n, 2^-(n-1)].
  static IntervalFamily block(int n) { return {std::max(0, n - 1), std::max(0, n)}; }

  /// Scale range usable on an N-point grid (at least 8 points per arc).
  std::pair<int, int> resolve(Index N) const {
    const int finest = ilog2(N) - 3;
    const int hi = j_max < 0 ? finest : std::min(j_max, finest);
    return {std::max(0, j_min), hi};
  }
  std::string describe() const {
    return "dyadic[j=" + std::to_string(j_min) + ".." + (j_max < 0 ? std::string("max") : std::to_string(j_max)) +
           ",centre_step=len/4]";
  }
};

struct SeminormEstimate {
  double value = 0;
  Index grid_size = 0;
  std::string family;
  bool lower_bound = true;
};

namespace detail {

template <typename Scalar>
inline Scalar cabs(const std::complex<Scalar>& z) {
  return std::sqrt(z.real() * z.real() + z.imag() * z.imag());
}

template <typename Scalar>
inline Scalar powp(Scalar x, Scalar p) {
  if (p == Scalar(1)) return x;
  if (p == Scalar(2)) return x * x;
  return std::pow(x, p);
}

}  // namespace detail

/// Trapezoid-rule mean oscillation: average of |f - avg_I f|^p over the arc (no p-th root).
template <typename Derived>
typename Derived::RealScalar mean_oscillation(const Eigen::MatrixBase<Derived>& fvals, GridInterval I,
                                              typename Derived::RealScalar p = 1) {
  using Scalar = typename Derived::RealScalar;
  using C = std::complex<Scalar>;
  const Index N = fvals.size();
  if (I.length < 8) throw IntervalTooSmall("mean_oscillation: arc must contain at least 8 grid points");
  require(I.length <= N, "mean_oscillation: arc longer than the circle");
  require(p >= Scalar(1), "mean_oscillation: p >= 1");
  const Index s = ((I.start % N) + N) % N;
  const Index L = I.length;
  auto at = [&](Index i) -> C { return fvals[(s + i) % N]; };
  C sum{};
  for (Index i = 0; i <= L; ++i) sum += at(i);
  sum -= Scalar(0.5) * (at(0) + at(L));
  const C mean = sum / Scalar(L);
  Scalar acc = 0;
  for (Index i = 0; i <= L; ++i) acc += detail::powp(detail::cabs(C(at(i) - mean)), p);
  acc -= Scalar(0.5) * (detail::powp(detail::cabs(C(at(0) - mean)), p) +
                        detail::powp(detail::cabs(C(at(L) - mean)), p));
  return acc / Scalar(L);
}

/// Arc [a, b) in circle units snapped to the grid.
template <typename Derived>
typename Derived::RealScalar mean_oscillation(const Eigen::MatrixBase<Derived>& fvals, double a, double b,
                                              typename Derived::RealScalar p = 1) {
  const double N = double(fvals.size());
  const Index s = Index(std::llround(a * N));
  const Index e = Index(std::llround(b * N));
  return mean_oscillation(fvals, GridInterval{s, e - s}, p);
}

namespace detail {

// Mean oscillation (p = 1) of a contiguous-or-wrapping arc; pr/pi are prefix sums
// of the real and imaginary parts (length N + 1).
template <typename Scalar>
Scalar arc_osc1(const std::complex<Scalar>* v, const Scalar* pr, const Scalar* pi, Index N, Index s, Index L) {
  using C = std::complex<Scalar>;
  const Index e = s + L;  // inclusive end, may exceed N
  Scalar sr, si;
  if (e < N) {
    sr = pr[e + 1] - pr[s];
    si = pi[e + 1] - pi[s];
  } else {
    sr = pr[N] - pr[s] + pr[e - N + 1];
    si = pi[N] - pi[s] + pi[e - N + 1];
  }
  const C first = v[s];
  const C last = v[e % N];
  sr -= Scalar(0.5) * (first.real() + last.real());
  si -= Scalar(0.5) * (first.imag() + last.imag());
  const Scalar mr = sr / Scalar(L), mi = si / Scalar(L);
  Scalar acc = 0;
  auto dev = [&](Index a, Index b) {
    for (Index i = a; i < b; ++i) {
      const Scalar dr = v[i].real() - mr, di = v[i].imag() - mi;
      acc += std::sqrt(dr * dr + di * di);
    }
  };
  if (e < N) {
    dev(s, e + 1);
  } else {
    dev(s, N);
    dev(0, e - N + 1);
  }
  auto d = [&](const C& z) {
    const Scalar dr = z.real() - mr, di = z.imag() - mi;
    return std::sqrt(dr * dr + di * di);
  };
  acc -= Scalar(0.5) * (d(first) + d(last));
  return acc / Scalar(L);
}

}  // namespace detail

/// Supremum of the mean oscillation over the family: a lower estimate of the BMO-star seminorm.
template <typename Derived>
SeminormEstimate star_norm_grid(const Eigen::MatrixBase<Derived>& fvals,
                                const IntervalFamily& fam = IntervalFamily::dyadic(),
                                int threads = default_threads()) {
  using Scalar = typename Derived::RealScalar;
  const Index N = fvals.size();
  require(is_pow2(N) && N >= 8, "star_norm_grid: grid size must be a power of two >= 8");
  const ComplexVectorT<Scalar> v = fvals;
  std::vector<Scalar> pr(std::size_t(N) + 1, Scalar(0)), pim(std::size_t(N) + 1, Scalar(0));
  for (Index i = 0; i < N; ++i) {
    pr[std::size_t(i) + 1] = pr[std::size_t(i)] + v[i].real();
    pim[std::size_t(i) + 1] = pim[std::size_t(i)] + v[i].imag();
  }
  const auto [jlo, jhi] = fam.resolve(N);
  // Flattened (scale, start) work list, chunked per scale.
  struct Task {
    Index L, step, first, last;
  };
  std::vector<Task> tasks;
  for (int j = jlo; j <= jhi; ++j) {
    const Index L = N >> j;
    const Index step = std::max<Index>(1, L / 4);
    const Index count = N / step;
    const Index per = std::max<Index>(1, (Index(1) << 16) / L);
    for (Index a = 0; a < count; a += per) tasks.push_back({L, step, a, std::min(count, a + per)});
  }
  std::vector<Scalar> best(tasks.size(), Scalar(0));
  parallel_for(
      Index(tasks.size()),
      [&](Index t) {
        const Task& w = tasks[std::size_t(t)];
        Scalar m = 0;
        for (Index i = w.first; i < w.last; ++i)
          m = std::max(m, detail::arc_osc1(v.data(), pr.data(), pim.data(), N, i * w.step, w.L));
        best[std::size_t(t)] = m;
      },
      threads);
  SeminormEstimate e;
  for (Scalar b : best) e.value = std::max<double>(e.value, double(b));
  e.grid_size = N;
  e.family = fam.describe();
  return e;
}

/// Star estimate restricted to arc lengths in [2^-n, 2^-(n-1)].
template <typename Derived>
SeminormEstimate block_star_norm(const Eigen::MatrixBase<Derived>& fvals, int n) {
  return star_norm_grid(fvals, IntervalFamily::block(n));
}

/// sup over 0 <= m <= n_max of the star estimate of the analytic Fejer mean of order m.
SeminormEstimate star_norm_fejer(const Polynomial& f, Index n_max, const IntervalFamily& fam, Index N);

/// Radii 1 - 2^{-j/per_octave}, fine enough for a polynomial of the given degree.
std::vector<double> default_bloch_radii(Index degree, int per_octave = 4);
/// Radii 1 - 2^{-j/per_octave} covering 1 - r from 4/lowest_mode down to about 1/top_mode.
std::vector<double> bloch_radii(Index lowest_mode, Index top_mode, int per_octave = 4);

/// sup over radii and angles of (1 - r^2)|f'(r e(theta))|.
/// At radius r the angular grid has min(N, max(64, 2^ceil(log2(16/(1-r))))) points.
SeminormEstimate bloch_norm(const Polynomial& f, const std::vector<double>& radii, Index N);

struct SleddOptions {
  bool include_constant = false;
};

/// sqrt(sup_theta sum_{n >= k} |T_n * f|^2) on the N-grid; N > 2 * top mode.
SeminormEstimate sledd_T(const Polynomial& f, Index N, int k_start = 0, SleddOptions opt = {});
/// sqrt(sup_theta sum_{n >= k} |R_n * f|^2) on the N-grid; N > 2 * top mode.
SeminormEstimate sledd_R(const Polynomial& f, Index N, int k_start = 0);
/// Tail profile: entry k is sledd_R(f, N, k) for k in [0, K].
std::vector<double> vmoa_profile(const Polynomial& f, Index N, int K);

/// Pointwise sum_{n >= k} |R_n * f|^2 on the grid.
RealVector block_square_function(const Polynomial& f, Index N, int k_start = 0);

}  // namespace gafbmo
