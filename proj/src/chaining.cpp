#include "gafbmo/chaining.hpp"

#include "gafbmo/parallel.hpp"
#include "gafbmo/rng.hpp"
#include "gafbmo/seminorms.hpp"

#include <algorithm>
#include <cmath>

namespace gafbmo {

namespace {

struct BlockRange {
  Index lo, hi;
};

BlockRange block_range(const CoeffProfile& p, int n) {
  const Index lo = Index(1) << n;
  return {lo, std::min<Index>(2 * lo - 1, p.degree_cap())};
}

double block_energy(const CoeffProfile& p, int n) {
  const auto r = block_range(p, n);
  double s = 0;
  for (Index k = r.lo; k <= r.hi; ++k) s += p.values[k] * p.values[k];
  return s;
}

}  // namespace

double block_correlation(const CoeffProfile& p, int n, double theta) {
  require(n >= 0, "block_correlation: n >= 0");
  if (n > ilog2(p.degree_cap())) return 1.0;
  const auto r = block_range(p, n);
  double s2 = 0;
  Complex acc{};
  for (Index k = r.lo; k <= r.hi; ++k) {
    const double w = p.values[k] * p.values[k];
    if (w == 0.0) continue;
    s2 += w;
    acc += w * unit_phase(double(k) * theta);
  }
  if (s2 == 0.0) return 1.0;
  return std::min(1.0, std::abs(acc) / s2);
}

double delta_from(double sigma2, double rho) {
  return sigma2 * std::sqrt(std::max(0.0, 1.0 - rho * rho));
}

double delta_exact(const CoeffProfile& p, int n, double theta) {
  if (n > ilog2(p.degree_cap())) return 0.0;
  return delta_from(block_energy(p, n), block_correlation(p, n, theta));
}

MgfEstimate mgf_check(double rho, double lambda, std::int64_t trials, std::uint64_t seed) {
  require(rho >= 0.0 && rho <= 1.0, "mgf_check: rho in [0, 1]");
  require(lambda * lambda * (1.0 - rho * rho) < 1.0, "mgf_check: lambda^2 (1 - rho^2) must be < 1");
  require(trials > 0, "mgf_check: trials > 0");
  const double c = std::sqrt(std::max(0.0, 1.0 - rho * rho));
  const Index chunks = 64;
  std::vector<double> s1(chunks, 0.0), s2(chunks, 0.0);
  parallel_for(chunks, [&](Index ch) {
    CounterRng rng(derive_seed(seed, {0x6d67ULL, std::uint64_t(ch)}));
    const std::int64_t lo = trials * ch / chunks, hi = trials * (ch + 1) / chunks;
    double a = 0, b = 0;
    for (std::int64_t t = lo; t < hi; ++t) {
      const Complex z1 = rng.complex_gaussian();
      const Complex z2 = rng.complex_gaussian();
      const Complex h2 = rho * z1 + c * z2;
      const double x = std::exp(lambda * (std::norm(z1) - std::norm(h2)));
      a += x;
      b += x * x;
    }
    s1[std::size_t(ch)] = a;
    s2[std::size_t(ch)] = b;
  });
  double a = 0, b = 0;
  for (Index ch = 0; ch < chunks; ++ch) {
    a += s1[std::size_t(ch)];
    b += s2[std::size_t(ch)];
  }
  MgfEstimate e;
  e.trials = trials;
  e.mean = a / double(trials);
  const double var = std::max(0.0, b / double(trials) - e.mean * e.mean);
  e.std_error = std::sqrt(var / double(trials));
  e.exact = 1.0 / (1.0 - lambda * lambda * (1.0 - rho * rho));
  return e;
}

MetricsTable metrics_table(const CoeffProfile& p, const std::vector<double>& thetas) {
  MetricsTable t;
  t.thetas = thetas;
  const int K = ilog2(p.degree_cap()) + 1;
  const Index M = Index(thetas.size());
  t.delta = Eigen::MatrixXd::Zero(K, M);
  std::vector<double> energy(static_cast<std::size_t>(K));
  for (int n = 0; n < K; ++n) energy[std::size_t(n)] = block_energy(p, n);
  parallel_for(Index(K) * M, [&](Index w) {
    const int n = int(w / M);
    const Index i = w % M;
    t.delta(n, i) = delta_from(energy[std::size_t(n)], block_correlation(p, n, thetas[std::size_t(i)]));
  });
  t.d_inf.resize(std::size_t(M));
  t.d_2.resize(std::size_t(M));
  for (Index i = 0; i < M; ++i) {
    t.d_inf[std::size_t(i)] = K ? t.delta.col(i).maxCoeff() : 0.0;
    t.d_2[std::size_t(i)] = t.delta.col(i).norm();
  }
  return t;
}

int default_net_levels(const BlockProfile& b) {
  return std::min(16, ilog2(std::max(1, b.blocks())) + 2);
}

GammaEstimate gamma_bounds(const BlockProfile& b, int K_nets) {
  require(K_nets >= 0 && K_nets <= 16, "gamma_bounds: K_nets in [0, 16]");
  const int K = b.blocks();
  GammaEstimate g;
  g.levels = K_nets;
  // exact level terms, weight 2^{-(2^k - n)_+} on block n
  auto term1 = [&](int k) {
    const double s = std::ldexp(1.0, k);
    double sup = 0;
    for (int n = 0; n < K; ++n) {
      const double w = double(n) >= s ? 1.0 : std::exp2(double(n) - s);
      sup = std::max(sup, w * b.sigma2[n]);
    }
    return std::ldexp(sup, k);
  };
  auto term2 = [&](int k) {
    const double s = std::ldexp(1.0, k);
    double acc = 0;
    for (int n = 0; n < K; ++n) {
      const double w = double(n) >= s ? 1.0 : std::exp2(2.0 * (double(n) - s));
      acc += w * b.sigma2[n] * b.sigma2[n];
    }
    return std::sqrt(acc) * std::exp2(0.5 * k);
  };
  // dominating terms for the omitted levels
  double s1 = 0, s2 = 0;
  for (int n = 0; n < K; ++n) {
    s1 = std::max(s1, std::ldexp(b.sigma2[n], n));
    s2 += std::ldexp(b.sigma2[n] * b.sigma2[n], 2 * n);
  }
  auto bound1 = [&](int k) {
    const double s = std::ldexp(1.0, k);
    double tail = 0;
    for (int n = 0; n < K; ++n)
      if (double(n) >= s) tail = std::max(tail, b.sigma2[n]);
    return std::ldexp(std::max(tail, std::exp2(-s) * s1), k);
  };
  auto bound2 = [&](int k) {
    const double s = std::ldexp(1.0, k);
    double tail = 0;
    for (int n = 0; n < K; ++n)
      if (double(n) >= s) tail += b.sigma2[n] * b.sigma2[n];
    return std::sqrt(tail + std::exp2(-2.0 * s) * s2) * std::exp2(0.5 * k);
  };
  for (int k = 0; k <= K_nets; ++k) {
    g.gamma1 += term1(k);
    g.gamma2 += term2(k);
  }
  for (int k = K_nets + 1; k <= 64; ++k) {
    g.gamma1_tail += bound1(k);
    g.gamma2_tail += bound2(k);
  }
  g.gamma1 += g.gamma1_tail;
  g.gamma2 += g.gamma2_tail;
  return g;
}

double dyadic_net_functional(const std::vector<double>& d_of_lag, int q) {
  require(q >= 1, "dyadic_net_functional: q >= 1");
  const Index M = Index(d_of_lag.size());
  require(is_pow2(M), "dyadic_net_functional: lag grid size must be a power of two");
  auto d = [&](Index lag) {
    lag = ((lag % M) + M) % M;
    return d_of_lag[std::size_t(lag)];
  };
  double best = 0;
  for (Index t = 0; t < M; ++t) {
    double s = 0;
    for (int k = 0;; ++k) {
      // |C_0| = 1, |C_k| <= 2^{2^k}; evenly spaced subgroup of the lag grid
      const Index pts = k == 0 ? 1 : (k >= 6 ? M : std::min<Index>(M, Index(1) << (Index(1) << k)));
      const Index spacing = M / pts;
      double dist = 1e300;
      for (Index c = 0; c < M; c += spacing) dist = std::min(dist, d(t - c));
      s += dist * std::exp2(double(k) / q);
      if (pts >= M) break;
    }
    best = std::max(best, s);
  }
  return best;
}

SufficientBound sledd_sufficient_bound(const BlockProfile& b, int K_nets) {
  SufficientBound s;
  const GammaEstimate g = gamma_bounds(b, K_nets < 0 ? default_net_levels(b) : K_nets);
  s.gamma1 = g.gamma1;
  s.gamma2 = g.gamma2;
  s.l2 = std::sqrt(std::max(0.0, b.sigma2.sum()));
  s.sum_tau2 = b.tau2.sum();
  s.chaining = s.gamma1 + s.gamma2 + s.l2;
  return s;
}

double tail_bound(double d_inf, double d_2, double t, double C) {
  require(t >= 0.0 && d_inf >= 0.0 && d_2 >= 0.0, "tail_bound: non-negative arguments");
  if (t == 0.0) return 1.0;
  const double a = d_inf > 0.0 ? t / d_inf : INFINITY;
  const double b = d_2 > 0.0 ? t * t / (d_2 * d_2) : INFINITY;
  return std::exp(-C * std::min(a, b));
}

MeanEstimate mc_rsledd_squared(const CoeffProfile& p, std::int64_t samples, std::uint64_t seed, Index N) {
  require(samples > 0, "mc_rsledd_squared: samples > 0");
  if (N == 0) N = next_pow2(2 * p.degree_cap() + 1);
  auto shared = std::make_shared<const CoeffProfile>(p);
  std::vector<double> v(std::size_t(samples), 0.0);
  parallel_for(samples, [&](Index i) {
    const GafSample s = sample(shared, derive_seed(seed, {std::uint64_t(i)}));
    const double r = sledd_R(s.polynomial(), N).value;
    v[std::size_t(i)] = r * r;
  });
  MeanEstimate m;
  m.samples = samples;
  double a = 0, b = 0;
  for (double x : v) {
    a += x;
    b += x * x;
  }
  m.mean = a / double(samples);
  m.std_error = samples > 1 ? std::sqrt(std::max(0.0, b / double(samples) - m.mean * m.mean) / double(samples - 1)) : 0.0;
  return m;
}

}  // namespace gafbmo
