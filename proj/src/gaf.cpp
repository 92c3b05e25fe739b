#include "gafbmo/gaf.hpp"

#include "gafbmo/parallel.hpp"
#include "gafbmo/rng.hpp"

#include <algorithm>
#include <cmath>

namespace gafbmo {

std::string to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::power_law: return "power_law";
    case ProfileKind::lacunary: return "lacunary";
    case ProfileKind::explicit_table: return "explicit";
    case ProfileKind::block_constant: return "block_constant";
    case ProfileKind::exceptional: return "exceptional";
  }
  return "unknown";
}

double compensated_sum(const double* x, Index n) {
  double s = 0, c = 0;
  for (Index i = 0; i < n; ++i) {
    const double t = s + x[i];
    if (std::abs(s) >= std::abs(x[i]))
      c += (s - t) + x[i];
    else
      c += (x[i] - t) + s;
    s = t;
  }
  return s + c;
}

CoeffProfile make_profile(ProfileKind kind, std::string label, RealVector values,
                          std::map<std::string, double> params) {
  require(values.size() >= 2, "profile needs degree cap >= 1");
  require(values[0] == 0.0, "profile must have a_0 = 0");
  for (Index i = 0; i < values.size(); ++i)
    require(std::isfinite(values[i]) && values[i] >= 0.0, "profile coefficients must be finite and >= 0");
  CoeffProfile p;
  p.kind = kind;
  p.label = std::move(label);
  p.values = std::move(values);
  p.params = std::move(params);
  return p;
}

CoeffProfile power_law_profile(double alpha, Index cap) {
  require(cap >= 1, "power_law_profile: cap >= 1");
  RealVector v = RealVector::Zero(cap + 1);
  for (Index n = 1; n <= cap; ++n) v[n] = std::pow(double(n), -alpha);
  return make_profile(ProfileKind::power_law, "power_law", std::move(v),
                      {{"alpha", alpha}, {"cap", double(cap)}});
}

CoeffProfile lacunary_profile(const std::vector<double>& weights) {
  require(!weights.empty() && weights.size() < 40, "lacunary_profile: 1..39 weights");
  const Index cap = Index(1) << (weights.size() - 1);
  RealVector v = RealVector::Zero(cap + 1);
  for (std::size_t k = 0; k < weights.size(); ++k) v[Index(1) << k] = weights[k];
  return make_profile(ProfileKind::lacunary, "lacunary", std::move(v), {{"cap", double(cap)}});
}

CoeffProfile block_constant_profile(const std::vector<double>& sigma2) {
  require(!sigma2.empty() && sigma2.size() < 40, "block_constant_profile: 1..39 blocks");
  const Index cap = (Index(1) << sigma2.size()) - 1;
  RealVector v = RealVector::Zero(cap + 1);
  for (std::size_t k = 0; k < sigma2.size(); ++k) {
    require(sigma2[k] >= 0.0, "block energies must be >= 0");
    const Index lo = Index(1) << k;
    const double a = std::sqrt(sigma2[k] / double(lo));
    for (Index n = lo; n < 2 * lo; ++n) v[n] = a;
  }
  return make_profile(ProfileKind::block_constant, "block_constant", std::move(v),
                      {{"blocks", double(sigma2.size())}});
}

CoeffProfile explicit_profile(const RealVector& values) {
  return make_profile(ProfileKind::explicit_table, "explicit", values);
}

BlockProfile block_stats_from_sigma2(const RealVector& sigma2) {
  BlockProfile b;
  const Index K = sigma2.size();
  b.sigma2 = sigma2;
  b.tau2.resize(K);
  b.b2.resize(K);
  double run = 0;
  for (Index k = K - 1; k >= 0; --k) {
    run = std::max(run, sigma2[k]);
    b.tau2[k] = run;
  }
  double sum = 0, comp = 0;
  for (Index k = 0; k < K; ++k) {
    if (k >= 1) {
      const double x = std::ldexp(sigma2[k], int(2 * k));
      const double t = sum + x;
      comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
      sum = t;
    }
    b.b2[k] = sum + comp;
  }
  return b;
}

BlockProfile block_stats(const CoeffProfile& p) {
  const Index cap = p.degree_cap();
  const int K = ilog2(cap);
  RealVector s2(K + 1);
  std::vector<double> sq;
  for (int k = 0; k <= K; ++k) {
    const Index lo = Index(1) << k;
    const Index hi = std::min<Index>(2 * lo - 1, cap);
    sq.clear();
    for (Index n = lo; n <= hi; ++n) sq.push_back(p.values[n] * p.values[n]);
    s2[k] = compensated_sum(sq.data(), Index(sq.size()));
  }
  return block_stats_from_sigma2(s2);
}

bool ratio_test_converging(const std::vector<double>& terms) {
  const std::size_t n = terms.size();
  if (n < 4) return false;
  const std::size_t start = n - std::max<std::size_t>(2, n / 4);
  bool any = false;
  for (std::size_t i = start; i + 1 < n; ++i) {
    if (terms[i] == 0.0) {
      if (terms[i + 1] != 0.0) return false;
      continue;
    }
    any = true;
    if (terms[i + 1] / terms[i] > 0.9) return false;
  }
  return any || terms[n - 1] == 0.0;
}

ConditionReport check_conditions(const BlockProfile& b) {
  ConditionReport r;
  const int K = b.blocks();
  r.blocks = K;
  std::vector<double> t_sigma, t_sigma2, t_k, t_tau, t_hasi;
  double inner = 0;
  for (int k = 0; k < K; ++k) {
    t_sigma.push_back(std::sqrt(b.sigma2[k]));
    t_sigma2.push_back(b.sigma2[k]);
    t_k.push_back(k * b.sigma2[k]);
    t_tau.push_back(b.tau2[k]);
    if (k >= 1) {
      inner += std::ldexp(std::sqrt(double(k) * b.b2[k]), k);
      const double v = std::ldexp(inner, -2 * k);
      t_hasi.push_back(v * v);
    }
  }
  auto sum = [](const std::vector<double>& v) { return compensated_sum(v.data(), Index(v.size())); };
  r.sum_sigma = sum(t_sigma);
  r.sum_sigma2 = sum(t_sigma2);
  r.sum_k_sigma2 = sum(t_k);
  r.sum_tau2 = sum(t_tau);
  r.hasi_sum = sum(t_hasi);
  r.sum_sigma_converging = ratio_test_converging(t_sigma);
  r.sum_sigma2_converging = ratio_test_converging(t_sigma2);
  r.sum_k_sigma2_converging = ratio_test_converging(t_k);
  r.sum_tau2_converging = ratio_test_converging(t_tau);
  r.hasi_converging = ratio_test_converging(t_hasi);
  r.dyadic_regular = true;
  for (int k = 1; k < K; ++k)
    if (b.sigma2[k] > b.sigma2[k - 1]) r.dyadic_regular = false;
  return r;
}

Index GafSample::top_mode() const {
  for (Index i = coeffs.size() - 1; i >= 0; --i)
    if (coeffs[i] != Complex{}) return i;
  return -1;
}

GafSample sample(std::shared_ptr<const CoeffProfile> profile, std::uint64_t seed) {
  require(profile != nullptr, "sample: null profile");
  GafSample s;
  s.profile = profile;
  s.seed = seed;
  const Index n = profile->values.size();
  s.coeffs = ComplexVector::Zero(n);
  const Index chunk = 4096;
  const Index chunks = (n + chunk - 1) / chunk;
  const RealVector& a = profile->values;
  parallel_for(chunks, [&](Index c) {
    const Index hi = std::min(n, (c + 1) * chunk);
    for (Index i = c * chunk; i < hi; ++i)
      if (a[i] != 0.0) s.coeffs[i] = a[i] * complex_gaussian_at(seed, std::uint64_t(i));
  });
  return s;
}

GafSample sample(const CoeffProfile& profile, std::uint64_t seed) {
  return sample(std::make_shared<const CoeffProfile>(profile), seed);
}

LacunaryExtract lacunary_extract(const BlockProfile& b, double C) {
  require(C > 1.0, "lacunary_extract: C must exceed 1");
  int nonzero = 0;
  for (int k = 0; k < b.blocks(); ++k) nonzero += b.sigma2[k] > 0.0;
  if (nonzero < 2) return {};
  const int K = b.blocks() - 1;
  const long m = long(std::ceil(C)) + 1;
  auto tau = [&](long q) { return q <= K ? b.tau2[q] : 0.0; };
  std::vector<int> picks;
  for (long q = 1; q <= K; q *= m) {
    if (!(tau(q) > tau(q * m))) continue;
    const long hi = std::min<long>(q * m - 1, K);
    long best = q;
    for (long l = q + 1; l <= hi; ++l)
      if (b.sigma2[l] > b.sigma2[best]) best = l;
    picks.push_back(int(best));
  }
  LacunaryExtract out[2];
  for (std::size_t i = 0; i < picks.size(); ++i) {
    auto& o = out[i % 2];
    o.indices.push_back(picks[i]);
    o.weighted_sum += picks[i] * b.sigma2[picks[i]];
  }
  return out[0].weighted_sum >= out[1].weighted_sum ? out[0] : out[1];
}

}  // namespace gafbmo
