#pragma once

#include <cstddef>
#include <vector>

namespace gafbmo::stats {

double mean(const std::vector<double>& x);
/// Unbiased sample variance.
double variance(const std::vector<double>& x);
double std_error(const std::vector<double>& x);
double median(std::vector<double> x);
/// Linear-interpolation quantile, q in [0, 1].
double quantile(std::vector<double> x, double q);

/// Asymptotic Kolmogorov distribution tail P(K > t).
double kolmogorov_tail(double t);

struct KsResult {
  double statistic = 0;
  double p_value = 0;
};

/// One-sample test against a continuous CDF.
template <typename Cdf>
KsResult ks_one_sample(std::vector<double> x, Cdf&& cdf);
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Pearson chi-square test of independence for a 2x2 table (1 degree of freedom).
double chi2_2x2_p_value(double n00, double n01, double n10, double n11);

}  // namespace gafbmo::stats

#include <algorithm>
#include <cmath>

namespace gafbmo::stats {

template <typename Cdf>
KsResult ks_one_sample(std::vector<double> x, Cdf&& cdf) {
  std::sort(x.begin(), x.end());
  const double n = double(x.size());
  double d = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double F = cdf(x[i]);
    d = std::max({d, double(i + 1) / n - F, F - double(i) / n});
  }
  const double sn = std::sqrt(n);
  return {d, kolmogorov_tail((sn + 0.12 + 0.11 / sn) * d)};
}

}  // namespace gafbmo::stats
