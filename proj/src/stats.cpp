#include "gafbmo/stats.hpp"

#include "gafbmo/core.hpp"

#include <numeric>

namespace gafbmo::stats {

double mean(const std::vector<double>& x) {
  require(!x.empty(), "mean: empty sample");
  return std::accumulate(x.begin(), x.end(), 0.0) / double(x.size());
}

double variance(const std::vector<double>& x) {
  require(x.size() >= 2, "variance: need two observations");
  const double m = mean(x);
  double s = 0;
  for (double v : x) s += (v - m) * (v - m);
  return s / double(x.size() - 1);
}

double std_error(const std::vector<double>& x) { return std::sqrt(variance(x) / double(x.size())); }

double median(std::vector<double> x) { return quantile(std::move(x), 0.5); }

double quantile(std::vector<double> x, double q) {
  require(!x.empty() && q >= 0 && q <= 1, "quantile: bad input");
  std::sort(x.begin(), x.end());
  const double pos = q * double(x.size() - 1);
  const std::size_t i = std::size_t(std::floor(pos));
  if (i + 1 >= x.size()) return x.back();
  return x[i] + (pos - double(i)) * (x[i + 1] - x[i]);
}

double kolmogorov_tail(double t) {
  if (t < 0.2) return 1.0;
  double s = 0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * t * t);
    s += (k % 2 ? 2.0 : -2.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(s, 0.0, 1.0);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  require(!a.empty() && !b.empty(), "ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = double(a.size()), nb = double(b.size());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(double(i) / na - double(j) / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  return {d, kolmogorov_tail((ne + 0.12 + 0.11 / ne) * d)};
}

double chi2_2x2_p_value(double n00, double n01, double n10, double n11) {
  const double n = n00 + n01 + n10 + n11;
  const double r0 = n00 + n01, r1 = n10 + n11, c0 = n00 + n10, c1 = n01 + n11;
  if (r0 == 0 || r1 == 0 || c0 == 0 || c1 == 0) return 1.0;
  const double det = n00 * n11 - n01 * n10;
  const double chi2 = n * det * det / (r0 * r1 * c0 * c1);
  return std::erfc(std::sqrt(chi2 / 2.0));
}

}  // namespace gafbmo::stats
