#pragma once

#include "gafbmo/core.hpp"
#include "gafbmo/gaf.hpp"

#include <cstdint>
#include <vector>

namespace gafbmo {

/// |sum_{k in block n} a_k^2 e(k theta)| / sigma_n^2; equals 1 on empty blocks.
double block_correlation(const CoeffProfile& p, int n, double theta);

/// Expected |(|H1|^2 - |H2|^2)| for block n at lag theta: sigma_n^2 sqrt(1 - rho^2).
double delta_exact(const CoeffProfile& p, int n, double theta);
/// Same law for given block energy and correlation.
double delta_from(double sigma2, double rho);

struct MgfEstimate {
  double mean = 0;
  double std_error = 0;
  double exact = 0;  // 1 / (1 - lambda^2 (1 - rho^2))
  std::int64_t trials = 0;
};

/// Monte Carlo of E exp(lambda (|H1|^2 - |H2|^2)) for unit-variance complex
/// Gaussians with correlation rho. Requires lambda^2 (1 - rho^2) < 1.
MgfEstimate mgf_check(double rho, double lambda, std::int64_t trials, std::uint64_t seed);

/// Block distances on a lag grid: delta(n, i) = Delta_n(theta_i).
struct MetricsTable {
  std::vector<double> thetas;
  Eigen::MatrixXd delta;  // blocks x thetas
  std::vector<double> d_inf;  // per theta: sup_n Delta_n
  std::vector<double> d_2;    // per theta: sqrt(sum_n Delta_n^2)
};

MetricsTable metrics_table(const CoeffProfile& p, const std::vector<double>& thetas);

/// Upper estimates of the generic-chaining functionals for the two metrics.
struct GammaEstimate {
  double gamma1 = 0;       // closed-form block bound, nets at resolution 2^{-2^k}
  double gamma2 = 0;
  double gamma1_tail = 0;  // analytic bound on the omitted levels (included above)
  double gamma2_tail = 0;
  int levels = 0;
};

GammaEstimate gamma_bounds(const BlockProfile& b, int K_nets);
int default_net_levels(const BlockProfile& b);

/// Admissible-sequence value sup_t sum_k 2^{k/q} d(t, C_k) for nested dyadic nets on an
/// M-point lag grid, with d(t, C_k) <= sup over lags within the net spacing.
double dyadic_net_functional(const std::vector<double>& d_of_lag, int q_inverse_exponent);

struct SufficientBound {
  double gamma1 = 0;
  double gamma2 = 0;
  double l2 = 0;        // sqrt(sum a_n^2)
  double sum_tau2 = 0;
  double chaining = 0;  // gamma1 + gamma2 + l2
};

SufficientBound sledd_sufficient_bound(const BlockProfile& b, int K_nets = -1);

/// exp(-C min(t / d_inf, t^2 / d_2^2)).
double tail_bound(double d_inf, double d_2, double t, double C = 0.5);

/// Monte Carlo of E RSledd^2 (squared block square-function supremum).
struct MeanEstimate {
  double mean = 0;
  double std_error = 0;
  std::int64_t samples = 0;
};

MeanEstimate mc_rsledd_squared(const CoeffProfile& p, std::int64_t samples, std::uint64_t seed,
                               Index N = 0);

}  // namespace gafbmo
