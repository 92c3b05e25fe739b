#pragma once

#include "gafbmo/core.hpp"
#include "gafbmo/kernels.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace gafbmo {

enum class ProfileKind { power_law, lacunary, explicit_table, block_constant, exceptional };

std::string to_string(ProfileKind kind);

/// Deterministic coefficient profile a_0..a_cap (a_0 = 0, a_n >= 0).
struct CoeffProfile {
  ProfileKind kind = ProfileKind::explicit_table;
  std::string label;
  std::map<std::string, double> params;
  RealVector values;

  Index degree_cap() const { return values.size() - 1; }
  double operator[](Index n) const { return n < values.size() ? values[n] : 0.0; }
};

CoeffProfile make_profile(ProfileKind kind, std::string label, RealVector values,
                          std::map<std::string, double> params = {});

/// a_n = n^{-alpha} for 1 <= n <= cap.
CoeffProfile power_law_profile(double alpha, Index cap);
/// a_{2^k} = weights[k], zero elsewhere.
CoeffProfile lacunary_profile(const std::vector<double>& weights);
/// Flat inside each dyadic block with block energy sigma2[k]; cap = 2^K' - 1.
CoeffProfile block_constant_profile(const std::vector<double>& sigma2);
CoeffProfile explicit_profile(const RealVector& values);

/// Dyadic block statistics.
struct BlockProfile {
  RealVector sigma2;  // block energies
  RealVector tau2;    // suffix suprema of sigma2
  RealVector b2;      // sum_{n=1}^{k} 4^n sigma2_n

  int blocks() const { return static_cast<int>(sigma2.size()); }
};

BlockProfile block_stats(const CoeffProfile& p);
BlockProfile block_stats_from_sigma2(const RealVector& sigma2);

/// Partial sums of the sufficient conditions plus heuristic convergence flags.
struct ConditionReport {
  int blocks = 0;
  double sum_sigma = 0;
  double sum_sigma2 = 0;
  double sum_k_sigma2 = 0;
  double sum_tau2 = 0;
  double hasi_sum = 0;
  bool sum_sigma_converging = false;
  bool sum_sigma2_converging = false;
  bool sum_k_sigma2_converging = false;
  bool sum_tau2_converging = false;
  bool hasi_converging = false;
  bool dyadic_regular = false;
};

ConditionReport check_conditions(const BlockProfile& b);

/// Geometric-decay heuristic on the last quarter of a term sequence.
bool ratio_test_converging(const std::vector<double>& terms);

/// One random analytic polynomial sum a_n xi_n z^n.
struct GafSample {
  std::shared_ptr<const CoeffProfile> profile;
  std::uint64_t seed = 0;
  ComplexVector coeffs;

  Polynomial polynomial() const { return analytic(coeffs); }
  Index top_mode() const;
};

/// xi_n depends only on (seed, n).
GafSample sample(std::shared_ptr<const CoeffProfile> profile, std::uint64_t seed);
GafSample sample(const CoeffProfile& profile, std::uint64_t seed);

struct LacunaryExtract {
  std::vector<int> indices;
  double weighted_sum = 0;  // sum_k index_k * sigma2[index_k]
};

/// Lacunary sub-sequence of block indices with consecutive ratio > C.
LacunaryExtract lacunary_extract(const BlockProfile& b, double C);

/// Neumaier-compensated sum.
double compensated_sum(const double* x, Index n);

}  // namespace gafbmo
