#pragma once

#include "gafbmo/core.hpp"
#include "gafbmo/gaf.hpp"

#include <unsupported/Eigen/FFT>

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace gafbmo {

/// Anti-diagonal stream c_d = a_{d+1} xi_{d+1}, d = 0..2n-2.
ComplexVector hankel_symbol(const CoeffProfile& p, Index n, std::uint64_t seed);

/// Dense n x n matrix A_ij = c_{i+j}.
Eigen::MatrixXcd build_hankel(const ComplexVector& c, Index n);

/// Matrix-free Hankel operator with FFT products.
class HankelOperator {
 public:
  HankelOperator(const ComplexVector& c, Index n);

  Index rows() const { return n_; }
  /// y = A v
  ComplexVector apply(const ComplexVector& v) const;
  /// y = A^* v (A is complex symmetric, so A^* v = conj(A conj v)).
  ComplexVector apply_adjoint(const ComplexVector& v) const;

 private:
  Index n_;
  Index m_;
  ComplexVector c_hat_;
  mutable Eigen::FFT<double> fft_;
};

struct NormResult {
  double value = 0;
  Index iterations = 0;
  double residual = 0;  // relative change of the Rayleigh quotient at exit
  bool converged = false;
};

struct PowerOptions {
  double tol = 1e-8;
  Index max_iter = 10000;
  std::uint64_t seed = 0x5eedULL;
};

/// Largest singular value by power iteration on A^* A. Throws NonConvergence.
NormResult op_norm(const HankelOperator& A, const PowerOptions& opt = {});
NormResult op_norm(const Eigen::MatrixXcd& A, const PowerOptions& opt = {});

/// sum_{k=0}^{L} sup_{k <= m <= L} sigma_m^2 with L = ceil(log2(2n)).
double theorem_bound(const BlockProfile& b, Index n);

/// sup over the N-grid of |sum_d (1 - |n-1-d|/n) c_d z^d|.
double meckes_lower(const ComplexVector& c, Index n, Index N = 0);

struct HankelTrial {
  Index dim = 0;
  Index trial = 0;
  std::uint64_t seed = 0;
  double norm = 0;
  double bound = 0;
  double lower_bound = 0;
  Index iterations = 0;
  double residual = 0;
};

struct HankelDimSummary {
  Index dim = 0;
  Index trials = 0;
  double mean_norm = 0;
  double mean_norm2 = 0;
  double var_norm2 = 0;
  double bound = 0;
  double mean_lower = 0;
  double ratio = 0;  // mean_norm2 / bound
};

struct NormExperiment {
  std::string profile_label;
  std::uint64_t master_seed = 0;
  std::vector<HankelTrial> trials;
  std::vector<HankelDimSummary> summary;
};

std::uint64_t hankel_trial_seed(std::uint64_t master, Index dim, Index trial);

NormExperiment run_norm_experiment(const CoeffProfile& p, const std::vector<Index>& dims, Index trials,
                                   std::uint64_t master_seed, const PowerOptions& opt = {});

std::vector<HankelDimSummary> summarize(const std::vector<HankelTrial>& trials);

}  // namespace gafbmo
