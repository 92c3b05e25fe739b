#include "gafbmo/hankel.hpp"
#include "gafbmo/parallel.hpp"
#include "gafbmo/rng.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace gafbmo;

namespace {

ComplexVector random_symbol(std::uint64_t seed, Index len) {
  CounterRng rng(seed);
  ComplexVector c(len);
  for (Index i = 0; i < len; ++i) c[i] = rng.complex_gaussian();
  return c;
}

PowerOptions tight() {
  PowerOptions o;
  o.tol = 1e-13;
  o.max_iter = 200000;
  return o;
}

}  // namespace

TEST(BuildHankel, Examples) {
  ComplexVector c(1);
  c << Complex(2, 1);
  EXPECT_EQ(build_hankel(c, 1)(0, 0), Complex(2, 1));
  ComplexVector d(3);
  d << 1.0, 2.0, 3.0;
  const Eigen::MatrixXcd A = build_hankel(d, 2);
  EXPECT_EQ(A(0, 0), Complex(1));
  EXPECT_EQ(A(0, 1), Complex(2));
  EXPECT_EQ(A(1, 0), Complex(2));
  EXPECT_EQ(A(1, 1), Complex(3));
  const ComplexVector e = random_symbol(1, 5);
  EXPECT_EQ(build_hankel(e, 3)(2, 2), e[4]);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) EXPECT_EQ(build_hankel(e, 3)(i, j), e[i + j]);
}

TEST(OpNorm, ZeroAndTwoByTwo) {
  EXPECT_EQ(op_norm(HankelOperator(ComplexVector::Zero(7), 4)).value, 0.0);
  ComplexVector d(3);
  d << 1.0, 2.0, 3.0;
  const double expect = 2 + std::sqrt(5.0);
  EXPECT_NEAR(op_norm(build_hankel(d, 2), tight()).value, expect, 1e-9);
  EXPECT_NEAR(op_norm(HankelOperator(d, 2), tight()).value, expect, 1e-9);
  EXPECT_NEAR(oracle::dense_norm(build_hankel(d, 2)), expect, 1e-12);
}

TEST(OpNorm, AtLeastLargestEntry) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const ComplexVector c = random_symbol(10 + s, 2 * 40 - 1);
    EXPECT_GE(op_norm(HankelOperator(c, 40)).value, c.cwiseAbs().maxCoeff() * (1 - 1e-9));
  }
}

TEST(OpNorm, FastProductMatchesDense) {
  for (Index n : {1, 2, 5, 31, 64, 100}) {
    const ComplexVector c = random_symbol(std::uint64_t(n), 2 * n - 1);
    const HankelOperator H(c, n);
    const Eigen::MatrixXcd A = build_hankel(c, n);
    const ComplexVector v = random_symbol(1000 + std::uint64_t(n), n);
    EXPECT_LE((H.apply(v) - A * v).norm(), 1e-11 * (A * v).norm() + 1e-14);
    EXPECT_LE((H.apply_adjoint(v) - A.adjoint() * v).norm(), 1e-11 * (A * v).norm() + 1e-14);
  }
}

TEST(OpNorm, MatchesDenseSvd) {
  for (Index n : {8, 33, 120}) {
    const ComplexVector c = random_symbol(50 + std::uint64_t(n), 2 * n - 1);
    const double svd = oracle::dense_norm(build_hankel(c, n));
    const NormResult r = op_norm(HankelOperator(c, n), tight());
    EXPECT_TRUE(r.converged);
    EXPECT_LE(r.value, svd * (1 + 1e-12));
    EXPECT_NEAR(r.value, svd, 1e-5 * svd) << n;
  }
}

TEST(OpNorm, TransposeAgrees) {
  const ComplexVector c = random_symbol(3, 2 * 50 - 1);
  const Eigen::MatrixXcd A = build_hankel(c, 50);
  const Eigen::MatrixXcd At = A.transpose();
  EXPECT_NEAR(op_norm(A, tight()).value, op_norm(At, tight()).value, 1e-6 * op_norm(A).value);
}

TEST(OpNorm, MonotoneInDimension) {
  const ComplexVector c = random_symbol(4, 2 * 64 - 1);
  double prev = 0;
  for (Index n = 1; n <= 64; ++n) {
    const double v = oracle::dense_norm(build_hankel(c, n));
    const double w = op_norm(HankelOperator(c, n), tight()).value;
    EXPECT_GE(v, prev * (1 - 1e-12));
    EXPECT_GE(w, prev * (1 - 1e-5));
    prev = v;
  }
}

TEST(OpNorm, NonConvergenceCarriesEstimate) {
  const ComplexVector c = random_symbol(5, 2 * 64 - 1);
  PowerOptions o;
  o.max_iter = 1;
  try {
    op_norm(HankelOperator(c, 64), o);
    FAIL() << "expected NonConvergence";
  } catch (const NonConvergence& e) {
    EXPECT_GT(e.best_estimate, 0.0);
    EXPECT_EQ(e.iterations, 1);
  }
}

TEST(TheoremBound, Examples) {
  EXPECT_EQ(theorem_bound(block_stats_from_sigma2(RealVector::Zero(12)), 100), 0.0);
  // n = 100: L = ceil(log2 200) = 8
  EXPECT_EQ(theorem_bound(block_stats_from_sigma2(RealVector::Ones(12)), 100), 9.0);
  for (Index n : {64, 100, 1024}) {
    int L = 0;
    while ((Index(1) << L) < 2 * n) ++L;
    const BlockProfile kac = block_stats(power_law_profile(0.0, (Index(2) << L) - 1));
    double direct = 0;
    for (int k = 0; k <= L; ++k) {
      double sup = 0;
      for (int m = k; m <= L; ++m) sup = std::max(sup, std::ldexp(1.0, m));
      direct += sup;
    }
    EXPECT_EQ(direct, double(L + 1) * std::ldexp(1.0, L));
    EXPECT_EQ(theorem_bound(kac, n), direct) << n;
  }
}

TEST(Meckes, ZeroAndSingleTerm) {
  EXPECT_EQ(meckes_lower(ComplexVector::Zero(9), 5), 0.0);
  ComplexVector c = ComplexVector::Zero(9);
  c[4] = Complex(0.3, -0.4);
  EXPECT_NEAR(meckes_lower(c, 5), 0.5, 1e-15);
  ComplexVector e = ComplexVector::Zero(9);
  e[1] = 1.0;  // weight 1 - 3/5
  EXPECT_NEAR(meckes_lower(e, 5), 0.4, 1e-15);
}

TEST(Meckes, MatchesDirectSupAndBoundsNorm) {
  const CoeffProfile p = power_law_profile(0.0, 255);
  for (Index t = 0; t < 100; ++t) {
    const Index n = 16 + (t % 5) * 20;
    const ComplexVector c = hankel_symbol(p, n, 700 + std::uint64_t(t));
    const double m = meckes_lower(c, n);
    EXPECT_LE(m, op_norm(HankelOperator(c, n)).value * (1 + 1e-9)) << t;
    if (t < 3) {
      const Index N = next_pow2(8 * (2 * n - 1));
      ComplexVector w(2 * n - 1);
      for (Index d = 0; d < 2 * n - 1; ++d) w[d] = c[d] * (1.0 - std::abs(double(n - 1 - d)) / double(n));
      double sup = 0;
      for (Index j = 0; j < N; ++j) sup = std::max(sup, std::abs(oracle::eval_direct(w, 0, double(j) / N)));
      EXPECT_NEAR(m, sup, 1e-10 * sup);
    }
  }
}

TEST(Symbol, UsesShiftedCoefficientStream) {
  RealVector a = RealVector::Zero(16);
  a.tail(15).setConstant(1.0);
  const ComplexVector c = hankel_symbol(explicit_profile(a), 4, 9);
  for (Index d = 0; d < 7; ++d) EXPECT_EQ(c[d], complex_gaussian_at(9, std::uint64_t(d + 1)));
}

TEST(Experiment, EmptyAndDeterministic) {
  const CoeffProfile p = power_law_profile(0.5, 1023);
  EXPECT_TRUE(run_norm_experiment(p, {64}, 0, 1).trials.empty());
  set_default_threads(1);
  const NormExperiment a = run_norm_experiment(p, {32, 64}, 6, 11);
  set_default_threads(4);
  const NormExperiment b = run_norm_experiment(p, {32, 64}, 6, 11);
  set_default_threads(1);
  ASSERT_EQ(a.trials.size(), 12u);
  for (std::size_t i = 0; i < a.trials.size(); ++i) {
    EXPECT_EQ(a.trials[i].norm, b.trials[i].norm);
    EXPECT_EQ(a.trials[i].seed, b.trials[i].seed);
    EXPECT_GE(a.trials[i].norm, 0.0);
  }
  ASSERT_EQ(a.summary.size(), 2u);
  double m = 0;
  for (int i = 0; i < 6; ++i) m += a.trials[std::size_t(i)].norm;
  EXPECT_NEAR(a.summary[0].mean_norm, m / 6, 1e-12);
  EXPECT_NEAR(a.summary[0].ratio, a.summary[0].mean_norm2 / a.summary[0].bound, 1e-15);
}

TEST(Experiment, SummableProfileHasBoundedSecondMoment) {
  const CoeffProfile p = power_law_profile(1.0, 4095);
  const NormExperiment e = run_norm_experiment(p, {64, 256, 1024}, 30, 3);
  const double first = e.summary.front().mean_norm2, last = e.summary.back().mean_norm2;
  EXPECT_LT(last, 2.0 * first);
}
