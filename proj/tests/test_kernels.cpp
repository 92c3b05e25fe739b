#include "gafbmo/kernels.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace gafbmo;

TEST(Fejer, SmallCases) {
  const auto k0 = fejer_coeffs(0);
  EXPECT_EQ(k0.lo, 0);
  ASSERT_EQ(k0.coeffs.size(), 1);
  EXPECT_DOUBLE_EQ(k0(0), 1.0);
  const auto k2 = fejer_coeffs(2);
  EXPECT_EQ(k2.lo, -2);
  EXPECT_EQ(k2.hi(), 2);
  EXPECT_DOUBLE_EQ(k2(-2), 1.0 / 3);
  EXPECT_DOUBLE_EQ(k2(-1), 2.0 / 3);
  EXPECT_DOUBLE_EQ(k2(0), 1.0);
  EXPECT_DOUBLE_EQ(k2(1), 2.0 / 3);
  EXPECT_DOUBLE_EQ(k2(2), 1.0 / 3);
  EXPECT_DOUBLE_EQ(k2(3), 0.0);
}

TEST(Fejer, CoefficientSumIsValueAtOne) {
  const auto k8 = fejer_coeffs(8);
  EXPECT_NEAR(k8.coeffs.sum(), 9.0, 1e-12);
  EXPECT_NEAR(oracle::fejer_sum(8, 0.0), 9.0, 1e-12);
  EXPECT_NEAR(fejer_eval(8, 0.0), 9.0, 1e-12);
}

TEST(Fejer, ClosedFormMatchesCoefficientSum) {
  EXPECT_DOUBLE_EQ(fejer_eval(3, 0.0), 4.0);
  EXPECT_NEAR(fejer_eval(3, 0.25), 0.0, 1e-14);
  EXPECT_NEAR(oracle::fejer_sum(3, 0.25), 0.0, 1e-14);
  for (long n : {0L, 1L, 3L, 7L, 20L})
    for (int i = 0; i < 97; ++i) {
      const double t = double(i) / 97.0;
      EXPECT_NEAR(fejer_eval(n, t), oracle::fejer_sum(n, t), 1e-11) << n << " " << t;
    }
}

TEST(Fejer, DecayEnvelope) {
  for (long n : {1L, 4L, 16L, 64L})
    for (int i = 1; i < 200; ++i) {
      const double t = double(i) / 200.0;
      const double gap = std::norm(unit_phase(t) - 1.0);
      EXPECT_LE(fejer_eval(n, t), 4.0 / ((n + 1) * gap) + 1e-12);
    }
}

TEST(Fejer, UnitMassAndPositivityOnGrid) {
  for (int n = 0; n <= 10; ++n) {
    const Index N = next_pow2(8 * (n + 1));
    const ComplexVector v = eval_grid(fejer_coeffs(n), N);
    EXPECT_GE(v.real().minCoeff(), -1e-12);
    EXPECT_NEAR(v.cwiseAbs().sum() / double(N), 1.0, 1e-6);
  }
}

TEST(Fejer, AnalyticPart) {
  const auto a0 = analytic_fejer_coeffs(0);
  EXPECT_DOUBLE_EQ(a0(0), 1.0);
  const auto a2 = analytic_fejer_coeffs(2);
  EXPECT_DOUBLE_EQ(a2(0), 1.0);
  EXPECT_DOUBLE_EQ(a2(1), 2.0 / 3);
  EXPECT_DOUBLE_EQ(a2(2), 1.0 / 3);
  EXPECT_DOUBLE_EQ(analytic_fejer_coeffs(4)(5), 0.0);
  EXPECT_DOUBLE_EQ(a2(-1), 0.0);
}

TEST(Block, Indicator) {
  const auto r0 = block_coeffs(0);
  EXPECT_EQ(r0.lo, 1);
  EXPECT_EQ(r0.hi(), 1);
  EXPECT_DOUBLE_EQ(r0(1), 1.0);
  const auto r2 = block_coeffs(2);
  for (Index k = 4; k <= 7; ++k) EXPECT_DOUBLE_EQ(r2(k), 1.0);
  EXPECT_DOUBLE_EQ(r2(8), 0.0);
  EXPECT_DOUBLE_EQ(r2(3), 0.0);
}

TEST(Trapezoid, ZeroIndex) {
  const auto s = trapezoid_symmetric_coeffs(0);
  EXPECT_EQ(s.lo, -1);
  EXPECT_DOUBLE_EQ(s(-1), 0.5);
  EXPECT_DOUBLE_EQ(s(0), 1.0);
  EXPECT_DOUBLE_EQ(s(1), 0.5);
  const auto a = trapezoid_coeffs(0);
  EXPECT_EQ(a.lo, 0);
  EXPECT_DOUBLE_EQ(a(0), 1.0);
  EXPECT_DOUBLE_EQ(a(1), 0.5);
  EXPECT_DOUBLE_EQ(a(-1), 0.0);
}

TEST(Trapezoid, PlateauAndSupport) {
  EXPECT_DOUBLE_EQ(trapezoid_coeffs(3)(10), 1.0);
  EXPECT_DOUBLE_EQ(trapezoid_coeffs(3)(32), 0.0);
  for (int n = 1; n <= 12; ++n) {
    const auto t = trapezoid_coeffs(n);
    const Index A = Index(1) << n;
    for (Index k = A; k <= 2 * A; ++k) ASSERT_DOUBLE_EQ(t(k), 1.0);
    for (Index k = 0; k <= A / 2; ++k) ASSERT_DOUBLE_EQ(t(k), 0.0);
    for (Index k = 4 * A; k <= 4 * A + 8; ++k) ASSERT_DOUBLE_EQ(t(k), 0.0);
    EXPECT_GE(t.coeffs.minCoeff(), 0.0);
    EXPECT_LE(t.coeffs.maxCoeff(), 1.0);
  }
}

TEST(Trapezoid, IntegerTableMatchesExactFejerDifference) {
  for (int n = 0; n <= 12; ++n) {
    const std::int64_t reach = (std::int64_t(4) << n) + 4;
    const std::int64_t den = trapezoid_denominator(n);
    for (std::int64_t k = -reach; k <= reach; ++k) {
      const oracle::Rational expect = oracle::trapezoid_exact(n, k);
      const oracle::Rational got(trapezoid_numerator(n, k), den);
      ASSERT_TRUE(got == expect) << "n=" << n << " k=" << k;
    }
  }
}

TEST(Trapezoid, EachParityClassSumsToOne) {
  // even-index and odd-index kernels each tile the modes >= 4 exactly
  for (std::int64_t K = 4; K <= 4096; ++K) {
    oracle::Rational even, odd;
    for (int n = 0; n <= 14; ++n) {
      const oracle::Rational v(trapezoid_numerator(n, K), trapezoid_denominator(n));
      if (n % 2) odd = odd + v;
      else even = even + v;
    }
    ASSERT_TRUE(even == oracle::Rational(1)) << K;
    ASSERT_TRUE(odd == oracle::Rational(1)) << K;
  }
}

TEST(Trapezoid, L1NormAndEnvelopeOnGrid) {
  for (int n = 0; n <= 10; ++n) {
    const Index N = Index(1) << (n + 5);
    const ComplexVector v = eval_grid(trapezoid_symmetric_coeffs(n), N);
    EXPECT_LE(v.cwiseAbs().sum() / double(N), 6.0 + 1e-3) << n;
    for (Index j = 1; j < N; ++j) {
      const double gap = std::norm(unit_phase(double(j) / double(N)) - 1.0);
      ASSERT_LE(std::abs(v[j]), 20.0 * std::exp2(-n) / gap + 1e-9) << n << " " << j;
    }
  }
}

TEST(Convolve, Examples) {
  Polynomial z5;
  z5.lo = 0;
  z5.coeffs = ComplexVector::Zero(6);
  z5.coeffs[5] = 1.0;
  const Polynomial a = convolve(z5, block_coeffs(2));
  EXPECT_EQ(a[5], Complex(1.0));
  const Polynomial b = convolve(z5, block_coeffs(3));
  EXPECT_EQ(b.coeffs.cwiseAbs().sum(), 0.0);
  Polynomial z10;
  z10.lo = 0;
  z10.coeffs = ComplexVector::Zero(11);
  z10.coeffs[10] = 1.0;
  EXPECT_EQ(convolve(z10, trapezoid_coeffs(3))[10], Complex(1.0));
}

TEST(Convolve, LinearAndBlockIdempotent) {
  Polynomial f, g;
  f.lo = g.lo = 0;
  f.coeffs = ComplexVector::Random(40);
  g.coeffs = ComplexVector::Random(40);
  Polynomial h = f;
  h.coeffs = 2.0 * f.coeffs - 0.5 * g.coeffs;
  for (int n = 0; n <= 5; ++n) {
    const auto R = block_coeffs(n);
    const Polynomial ch = convolve(h, R), cf = convolve(f, R), cg = convolve(g, R);
    EXPECT_LE((ch.coeffs - (2.0 * cf.coeffs - 0.5 * cg.coeffs)).norm(), 1e-12);
    const Polynomial twice = convolve(cf, R);
    EXPECT_EQ(twice.coeffs, cf.coeffs);
  }
}

TEST(EvalGrid, Examples) {
  Polynomial one;
  one.lo = 0;
  one.coeffs = ComplexVector::Ones(1);
  const ComplexVector v1 = eval_grid(one, 8);
  for (Index j = 0; j < 8; ++j) EXPECT_NEAR(std::abs(v1[j] - 1.0), 0.0, 1e-15);
  Polynomial z;
  z.lo = 0;
  z.coeffs = ComplexVector::Zero(2);
  z.coeffs[1] = 1.0;
  const ComplexVector v = eval_grid(z, 4);
  const Complex expect[4] = {1.0, Complex(0, 1), -1.0, Complex(0, -1)};
  for (int j = 0; j < 4; ++j) EXPECT_NEAR(std::abs(v[j] - expect[j]), 0.0, 1e-15);
  const ComplexVector k2 = eval_grid(fejer_coeffs(2), 16);
  for (Index j = 0; j < 16; ++j) EXPECT_NEAR(k2[j].real(), fejer_eval(2, double(j) / 16), 1e-12);
}

TEST(EvalGrid, RejectsSmallGrid) {
  Polynomial f;
  f.lo = 0;
  f.coeffs = ComplexVector::Ones(9);
  EXPECT_THROW(eval_grid(f, 8), GridTooSmall);
  EXPECT_NO_THROW(eval_grid(f, 16));
}

TEST(EvalGrid, MatchesDirectSummation) {
  Polynomial f;
  f.lo = -7;
  f.coeffs = ComplexVector::Random(30);
  const Index N = 64;
  const ComplexVector v = eval_grid(f, N);
  for (Index j = 0; j < N; ++j)
    EXPECT_LE(std::abs(v[j] - oracle::eval_direct(f.coeffs, f.lo, double(j) / N)), 1e-12);
}
