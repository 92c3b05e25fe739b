#include "gafbmo/exceptional.hpp"

#include "gafbmo/kernels.hpp"
#include "gafbmo/parallel.hpp"
#include "gafbmo/rng.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gafbmo {

// ---------------------------------------------------------------- Bloch, not BMOA

namespace {

double frac(double x) { return x - std::floor(x); }

// Pattern matched by m, or -1 when no pattern is within tolerance on every entry.
std::int64_t pattern_of(const Eigen::MatrixXd& lambda, std::int64_t m, double tol) {
  const Index r = lambda.rows();
  std::uint64_t bits = 0;
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < r; ++j) {
      const double f = frac(double(m) * lambda(i, j));
      if (f <= tol) continue;
      if (std::abs(f - 0.5) <= tol) {
        bits |= std::uint64_t(1) << (i * r + j);
        continue;
      }
      return -1;
    }
  return std::int64_t(bits);
}

}  // namespace

bool gady_pattern_holds(const Eigen::MatrixXd& lambda, std::uint64_t pattern, std::int64_t m) {
  const Index r = lambda.rows();
  const double tol = std::ldexp(1.0, -2 * int(r));
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < r; ++j) {
      const double w = (pattern >> (i * r + j)) & 1 ? 0.5 : 0.0;
      if (std::abs(frac(double(m) * lambda(i, j)) - w) > tol) return false;
    }
  return true;
}

GadyConstruction gady_construct(int r, std::uint64_t seed, const GadyOptions& opt) {
  require(r >= 2 && r <= 6, "gady_construct: r in [2, 6]");
  const double tol = std::ldexp(1.0, -2 * r);
  const Index n = opt.n > 0 ? opt.n : Index(std::ceil(opt.spread * r * std::ldexp(1.0, 2 * r)));
  const bool search = opt.search_m_table && r <= opt.m_table_max_r;
  const std::int64_t cap = std::int64_t(1) << std::min(62, 4 * r * r);
  const std::uint64_t patterns = std::uint64_t(1) << (r * r);
  for (int attempt = 0; attempt <= opt.max_redraws; ++attempt) {
    GadyParams p;
    p.r = r;
    p.n = n;
    p.seed = seed;
    p.redraws = attempt;
    p.lambda.resize(r, r);
    CounterRng rng(derive_seed(seed, {0x4741ULL, std::uint64_t(attempt)}));
    // stratified: entry j of row i lies in the j-th of r equal slices of [2^i, 2^i + 4^-r]
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j)
        p.lambda(i, j) = std::ldexp(1.0, i + 1) + tol * (double(j) + 1.0 - rng.uniform()) / double(r);
    if (search) {
      std::uint64_t found = 0;
      for (std::int64_t m = 1; m <= cap && found < patterns; ++m) {
        const std::int64_t pat = pattern_of(p.lambda, m, tol);
        if (pat < 0 || p.m_table.count(std::uint64_t(pat))) continue;
        p.m_table[std::uint64_t(pat)] = m;
        ++found;
      }
      if (found < patterns) continue;
      p.m_table_complete = true;
      std::int64_t mmax = 0;
      for (const auto& [k, v] : p.m_table) mmax = std::max(mmax, v);
      p.n0 = (std::int64_t(1) << (2 * r)) * (mmax + 1);
      if (opt.n == 0 && opt.spread <= 0) p.n = Index(p.n0 + 1);
    }
    if (p.n < 1) continue;
    p.modes.clear();
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) p.modes.push_back(Index(std::floor(double(p.n) * p.lambda(i, j))));
    std::vector<Index> sorted = p.modes;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) continue;
    const Index top = *std::max_element(p.modes.begin(), p.modes.end());
    RealVector v = RealVector::Zero(top + 1);
    for (Index k : p.modes) v[k] = 1.0 / double(r);
    GadyConstruction g{p, make_profile(ProfileKind::exceptional, "gady_r" + std::to_string(r), std::move(v),
                                       {{"r", double(r)}, {"n", double(p.n)}})};
    return g;
  }
  throw SearchCapExceeded("gady_construct: no admissible lambda draw within the redraw budget");
}

std::string gady_check(const GadyParams& p) {
  std::ostringstream out;
  const int r = p.r;
  const double tol = std::ldexp(1.0, -2 * r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      const double lo = std::ldexp(1.0, i + 1);
      if (!(p.lambda(i, j) >= lo && p.lambda(i, j) <= lo + tol)) out << "lambda(" << i << "," << j << ") out of range; ";
      const Index k = p.modes[std::size_t(i * r + j)];
      if (double(k) < double(p.n) * lo || double(k) > double(p.n) * (lo + tol))
        out << "mode(" << i << "," << j << ") out of range; ";
    }
  for (const auto& [pat, m] : p.m_table)
    if (!gady_pattern_holds(p.lambda, pat, m)) out << "m(" << pat << ") violates the tolerance; ";
  if (!p.m_table_complete)
    out << "m-table unresolved, n0 unknown; ";
  else if (!(p.n > p.n0))
    out << "n <= n0; ";
  return out.str();
}

SampleStats sample_stats(std::vector<double> values) {
  SampleStats s;
  s.values = values;
  if (values.empty()) return s;
  double a = 0;
  for (double x : values) a += x;
  s.mean = a / double(values.size());
  double v = 0;
  for (double x : values) v += (x - s.mean) * (x - s.mean);
  s.std_dev = values.size() > 1 ? std::sqrt(v / double(values.size() - 1)) : 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t h = values.size() / 2;
  s.median = values.size() % 2 ? values[h] : 0.5 * (values[h - 1] + values[h]);
  return s;
}

Index measurement_grid(Index top_mode) { return std::max<Index>(64, next_pow2(top_mode + 1)); }

std::pair<double, double> star_and_bloch(const Polynomial& f, Index N) {
  const ComplexVector v = eval_grid(f, N);
  const double star = star_norm_grid(v).value;
  Index lowest = 0;
  for (Index k = 0; k < f.coeffs.size(); ++k)
    if (f.coeffs[k] != Complex{}) {
      lowest = f.lo + k;
      break;
    }
  const double bloch = bloch_norm(f, bloch_radii(std::max<Index>(1, lowest), f.top_mode(), 2), N).value;
  return {star, bloch};
}

GadyMeasurement gady_measure(const GadyConstruction& g, Index trials, std::uint64_t seed, Index N) {
  GadyMeasurement m;
  m.grid = N > 0 ? N : measurement_grid(g.profile.degree_cap());
  auto shared = std::make_shared<const CoeffProfile>(g.profile);
  std::vector<double> star(std::size_t(std::max<Index>(0, trials))), bloch(star.size());
  parallel_for(trials, [&](Index t) {
    const GafSample s = sample(shared, derive_seed(seed, {0x4d45ULL, std::uint64_t(t)}));
    const auto [a, b] = star_and_bloch(s.polynomial(), m.grid);
    star[std::size_t(t)] = a;
    bloch[std::size_t(t)] = b;
  });
  m.star = sample_stats(star);
  m.bloch = sample_stats(bloch);
  return m;
}

BlochNotBmoa bloch_not_bmoa(const std::vector<double>& beta, const std::vector<int>& r_seq,
                            const std::vector<std::uint64_t>& seeds, const GadyOptions& opt) {
  require(!beta.empty() && beta.size() == r_seq.size() && beta.size() == seeds.size(),
          "bloch_not_bmoa: beta, r and seeds must have equal non-zero length");
  for (std::size_t i = 0; i < beta.size(); ++i) {
    require(beta[i] > 0.0, "bloch_not_bmoa: beta must be positive");
    if (i > 0) require(beta[i] * r_seq[i] > beta[i - 1] * r_seq[i - 1], "bloch_not_bmoa: beta_i r_i must increase");
  }
  BlochNotBmoa out;
  std::vector<std::pair<Index, double>> terms;
  Index floor_mode = 0;
  for (std::size_t i = 0; i < beta.size(); ++i) {
    GadyOptions o = opt;
    if (o.n == 0) {
      // smallest admissible base frequency above the previous part
      const Index desk = Index(std::ceil(opt.spread * r_seq[i] * std::ldexp(1.0, 2 * r_seq[i])));
      o.n = std::max(desk, floor_mode / 2 + 1);
    }
    GadyConstruction g = gady_construct(r_seq[i], seeds[i], o);
    const Index lo = *std::min_element(g.params.modes.begin(), g.params.modes.end());
    const Index hi = *std::max_element(g.params.modes.begin(), g.params.modes.end());
    if (lo <= floor_mode) throw FrequencyOverlap("bloch_not_bmoa: frequency ranges collide");
    floor_mode = hi;
    for (Index k : g.params.modes) terms.emplace_back(k, beta[i] / double(r_seq[i]));
    out.parts.push_back(g.params);
  }
  RealVector v = RealVector::Zero(floor_mode + 1);
  for (const auto& [k, a] : terms) v[k] = a;
  out.profile = make_profile(ProfileKind::exceptional, "bloch_not_bmoa", std::move(v),
                             {{"parts", double(beta.size())}});
  return out;
}

// ---------------------------------------------------------------- BMO, not VMO

CoeffProfile block_poly_profile(int n_exp, double weight) {
  require(n_exp >= 1 && n_exp <= 24, "block_poly: n = 2^n_exp with 1 <= n_exp <= 24");
  const Index n = Index(1) << n_exp;
  RealVector v = RealVector::Zero(2 * n);
  const double a = weight / std::sqrt(double(n) * std::log(double(n)));
  v.segment(n, n).setConstant(a);
  return make_profile(ProfileKind::exceptional, "block_poly", std::move(v), {{"n_exp", double(n_exp)}});
}

GafSample block_poly(int n_exp, std::uint64_t seed) { return sample(block_poly_profile(n_exp), seed); }

std::vector<int> schedule_exponents(const BlockSchedule& s, int depth) {
  require(depth >= 1, "schedule: depth >= 1");
  std::vector<int> e;
  double cur = s.first;
  for (int k = 0; k < depth; ++k) {
    if (cur > 62) throw DepthInfeasible("schedule: exponent beyond representable range");
    e.push_back(int(cur));
    if (s.kind == BlockSchedule::Kind::tower)
      cur = std::pow(3.0, cur);
    else {
      require(s.c > 1.0, "schedule: ratio c must exceed 1");
      cur = std::max(cur + 1, std::ceil(s.c * cur));
    }
  }
  return e;
}

CoeffProfile bmo_not_vmo(const BlockSchedule& s, const std::vector<double>& a_seq, int depth) {
  require(int(a_seq.size()) >= depth, "bmo_not_vmo: need one weight per level");
  std::vector<int> e;
  try {
    e = schedule_exponents(s, depth);
  } catch (const DepthInfeasible&) {
    throw DepthInfeasible("bmo_not_vmo: schedule exceeds the degree cap 2^24");
  }
  if (e.back() + 1 > 24) throw DepthInfeasible("bmo_not_vmo: schedule exceeds the degree cap 2^24");
  const Index cap = (Index(2) << e.back()) - 1;
  RealVector v = RealVector::Zero(cap + 1);
  for (int k = 0; k < depth; ++k) {
    const Index n = Index(1) << e[std::size_t(k)];
    v.segment(n, n).setConstant(a_seq[std::size_t(k)] / std::sqrt(double(n) * std::log(double(n))));
  }
  std::map<std::string, double> params{{"depth", double(depth)}};
  for (int k = 0; k < depth; ++k) params["exp_" + std::to_string(k + 1)] = e[std::size_t(k)];
  return make_profile(ProfileKind::exceptional, "bmo_not_vmo", std::move(v), params);
}

// ---------------------------------------------------------------- VMOA, not Sledd

double nesting_n0(double eps) {
  require(eps > 0.0, "nesting_n0: eps > 0");
  return std::pow(4.0 * std::log(3.0) / eps, 4.0 / 3.0);
}

std::vector<int> nesting_schedule(int depth, double c) {
  require(depth >= 1 && depth <= 8, "nesting_schedule: depth in [1, 8]");
  require(c > 0.0 && c < 1.0, "nesting_schedule: c in (0, 1)");
  std::vector<int> e;
  double log2_eps = 0.0;  // |J_1| = 1
  for (int l = 0; l < depth; ++l) {
    const double log2_n0 = (4.0 / 3.0) * (std::log2(4.0 * std::log(3.0)) - log2_eps);
    const int k = int(std::floor(log2_n0)) + 1;
    e.push_back(k);
    log2_eps = std::log2(c) - k;
  }
  return e;
}

namespace {

// Normalized covariance K(t)/K(0) of f_n at lag t (lattice units 1/n).
Complex block_corr(double t, double n) {
  if (t == 0.0) return 1.0;
  const double s = std::sin(std::numbers::pi * t / n);
  if (s == 0.0) return 1.0;
  // sum_{m=n}^{2n-1} e(m t / n) = e(t) (e(t) - 1) / (e(t/n) - 1)
  const Complex num = unit_phase(t) * (unit_phase(t) - 1.0);
  const Complex den = Complex(0.0, 2.0 * s) * unit_phase(t / (2.0 * n));
  return num / (den * n);
}

// Samples the complex Gaussian vector at lags `query` given exact values at lags `obs`.
ComplexVector conditional_sample(const std::vector<double>& obs, const ComplexVector& values,
                                 const std::vector<double>& query, double n, double var, CounterRng& rng) {
  const Index a = Index(obs.size()), b = Index(query.size());
  Eigen::MatrixXcd Soo(a, a), Sqo(b, a), Sqq(b, b);
  for (Index i = 0; i < a; ++i)
    for (Index j = 0; j < a; ++j) Soo(i, j) = var * block_corr(obs[i] - obs[j], n);
  for (Index i = 0; i < b; ++i)
    for (Index j = 0; j < a; ++j) Sqo(i, j) = var * block_corr(query[i] - obs[j], n);
  for (Index i = 0; i < b; ++i)
    for (Index j = 0; j < b; ++j) Sqq(i, j) = var * block_corr(query[i] - query[j], n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eo(Soo);
  const double cut = 1e-13 * std::max(1e-300, eo.eigenvalues().maxCoeff());
  Eigen::VectorXd inv = eo.eigenvalues().unaryExpr([&](double x) { return x > cut ? 1.0 / x : 0.0; });
  const Eigen::MatrixXcd pinv = eo.eigenvectors() * inv.asDiagonal() * eo.eigenvectors().adjoint();
  const ComplexVector mean = Sqo * pinv * values;
  Eigen::MatrixXcd cond = Sqq - Sqo * pinv * Sqo.adjoint();
  cond = 0.5 * (cond + cond.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ec(cond);
  ComplexVector w(b);
  for (Index i = 0; i < b; ++i) w[i] = rng.complex_gaussian();
  const Eigen::VectorXd sd = ec.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return mean + ec.eigenvectors() * (sd.asDiagonal() * w);
}

struct LevelState {
  bool success = false;
  Complex lattice_value;
  std::vector<double> check_lags;
  ComplexVector check_values;
  double chosen_u = 0;  // local coordinate of the chosen lattice point
};

}  // namespace

VmoaNotSledd vmoa_not_sledd(int depth, double c, std::uint64_t seed, const NestingOptions& opt) {
  require(opt.check_points >= 2, "vmoa_not_sledd: at least two check points");
  const std::vector<int> e = nesting_schedule(depth, c);
  VmoaNotSledd out;
  out.profile.exponents = e;
  NestedExperiment& X = out.experiment;
  X.depth = depth;
  X.c = c;
  std::vector<LevelState> st(static_cast<std::size_t>(depth));
  int last_success = -1;
  for (int l = 0; l < depth; ++l) {
    NestedLevel L;
    L.exponent = e[std::size_t(l)];
    L.weight = 1.0 / std::sqrt(double(l + 1));
    const double n = std::ldexp(1.0, L.exponent);
    const double logn = L.exponent * std::log(2.0);
    out.profile.amplitude.push_back(L.weight / std::sqrt(n * logn));
    L.interval_length = l == 0 ? 1.0 : c / std::ldexp(1.0, e[std::size_t(l - 1)]);
    const double W = l == 0 ? n : c * std::ldexp(1.0, L.exponent - e[std::size_t(l - 1)]);
    // lattice phase of the left endpoint: exact, since that endpoint is (k - c/2) / n_s
    double phi = 0.0;
    if (last_success >= 0) phi = frac(-std::ldexp(c / 2.0, L.exponent - e[std::size_t(last_success)]));
    const double j_lo = std::ceil(W / 3.0 + phi), j_hi = std::ceil(2.0 * W / 3.0 + phi);
    L.lattice_points = std::max(0.0, j_hi - j_lo);
    CounterRng rng(derive_seed(seed, {0x4e45ULL, std::uint64_t(l)}));
    const double p = std::exp2(-L.exponent / 4.0);  // P(|f(k/n)| > 1/2) = exp(-log n / 4)
    const std::uint64_t first = rng.geometric(p);
    LevelState& S = st[std::size_t(l)];
    if (double(first) < L.lattice_points) {
      L.exceedance = true;
      S.chosen_u = (j_lo + double(first)) - phi;
      const double r2 = 0.25 + rng.exponential(logn);
      S.lattice_value = std::sqrt(r2) * unit_phase(rng.uniform());
      for (int i = 0; i < opt.check_points; ++i)
        S.check_lags.push_back(-c / 2.0 + c * double(i) / double(opt.check_points - 1));
      ComplexVector v0(1);
      v0[0] = S.lattice_value;
      S.check_values = conditional_sample({0.0}, v0, S.check_lags, n, 1.0 / logn, rng);
      L.min_on_subinterval = S.check_values.cwiseAbs().minCoeff();
      L.success = L.min_on_subinterval > 0.25;
    }
    S.success = L.success;
    if (L.success) last_success = l;
    X.levels.push_back(L);
  }
  // values at the nest point x = left endpoint of the deepest interval
  for (int l = 0; l < depth; ++l) {
    NestedLevel& L = X.levels[std::size_t(l)];
    const LevelState& S = st[std::size_t(l)];
    const double n = std::ldexp(1.0, L.exponent);
    const double var = 1.0 / (L.exponent * std::log(2.0));
    CounterRng rng(derive_seed(seed, {0x5856ULL, std::uint64_t(l)}));
    Complex fx;
    if (S.success) {
      double t = -c / 2.0;
      for (int m = l + 1; m < depth; ++m)
        if (st[std::size_t(m)].success)
          t += std::ldexp(st[std::size_t(m)].chosen_u - c / 2.0, L.exponent - X.levels[std::size_t(m)].exponent);
      std::vector<double> obs{0.0};
      obs.insert(obs.end(), S.check_lags.begin(), S.check_lags.end());
      ComplexVector vals(Index(obs.size()));
      vals[0] = S.lattice_value;
      vals.tail(S.check_values.size()) = S.check_values;
      fx = conditional_sample(obs, vals, {t}, n, var, rng)[0];
    } else {
      fx = std::sqrt(var) * rng.complex_gaussian();
    }
    L.value_at_x = std::abs(fx);
    X.rsledd2_at_x += std::norm(fx) / double(l + 1);
    if (L.success) X.success_sum += 1.0 / (16.0 * double(l + 1));
  }
  return out;
}

// ---------------------------------------------------------------- Sledd non-separability

Polynomial nonsep_member(int j) {
  require(j >= 1 && j <= 20, "nonsep_member: 1 <= j <= 20");
  const Index N = Index(1) << j;
  Polynomial g;
  g.lo = N;  // modes 2^{j+1} + k, |k| <= 2^j
  g.coeffs.resize(2 * N + 1);
  const double norm = 1.0 / double(N + 1);
  for (Index k = -N; k <= N; ++k) {
    const double w = 1.0 - double(k < 0 ? -k : k) / double(N + 1);
    g.coeffs[k + N] = norm * w * unit_phase(double(k) / double(j));
  }
  return g;
}

NonsepFamily sledd_nonsep_family(const std::vector<int>& j_list, Index N) {
  require(!j_list.empty() && j_list.size() <= 6, "sledd_nonsep_family: 1..6 members");
  for (int j : j_list) require(j % 5 == 0 && j >= 5 && j <= 20, "sledd_nonsep_family: j in {5, 10, 15, 20}");
  NonsepFamily fam;
  fam.j_list = j_list;
  const int top_j = *std::max_element(j_list.begin(), j_list.end());
  const Index top = 3 * (Index(1) << top_j);
  fam.grid = N > 0 ? N : next_pow2(2 * top + 1);
  std::vector<Polynomial> members;
  for (int j : j_list) members.push_back(nonsep_member(j));
  const std::uint64_t count = std::uint64_t(1) << j_list.size();
  for (std::uint64_t a = 0; a < count; ++a) fam.subsets.push_back(a);
  fam.distance = Eigen::MatrixXd::Zero(Index(count), Index(count));
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
  for (std::uint64_t a = 0; a < count; ++a)
    for (std::uint64_t b = a + 1; b < count; ++b) pairs.emplace_back(a, b);
  parallel_for(Index(pairs.size()), [&](Index w) {
    const auto [a, b] = pairs[std::size_t(w)];
    Polynomial d;
    d.lo = 0;
    d.coeffs = ComplexVector::Zero(top + 1);
    for (std::size_t i = 0; i < members.size(); ++i) {
      const double sgn = double(int((a >> i) & 1) - int((b >> i) & 1));
      if (sgn == 0.0) continue;
      d.coeffs.segment(members[i].lo, members[i].coeffs.size()) += sgn * members[i].coeffs;
    }
    const double v = sledd_T(d, fam.grid).value;
    fam.distance(Index(a), Index(b)) = v;
    fam.distance(Index(b), Index(a)) = v;
  });
  return fam;
}

}  // namespace gafbmo
