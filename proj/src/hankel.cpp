#include "gafbmo/hankel.hpp"

#include "gafbmo/kernels.hpp"
#include "gafbmo/parallel.hpp"
#include "gafbmo/rng.hpp"

#include <algorithm>
#include <cmath>

namespace gafbmo {

ComplexVector hankel_symbol(const CoeffProfile& p, Index n, std::uint64_t seed) {
  require(n >= 1, "hankel_symbol: n >= 1");
  require(p.degree_cap() >= 2 * n - 1, "hankel_symbol: profile too short for this dimension");
  ComplexVector c(2 * n - 1);
  for (Index d = 0; d < 2 * n - 1; ++d)
    c[d] = p.values[d + 1] == 0.0 ? Complex{} : p.values[d + 1] * complex_gaussian_at(seed, std::uint64_t(d + 1));
  return c;
}

Eigen::MatrixXcd build_hankel(const ComplexVector& c, Index n) {
  require(c.size() >= 2 * n - 1, "build_hankel: need 2n - 1 anti-diagonals");
  Eigen::MatrixXcd A(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) A(i, j) = c[i + j];
  return A;
}

HankelOperator::HankelOperator(const ComplexVector& c, Index n) : n_(n), m_(next_pow2(2 * n - 1)) {
  require(n >= 1 && c.size() >= 2 * n - 1, "HankelOperator: need 2n - 1 anti-diagonals");
  ComplexVector padded = ComplexVector::Zero(m_);
  padded.head(2 * n - 1) = c.head(2 * n - 1);
  c_hat_.resize(m_);
  fft_.fwd(c_hat_, padded);
}

ComplexVector HankelOperator::apply(const ComplexVector& v) const {
  // y_i = sum_j c_{i+j} v_j = (c * reverse(v))_{i+n-1}; circular size m >= 2n-1 keeps
  // indices n-1..2n-2 free of wrap-around.
  ComplexVector w = ComplexVector::Zero(m_);
  for (Index j = 0; j < n_; ++j) w[n_ - 1 - j] = v[j];
  ComplexVector w_hat(m_);
  fft_.fwd(w_hat, w);
  w_hat.array() *= c_hat_.array();
  ComplexVector conv(m_);
  fft_.inv(conv, w_hat);
  return conv.segment(n_ - 1, n_);
}

ComplexVector HankelOperator::apply_adjoint(const ComplexVector& v) const {
  return apply(v.conjugate()).conjugate();
}

namespace {

template <typename Apply, typename ApplyAdj>
NormResult power_iteration(Index n, Apply&& A, ApplyAdj&& At, const PowerOptions& opt) {
  require(n >= 1, "op_norm: empty operator");
  CounterRng rng(opt.seed);
  ComplexVector v(n);
  for (Index i = 0; i < n; ++i) v[i] = rng.complex_gaussian();
  v.normalize();
  NormResult r;
  double q_prev = -1;
  for (Index it = 1; it <= opt.max_iter; ++it) {
    const ComplexVector w = A(v);
    const double q = w.squaredNorm();
    r.iterations = it;
    r.value = std::sqrt(q);
    if (q == 0.0) {
      r.residual = 0;
      r.converged = true;
      return r;
    }
    r.residual = q_prev < 0 ? 1.0 : std::abs(q - q_prev) / q;
    if (q_prev >= 0 && r.residual <= opt.tol) {
      r.converged = true;
      return r;
    }
    q_prev = q;
    ComplexVector u = At(w);
    const double un = u.norm();
    if (un == 0.0) {
      r.converged = true;
      return r;
    }
    v = u / un;
  }
  throw NonConvergence("op_norm: power iteration hit the iteration cap", r.value, r.iterations, r.residual);
}

}  // namespace

NormResult op_norm(const HankelOperator& A, const PowerOptions& opt) {
  return power_iteration(
      A.rows(), [&](const ComplexVector& v) { return A.apply(v); },
      [&](const ComplexVector& v) { return A.apply_adjoint(v); }, opt);
}

NormResult op_norm(const Eigen::MatrixXcd& A, const PowerOptions& opt) {
  require(A.rows() == A.cols(), "op_norm: square matrix expected");
  return power_iteration(
      A.cols(), [&](const ComplexVector& v) -> ComplexVector { return A * v; },
      [&](const ComplexVector& v) -> ComplexVector { return A.adjoint() * v; }, opt);
}

double theorem_bound(const BlockProfile& b, Index n) {
  require(n >= 1, "theorem_bound: n >= 1");
  int L = 0;
  while ((Index(1) << L) < 2 * n) ++L;
  require(b.blocks() >= L + 1, "theorem_bound: profile must cover blocks 0..ceil(log2(2n))");
  double total = 0;
  double run = 0;
  std::vector<double> sup(std::size_t(L) + 1);
  for (int k = L; k >= 0; --k) {
    run = std::max(run, b.sigma2[k]);
    sup[std::size_t(k)] = run;
  }
  for (int k = 0; k <= L; ++k) total += sup[std::size_t(k)];
  return total;
}

double meckes_lower(const ComplexVector& c, Index n, Index N) {
  require(n >= 1 && c.size() >= 2 * n - 1, "meckes_lower: need 2n - 1 anti-diagonals");
  if (N == 0) N = next_pow2(8 * (2 * n - 1));
  Polynomial g;
  g.lo = 0;
  g.coeffs.resize(2 * n - 1);
  for (Index d = 0; d < 2 * n - 1; ++d) {
    const Index off = d > n - 1 ? d - (n - 1) : (n - 1) - d;
    g.coeffs[d] = c[d] * (1.0 - double(off) / double(n));
  }
  const ComplexVector v = eval_grid(g, N);
  return v.cwiseAbs().maxCoeff();
}

std::uint64_t hankel_trial_seed(std::uint64_t master, Index dim, Index trial) {
  return derive_seed(master, {0x48414e4bULL, std::uint64_t(dim), std::uint64_t(trial)});
}

std::vector<HankelDimSummary> summarize(const std::vector<HankelTrial>& trials) {
  std::vector<HankelDimSummary> out;
  for (const HankelTrial& t : trials) {
    auto it = std::find_if(out.begin(), out.end(), [&](const HankelDimSummary& s) { return s.dim == t.dim; });
    if (it == out.end()) {
      out.push_back({});
      it = out.end() - 1;
      it->dim = t.dim;
      it->bound = t.bound;
    }
    it->trials += 1;
    it->mean_norm += t.norm;
    it->mean_norm2 += t.norm * t.norm;
    it->mean_lower += t.lower_bound;
  }
  for (auto& s : out) {
    const double k = double(s.trials);
    s.mean_norm /= k;
    s.mean_norm2 /= k;
    s.mean_lower /= k;
    double v = 0;
    for (const HankelTrial& t : trials)
      if (t.dim == s.dim) v += std::pow(t.norm * t.norm - s.mean_norm2, 2);
    s.var_norm2 = s.trials > 1 ? v / (k - 1) : 0.0;
    s.ratio = s.bound > 0 ? s.mean_norm2 / s.bound : 0.0;
  }
  return out;
}

NormExperiment run_norm_experiment(const CoeffProfile& p, const std::vector<Index>& dims, Index trials,
                                   std::uint64_t master_seed, const PowerOptions& opt) {
  NormExperiment e;
  e.profile_label = p.label;
  e.master_seed = master_seed;
  if (trials <= 0 || dims.empty()) return e;
  const BlockProfile b = block_stats(p);
  std::vector<double> bounds;
  for (Index n : dims) bounds.push_back(theorem_bound(b, n));
  const Index total = Index(dims.size()) * trials;
  e.trials.resize(std::size_t(total));
  parallel_for(total, [&](Index w) {
    const std::size_t di = std::size_t(w / trials);
    const Index n = dims[di];
    HankelTrial& t = e.trials[std::size_t(w)];
    t.dim = n;
    t.trial = w % trials;
    t.seed = hankel_trial_seed(master_seed, n, t.trial);
    const ComplexVector c = hankel_symbol(p, n, t.seed);
    PowerOptions o = opt;
    o.seed = derive_seed(t.seed, {0x504fULL});
    const NormResult r = op_norm(HankelOperator(c, n), o);
    t.norm = r.value;
    t.iterations = r.iterations;
    t.residual = r.residual;
    t.bound = bounds[di];
    t.lower_bound = meckes_lower(c, n);
  });
  e.summary = summarize(e.trials);
  return e;
}

}  // namespace gafbmo
