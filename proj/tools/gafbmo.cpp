#include "gafbmo/chaining.hpp"
#include "gafbmo/exceptional.hpp"
#include "gafbmo/gaf.hpp"
#include "gafbmo/hankel.hpp"
#include "gafbmo/io.hpp"
#include "gafbmo/kernels.hpp"
#include "gafbmo/parallel.hpp"
#include "gafbmo/rng.hpp"
#include "gafbmo/seminorms.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>

using namespace gafbmo;
using nlohmann::json;

namespace {

struct Options {
  std::string profile = "kac";
  std::uint64_t seed = 1;
  std::int64_t trials = 10;
  std::string dims = "64,128";
  std::string grid;
  std::string out = "out";
  int threads = 1;
  double tol = 1e-8;
  std::int64_t max_iter = 10000;
  int r = 2;
  int depth = 6;
  double c = -1;
  std::string weights = "one";
  std::string j_list = "5,10,15";
  std::string suite = "all";
};

struct Outcome {
  io::CsvTable results{{}};
  json facts;
  std::string group;
  std::vector<std::string> value_columns;
};

Index grid_or(const Options& o, Index fallback) {
  if (o.grid.empty()) return fallback;
  const auto g = io::parse_int_list(o.grid);
  if (g.size() != 1 || !is_pow2(g[0])) throw ConfigError("--grid must be one power of two");
  return Index(g[0]);
}

Outcome run_sample(const Options& o) {
  const CoeffProfile p = io::parse_profile(o.profile);
  const Index N = grid_or(o, measurement_grid(2 * p.degree_cap() + 1));
  auto shared = std::make_shared<const CoeffProfile>(p);
  std::vector<std::array<double, 3>> rows(std::size_t(std::max<std::int64_t>(0, o.trials)));
  parallel_for(o.trials, [&](Index t) {
    const GafSample s = sample(shared, derive_seed(o.seed, {std::uint64_t(t)}));
    const ComplexVector v = eval_grid(s.polynomial(), N);
    rows[std::size_t(t)] = {v.cwiseAbs().maxCoeff(), s.coeffs.norm(), star_norm_grid(v).value};
  });
  Outcome out;
  out.results = io::CsvTable({"trial", "sup_norm", "l2_norm", "star_norm"});
  for (std::size_t t = 0; t < rows.size(); ++t)
    out.results.add_row({std::int64_t(t), rows[t][0], rows[t][1], rows[t][2]});
  out.facts = {{"profile_label", p.label}, {"degree_cap", p.degree_cap()}, {"grid", N}};
  out.value_columns = {"sup_norm", "l2_norm", "star_norm"};
  return out;
}

Outcome run_seminorm(const Options& o) {
  const CoeffProfile p = io::parse_profile(o.profile);
  const Index N = grid_or(o, measurement_grid(2 * p.degree_cap() + 1));
  auto shared = std::make_shared<const CoeffProfile>(p);
  std::vector<std::array<double, 4>> rows(std::size_t(std::max<std::int64_t>(0, o.trials)));
  const auto radii = default_bloch_radii(p.degree_cap());
  parallel_for(o.trials, [&](Index t) {
    const GafSample s = sample(shared, derive_seed(o.seed, {std::uint64_t(t)}));
    const Polynomial f = s.polynomial();
    rows[std::size_t(t)] = {star_norm_grid(eval_grid(f, N)).value, bloch_norm(f, radii, N).value,
                            sledd_T(f, N).value, sledd_R(f, N).value};
  });
  Outcome out;
  out.results = io::CsvTable({"trial", "star_norm", "bloch_norm", "sledd_T", "sledd_R"});
  for (std::size_t t = 0; t < rows.size(); ++t)
    out.results.add_row({std::int64_t(t), rows[t][0], rows[t][1], rows[t][2], rows[t][3]});
  out.facts = {{"profile_label", p.label}, {"degree_cap", p.degree_cap()}, {"grid", N},
               {"interval_family", IntervalFamily::dyadic().describe()}};
  out.value_columns = {"star_norm", "bloch_norm", "sledd_T", "sledd_R"};
  return out;
}

Outcome run_chaining(const Options& o) {
  const CoeffProfile p = io::parse_profile(o.profile);
  const BlockProfile b = block_stats(p);
  const SufficientBound s = sledd_sufficient_bound(b);
  const ConditionReport c = check_conditions(b);
  Outcome out;
  out.results = io::CsvTable({"block", "sigma2", "tau2", "b2"});
  for (int k = 0; k < b.blocks(); ++k) out.results.add_row({std::int64_t(k), b.sigma2[k], b.tau2[k], b.b2[k]});
  out.facts = {{"profile_label", p.label}, {"gamma1", s.gamma1}, {"gamma2", s.gamma2}, {"l2", s.l2},
               {"sum_tau2", s.sum_tau2}, {"chaining_bound", s.chaining}, {"hasi_sum", c.hasi_sum},
               {"sum_tau2_converging", c.sum_tau2_converging}};
  if (o.trials > 0) {
    const MeanEstimate m = mc_rsledd_squared(p, o.trials, o.seed, grid_or(o, 0));
    out.facts["mc_rsledd2_mean"] = m.mean;
    out.facts["mc_rsledd2_std_error"] = m.std_error;
  }
  out.value_columns = {"sigma2", "tau2"};
  return out;
}

Outcome run_hankel(const Options& o) {
  std::vector<Index> dims;
  for (auto d : io::parse_int_list(o.dims)) dims.push_back(Index(d));
  if (dims.empty()) throw ConfigError("--dims is empty");
  const Index need = 2 * next_pow2(2 * *std::max_element(dims.begin(), dims.end())) - 1;
  const CoeffProfile p = io::parse_profile(o.profile, std::max<Index>(4095, need));
  PowerOptions po;
  po.tol = o.tol;
  po.max_iter = o.max_iter;
  const NormExperiment e = run_norm_experiment(p, dims, o.trials, o.seed, po);
  Outcome out;
  out.results = io::CsvTable({"dim", "trial", "seed", "op_norm", "op_norm_sq", "lower_bound", "theorem_bound",
                              "iterations", "residual"});
  for (const HankelTrial& t : e.trials)
    out.results.add_row({std::int64_t(t.dim), std::int64_t(t.trial), std::to_string(t.seed), t.norm, t.norm * t.norm,
                         t.lower_bound, t.bound, std::int64_t(t.iterations), t.residual});
  json dims_json = json::array();
  for (const auto& s : e.summary)
    dims_json.push_back({{"dim", s.dim}, {"mean_norm", s.mean_norm}, {"mean_norm2", s.mean_norm2},
                         {"theorem_bound", s.bound}, {"ratio", s.ratio}, {"mean_lower", s.mean_lower}});
  out.facts = {{"profile_label", p.label}, {"per_dim", dims_json}};
  out.group = "dim";
  out.value_columns = {"op_norm", "op_norm_sq", "lower_bound"};
  return out;
}

Outcome run_gady(const Options& o) {
  const GadyConstruction g = gady_construct(o.r, o.seed);
  const GadyMeasurement m = gady_measure(g, o.trials, derive_seed(o.seed, {1}), grid_or(o, 0));
  Outcome out;
  out.results = io::CsvTable({"trial", "star_norm", "bloch_norm"});
  for (std::size_t t = 0; t < m.star.values.size(); ++t)
    out.results.add_row({std::int64_t(t), m.star.values[t], m.bloch.values[t]});
  std::vector<std::vector<double>> lambda(std::size_t(o.r));
  for (int i = 0; i < o.r; ++i)
    for (int j = 0; j < o.r; ++j) lambda[std::size_t(i)].push_back(g.params.lambda(i, j));
  json mt = json::object();
  for (const auto& [k, v] : g.params.m_table) mt[std::to_string(k)] = v;
  out.facts = {{"r", o.r},
               {"n", g.params.n},
               {"lambda", lambda},
               {"modes", g.params.modes},
               {"m_table", mt},
               {"m_table_complete", g.params.m_table_complete},
               {"n0", g.params.n0},
               {"invariant_violations", gady_check(g.params)},
               {"grid", m.grid},
               {"star_mean", m.star.mean},
               {"bloch_mean", m.bloch.mean}};
  out.value_columns = {"star_norm", "bloch_norm"};
  return out;
}

Outcome run_bmovmo(const Options& o) {
  BlockSchedule s;
  if (o.c > 0) s.c = o.c;
  std::vector<double> a;
  for (int k = 1; k <= o.depth; ++k) {
    if (o.weights == "one") a.push_back(1.0);
    else if (o.weights == "inv_sqrt") a.push_back(1.0 / std::sqrt(double(k)));
    else throw ConfigError("--weights must be one or inv_sqrt");
  }
  const CoeffProfile p = bmo_not_vmo(s, a, o.depth);
  const auto e = schedule_exponents(s, o.depth);
  const Index N = grid_or(o, next_pow2(2 * p.degree_cap() + 1));
  const int K = ilog2(p.degree_cap());
  auto shared = std::make_shared<const CoeffProfile>(p);
  std::vector<std::vector<double>> tails(std::size_t(std::max<std::int64_t>(0, o.trials)));
  parallel_for(o.trials, [&](Index t) {
    tails[std::size_t(t)] = vmoa_profile(sample(shared, derive_seed(o.seed, {std::uint64_t(t)})).polynomial(), N, K);
  });
  Outcome out;
  out.results = io::CsvTable({"trial", "block", "tail"});
  for (std::size_t t = 0; t < tails.size(); ++t)
    for (int k = 0; k <= K; ++k) out.results.add_row({std::int64_t(t), std::int64_t(k), tails[t][std::size_t(k)]});
  out.facts = {{"exponents", e}, {"weights", a}, {"grid", N}, {"deepest_block", e.back()}};
  out.group = "block";
  out.value_columns = {"tail"};
  return out;
}

Outcome run_vmosledd(const Options& o) {
  const double c = o.c > 0 ? o.c : 0.1;
  std::vector<NestedExperiment> runs(std::size_t(std::max<std::int64_t>(0, o.trials)));
  parallel_for(o.trials, [&](Index t) {
    runs[std::size_t(t)] = vmoa_not_sledd(o.depth, c, derive_seed(o.seed, {std::uint64_t(t)})).experiment;
  });
  Outcome out;
  out.results = io::CsvTable({"run", "level", "exponent", "lattice_points", "exceedance", "success",
                              "min_on_subinterval", "value_at_x", "success_sum", "rsledd2_at_x"});
  for (std::size_t t = 0; t < runs.size(); ++t)
    for (std::size_t l = 0; l < runs[t].levels.size(); ++l) {
      const NestedLevel& L = runs[t].levels[l];
      out.results.add_row({std::int64_t(t), std::int64_t(l + 1), std::int64_t(L.exponent), L.lattice_points,
                           std::int64_t(L.exceedance), std::int64_t(L.success), L.min_on_subinterval, L.value_at_x,
                           runs[t].success_sum, runs[t].rsledd2_at_x});
    }
  out.facts = {{"depth", o.depth}, {"c", c}, {"exponents", nesting_schedule(o.depth, c)}};
  out.group = "level";
  out.value_columns = {"success", "exceedance", "value_at_x"};
  return out;
}

Outcome run_nonsep(const Options& o) {
  std::vector<int> js;
  for (auto j : io::parse_int_list(o.j_list)) js.push_back(int(j));
  const NonsepFamily f = sledd_nonsep_family(js, grid_or(o, 0));
  Outcome out;
  out.results = io::CsvTable({"subset_a", "subset_b", "distance"});
  double lo = std::numeric_limits<double>::infinity();
  for (Index a = 0; a < f.distance.rows(); ++a)
    for (Index b = a + 1; b < f.distance.cols(); ++b) {
      out.results.add_row({std::int64_t(a), std::int64_t(b), f.distance(a, b)});
      lo = std::min(lo, f.distance(a, b));
    }
  out.facts = {{"j_list", js}, {"grid", f.grid}, {"min_distance", lo}};
  out.value_columns = {"distance"};
  return out;
}

// Quick identity checks; one row per check.
Outcome run_verify(const Options& o) {
  io::CsvTable t({"suite", "check", "value", "pass"});
  bool all = true;
  auto add = [&](const std::string& suite, const std::string& check, double v, bool ok) {
    t.add_row({suite, check, v, std::int64_t(ok)});
    all = all && ok;
  };
  const bool every = o.suite == "all";
  bool known = every;
  if (every || o.suite == "kernels") {
    known = true;
    for (int n = 0; n <= 8; ++n) {
      const Index N = Index(1) << (n + 5);
      const double k1 = eval_grid(fejer_coeffs(Index(1) << n), N).cwiseAbs().sum() / double(N);
      add("kernels", "fejer_l1_n" + std::to_string(n), k1, std::abs(k1 - 1) <= 1e-6);
      const double t1 = eval_grid(trapezoid_symmetric_coeffs(n), N).cwiseAbs().sum() / double(N);
      add("kernels", "trapezoid_l1_n" + std::to_string(n), t1, t1 <= 6.001);
    }
    bool plateau = true;
    for (int n = 1; n <= 10; ++n)
      for (std::int64_t k = std::int64_t(1) << n; k <= (std::int64_t(2) << n); ++k)
        plateau = plateau && trapezoid_numerator(n, k) == trapezoid_denominator(n);
    add("kernels", "trapezoid_plateau", 1.0, plateau);
  }
  if (every || o.suite == "gaf") {
    known = true;
    const CoeffProfile p = power_law_profile(0.0, 255);
    const GafSample a = sample(p, o.seed), b = sample(p, o.seed);
    add("gaf", "sample_reproducible", 1.0, a.coeffs == b.coeffs);
  }
  if (every || o.suite == "chaining") {
    known = true;
    add("chaining", "delta_rho0", delta_from(2.0, 0.0), delta_from(2.0, 0.0) == 2.0);
  }
  if (every || o.suite == "hankel") {
    known = true;
    const ComplexVector c = hankel_symbol(power_law_profile(0.0, 127), 32, o.seed);
    const double fast = op_norm(HankelOperator(c, 32)).value;
    const double dense = Eigen::JacobiSVD<Eigen::MatrixXcd>(build_hankel(c, 32)).singularValues()[0];
    add("hankel", "fast_vs_dense", std::abs(fast - dense) / dense, std::abs(fast - dense) <= 1e-5 * dense);
  }
  if (!known) throw ConfigError("unknown suite " + o.suite);
  Outcome out;
  out.results = std::move(t);
  out.facts = {{"suite", o.suite}, {"all_pass", all}};
  out.group = "suite";
  out.value_columns = {"pass"};
  return out;
}

io::RunConfig make_config(const std::string& cmd, const std::string& variant, const Options& o) {
  io::RunConfig c;
  c.subcommand = cmd;
  c.variant = variant;
  c.profile = o.profile;
  if (!o.grid.empty()) c.grid = io::parse_int_list(o.grid);
  c.trials = o.trials;
  c.dims = io::parse_int_list(o.dims);
  c.seed = o.seed;
  c.out = o.out;
  c.threads = o.threads;
  c.tolerances["power_iteration"] = o.tol;
  c.extra["max_iter"] = std::to_string(o.max_iter);
  c.extra = {{"r", std::to_string(o.r)}, {"depth", std::to_string(o.depth)}, {"c", io::format_double(o.c)},
             {"weights", o.weights}, {"j_list", o.j_list}, {"suite", o.suite}};
  return c;
}

void print_summary(const io::CsvTable& s) {
  const io::CsvData d = io::parse_csv(s.str());
  for (const auto& c : d.columns) std::cout << std::setw(24) << c;
  std::cout << '\n';
  for (const auto& r : d.rows) {
    for (const auto& v : r) std::cout << std::setw(24) << v;
    std::cout << '\n';
  }
}

int finish(const std::string& cmd, const std::string& variant, const Options& o, const std::function<Outcome()>& run) {
  namespace fs = std::filesystem;
  const io::RunConfig cfg = make_config(cmd, variant, o);
  fs::create_directories(o.out);
  try {
    Outcome r = run();
    r.results.write(fs::path(o.out) / "results.csv");
    const io::CsvTable s = io::summary_table(io::parse_csv(r.results.str()), r.group, r.value_columns);
    s.write(fs::path(o.out) / "summary.csv");
    r.facts["status"] = "ok";
    io::write_manifest(o.out, cfg, r.facts);
    print_summary(s);
    if (cmd == "verify" && !r.facts["all_pass"].get<bool>()) return 1;
    return 0;
  } catch (const NonConvergence& e) {
    io::write_manifest(o.out, cfg,
                       {{"status", "nonconvergence"}, {"message", e.what()}, {"best_estimate", e.best_estimate},
                        {"iterations", e.iterations}, {"residual", e.residual}});
    std::cerr << "non-convergence: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random analytic functions: seminorm, chaining and Hankel experiments"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* s) {
    s->add_option("--profile", o.profile, "profile spec or key = value file");
    s->add_option("--seed", o.seed, "master seed");
    s->add_option("--trials", o.trials, "number of trials")->check(CLI::NonNegativeNumber);
    s->add_option("--grid", o.grid, "grid size (power of two)");
    s->add_option("--out", o.out, "output directory");
    s->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
    s->add_option("--tol", o.tol, "power-iteration tolerance")->check(CLI::PositiveNumber);
  };
  auto* s_sample = app.add_subcommand("sample", "draw polynomials and record norms");
  auto* s_semi = app.add_subcommand("seminorm", "star, Bloch and square-function estimates");
  auto* s_chain = app.add_subcommand("chaining", "block statistics and chaining bounds");
  auto* s_hankel = app.add_subcommand("hankel", "random Hankel operator norms");
  s_hankel->add_option("--dims", o.dims, "comma-separated dimensions");
  s_hankel->add_option("--max-iter", o.max_iter, "power-iteration cap")->check(CLI::PositiveNumber);
  auto* s_exc = app.add_subcommand("exceptional", "exceptional constructions");
  s_exc->require_subcommand(1);
  auto* s_gady = s_exc->add_subcommand("gady", "Bloch but not BMOA building block");
  s_gady->add_option("--r", o.r, "construction size")->check(CLI::Range(2, 6));
  auto* s_bv = s_exc->add_subcommand("bmovmo", "BMOA but not VMOA block series");
  s_bv->add_option("--depth", o.depth, "number of blocks");
  s_bv->add_option("--c", o.c, "schedule ratio");
  s_bv->add_option("--weights", o.weights, "one or inv_sqrt");
  auto* s_vs = s_exc->add_subcommand("vmosledd", "nested-interval experiment");
  s_vs->add_option("--depth", o.depth, "levels");
  s_vs->add_option("--c", o.c, "interval constant");
  auto* s_ns = s_exc->add_subcommand("nonsep", "non-separable family");
  s_ns->add_option("--j", o.j_list, "comma-separated j values");
  auto* s_verify = app.add_subcommand("verify", "identity checks");
  s_verify->add_option("--suite", o.suite, "kernels, gaf, chaining, hankel or all");
  for (auto* s : {s_sample, s_semi, s_chain, s_hankel, s_gady, s_bv, s_vs, s_ns, s_verify}) common(s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  set_default_threads(o.threads);
  try {
    if (*s_sample) return finish("sample", "", o, [&] { return run_sample(o); });
    if (*s_semi) return finish("seminorm", "", o, [&] { return run_seminorm(o); });
    if (*s_chain) return finish("chaining", "", o, [&] { return run_chaining(o); });
    if (*s_hankel) return finish("hankel", "", o, [&] { return run_hankel(o); });
    if (*s_gady) return finish("exceptional", "gady", o, [&] { return run_gady(o); });
    if (*s_bv) return finish("exceptional", "bmovmo", o, [&] { return run_bmovmo(o); });
    if (*s_vs) return finish("exceptional", "vmosledd", o, [&] { return run_vmosledd(o); });
    if (*s_ns) return finish("exceptional", "nonsep", o, [&] { return run_nonsep(o); });
    if (*s_verify) return finish("verify", "", o, [&] { return run_verify(o); });
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
