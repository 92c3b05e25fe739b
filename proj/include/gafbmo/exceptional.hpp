#pragma once

#include "gafbmo/core.hpp"
#include "gafbmo/gaf.hpp"
#include "gafbmo/seminorms.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gafbmo {

// ---------------------------------------------------------------- Bloch, not BMOA

struct GadyOptions {
  /// Base frequency multiplier: n = spread * r * 4^r unless n is set; spread <= 0 uses n0 + 1
  /// once the m-table is resolved.
  double spread = 2.0;
  Index n = 0;
  /// Search m(omega) for every sign pattern (2^{r^2} patterns; practical for r = 2).
  bool search_m_table = true;
  /// Largest r for which the m-table search is attempted.
  int m_table_max_r = 2;
  int max_redraws = 16;
};

struct GadyParams {
  int r = 0;
  Index n = 0;
  std::uint64_t seed = 0;
  Eigen::MatrixXd lambda;  // r x r, row i in [2^i, 2^i + 4^-r]
  /// m(omega) keyed by the r^2-bit pattern (bit i*r + j set means omega_ij = 1/2).
  std::map<std::uint64_t, std::int64_t> m_table;
  bool m_table_complete = false;
  std::int64_t n0 = 0;  // 4^r (max m + 1) when the table is complete
  std::vector<Index> modes;  // floor(n lambda_ij), row-major
  int redraws = 0;
};

struct GadyConstruction {
  GadyParams params;
  CoeffProfile profile;
};

GadyConstruction gady_construct(int r, std::uint64_t seed, const GadyOptions& opt = {});

/// |{m lambda_ij} - omega_ij| <= 4^-r for all entries.
bool gady_pattern_holds(const Eigen::MatrixXd& lambda, std::uint64_t pattern, std::int64_t m);

/// Post-hoc check of the three construction invariants. Returns an empty string when all hold.
std::string gady_check(const GadyParams& p);

struct SampleStats {
  double mean = 0;
  double std_dev = 0;
  double median = 0;
  std::vector<double> values;
};

SampleStats sample_stats(std::vector<double> values);

struct GadyMeasurement {
  SampleStats star;
  SampleStats bloch;
  Index grid = 0;
};

/// Star and Bloch estimates over independent coefficient draws.
GadyMeasurement gady_measure(const GadyConstruction& g, Index trials, std::uint64_t seed, Index N = 0);

/// grid size used by the measurements: smallest power of two above the top mode.
Index measurement_grid(Index top_mode);

/// Star and Bloch estimates of one polynomial.
std::pair<double, double> star_and_bloch(const Polynomial& f, Index N);

/// f = sum_i beta_i f_i with independent gady polynomials f_i of size r_i on disjoint frequency ranges.
struct BlochNotBmoa {
  CoeffProfile profile;
  std::vector<GadyParams> parts;
};

BlochNotBmoa bloch_not_bmoa(const std::vector<double>& beta, const std::vector<int>& r_seq,
                            const std::vector<std::uint64_t>& seeds, const GadyOptions& opt = {});

// ---------------------------------------------------------------- BMO, not VMO

/// Profile of f_n = (n log n)^{-1/2} sum_{k=n}^{2n-1} xi_k z^k, n = 2^{n_exp}.
CoeffProfile block_poly_profile(int n_exp, double weight = 1.0);
GafSample block_poly(int n_exp, std::uint64_t seed);

struct BlockSchedule {
  enum class Kind { tower, ratio } kind = Kind::ratio;
  int first = 2;     // first exponent (tower schedule starts at 1)
  double c = 1.5;    // ratio schedule: next = ceil(c * previous); tower: next = 3^previous
};

/// Exponents n_1..n_depth of the block schedule.
std::vector<int> schedule_exponents(const BlockSchedule& s, int depth);

/// g = sum_k a_k f_k with f_k = block_poly(n_k); cap 2^24.
CoeffProfile bmo_not_vmo(const BlockSchedule& s, const std::vector<double>& a_seq, int depth);

// ---------------------------------------------------------------- VMOA, not Sledd

struct NestedLevel {
  int exponent = 0;          // n_l = 2^exponent
  double weight = 0;         // coefficient multiplier 1/sqrt(l)
  double interval_length = 0;  // |J_l| (circle units)
  double lattice_points = 0;   // lattice points in the middle third of J_l
  bool exceedance = false;     // some lattice point with |f| > 1/2
  bool success = false;        // ... and min |f| > 1/4 on the subinterval
  double min_on_subinterval = 0;
  double value_at_x = 0;       // |f_l(x)| at the nest point
};

struct NestedExperiment {
  int depth = 0;
  double c = 0;
  std::vector<NestedLevel> levels;
  double success_sum = 0;  // sum_l 1[success] / (16 l)
  double rsledd2_at_x = 0; // sum_l |f_l(x)|^2 / l
};

/// Sparse dyadic-block profile (the degrees are far beyond dense storage).
struct SparseBlockProfile {
  std::vector<int> exponents;
  std::vector<double> amplitude;  // per-coefficient a_n on block exponents[i]
};

struct VmoaNotSledd {
  SparseBlockProfile profile;
  NestedExperiment experiment;
};

/// n_0(eps) with n_0^{3/4} eps = 4 log 3.
double nesting_n0(double eps);
std::vector<int> nesting_schedule(int depth, double c);

struct NestingOptions {
  int check_points = 17;
};

VmoaNotSledd vmoa_not_sledd(int depth, double c, std::uint64_t seed, const NestingOptions& opt = {});

// ---------------------------------------------------------------- Sledd non-separability

/// G_j(z) = (2^j + 1)^{-1} z^{2^{j+1}} K_{2^j}(z e(1/j)).
Polynomial nonsep_member(int j);

struct NonsepFamily {
  std::vector<int> j_list;
  std::vector<std::uint64_t> subsets;  // bitmask over j_list
  Eigen::MatrixXd distance;            // TSledd(H_A - H_B)
  Index grid = 0;
};

NonsepFamily sledd_nonsep_family(const std::vector<int>& j_list, Index N = 0);

}  // namespace gafbmo
