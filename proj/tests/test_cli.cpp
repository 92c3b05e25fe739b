#include "gafbmo/exceptional.hpp"
#include "gafbmo/io.hpp"
#include "gafbmo/rng.hpp"

#include <gtest/gtest.h>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

using namespace gafbmo;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("gafbmo_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(GAFBMO_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json manifest(const fs::path& dir) { return nlohmann::json::parse(slurp(dir / "manifest.json")); }

}  // namespace

TEST(Format, DoubleRoundTrip) {
  CounterRng rng(8);
  std::vector<double> xs = {0.0, -0.0, 1.0, 0.1, 1e-300, 1e300, std::numeric_limits<double>::denorm_min(),
                            std::numeric_limits<double>::max(), 2.0 / 3.0};
  for (int i = 0; i < 1000; ++i) xs.push_back(std::ldexp(rng.uniform() - 0.5, int(rng.uniform() * 200) - 100));
  for (double x : xs) {
    const std::string s = io::format_double(x);
    double y = 1;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), y);
    ASSERT_TRUE(r.ec == std::errc() && r.ptr == s.data() + s.size()) << s;
    EXPECT_EQ(y, x) << s;
    EXPECT_EQ(std::signbit(y), std::signbit(x));
  }
  EXPECT_EQ(io::format_double(0.5), "0.5");
  EXPECT_EQ(io::format_cell(std::int64_t(-3)), "-3");
}

TEST(Csv, WriteParseRoundTrip) {
  io::CsvTable t({"group", "x", "label"});
  t.add_row({std::int64_t(1), 0.25, std::string("a")});
  t.add_row({std::int64_t(2), -1e-7, std::string("b")});
  const io::CsvData d = io::parse_csv(t.str());
  ASSERT_EQ(d.columns, (std::vector<std::string>{"group", "x", "label"}));
  ASSERT_EQ(d.rows.size(), 2u);
  EXPECT_EQ(d.numeric("x"), (std::vector<double>{0.25, -1e-7}));
  EXPECT_EQ(d.rows[1][2], "b");
  EXPECT_THROW(d.column("missing"), ConfigError);
}

TEST(Csv, SummaryMatchesDirectStatistics) {
  io::CsvTable t({"g", "v"});
  const std::vector<double> a = {1, 2, 4, 8}, b = {3, 5, 10};
  for (double x : a) t.add_row({std::int64_t(0), x});
  for (double x : b) t.add_row({std::int64_t(1), x});
  const io::CsvData s = io::parse_csv(io::summary_table(io::parse_csv(t.str()), "g", {"v"}).str());
  ASSERT_EQ(s.rows.size(), 2u);
  EXPECT_EQ(s.numeric("count"), (std::vector<double>{4, 3}));
  EXPECT_DOUBLE_EQ(s.numeric("mean")[0], 3.75);
  EXPECT_DOUBLE_EQ(s.numeric("mean")[1], 6.0);
  EXPECT_DOUBLE_EQ(s.numeric("median")[0], 3.0);
  EXPECT_DOUBLE_EQ(s.numeric("median")[1], 5.0);
  EXPECT_NEAR(s.numeric("std_dev")[1], std::sqrt(13.0), 1e-12);  // sample variance (9 + 1 + 16) / 2
}

TEST(Profile, SpecKinds) {
  EXPECT_EQ(io::parse_profile("kac").degree_cap(), 4095);
  const CoeffProfile p = io::parse_profile("power:alpha=0.5,cap=255");
  EXPECT_EQ(p.degree_cap(), 255);
  EXPECT_DOUBLE_EQ(p[16], 0.25);
  const CoeffProfile l = io::parse_profile("lacunary:weights=1;0.5");
  EXPECT_EQ(l[1], 1.0);
  EXPECT_EQ(l[2], 0.5);
  const CoeffProfile e = io::parse_profile("explicit:values=0;1;0;2");
  EXPECT_EQ(e.degree_cap(), 3);
  EXPECT_EQ(e[3], 2.0);
  const BlockProfile b = block_stats(io::parse_profile("block:blocks=4,decay=1"));
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(b.sigma2[k], std::exp2(-k), 1e-12);
}

TEST(Profile, FileForm) {
  const fs::path dir = scratch("profile");
  fs::create_directories(dir);
  std::ofstream(dir / "p.txt") << "# comment\nkind = power\nalpha = 1\ncap = 63\n";
  const CoeffProfile p = io::parse_profile((dir / "p.txt").string());
  EXPECT_EQ(p.degree_cap(), 63);
  EXPECT_DOUBLE_EQ(p[4], 0.25);
}

TEST(Profile, ConfigErrors) {
  EXPECT_THROW(io::parse_profile("nonsense"), ConfigError);
  EXPECT_THROW(io::parse_profile("power:alpha"), ConfigError);
  EXPECT_THROW(io::parse_profile("power:alpha=x"), ConfigError);
  EXPECT_THROW(io::parse_profile("explicit:values=1;1"), ConfigError);
  EXPECT_THROW(io::parse_profile("lacunary"), ConfigError);
  EXPECT_THROW(io::parse_int_list("1,2.5"), ConfigError);
}

TEST(Config, JsonRoundTrip) {
  io::RunConfig c;
  c.subcommand = "hankel";
  c.variant = "";
  c.profile = "power:alpha=0.25";
  c.grid = {1024};
  c.trials = 17;
  c.dims = {64, 128};
  c.seed = 0xFFFFFFFFFFFFFFFFull;
  c.out = "x/y";
  c.threads = 3;
  c.tolerances["power_iteration"] = 1e-9;
  c.extra["r"] = "4";
  const io::RunConfig d = io::config_from_json(nlohmann::json::parse(io::to_json(c).dump()));
  EXPECT_EQ(io::to_json(d), io::to_json(c));
  EXPECT_EQ(d.seed, c.seed);
  EXPECT_EQ(d.tolerances.at("power_iteration"), 1e-9);
}

TEST(Cli, VerifySucceeds) {
  const fs::path dir = scratch("verify");
  EXPECT_EQ(run_cli("verify --suite kernels --out " + dir.string()), 0);
  const auto m = manifest(dir);
  EXPECT_EQ(m["schema_version"], io::schema_version);
  EXPECT_EQ(m["config"]["subcommand"], "verify");
  EXPECT_TRUE(m["results"]["all_pass"].get<bool>());
  EXPECT_EQ(run_cli("verify --suite all --out " + dir.string()), 0);
}

TEST(Cli, ConfigErrorsExitTwo) {
  const fs::path dir = scratch("errors");
  EXPECT_EQ(run_cli("hankel --bogus 1 --out " + dir.string()), 2);
  EXPECT_EQ(run_cli("sample --profile nonsense --out " + dir.string()), 2);
  EXPECT_EQ(run_cli("verify --suite nothing --out " + dir.string()), 2);
  EXPECT_EQ(run_cli("sample --grid 100 --out " + dir.string()), 2);
  EXPECT_EQ(run_cli("exceptional gady --r 9 --out " + dir.string()), 2);
}

TEST(Cli, NonConvergenceExitsThree) {
  const fs::path dir = scratch("nonconv");
  EXPECT_EQ(run_cli("hankel --dims 64 --trials 1 --max-iter 2 --out " + dir.string()), 3);
  const auto m = manifest(dir);
  EXPECT_EQ(m["results"]["status"], "nonconvergence");
  EXPECT_GT(m["results"]["best_estimate"].get<double>(), 0.0);
}

TEST(Cli, HankelRerunByteIdentical) {
  const fs::path a = scratch("hankel_a"), b = scratch("hankel_b");
  const std::string args = "hankel --dims 64,128 --trials 10 --profile kac --seed 7 --out ";
  ASSERT_EQ(run_cli(args + a.string()), 0);
  ASSERT_EQ(run_cli(args + b.string()), 0);
  EXPECT_EQ(slurp(a / "results.csv"), slurp(b / "results.csv"));
  EXPECT_EQ(slurp(a / "summary.csv"), slurp(b / "summary.csv"));
  EXPECT_EQ(io::read_csv(a / "results.csv").rows.size(), 20u);
}

TEST(Cli, SummaryReproducibleFromResults) {
  const fs::path dir = scratch("summary");
  ASSERT_EQ(run_cli("hankel --dims 32,64 --trials 6 --seed 3 --out " + dir.string()), 0);
  const io::CsvData r = io::read_csv(dir / "results.csv");
  EXPECT_EQ(io::summary_table(r, "dim", {"op_norm", "op_norm_sq", "lower_bound"}).str(), slurp(dir / "summary.csv"));
  const io::CsvData s = io::read_csv(dir / "summary.csv");
  const auto norms = r.numeric("op_norm");
  double m = 0;
  for (int i = 0; i < 6; ++i) m += norms[std::size_t(i)];
  EXPECT_NEAR(s.numeric("mean")[0], m / 6, 1e-12 * m);
}

TEST(Cli, ThreadCountIndependent) {
  for (const std::string cmd : {"sample --profile power:alpha=0.5,cap=511 --trials 8",
                                "seminorm --profile power:alpha=0.5,cap=255 --trials 4",
                                "hankel --dims 64 --trials 6", "exceptional vmosledd --depth 3 --trials 8",
                                "exceptional bmovmo --depth 4 --trials 3"}) {
    const fs::path a = scratch("threads_a"), b = scratch("threads_b");
    ASSERT_EQ(run_cli(cmd + " --seed 5 --threads 1 --out " + a.string()), 0) << cmd;
    ASSERT_EQ(run_cli(cmd + " --seed 5 --threads 2 --out " + b.string()), 0) << cmd;
    EXPECT_EQ(slurp(a / "results.csv"), slurp(b / "results.csv")) << cmd;
    EXPECT_EQ(slurp(a / "summary.csv"), slurp(b / "summary.csv")) << cmd;
  }
}

TEST(Cli, GadyManifestMatchesDirectRun) {
  const fs::path dir = scratch("gady");
  ASSERT_EQ(run_cli("exceptional gady --r 3 --trials 4 --seed 2 --out " + dir.string()), 0);
  const auto res = manifest(dir)["results"];
  const GadyConstruction g = gady_construct(3, 2);
  const GadyMeasurement m = gady_measure(g, 4, derive_seed(2, {1}), 0);
  EXPECT_EQ(res["r"], 3);
  EXPECT_EQ(res["n"].get<Index>(), g.params.n);
  ASSERT_EQ(res["lambda"].size(), 3u);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_EQ(res["lambda"][i][j].get<double>(), g.params.lambda(i, j));
  EXPECT_EQ(res["star_mean"].get<double>(), m.star.mean);
  EXPECT_EQ(res["bloch_mean"].get<double>(), m.bloch.mean);
}

TEST(Cli, EverySubcommandWritesArtifacts) {
  for (const std::string cmd : {"chaining --profile block:blocks=8 --trials 2", "exceptional nonsep --j 5,10",
                                "exceptional bmovmo --depth 3 --trials 2 --weights inv_sqrt"}) {
    const fs::path dir = scratch("artifacts");
    ASSERT_EQ(run_cli(cmd + " --out " + dir.string()), 0) << cmd;
    for (const char* f : {"results.csv", "summary.csv", "manifest.json"}) EXPECT_TRUE(fs::exists(dir / f)) << cmd;
    EXPECT_EQ(manifest(dir)["results"]["status"], "ok");
  }
}
