#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "weno/experiment.hpp"

namespace {

using namespace weno;
namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("weno_test_" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string str() const { return path_.string(); }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

std::string config_error_key(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<accepted>";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Config, LongRunExample) {
  const auto cfg =
      parse_config("scheme=mop-acmk cfs0=0.01 cfs1=0.94 k0=0 k1=0 problem=slp N=800 cfl=0.1 t_end=2000");
  EXPECT_EQ(cfg.problem, "slp");
  ASSERT_EQ(cfg.schemes.size(), 1u);
  const auto& mop = std::get<mapping::MopAcmk>(cfg.schemes[0]);
  EXPECT_EQ(mop.params.cfs0, 0.01);
  EXPECT_EQ(mop.params.cfs1, 0.94);
  EXPECT_EQ(cfg.resolutions, std::vector<int>{800});
  EXPECT_EQ(*cfg.cfl, 0.1);
  EXPECT_EQ(*cfg.t_end, 2000.0);
  const auto p = resolved_problem(cfg);
  EXPECT_EQ(p.stepping.t_end, 2000.0);
  EXPECT_EQ(p.eps, 1e-40);
}

TEST(Config, ImExampleAndComments) {
  const auto cfg = parse_config("# comment\nproblem=accuracy-sine\nscheme=im k=2 A=0.1  # trailing\n");
  const auto& im = std::get<mapping::Im>(cfg.schemes.at(0));
  EXPECT_EQ(im.k, 2);
  EXPECT_EQ(im.A, 0.1);
}

TEST(Config, RejectionsNameTheKey) {
  EXPECT_EQ(config_error_key("problem=slp scheme=mop-acmk cfs0=0.5"), "cfs0");
  EXPECT_EQ(config_error_key("problem=slp problem=bicwp"), "problem");
  EXPECT_EQ(config_error_key("problem=slp colour=red"), "colour");
  EXPECT_EQ(config_error_key("problem=slp scheme=js k=2"), "k");
  EXPECT_EQ(config_error_key("problem=slp k=2"), "k");
  EXPECT_EQ(config_error_key("problem=nowhere"), "problem");
  EXPECT_EQ(config_error_key("problem=slp N=4"), "N");
  EXPECT_EQ(config_error_key("problem=slp cfl=-1"), "cfl");
  EXPECT_EQ(config_error_key("problem=slp eps=0"), "eps");
  EXPECT_EQ(config_error_key("problem=slp nonop_records=some"), "nonop_records");
  EXPECT_EQ(config_error_key("problem=slp scheme=js schemes=m"), "schemes");
  EXPECT_EQ(config_error_key("problem=slp schemes=js,m reference=pm"), "reference");
  EXPECT_THROW(parse_config("problem"), ConfigError);
}

TEST(Config, FormatParseRoundTrip) {
  const auto cfg = parse_config(
      "problem=accuracy-sine9 preset=desk schemes=mip-acmk,mop-acmk:cfs0=0.02,js,im:k=2:A=0.3 N=100,200 "
      "dt_mode=fixed cfl=0.4 t_end=0.3 eps=1e-6 nonop=on nonop_records=end trace=on trace_every=7 "
      "overshoot=off average=roe reference=mip-acmk output=somewhere progress=5 solution=off");
  const auto text = format_config(cfg);
  EXPECT_EQ(parse_config(text), cfg);
  EXPECT_EQ(format_config(parse_config(text)), text);
  const auto plain = parse_config("problem=slp");
  EXPECT_EQ(parse_config(format_config(plain)), plain);
}

TEST(Descriptor, CanonicalForms) {
  EXPECT_EQ(format_scheme_descriptor(parse_scheme_descriptor("im:A=0.1:k=2")), "im:k=2:A=0.1");
  EXPECT_EQ(format_scheme_descriptor(parse_scheme_descriptor("pm6")), "pm:k=6");
  EXPECT_EQ(format_scheme_descriptor(parse_scheme_descriptor("mop-acmk")), "mop-acmk:cfs0=0.01:cfs1=0.94:k0=0:k1=0");
  for (const auto& name : scheme_names()) {
    const auto spec = parse_scheme_descriptor(name);
    EXPECT_EQ(parse_scheme_descriptor(format_scheme_descriptor(spec)), spec) << name;
  }
  EXPECT_THROW(parse_scheme_descriptor("im:k"), ConfigError);
  EXPECT_THROW(parse_scheme_descriptor("im:k=2:k=3"), ConfigError);
  EXPECT_THROW(parse_scheme_descriptor("weno7"), ConfigError);
}

TEST(RunSingle, ZeroEndTimeHasZeroError) {
  TempDir dir;
  auto cfg = parse_config("problem=slp scheme=pm N=100 t_end=0 output=" + dir.str());
  const auto r = run_single(cfg, cfg.schemes[0], 100);
  EXPECT_EQ(r.summary.steps, 0);
  EXPECT_EQ(r.summary.errors->l1, 0.0);
  EXPECT_EQ(r.summary.errors->linf, 0.0);
  EXPECT_TRUE(fs::exists(dir / "slp_pm_N100_solution.csv"));
  EXPECT_TRUE(fs::exists(dir / "slp_pm_N100_summary.json"));
}

TEST(RunSingle, AccuracyRunMatchesPublishedError) {
  TempDir dir;
  auto cfg = parse_config("problem=accuracy-sine scheme=mop-acmk output=" + dir.str());
  const auto r = run_single(cfg, cfg.schemes[0], 80);
  EXPECT_NEAR(r.summary.errors->l1, 4.98858e-07, 0.02 * 4.98858e-07);
  EXPECT_NEAR(r.summary.errors->linf, 3.91795e-07, 0.02 * 3.91795e-07);
  const auto j = nlohmann::json::parse(slurp(dir / "accuracy-sine_mop-acmk_N80_summary.json"));
  EXPECT_EQ(j["N"], 80);
  EXPECT_EQ(j["eps"].get<double>(), 1e-40);
  EXPECT_EQ(j["errors"]["L1"].get<double>(), r.summary.errors->l1);
  EXPECT_EQ(j["descriptor"], "mop-acmk:cfs0=0.01:cfs1=0.94:k0=0:k1=0");
}

TEST(RunSingle, NonOpArtifacts) {
  TempDir dir;
  auto cfg = parse_config("problem=slp scheme=pm N=200 t_end=0.2 nonop=on trace=on trace_every=50 output=" +
                          dir.str());
  const auto r = run_single(cfg, cfg.schemes[0], 200);
  ASSERT_TRUE(r.summary.nonop_count.has_value());
  EXPECT_GT(*r.summary.nonop_count, 0);
  EXPECT_FALSE(r.nonop_records.empty());
  EXPECT_FALSE(r.trace_records.empty());
  std::istringstream nonop(slurp(dir / "slp_pm_N200_nonop.csv"));
  std::string line;
  std::getline(nonop, line);
  std::size_t rows = 0;
  while (std::getline(nonop, line)) {
    parse_nonop_row(line);
    ++rows;
  }
  EXPECT_EQ(rows, r.nonop_records.size());
  EXPECT_TRUE(fs::exists(dir / "slp_pm_N200_trace.csv"));
}

TEST(Sweep, OrdersAndIncreasedErrors) {
  TempDir dir;
  const auto cfg = parse_config("problem=accuracy-sine schemes=js,m N=20,40 reference=js output=" + dir.str());
  const auto rep = run_sweep(cfg);
  ASSERT_EQ(rep.rows.size(), 4u);
  EXPECT_FALSE(rep.rows[0].order1.has_value());
  ASSERT_TRUE(rep.rows[1].order1.has_value());
  EXPECT_NEAR(*rep.rows[1].order1, 4.9985, 0.15);
  ASSERT_EQ(rep.increased.size(), 2u);
  EXPECT_EQ(rep.increased[0].scheme, "m");
  EXPECT_LT(*rep.increased[0].l1, 0.0);
  EXPECT_TRUE(fs::exists(dir / "accuracy-sine_errors.csv"));
  EXPECT_TRUE(fs::exists(dir / "accuracy-sine_increased.csv"));

  const auto single = run_sweep(parse_config("problem=accuracy-sine scheme=js N=20 output=" + dir.str()));
  ASSERT_EQ(single.rows.size(), 1u);
  EXPECT_FALSE(single.rows[0].order1.has_value());
  EXPECT_THROW(run_sweep(parse_config("problem=riemann2d-c4 scheme=js")), ConfigError);
}

TEST(PlotData, MappingCurve) {
  std::ostringstream os;
  emit_plotdata({PlotKind::mapping_curve, {"mip-acmk"}, 0.5, 11}, os);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "omega,g0,g1,g2");
  int rows = 0;
  while (std::getline(is, line)) {
    const auto cells = split_csv_line(line);
    const double w = parse_double(cells[0]);
    const auto spec = parse_scheme_descriptor("mip-acmk");
    for (int s = 0; s < 3; ++s) EXPECT_EQ(parse_double(cells[1 + s]), mapping_value(spec, w, s));
    ++rows;
  }
  EXPECT_EQ(rows, 11);
  std::ostringstream bad;
  EXPECT_THROW(emit_plotdata({PlotKind::mapping_curve, {}, 0.5, 11}, bad), ConfigError);
}

TEST(PlotData, NonOpOverlayEmptyForJs) {
  TempDir dir;
  auto cfg = parse_config("problem=slp scheme=js N=100 t_end=0.1 nonop=on output=" + dir.str());
  run_single(cfg, cfg.schemes[0], 100);
  std::ostringstream os;
  emit_plotdata({PlotKind::nonop_overlay,
                 {(dir / "slp_js_N100_solution.csv").string(), (dir / "slp_js_N100_nonop.csv").string()}},
                os);
  EXPECT_EQ(os.str(), "x,u\n");
  EXPECT_EQ(parse_plot_kind("nonop-overlay"), PlotKind::nonop_overlay);
  EXPECT_THROW(parse_plot_kind("contour"), ConfigError);
}

TEST(PlotData, SliceMatchesInMemorySlice) {
  TempDir dir;
  auto cfg = parse_config("problem=riemann2d-c4 scheme=mop-acmk N=20 t_end=0.02 output=" + dir.str());
  const auto r = run_single(cfg, cfg.schemes[0], 20);
  EXPECT_TRUE(*r.summary.positive);
  EXPECT_LT(*r.summary.symmetry_error, 1e-12);
  const auto expect = density_slice(*r.field2d, 0.5);
  std::ostringstream os;
  emit_plotdata({PlotKind::slice_2d, {(dir / "riemann2d-c4_mop-acmk_N20_solution.csv").string()}, 0.5}, os);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "x,rho");
  std::size_t i = 0;
  while (std::getline(is, line)) {
    ASSERT_LT(i, expect.size());
    EXPECT_NEAR(parse_double(split_csv_line(line)[1]), expect[i], 1e-14);
    ++i;
  }
  EXPECT_EQ(i, expect.size());
}

}  // namespace
