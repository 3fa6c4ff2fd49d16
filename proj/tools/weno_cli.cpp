// weno: run, sweep and post-process mapped WENO advection/Euler experiments.
//
//   weno run <config>                      one run per (scheme, N)
//   weno sweep <config>                    error table with orders
//   weno plotdata <kind> <inputs...>       plot-ready CSV
//   weno probe                             isolated-discontinuity table
//   weno classify <scheme>                 OP certificate of a mapping set
//
// Exit codes: 0 success, 2 configuration error, 3 solver state error.

#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "weno/diagnostics.hpp"
#include "weno/experiment.hpp"
#include "weno/mapping.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitState = 3;

void print_summary(const weno::RunSummary& s) { std::cout << weno::to_json(s).dump() << '\n'; }

int cmd_run(const std::string& path) {
  const weno::RunConfig cfg = weno::load_config_file(path);
  if (cfg.schemes.empty()) throw weno::ConfigError("run needs a scheme", "scheme");
  const weno::ProblemSpec prob = weno::resolved_problem(cfg);
  for (const auto& spec : cfg.schemes) {
    for (int n : prob.resolutions) print_summary(weno::run_single(cfg, spec, n).summary);
  }
  return 0;
}

int cmd_sweep(const std::string& path) {
  const weno::RunConfig cfg = weno::load_config_file(path);
  const weno::SweepReport rep = weno::run_sweep(cfg);
  weno::write_error_csv(std::cout, rep.rows);
  if (!rep.increased.empty()) {
    std::cout << '\n';
    weno::write_increased_csv(std::cout, rep.increased);
  }
  return 0;
}

int cmd_plotdata(const std::string& kind, const std::vector<std::string>& inputs, double y, int samples,
                 const std::string& output) {
  weno::PlotRequest req;
  req.kind = weno::parse_plot_kind(kind);
  req.inputs = inputs;
  req.y = y;
  req.samples = samples;
  if (output.empty()) {
    weno::emit_plotdata(req, std::cout);
  } else {
    std::ofstream out(output);
    if (!out) throw weno::ConfigError("cannot write '" + output + "'", "output");
    weno::emit_plotdata(req, out);
  }
  return 0;
}

int cmd_probe(const std::string& output) {
  const auto rows = weno::discontinuity_probe(weno::reference_probe_cases());
  if (output.empty()) {
    weno::write_probe_csv(std::cout, rows);
  } else {
    std::ofstream out(output);
    if (!out) throw weno::ConfigError("cannot write '" + output + "'", "output");
    weno::write_probe_csv(out, rows);
  }
  return 0;
}

int cmd_classify(const std::string& descriptor, int samples) {
  const weno::MappingSpec spec = weno::parse_scheme_descriptor(descriptor);
  const auto result = weno::classify_op_set(spec, samples);
  std::cout << weno::scheme_label(spec) << ": " << (result.order_preserving ? "OP" : "non-OP") << '\n';
  for (const auto& w : result.witnesses) {
    std::cout << "  g" << w.m << "(" << weno::format_double(w.omega_a) << ") = " << weno::format_double(w.g_a)
              << " < g" << w.n << "(" << weno::format_double(w.omega_b) << ") = " << weno::format_double(w.g_b)
              << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mapped WENO experiments"};
  app.require_subcommand(1);

  std::string config;
  auto* run = app.add_subcommand("run", "execute one run per scheme and resolution");
  run->add_option("config", config, "key=value config file")->required();

  auto* sweep = app.add_subcommand("sweep", "resolution sweep with error norms and orders");
  sweep->add_option("config", config, "key=value config file")->required();

  std::string kind;
  std::vector<std::string> inputs;
  double y = 0.5;
  int samples = 1001;
  std::string output;
  auto* plot = app.add_subcommand("plotdata", "emit plot-ready CSV");
  plot->add_option("kind", kind, "solution|mapping-curve|trace-scatter|nonop-overlay|slice-2d")->required();
  plot->add_option("inputs", inputs, "input files, config or scheme descriptor");
  plot->add_option("--y", y, "slice plane for slice-2d");
  plot->add_option("--samples", samples, "omega samples for mapping-curve");
  plot->add_option("-o,--output", output, "output file (default stdout)");

  auto* probe = app.add_subcommand("probe", "isolated-discontinuity probe table");
  probe->add_option("-o,--output", output, "output file (default stdout)");

  std::string descriptor;
  int classify_samples = 1001;
  auto* classify = app.add_subcommand("classify", "certify whether a mapping set is order preserving");
  classify->add_option("scheme", descriptor, "scheme descriptor, e.g. im:k=2:A=0.1")->required();
  classify->add_option("--samples", classify_samples, "omega grid size (>= 100)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return cmd_run(config);
    if (*sweep) return cmd_sweep(config);
    if (*plot) return cmd_plotdata(kind, inputs, y, samples, output);
    if (*probe) return cmd_probe(output);
    if (*classify) return cmd_classify(descriptor, classify_samples);
  } catch (const weno::ConfigError& e) {
    std::cerr << "config error";
    if (!e.key().empty()) std::cerr << " [" << e.key() << "]";
    std::cerr << ": " << e.what() << '\n';
    return kExitConfig;
  } catch (const weno::StateError& e) {
    std::cerr << "state error: " << e.what() << '\n';
    return kExitState;
  } catch (const weno::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitState;
  }
  return 0;
}
