#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "freqlab/config.hpp"
#include "freqlab/errors.hpp"
#include "freqlab/harness.hpp"
#include "freqlab/records.hpp"
#include "freqlab/scenario.hpp"

namespace fs = std::filesystem;
using namespace freqlab;

namespace {

struct Overrides {
  std::optional<int> grid_n;
  std::optional<double> grid_size;
  std::optional<double> k0;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::string out;
};

fs::path output_dir(const Overrides& o) {
  if (!o.out.empty()) return o.out;
  if (const char* env = std::getenv("FREQLAB_OUT"); env && *env) return env;
  return "freqlab-out";
}

Scenario load_scenario(const std::string& path, const Overrides& o) {
  Config c = Config::load(path);
  auto set = [&](const char* key, const auto& v) {
    if (!v) return;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", double(*v));
    c.set(key, buf);
  };
  set("grid_n", o.grid_n);
  set("half_period", o.grid_size);
  set("K0", o.k0);
  if (o.seed) c.set("seed", std::to_string(*o.seed));
  set("tolerance", o.tol);
  return Scenario::from_config(c);
}

std::string fmt(double v, const char* f = "%.4f") {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

void print_record(const RunRecord& r) {
  std::cout << r.scenario_hash << "  M0=" << r.m0 << " M1=" << r.m1 << " seed=" << r.seed
            << "  eps=" << fmt(r.epsilon) << " q0=" << fmt(r.q0) << "\n"
            << "  d_cylinder=" << fmt(r.d_cylinder) << " m_gaussian=" << fmt(r.m_gaussian)
            << " m_qbar=" << r.m_qbar << " (Qbar " << fmt(r.qbar_terminal, "%.5f")
            << ", dist " << fmt(r.dist_sp, "%.2e") << ")  consistent="
            << (r.consistent ? "yes" : "no") << "\n"
            << "  status: " << r.status << "  (" << fmt(r.wall_time, "%.2f") << " s)\n";
}

// Replaces the row with the same hash, keeps the rest.
void merge_record(const fs::path& csv, const RunRecord& rec) {
  std::vector<RunRecord> all;
  if (fs::exists(csv)) all = read_records(csv);
  std::erase_if(all, [&](const RunRecord& r) { return r.scenario_hash == rec.scenario_hash; });
  all.push_back(rec);
  write_records(csv, all);
}

int cmd_run(const std::string& path, const Overrides& o) {
  const Scenario s = load_scenario(path, o);
  const RunResult res = run_scenario(s);
  const fs::path dir = output_dir(o);
  merge_record(dir / "records.csv", res.record);
  if (res.trace) write_trace(dir / ("trace_" + res.record.scenario_hash + ".csv"), *res.trace);
  print_record(res.record);
  for (const auto& n : res.notes) std::cout << "  note: " << n << "\n";
  std::cout << "wrote " << (dir / "records.csv").string() << "\n";
  return res.record.failed() ? 1 : 0;
}

void print_exponents(const std::vector<RunRecord>& records) {
  try {
    for (const auto& rep : fit_bound_exponents(records)) std::cout << rep.text << "\n";
  } catch (const Error& e) {
    std::cout << "exponent fit unavailable: " << e.what() << "\n";
  }
}

int cmd_sweep(const std::string& path, const std::vector<double>& m0,
              const std::vector<double>& m1, int replicates, unsigned workers,
              const Overrides& o) {
  const Scenario base = load_scenario(path, o);
  SweepOptions opt;
  opt.m0 = m0.empty() ? std::vector<double>{base.M0} : m0;
  opt.m1 = m1.empty() ? std::vector<double>{base.M1} : m1;
  opt.replicates = replicates;
  opt.workers = workers;
  opt.csv = output_dir(o) / "records.csv";
  opt.on_record = [](const RunRecord& r) {
    std::cout << r.scenario_hash << " M0=" << r.m0 << " M1=" << r.m1 << " seed=" << r.seed
              << " order=" << fmt(r.max_order()) << " " << r.status << std::endl;
  };
  if (m0.empty() && m1.empty()) {
    std::cout << "empty grid, nothing to run\n";
    return 0;
  }
  const auto records = sweep(base, opt);
  std::cout << records.size() << " records in " << opt.csv.string() << "\n";
  print_exponents(records);
  return 0;
}

int cmd_report(const std::string& path) {
  const auto records = read_records(path);
  if (records.empty()) throw DegenerateInputError("no records in " + path);
  int ok = 0, partial = 0, failed = 0, consistent = 0;
  for (const auto& r : records) {
    print_record(r);
    if (r.failed()) ++failed;
    else if (r.status == "ok") ++ok;
    else ++partial;
    consistent += r.consistent;
  }
  std::cout << records.size() << " records: " << ok << " ok, " << partial << " partial, "
            << failed << " failed, " << consistent << " consistent\n";
  print_exponents(records);
  return 0;
}

int cmd_plot(const std::string& path, const std::string& kind_name) {
  const PlotKind kind = parse_plot_kind(kind_name);
  std::ifstream in(path);
  std::string first;
  if (!in || !std::getline(in, first)) throw ConfigError("cannot read " + path);
  if (first == std::string("# ") + kTraceVersion) {
    std::cout << emit_plot_data(read_trace(path), kind);
  } else {
    std::cout << emit_plot_data(read_records(path), kind);
  }
  return 0;
}

int cmd_selftest(const Overrides& o) {
  bool all = true;
  for (int d = 0; d <= 4; ++d) {
    Scenario s;
    s.initial = "caloric:" + std::to_string(d);
    if (o.grid_n) s.grid_n = *o.grid_n;
    if (o.tol) s.tolerance = *o.tol;
    const RunRecord r = run_scenario(s).record;
    const bool pass = r.status == "ok" && r.consistent && std::abs(r.d_cylinder - d) <= 0.1 &&
                      std::abs(r.m_gaussian - d) <= 0.1 && r.m_qbar == d;
    all = all && pass;
    std::cout << (pass ? "PASS" : "FAIL") << " caloric:" << d << "  d_cylinder="
              << fmt(r.d_cylinder) << " m_gaussian=" << fmt(r.m_gaussian)
              << " m_qbar=" << r.m_qbar << " consistent=" << (r.consistent ? "yes" : "no")
              << "  " << r.status << "\n";
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"freqlab: frequency functions and vanishing order of parabolic equations"};
  app.require_subcommand(1);

  Overrides o;
  int grid_n = 0;
  double grid_size = 0, k0 = 0, tol = 0;
  std::uint64_t seed = 0;
  app.add_option("--grid-n", grid_n, "grid points per axis (power of two)");
  app.add_option("--grid-size", grid_size, "half-period L of the torus [-L, L)^n");
  app.add_option("--k0", k0, "gradient bound K0 used to pick epsilon");
  app.add_option("--out", o.out, "output directory (default: $FREQLAB_OUT or ./freqlab-out)");
  app.add_option("--seed", seed, "seed for oscillator phases");
  app.add_option("--tol", tol, "estimator consistency tolerance");

  std::string config, file, kind;
  std::vector<double> m0, m1;
  int replicates = 1;
  unsigned workers = 0;

  auto* run = app.add_subcommand("run", "run one scenario");
  run->add_option("config", config)->required()->check(CLI::ExistingFile);

  auto* sw = app.add_subcommand("sweep", "sweep the declared bounds M0 x M1");
  sw->add_option("config", config)->required()->check(CLI::ExistingFile);
  sw->add_option("--m0", m0, "M0 values")->delimiter(',');
  sw->add_option("--m1", m1, "M1 values")->delimiter(',');
  sw->add_option("--replicates", replicates, "runs per grid point")->check(CLI::PositiveNumber);
  sw->add_option("--workers", workers, "parallel runs (0: all cores)");

  auto* rep = app.add_subcommand("report", "summarize a records file");
  rep->add_option("records", file)->required()->check(CLI::ExistingFile);

  auto* plot = app.add_subcommand("plot", "two-column plot data from records or a trace");
  plot->add_option("file", file)->required()->check(CLI::ExistingFile);
  plot->add_option("--kind", kind, "qbar_vs_tau | phi_loglog | order_vs_bound")->required();

  auto* self = app.add_subcommand("selftest", "caloric calibration suite");

  // Flags may appear before or after the subcommand.
  for (auto* sub : {run, sw, rep, plot, self}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  if (app.count("--grid-n")) o.grid_n = grid_n;
  if (app.count("--grid-size")) o.grid_size = grid_size;
  if (app.count("--k0")) o.k0 = k0;
  if (app.count("--seed")) o.seed = seed;
  if (app.count("--tol")) o.tol = tol;

  try {
    if (*run) return cmd_run(config, o);
    if (*sw) return cmd_sweep(config, m0, m1, replicates, workers, o);
    if (*rep) return cmd_report(file);
    if (*plot) return cmd_plot(file, kind);
    if (*self) return cmd_selftest(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
