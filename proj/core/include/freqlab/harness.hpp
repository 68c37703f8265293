#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "freqlab/records.hpp"
#include "freqlab/scenario.hpp"
#include "freqlab/similarity.hpp"

namespace freqlab {

struct RunResult {
  RunRecord record;
  std::optional<FrequencyTrace> trace;
  std::vector<std::string> notes;
};

// solve -> choose epsilon -> recenter at t = -epsilon -> trace -> estimators.
// Stage failures end up in record.status; nothing is thrown past the load stage
// except ConfigError for an invalid scenario.
RunResult run_scenario(const Scenario& s);

struct SweepOptions {
  std::vector<double> m0;
  std::vector<double> m1;
  int replicates = 1;
  unsigned workers = 0;         // 0: hardware concurrency
  std::filesystem::path csv;    // empty: keep records in memory only
  std::function<void(const RunRecord&)> on_record;
};

// Scenarios for the cross product of M0 x M1 x replicates; replicate r uses
// seed base.seed + r.
std::vector<Scenario> sweep_scenarios(const Scenario& base, const SweepOptions& options);

// Runs every scenario whose hash is not already in options.csv. Returns all
// records (old and new) sorted by hash.
std::vector<RunRecord> sweep(const Scenario& base, const SweepOptions& options);

enum class Bound { M0, M1 };

struct ExponentReport {
  Bound bound = Bound::M0;
  double exponent = 0.0;
  double theory_exponent = 0.0;
  double intercept = 0.0;
  int points = 0;
  bool pass = false;
  std::vector<double> bound_values;
  std::vector<double> envelope;  // running maximum of the observed order
  std::string text;
};

// Least-squares slope of log(max order) against log(M) over records where the
// other bound is fixed. Throws DegenerateInputError with fewer than 4 distinct
// values of M.
ExponentReport fit_bound_exponent(const std::vector<RunRecord>& records, Bound bound);

// Fits every bound that varies across the records.
std::vector<ExponentReport> fit_bound_exponents(const std::vector<RunRecord>& records);

enum class PlotKind { QbarVsTau, PhiLogLog, OrderVsBound };

PlotKind parse_plot_kind(const std::string& name);
std::string plot_kind_name(PlotKind kind);

std::string emit_plot_data(const FrequencyTrace& trace, PlotKind kind);
std::string emit_plot_data(const std::vector<RunRecord>& records, PlotKind kind);

inline constexpr const char* kTraceVersion = "freqlab-trace/1";
void write_trace(const std::filesystem::path& path, const FrequencyTrace& trace);
FrequencyTrace read_trace(const std::filesystem::path& path);

}  // namespace freqlab
