#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "freqlab/fields.hpp"

namespace freqlab {

inline constexpr const char* kRecordsVersion = "freqlab-records/1";

struct RunRecord {
  static constexpr double nan = std::numeric_limits<double>::quiet_NaN();

  std::string scenario_hash;
  double m0 = nan, m1 = nan, k0 = nan;
  std::uint64_t seed = 0;
  int dim = 1;
  double epsilon = nan;
  double q0 = nan;
  Point x_eps{nan, nan};
  Point drift_a{nan, nan};
  double d_cylinder = nan;
  double d_residual = nan;
  double m_gaussian = nan;
  double m_residual = nan;
  int m_qbar = -1;
  double dist_sp = nan;
  double qbar_terminal = nan;
  bool consistent = false;
  double solver_residual = nan;  // max relative residual over samples in [-epsilon, 0)
  // "ok", "partial: <stage>: <reason>" or "failed: <stage>: <reason>".
  std::string status = "failed: not run";
  double wall_time = nan;

  bool failed() const { return status.rfind("failed", 0) == 0; }
  // Largest finite order among the three estimators; NaN if none.
  double max_order() const;
};

std::string records_header();
std::string to_csv_row(const RunRecord& r);
RunRecord from_csv_row(const std::string& line);

// The row without the wall-time column; equal for reruns of one scenario.
std::string deterministic_row(const RunRecord& r);

std::vector<RunRecord> read_records(const std::filesystem::path& path);
// Writes the version line, the header and the rows sorted by scenario hash.
void write_records(const std::filesystem::path& path, std::vector<RunRecord> records);

}  // namespace freqlab
