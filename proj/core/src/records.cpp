#include "freqlab/records.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "freqlab/errors.hpp"

namespace freqlab {
namespace {

const std::vector<std::string>& columns() {
  static const std::vector<std::string> c = {
      "scenario_hash", "m0", "m1", "k0", "seed", "dim", "epsilon", "q0", "x_eps_0", "x_eps_1",
      "a_0", "a_1", "d_cylinder", "d_residual", "m_gaussian", "m_residual", "m_qbar", "dist_sp",
      "qbar_terminal", "consistent", "solver_residual", "status", "wall_time"};
  return c;
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_num(const std::string& s) {
  if (s == "nan" || s.empty()) return std::numeric_limits<double>::quiet_NaN();
  try {
    return std::stod(s);
  } catch (const std::exception&) {
    throw ConfigError("bad number in records file: '" + s + "'");
  }
}

std::string escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::string> fields_of(const RunRecord& r) {
  return {r.scenario_hash, num(r.m0), num(r.m1), num(r.k0), std::to_string(r.seed),
          std::to_string(r.dim), num(r.epsilon), num(r.q0), num(r.x_eps[0]), num(r.x_eps[1]),
          num(r.drift_a[0]), num(r.drift_a[1]), num(r.d_cylinder), num(r.d_residual),
          num(r.m_gaussian), num(r.m_residual), std::to_string(r.m_qbar), num(r.dist_sp),
          num(r.qbar_terminal), r.consistent ? "true" : "false", num(r.solver_residual),
          escape(r.status), num(r.wall_time)};
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
  return s;
}

}  // namespace

double RunRecord::max_order() const {
  double m = std::numeric_limits<double>::quiet_NaN();
  for (double v : {d_cylinder, m_gaussian, m_qbar >= 0 ? double(m_qbar) : m}) {
    if (std::isfinite(v) && !(v <= m)) m = v;
  }
  return m;
}

std::string records_header() { return join(columns()); }

std::string to_csv_row(const RunRecord& r) { return join(fields_of(r)); }

std::string deterministic_row(const RunRecord& r) {
  auto f = fields_of(r);
  f.pop_back();
  return join(f);
}

RunRecord from_csv_row(const std::string& line) {
  const auto f = split_csv(line);
  if (f.size() != columns().size()) {
    throw ConfigError("records row has " + std::to_string(f.size()) + " columns, expected " +
                      std::to_string(columns().size()));
  }
  RunRecord r;
  r.scenario_hash = f[0];
  r.m0 = parse_num(f[1]);
  r.m1 = parse_num(f[2]);
  r.k0 = parse_num(f[3]);
  r.seed = std::stoull(f[4]);
  r.dim = std::stoi(f[5]);
  r.epsilon = parse_num(f[6]);
  r.q0 = parse_num(f[7]);
  r.x_eps = {parse_num(f[8]), parse_num(f[9])};
  r.drift_a = {parse_num(f[10]), parse_num(f[11])};
  r.d_cylinder = parse_num(f[12]);
  r.d_residual = parse_num(f[13]);
  r.m_gaussian = parse_num(f[14]);
  r.m_residual = parse_num(f[15]);
  r.m_qbar = std::stoi(f[16]);
  r.dist_sp = parse_num(f[17]);
  r.qbar_terminal = parse_num(f[18]);
  r.consistent = f[19] == "true";
  r.solver_residual = parse_num(f[20]);
  r.status = f[21];
  r.wall_time = parse_num(f[22]);
  return r;
}

std::vector<RunRecord> read_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open records file " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != std::string("# ") + kRecordsVersion) {
    throw ConfigError(path.string() + " does not start with '# " + kRecordsVersion + "'");
  }
  if (!std::getline(in, line) || line != records_header()) {
    throw ConfigError(path.string() + " has an unexpected column header");
  }
  std::vector<RunRecord> out;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(from_csv_row(line));
  }
  return out;
}

void write_records(const std::filesystem::path& path, std::vector<RunRecord> records) {
  std::stable_sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) {
    return a.scenario_hash < b.scenario_hash;
  });
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw ConfigError("cannot write records file " + path.string());
    out << "# " << kRecordsVersion << "\n" << records_header() << "\n";
    for (const auto& r : records) out << to_csv_row(r) << "\n";
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace freqlab
