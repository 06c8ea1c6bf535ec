#include "hinge/report_io.hpp"

#include <json.hpp>

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hinge {
namespace {

using nlohmann::json;

std::string quote_field(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

// Splits one CSV record; quoted fields may contain commas and doubled quotes.
std::vector<std::string> split_record(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_double(const std::string& text, const std::filesystem::path& path) {
  if (text == "nan" || text == "-nan") return std::numeric_limits<double>::quiet_NaN();
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw std::runtime_error("bad numeric field '" + text + "' in " + path.string());
  }
  return v;
}

json map_json(const std::map<std::string, double>& m) {
  json j = json::object();
  for (const auto& [k, v] : m) j[k] = v;
  return j;
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                 std::chars_format::general, 17);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf.data(), ptr);
}

void write_csv(const CsvTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i) out << ',';
    out << quote_field(table.header[i]);
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << format_double(row[i]);
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) return table;
  table.header = split_record(line);
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::vector<double> row;
    for (const auto& field : split_record(line)) row.push_back(parse_double(field, path));
    if (row.size() != table.header.size()) {
      throw std::runtime_error("row width mismatch in " + path.string());
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

CsvTable trajectory_table(const OdeSystem& system, const Trajectory& traj) {
  const int k = system.size();
  CsvTable table;
  table.header.push_back("t");
  for (int i = 1; i <= k; ++i) table.header.push_back("g_" + std::to_string(i));
  for (const char* name : {"l2", "h2star", "h4star", "kinetic", "elastic", "potential", "total",
                           "dissipation_rate", "work_rate"}) {
    table.header.emplace_back(name);
  }
  const auto& basis = system.basis();
  for (const auto& s : traj.states) {
    const EnergyReport e = energy_report(system, s);
    std::vector<double> row;
    row.reserve(table.header.size());
    row.push_back(s.t);
    for (int i = 0; i < k; ++i) row.push_back(s.g[i]);
    row.push_back(std::sqrt(squared_norm(basis, s.g, Space::L2)));
    row.push_back(std::sqrt(squared_norm(basis, s.g, Space::H2Star)));
    row.push_back(std::sqrt(squared_norm(basis, s.g, Space::H4Star)));
    row.insert(row.end(), {e.kinetic, e.elastic, e.potential, e.total, e.dissipation_rate,
                           e.work_rate});
    table.rows.push_back(std::move(row));
  }
  return table;
}

CsvTable snapshot_table(const OdeSystem& system, const ModalState& state, int points) {
  if (points < 2) throw std::invalid_argument("snapshot needs at least 2 points");
  const Interval& iv = system.basis().interval();
  std::vector<double> xs(points);
  for (int i = 0; i < points; ++i) {
    xs[i] = iv.a + iv.length() * static_cast<double>(i) / (points - 1);
  }
  xs.back() = iv.b;
  const SpectralField field(system.basis_ptr(), state.g);
  const auto u = synthesize(field, xs, 0);
  const auto ux = synthesize(field, xs, 1);
  const auto uxx = synthesize(field, xs, 2);
  CsvTable table{{"x", "u", "u_x", "u_xx"}, {}};
  for (int i = 0; i < points; ++i) table.rows.push_back({xs[i], u[i], ux[i], uxx[i]});
  return table;
}

CsvTable bound_table(const BoundReport& report) {
  CsvTable table{{"t", "lhs", "rhs", "margin"}, {}};
  for (std::size_t i = 0; i < report.times.size(); ++i) {
    table.rows.push_back({report.times[i], report.lhs[i], report.rhs[i], report.margins[i]});
  }
  return table;
}

std::vector<CsvTable> study_tables(const StudyReport& report) {
  std::vector<CsvTable> out;
  for (const auto& ladder : report.ladders) {
    CsvTable table;
    table.header.push_back(ladder.parameter);
    table.header.insert(table.header.end(), ladder.metric_names.begin(),
                        ladder.metric_names.end());
    for (std::size_t i = 0; i < ladder.parameters.size(); ++i) {
      std::vector<double> row{ladder.parameters[i]};
      row.insert(row.end(), ladder.metrics[i].begin(), ladder.metrics[i].end());
      table.rows.push_back(std::move(row));
    }
    out.push_back(std::move(table));
  }
  return out;
}

std::string bounds_json(const std::vector<BoundReport>& reports) {
  json j = json::object();
  bool all = true;
  for (const auto& r : reports) {
    json entry;
    entry["passed"] = r.passed;
    entry["tolerance"] = r.tolerance;
    entry["min_margin"] = r.min_margin();
    entry["constants"] = map_json(r.constants);
    entry["notes"] = r.notes;
    j["bounds"][std::string(to_string(r.bound))] = entry;
    all = all && r.passed;
  }
  j["passed"] = all;
  return j.dump(2);
}

std::string study_json(const StudyReport& report) {
  json j;
  j["study"] = report.study_id;
  j["passed"] = report.passed;
  j["rates"] = map_json(report.rates);
  j["constants"] = map_json(report.constants);
  j["notes"] = report.notes;
  j["ladders"] = json::array();
  for (const auto& ladder : report.ladders) {
    j["ladders"].push_back({{"parameter", ladder.parameter},
                            {"metric_names", ladder.metric_names},
                            {"parameters", ladder.parameters},
                            {"metrics", ladder.metrics}});
  }
  return j.dump(2);
}

std::string hypothesis_json(const HypothesisReport& report) {
  json j;
  j["passed"] = report.passed;
  j["violations"] = json::array();
  for (const auto& v : report.violations) {
    j["violations"].push_back({{"s", v.s}, {"quantity", v.quantity}, {"value", v.value}});
  }
  return j.dump(2);
}

}  // namespace hinge
