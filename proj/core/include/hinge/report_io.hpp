#pragma once

#include "hinge/analysis_harness.hpp"
#include "hinge/energy.hpp"
#include "hinge/nonlinearity.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace hinge {

/// Numeric table with a header row.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// 17 significant digits; parses back to the identical double.
std::string format_double(double v);

/// Header row plus one line per row, comma separated, '\n' terminated.
/// Header fields containing commas, quotes or newlines are quoted.
/// Throws std::runtime_error on I/O failure.
void write_csv(const CsvTable& table, const std::filesystem::path& path);
CsvTable read_csv(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);

/// t, g_1..g_k, l2, h2star, h4star, kinetic, elastic, potential, total,
/// dissipation_rate, work_rate.
CsvTable trajectory_table(const OdeSystem& system, const Trajectory& traj);

/// x, u, u_x, u_xx on a uniform grid including both endpoints.
CsvTable snapshot_table(const OdeSystem& system, const ModalState& state, int points = 257);

/// t, lhs, rhs, margin.
CsvTable bound_table(const BoundReport& report);

/// One table per ladder: parameter column followed by the metric columns.
std::vector<CsvTable> study_tables(const StudyReport& report);

std::string bounds_json(const std::vector<BoundReport>& reports);
std::string study_json(const StudyReport& report);
std::string hypothesis_json(const HypothesisReport& report);

}  // namespace hinge
