#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "wsn/election.hpp"
#include "wsn/simulation.hpp"

namespace wsn::report {

/// Column schema of rounds.csv, in order.
inline constexpr const char* kRoundsHeader =
    "round,packets_offered,packets_delivered,packets_lost,throughput,total_residual_energy,energy_spent,"
    "alive_count,head_count,dropper_heads,detected_total";

void write_rounds_csv(std::span<const RoundMetrics> rounds, std::ostream& out);

nlohmann::json lifetime_json(const LifetimeReport& lifetime);
nlohmann::json run_summary_json(const RunResult& run, Mode mode, std::uint64_t seed);
nlohmann::json comparison_json(const ComparisonReport& report);

/// Per-round mean over several runs. A run that ended early contributes its final energy and
/// alive count and zero traffic for the remaining rounds.
struct MeanPoint {
  std::uint32_t round = 0;
  double packets_lost = 0.0;
  double throughput = 0.0;
  double total_residual_energy = 0.0;
  double alive_count = 0.0;
};
std::vector<MeanPoint> mean_series(std::span<const RunResult* const> runs);

/// Columns: round, then <mode>_packets_lost,<mode>_throughput,<mode>_total_residual_energy,
/// <mode>_alive_count for mode a and mode b.
void write_comparison_csv(const ComparisonReport& report, std::ostream& out);
/// Columns: seed,horizon,reference_round, then each ModeOutcome field for a and b.
void write_per_seed_csv(const ComparisonReport& report, std::ostream& out);

struct Series {
  std::string name;
  std::string color;
  std::vector<std::pair<double, double>> points;
};

std::string line_chart_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                           std::span<const Series> series);

/// Grouped bars: one group per category, one bar per series (series[i].points[k].second is the
/// value of category k).
std::string bar_chart_svg(const std::string& title, const std::string& y_label,
                          std::span<const std::string> categories, std::span<const Series> series);

/// Field map: heads red, detected malicious black, members grey with a link to their head, sink blue.
std::string topology_svg(const Topology& topo, const ElectionResult& election);

}  // namespace wsn::report
