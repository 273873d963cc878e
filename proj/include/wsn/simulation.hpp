#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "wsn/config.hpp"
#include "wsn/election.hpp"
#include "wsn/fuzzy.hpp"
#include "wsn/potential.hpp"
#include "wsn/topology.hpp"

namespace wsn {

enum class Mode { Dchfc, ChuflBaseline };

const char* to_string(Mode mode);
Mode parse_mode(std::string_view text);

/// Energy to transmit `bits` over `d` meters: e_elec*bits + eps_amp*bits*d^2.
double tx_cost(const EnergyModel& em, double bits, double d);
/// Energy to receive `bits`: e_elec*bits.
double rx_cost(const EnergyModel& em, double bits);

struct RoundMetrics {
  std::uint32_t round = 0;
  std::uint32_t packets_offered = 0;
  std::uint32_t packets_delivered = 0;
  std::uint32_t packets_lost = 0;
  double throughput = 0.0;  // packets delivered per round
  double total_residual_energy = 0.0;
  double energy_spent = 0.0;  // sum of all charges this round
  std::uint32_t alive_count = 0;
  std::uint32_t head_count = 0;
  std::uint32_t dropper_heads = 0;
  std::uint32_t detected_total = 0;

  friend bool operator==(const RoundMetrics&, const RoundMetrics&) = default;
};

/// Rounds at which the first node died, at most half the nodes remained alive, and the last died.
struct LifetimeReport {
  std::optional<std::uint32_t> fnd;
  std::optional<std::uint32_t> hna;
  std::optional<std::uint32_t> lnd;

  friend bool operator==(const LifetimeReport&, const LifetimeReport&) = default;
};

/// One network evolving round by round under a single election mode.
class Simulation {
 public:
  Simulation(const SimConfig& cfg, Topology topo, Mode mode);

  /// Runs detection, scoring, election, clustering and one traffic cycle.
  RoundMetrics run_round();

  /// True once every node is dead, no node is eligible for election, or max_rounds is reached.
  bool finished() const;

  std::uint32_t round() const { return round_; }
  Mode mode() const { return mode_; }
  const Topology& topology() const { return topo_; }
  const LifetimeReport& lifetime() const { return lifetime_; }
  const ElectionResult& last_election() const { return election_; }
  const std::vector<ScoreDetail>& last_scores() const { return scores_; }
  const std::vector<NodeId>& detected() const { return detected_; }

 private:
  bool spend(Node& n, double cost, double& spent);

  SimConfig cfg_;
  Topology topo_;
  Mode mode_;
  fuzzy::Engine engine_;
  std::uint32_t round_ = 0;
  bool stalled_ = false;
  LifetimeReport lifetime_;
  ElectionResult election_;
  std::vector<ScoreDetail> scores_;
  std::vector<NodeId> detected_;
};

struct RunResult {
  std::vector<RoundMetrics> rounds;
  LifetimeReport lifetime;
};

using RoundObserver = std::function<void(const Simulation&, const RoundMetrics&)>;

Topology generate_topology(const SimConfig& cfg, std::uint64_t seed);

/// Repeats run_round until the simulation finishes. Deterministic per (cfg, seed).
RunResult run_simulation(const SimConfig& cfg, std::uint64_t seed, Mode mode, const RoundObserver& observer = {});
RunResult run_simulation(const SimConfig& cfg, Topology topo, Mode mode, const RoundObserver& observer = {});

/// Per-mode figures used to compare two runs on the same topology.
struct ModeOutcome {
  double cumulative_loss = 0.0;    // packets lost over the common horizon
  double mean_throughput = 0.0;    // delivered per round over the common horizon
  double residual_at_ref = 0.0;    // total residual energy at the reference round
  double fnd = 0.0;                // milestone rounds; max_rounds + 1 when not reached
  double hna = 0.0;
  double lnd = 0.0;
};

struct SeedComparison {
  std::uint64_t seed = 0;
  std::uint32_t horizon = 0;        // rounds both runs executed
  std::uint32_t reference_round = 0;  // mode_b's HNA round, or the horizon when not reached
  RunResult a;
  RunResult b;
  ModeOutcome outcome_a;
  ModeOutcome outcome_b;
};

struct MetricDelta {
  double mean_a = 0.0;
  double mean_b = 0.0;
  double mean_delta = 0.0;  // mean_a - mean_b
  std::uint32_t a_greater = 0;
  std::uint32_t b_greater = 0;
  std::uint32_t equal = 0;
};

struct ComparisonReport {
  Mode mode_a = Mode::Dchfc;
  Mode mode_b = Mode::ChuflBaseline;
  std::vector<SeedComparison> seeds;
  MetricDelta cumulative_loss;
  MetricDelta mean_throughput;
  MetricDelta residual_at_ref;
  MetricDelta fnd;
  MetricDelta hna;
  MetricDelta lnd;
};

/// Outcome of one run measured over a horizon and reference round.
ModeOutcome measure(const RunResult& run, std::uint32_t horizon, std::uint32_t reference_round,
                    std::uint32_t max_rounds);

/// Runs both modes on the identical topology for each seed (seeds run in parallel).
ComparisonReport compare(const SimConfig& cfg, Mode mode_a, Mode mode_b, std::span<const std::uint64_t> seeds);

}  // namespace wsn
