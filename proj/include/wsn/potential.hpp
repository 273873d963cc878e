#pragma once

#include <iosfwd>
#include <vector>

#include "wsn/fuzzy.hpp"
#include "wsn/topology.hpp"

namespace wsn {

struct NodeInputs {
  double residual_energy = 0.0;  // joules
  double reachability = 0.0;     // meters
  double reception_power = 0.0;  // LQI per meter
};

struct PotentialScore {
  NodeId node_id = 0;
  double potential = 0.0;  // in [0, 1]

  friend bool operator==(const PotentialScore&, const PotentialScore&) = default;
};

/// Raw inputs, normalized inputs and the resulting score of one node.
struct ScoreDetail {
  NodeId node_id = 0;
  NodeInputs raw;
  fuzzy::Crisp normalized{};
  double potential = 0.0;
};

/// Isolated nodes report this many tx_ranges as their reachability.
inline constexpr double kIsolatedReachabilityFactor = 2.0;
/// Distances to the sink below this floor are clamped.
inline constexpr double kSinkDistanceFloor = 1.0;

/// Sum of distances to the N-1 neighbors divided by N, where N counts the node itself.
/// Small values mean a well-connected node.
double reachability(const Topology& topo, NodeId i);

/// LQI divided by distance to the sink (floored at 1 m).
double reception_power(const Topology& topo, NodeId i);

/// Decreasing map of reachability onto [0, 1]: max(0, 1 - r / tx_range).
double normalize_reachability(double r, double tx_range);

/// Scores every eligible node (neither Dead nor Malicious), in ascending id order.
std::vector<ScoreDetail> score_all_detailed(const Topology& topo, const fuzzy::Engine& engine,
                                            double initial_energy);
std::vector<PotentialScore> score_all(const Topology& topo, const fuzzy::Engine& engine, double initial_energy);

/// Debug dump. Columns: node_id,energy,reachability,reception_power,energy_norm,reachability_norm,
/// reception_power_norm,potential
void write_scores_csv(const std::vector<ScoreDetail>& scores, std::ostream& out);

}  // namespace wsn
