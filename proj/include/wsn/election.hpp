#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "wsn/potential.hpp"
#include "wsn/topology.hpp"

namespace wsn {

enum class Rounding { Ceil, Floor, Nearest };

struct ElectionConfig {
  double p_initial = 0.08;
  double d_threshold = 200.0;  // meters
  double chufl_head_pct = 0.14;
  Rounding rounding = Rounding::Ceil;
  // Also apply the spacing test to the initial heads (the first is always admitted).
  bool strict_initial_spacing = false;

  void validate() const;
};

/// fraction * population rounded per `rounding`, clamped to [1, population].
std::size_t head_quota(double fraction, std::size_t population, Rounding rounding);

/// Potential descending, ties by ascending node id.
std::vector<PotentialScore> rank_by_potential(std::span<const PotentialScore> scores);

struct HeadSelection {
  std::vector<NodeId> heads;  // admission order
  std::size_t initial_count = 0;
  std::vector<NodeId> rejected;
};

/// Admits the top quota unconditionally, then walks the rest in rank order admitting a node
/// only when its distance to every admitted head strictly exceeds d_threshold.
/// The quota is taken of the number of scored (eligible) nodes.
HeadSelection select_heads_dchfc(std::span<const PotentialScore> scores, const Topology& topo,
                                 const ElectionConfig& cfg);

/// Top chufl_head_pct of the scored nodes by potential, no spacing filter.
std::vector<NodeId> select_heads_chufl(std::span<const PotentialScore> scores, const ElectionConfig& cfg);

struct Assignment {
  std::map<NodeId, NodeId> head_of;
  // Members farther than tx_range from their head.
  std::vector<NodeId> out_of_range;
};

/// Every alive non-head node (detected malicious ones included) joins its nearest head; exact ties go
/// to the smaller head id.
Assignment assign_clusters(const Topology& topo, std::span<const NodeId> heads);

struct ElectionResult {
  std::vector<NodeId> heads;
  std::size_t initial_count = 0;
  std::vector<NodeId> rejected;
  Assignment assignment;
};

enum class Role { InitialHead, SpatialHead, Member, Rejected, Malicious, Dead };

const char* to_string(Role role);

/// Role of every node for the election dump.
std::vector<Role> classify_roles(const Topology& topo, const ElectionResult& result);

/// Columns: node_id,potential,role,assigned_head. Unscored nodes leave potential empty, heads and
/// excluded nodes leave assigned_head empty.
void write_election_csv(const Topology& topo, const ElectionResult& result,
                        std::span<const PotentialScore> scores, std::ostream& out);

}  // namespace wsn
