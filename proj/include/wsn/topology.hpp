#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace wsn {

using NodeId = std::uint32_t;

struct Position {
  double x = 0.0;  // meters
  double y = 0.0;

  friend bool operator==(const Position&, const Position&) = default;
};

/// Euclidean distance in the plane.
double distance(const Position& a, const Position& b);

enum class NodeStatus { Alive, Dead, Malicious, ClusterHead };

const char* to_string(NodeStatus status);

struct Node {
  NodeId id = 0;
  Position pos;
  double energy = 0.0;  // joules
  double lqi = 0.0;
  std::uint32_t consecutive_drops = 0;
  NodeStatus status = NodeStatus::Alive;
  // Ground-truth behavior: drops every packet it is asked to forward, otherwise behaves (and
  // spends energy) like any other node. Only trust detection turns it into status Malicious.
  bool is_dropper = false;

  bool alive() const { return status != NodeStatus::Dead; }
  // Alive and not excluded by detection: may be scored and elected.
  bool eligible() const { return status == NodeStatus::Alive || status == NodeStatus::ClusterHead; }

  friend bool operator==(const Node&, const Node&) = default;
};

struct TopologyConfig {
  std::uint32_t node_count = 122;
  double field_width = 1000.0;
  double field_height = 1000.0;
  Position sink{500.0, 500.0};
  double tx_range = 250.0;
  std::uint32_t malicious_count = 13;
  double initial_energy = 0.5;
  double lqi_max = 255.0;

  void validate() const;
};

struct Topology {
  std::vector<Node> nodes;
  double field_width = 0.0;
  double field_height = 0.0;
  Position sink;
  double tx_range = 0.0;
  std::uint64_t rng_seed = 0;

  const Node& node(NodeId id) const { return nodes.at(id); }
  Node& node(NodeId id) { return nodes.at(id); }
  std::size_t size() const { return nodes.size(); }

  friend bool operator==(const Topology&, const Topology&) = default;
};

/// Synthetic link-quality indicator, monotone decreasing in distance to the sink.
double synthetic_lqi(double sink_distance, double tx_range, double lqi_max);

/// Places cfg.node_count nodes uniformly in the field and marks cfg.malicious_count of them
/// as packet droppers. A pure function of (cfg, seed), bit-identical across platforms.
Topology generate_topology(const TopologyConfig& cfg, std::uint64_t seed);

/// All j != i within tx_range of node i, excluding dead nodes. Sorted by id.
std::vector<NodeId> neighbors(const Topology& topo, NodeId i);

/// CSV export/import. Columns: id,x,y,energy,lqi,is_dropper
void write_topology_csv(const Topology& topo, std::ostream& out);
Topology read_topology_csv(std::istream& in, const TopologyConfig& cfg);

}  // namespace wsn
