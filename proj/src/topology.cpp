#include "wsn/topology.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "wsn/errors.hpp"

namespace wsn {

namespace {

// Platform-independent conversions from raw 64-bit engine output; the standard
// distributions are implementation-defined and would break cross-platform determinism.
double unit_interval(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Unbiased integer in [0, n) by rejection.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;
  while (true) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % n;
  }
}

}  // namespace

double distance(const Position& a, const Position& b) { return std::hypot(a.x - b.x, a.y - b.y); }

const char* to_string(NodeStatus status) {
  switch (status) {
    case NodeStatus::Alive:
      return "alive";
    case NodeStatus::Dead:
      return "dead";
    case NodeStatus::Malicious:
      return "malicious";
    case NodeStatus::ClusterHead:
      return "cluster-head";
  }
  return "?";
}

void TopologyConfig::validate() const {
  if (node_count < 2) throw ConfigError("node_count must be >= 2");
  if (!(field_width > 0.0) || !(field_height > 0.0)) throw ConfigError("field dimensions must be > 0");
  if (malicious_count >= node_count) throw ConfigError("malicious_count must be < node_count");
  if (!(tx_range > 0.0)) throw ConfigError("tx_range must be > 0");
  if (!(initial_energy > 0.0)) throw ConfigError("initial_energy must be > 0");
  if (!(lqi_max > 0.0)) throw ConfigError("lqi_max must be > 0");
  if (sink.x < 0.0 || sink.x > field_width || sink.y < 0.0 || sink.y > field_height)
    throw ConfigError("sink position must lie inside the field");
}

double synthetic_lqi(double sink_distance, double tx_range, double lqi_max) {
  const double r2 = tx_range * tx_range;
  return lqi_max * r2 / (r2 + sink_distance * sink_distance);
}

Topology generate_topology(const TopologyConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  std::mt19937_64 rng(seed);

  Topology topo;
  topo.field_width = cfg.field_width;
  topo.field_height = cfg.field_height;
  topo.sink = cfg.sink;
  topo.tx_range = cfg.tx_range;
  topo.rng_seed = seed;
  topo.nodes.reserve(cfg.node_count);

  for (NodeId id = 0; id < cfg.node_count; ++id) {
    Node n;
    n.id = id;
    n.pos.x = unit_interval(rng) * cfg.field_width;
    n.pos.y = unit_interval(rng) * cfg.field_height;
    n.energy = cfg.initial_energy;
    n.lqi = synthetic_lqi(distance(n.pos, cfg.sink), cfg.tx_range, cfg.lqi_max);
    topo.nodes.push_back(n);
  }

  // Partial Fisher-Yates picks the droppers.
  std::vector<NodeId> order(cfg.node_count);
  std::iota(order.begin(), order.end(), NodeId{0});
  for (std::uint32_t k = 0; k < cfg.malicious_count; ++k) {
    const auto j = k + bounded(rng, cfg.node_count - k);
    std::swap(order[k], order[j]);
    topo.nodes[order[k]].is_dropper = true;
  }
  return topo;
}

std::vector<NodeId> neighbors(const Topology& topo, NodeId i) {
  const Node& self = topo.node(i);
  std::vector<NodeId> out;
  for (const Node& other : topo.nodes) {
    if (other.id == i || !other.alive()) continue;
    if (distance(self.pos, other.pos) <= topo.tx_range) out.push_back(other.id);
  }
  return out;
}

void write_topology_csv(const Topology& topo, std::ostream& out) {
  out << "id,x,y,energy,lqi,is_dropper\n";
  out << std::setprecision(17);
  for (const Node& n : topo.nodes) {
    out << n.id << ',' << n.pos.x << ',' << n.pos.y << ',' << n.energy << ',' << n.lqi << ','
        << (n.is_dropper ? 1 : 0) << '\n';
  }
}

Topology read_topology_csv(std::istream& in, const TopologyConfig& cfg) {
  Topology topo;
  topo.field_width = cfg.field_width;
  topo.field_height = cfg.field_height;
  topo.sink = cfg.sink;
  topo.tx_range = cfg.tx_range;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("id,", 0) == 0) continue;

    std::istringstream row(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (cells.size() != 6) {
      throw ConfigError("topology csv line " + std::to_string(line_no) + ": expected 6 columns");
    }
    Node n;
    try {
      n.id = static_cast<NodeId>(std::stoul(cells[0]));
      n.pos.x = std::stod(cells[1]);
      n.pos.y = std::stod(cells[2]);
      n.energy = std::stod(cells[3]);
      n.lqi = std::stod(cells[4]);
      n.is_dropper = std::stoi(cells[5]) != 0;
    } catch (const std::exception&) {
      throw ConfigError("topology csv line " + std::to_string(line_no) + ": malformed number");
    }
    if (n.id != topo.nodes.size()) {
      throw ConfigError("topology csv line " + std::to_string(line_no) + ": ids must be dense and ordered");
    }
    if (n.pos.x < 0 || n.pos.x > cfg.field_width || n.pos.y < 0 || n.pos.y > cfg.field_height) {
      throw ConfigError("topology csv line " + std::to_string(line_no) + ": position outside the field");
    }
    if (n.energy < 0 || n.lqi < 0) {
      throw ConfigError("topology csv line " + std::to_string(line_no) + ": negative energy or lqi");
    }
    n.status = n.energy > 0 ? NodeStatus::Alive : NodeStatus::Dead;
    topo.nodes.push_back(n);
  }
  if (topo.nodes.size() < 2) throw ConfigError("topology csv must contain at least 2 nodes");
  return topo;
}

}  // namespace wsn
