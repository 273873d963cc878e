#include "wsn/election.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include "wsn/errors.hpp"

namespace wsn {

void ElectionConfig::validate() const {
  if (!(p_initial > 0.0 && p_initial < 1.0)) throw ConfigError("election.p_initial must lie in (0, 1)");
  if (!(d_threshold > 0.0)) throw ConfigError("election.d_threshold must be > 0");
  if (!(chufl_head_pct > 0.0 && chufl_head_pct <= 1.0)) {
    throw ConfigError("election.chufl_head_pct must lie in (0, 1]");
  }
}

std::size_t head_quota(double fraction, std::size_t population, Rounding rounding) {
  if (population == 0) return 0;
  const double raw = fraction * static_cast<double>(population);
  double k = 0.0;
  switch (rounding) {
    case Rounding::Ceil:
      // Guard against 0.07 * 100 = 7.000000000000001 style representation error.
      k = std::ceil(raw - 1e-9);
      break;
    case Rounding::Floor:
      k = std::floor(raw + 1e-9);
      break;
    case Rounding::Nearest:
      k = std::round(raw);
      break;
  }
  return std::clamp<std::size_t>(static_cast<std::size_t>(std::max(k, 0.0)), 1, population);
}

std::vector<PotentialScore> rank_by_potential(std::span<const PotentialScore> scores) {
  std::vector<PotentialScore> ranked(scores.begin(), scores.end());
  std::sort(ranked.begin(), ranked.end(), [](const PotentialScore& a, const PotentialScore& b) {
    if (a.potential != b.potential) return a.potential > b.potential;
    return a.node_id < b.node_id;
  });
  return ranked;
}

HeadSelection select_heads_dchfc(std::span<const PotentialScore> scores, const Topology& topo,
                                 const ElectionConfig& cfg) {
  if (scores.empty()) throw ElectionError("no eligible nodes to elect cluster heads from");
  cfg.validate();
  const auto ranked = rank_by_potential(scores);
  const std::size_t quota = head_quota(cfg.p_initial, ranked.size(), cfg.rounding);

  auto min_distance = [&](NodeId candidate, const std::vector<NodeId>& heads) {
    double best = std::numeric_limits<double>::infinity();
    const Position& p = topo.node(candidate).pos;
    for (NodeId h : heads) best = std::min(best, distance(p, topo.node(h).pos));
    return best;
  };

  HeadSelection sel;
  std::size_t k = 0;
  for (; k < ranked.size() && sel.heads.size() < quota; ++k) {
    const NodeId id = ranked[k].node_id;
    if (cfg.strict_initial_spacing && !sel.heads.empty() && !(min_distance(id, sel.heads) > cfg.d_threshold)) {
      sel.rejected.push_back(id);
      continue;
    }
    sel.heads.push_back(id);
  }
  sel.initial_count = sel.heads.size();

  for (; k < ranked.size(); ++k) {
    const NodeId id = ranked[k].node_id;
    if (min_distance(id, sel.heads) > cfg.d_threshold) {
      sel.heads.push_back(id);
    } else {
      sel.rejected.push_back(id);
    }
  }
  return sel;
}

std::vector<NodeId> select_heads_chufl(std::span<const PotentialScore> scores, const ElectionConfig& cfg) {
  if (scores.empty()) throw ElectionError("no eligible nodes to elect cluster heads from");
  cfg.validate();
  const auto ranked = rank_by_potential(scores);
  const std::size_t quota = head_quota(cfg.chufl_head_pct, ranked.size(), cfg.rounding);
  std::vector<NodeId> heads;
  heads.reserve(quota);
  for (std::size_t k = 0; k < quota; ++k) heads.push_back(ranked[k].node_id);
  return heads;
}

Assignment assign_clusters(const Topology& topo, std::span<const NodeId> heads) {
  if (heads.empty()) throw ElectionError("cannot form clusters without heads");
  std::vector<bool> is_head(topo.size(), false);
  for (NodeId h : heads) is_head.at(h) = true;

  Assignment out;
  for (const Node& n : topo.nodes) {
    if (!n.alive() || is_head[n.id]) continue;
    NodeId best = heads.front();
    double best_d = std::numeric_limits<double>::infinity();
    for (NodeId h : heads) {
      const double d = distance(n.pos, topo.node(h).pos);
      if (d < best_d || (d == best_d && h < best)) {
        best = h;
        best_d = d;
      }
    }
    out.head_of.emplace(n.id, best);
    if (best_d > topo.tx_range) out.out_of_range.push_back(n.id);
  }
  return out;
}

const char* to_string(Role role) {
  switch (role) {
    case Role::InitialHead:
      return "initial-head";
    case Role::SpatialHead:
      return "spatial-head";
    case Role::Member:
      return "member";
    case Role::Rejected:
      return "rejected";
    case Role::Malicious:
      return "malicious";
    case Role::Dead:
      return "dead";
  }
  return "?";
}

std::vector<Role> classify_roles(const Topology& topo, const ElectionResult& result) {
  std::vector<Role> roles(topo.size(), Role::Member);
  for (const Node& n : topo.nodes) {
    if (n.status == NodeStatus::Dead) roles[n.id] = Role::Dead;
    if (n.status == NodeStatus::Malicious) roles[n.id] = Role::Malicious;
  }
  for (NodeId r : result.rejected) roles.at(r) = Role::Rejected;
  for (std::size_t k = 0; k < result.heads.size(); ++k) {
    roles.at(result.heads[k]) = k < result.initial_count ? Role::InitialHead : Role::SpatialHead;
  }
  return roles;
}

void write_election_csv(const Topology& topo, const ElectionResult& result,
                        std::span<const PotentialScore> scores, std::ostream& out) {
  std::vector<std::optional<double>> potential(topo.size());
  for (const auto& s : scores) potential.at(s.node_id) = s.potential;
  const auto roles = classify_roles(topo, result);

  out << "node_id,potential,role,assigned_head\n";
  out << std::setprecision(10);
  for (const Node& n : topo.nodes) {
    out << n.id << ',';
    if (potential[n.id]) out << *potential[n.id];
    out << ',' << to_string(roles[n.id]) << ',';
    if (auto it = result.assignment.head_of.find(n.id); it != result.assignment.head_of.end()) out << it->second;
    out << '\n';
  }
}

}  // namespace wsn
