#include "wsn/potential.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>

namespace wsn {

double reachability(const Topology& topo, NodeId i) {
  const Node& self = topo.node(i);
  const auto nbrs = neighbors(topo, i);
  if (nbrs.empty()) return kIsolatedReachabilityFactor * topo.tx_range;

  double sum = 0.0;
  for (NodeId j : nbrs) sum += distance(self.pos, topo.node(j).pos);
  // N includes the node itself, so the divisor is one more than the number of summed terms.
  const double n = static_cast<double>(nbrs.size() + 1);
  return sum / n;
}

double reception_power(const Topology& topo, NodeId i) {
  const Node& self = topo.node(i);
  const double d = std::max(distance(self.pos, topo.sink), kSinkDistanceFloor);
  return self.lqi / d;
}

double normalize_reachability(double r, double tx_range) { return std::max(0.0, 1.0 - r / tx_range); }

std::vector<ScoreDetail> score_all_detailed(const Topology& topo, const fuzzy::Engine& engine,
                                            double initial_energy) {
  std::vector<ScoreDetail> out;
  for (const Node& n : topo.nodes) {
    if (!n.eligible()) continue;
    ScoreDetail s;
    s.node_id = n.id;
    s.raw.residual_energy = n.energy;
    s.raw.reachability = reachability(topo, n.id);
    s.raw.reception_power = reception_power(topo, n.id);
    out.push_back(s);
  }

  double max_rp = 0.0;
  for (const auto& s : out) max_rp = std::max(max_rp, s.raw.reception_power);

  for (auto& s : out) {
    s.normalized[0] = std::clamp(s.raw.residual_energy / initial_energy, 0.0, 1.0);
    s.normalized[1] = normalize_reachability(s.raw.reachability, topo.tx_range);
    s.normalized[2] = max_rp > 0.0 ? s.raw.reception_power / max_rp : 0.0;
    s.potential = engine.evaluate(s.normalized);
  }
  return out;
}

std::vector<PotentialScore> score_all(const Topology& topo, const fuzzy::Engine& engine, double initial_energy) {
  const auto detailed = score_all_detailed(topo, engine, initial_energy);
  std::vector<PotentialScore> out;
  out.reserve(detailed.size());
  for (const auto& s : detailed) out.push_back({s.node_id, s.potential});
  return out;
}

void write_scores_csv(const std::vector<ScoreDetail>& scores, std::ostream& out) {
  out << "node_id,energy,reachability,reception_power,energy_norm,reachability_norm,reception_power_norm,"
         "potential\n";
  out << std::setprecision(10);
  for (const auto& s : scores) {
    out << s.node_id << ',' << s.raw.residual_energy << ',' << s.raw.reachability << ',' << s.raw.reception_power
        << ',' << s.normalized[0] << ',' << s.normalized[1] << ',' << s.normalized[2] << ',' << s.potential
        << '\n';
  }
}

}  // namespace wsn
