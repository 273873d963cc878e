#include "wsn/trust.hpp"

#include <cmath>

#include "wsn/errors.hpp"

namespace wsn {

void TrustConfig::validate() const {
  if (!(x > 0.0 && x < 1.0)) throw ConfigError("trust.x must lie in (0, 1)");
  if (!(ttf > 0.0 && ttf <= 100.0)) throw ConfigError("trust.ttf must lie in (0, 100]");
}

double trust_factor(std::uint32_t consecutive_drops, double x) {
  if (!(x > 0.0 && x < 1.0)) throw ConfigError("trust decay base must lie in (0, 1)");
  return 100.0 * std::pow(x, static_cast<double>(consecutive_drops));
}

std::vector<NodeId> detect_malicious(Topology& topo, const TrustConfig& cfg) {
  cfg.validate();
  std::vector<NodeId> detected;
  for (Node& n : topo.nodes) {
    if (!n.eligible()) continue;
    if (trust_factor(n.consecutive_drops, cfg.x) <= cfg.ttf) {
      n.status = NodeStatus::Malicious;
      detected.push_back(n.id);
    }
  }
  return detected;
}

}  // namespace wsn
