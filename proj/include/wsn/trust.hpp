#pragma once

#include <cstdint>
#include <vector>

#include "wsn/topology.hpp"

namespace wsn {

struct TrustConfig {
  double x = 0.9;     // per-drop decay base, in (0, 1)
  double ttf = 50.0;  // threshold trust factor, in (0, 100]
  std::uint32_t warmup_rounds = 5;

  void validate() const;
};

/// Exponential trust, 100 * x^n, for a streak of n consecutive dropped packets.
double trust_factor(std::uint32_t consecutive_drops, double x);

/// Returns every eligible node whose trust factor is at or below the threshold,
/// in ascending id order, and marks it Malicious in the topology.
std::vector<NodeId> detect_malicious(Topology& topo, const TrustConfig& cfg);

}  // namespace wsn
