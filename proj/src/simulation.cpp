#include "wsn/simulation.hpp"

#include <algorithm>
#include <future>
#include <numeric>
#include <string>

#include "wsn/errors.hpp"
#include "wsn/trust.hpp"

namespace wsn {

const char* to_string(Mode mode) {
  switch (mode) {
    case Mode::Dchfc:
      return "dchfc";
    case Mode::ChuflBaseline:
      return "chufl";
  }
  return "?";
}

Mode parse_mode(std::string_view text) {
  if (text == "dchfc") return Mode::Dchfc;
  if (text == "chufl" || text == "chufl-baseline") return Mode::ChuflBaseline;
  throw ConfigError("unknown mode '" + std::string(text) + "' (expected dchfc or chufl)");
}

double tx_cost(const EnergyModel& em, double bits, double d) {
  return em.e_elec * bits + em.eps_amp * bits * d * d;
}

double rx_cost(const EnergyModel& em, double bits) { return em.e_elec * bits; }

Simulation::Simulation(const SimConfig& cfg, Topology topo, Mode mode)
    : cfg_(cfg), topo_(std::move(topo)), mode_(mode), engine_(cfg.make_engine()) {}

bool Simulation::finished() const {
  if (stalled_ || round_ >= cfg_.max_rounds) return true;
  return std::none_of(topo_.nodes.begin(), topo_.nodes.end(), [](const Node& n) { return n.alive(); });
}

// Charges what the node can afford. Returns false (and drains the node) when it cannot pay in full.
bool Simulation::spend(Node& n, double cost, double& spent) {
  if (n.energy >= cost) {
    n.energy -= cost;
    spent += cost;
    return true;
  }
  spent += n.energy;
  n.energy = 0.0;
  return false;
}

RoundMetrics Simulation::run_round() {
  ++round_;
  RoundMetrics m;
  m.round = round_;
  const EnergyModel& em = cfg_.energy;
  const double bits = em.packet_bits;

  for (Node& n : topo_.nodes) {
    if (n.status == NodeStatus::ClusterHead) n.status = NodeStatus::Alive;
  }

  if (mode_ == Mode::Dchfc && round_ > cfg_.trust.warmup_rounds) {
    for (NodeId id : detect_malicious(topo_, cfg_.trust)) detected_.push_back(id);
  }

  scores_ = score_all_detailed(topo_, engine_, em.initial_energy);
  election_ = ElectionResult{};

  if (em.compute_cost > 0.0) {
    for (const auto& s : scores_) spend(topo_.node(s.node_id), em.compute_cost, m.energy_spent);
  }

  if (scores_.empty()) {
    stalled_ = true;
  } else {
    std::vector<PotentialScore> plain;
    plain.reserve(scores_.size());
    for (const auto& s : scores_) plain.push_back({s.node_id, s.potential});

    if (mode_ == Mode::Dchfc) {
      auto sel = select_heads_dchfc(plain, topo_, cfg_.election);
      election_.heads = std::move(sel.heads);
      election_.initial_count = sel.initial_count;
      election_.rejected = std::move(sel.rejected);
    } else {
      election_.heads = select_heads_chufl(plain, cfg_.election);
      election_.initial_count = election_.heads.size();
    }
    election_.assignment = assign_clusters(topo_, election_.heads);
    for (NodeId h : election_.heads) topo_.node(h).status = NodeStatus::ClusterHead;

    // Member uplink. A dropper head swallows what it receives.
    std::vector<std::uint32_t> pending(topo_.size(), 0);
    for (const auto& [member_id, head_id] : election_.assignment.head_of) {
      Node& member = topo_.node(member_id);
      Node& head = topo_.node(head_id);
      if (member.energy <= 0.0) continue;
      ++m.packets_offered;
      if (!spend(member, tx_cost(em, bits, distance(member.pos, head.pos)), m.energy_spent) ||
          head.energy <= 0.0 || !spend(head, rx_cost(em, bits), m.energy_spent)) {
        ++m.packets_lost;
        continue;
      }
      if (head.is_dropper) {
        ++head.consecutive_drops;
        ++m.packets_lost;
        continue;
      }
      ++pending[head_id];
    }

    // One aggregate per head to the sink, carrying the head's own reading plus what it forwards.
    for (NodeId head_id : election_.heads) {
      Node& head = topo_.node(head_id);
      if (head.is_dropper) ++m.dropper_heads;
      if (head.energy <= 0.0) {
        m.packets_lost += pending[head_id];
        continue;
      }
      ++m.packets_offered;
      const std::uint32_t carried = pending[head_id] + 1;
      if (spend(head, tx_cost(em, bits, distance(head.pos, topo_.sink)), m.energy_spent)) {
        m.packets_delivered += carried;
        if (!head.is_dropper) head.consecutive_drops = 0;
      } else {
        m.packets_lost += carried;
      }
    }
    m.head_count = static_cast<std::uint32_t>(election_.heads.size());
  }

  for (Node& n : topo_.nodes) {
    if (n.energy <= 0.0) {
      n.energy = 0.0;
      n.status = NodeStatus::Dead;
    }
    if (n.alive()) ++m.alive_count;
    m.total_residual_energy += n.energy;
  }
  m.throughput = m.packets_delivered;
  m.detected_total = static_cast<std::uint32_t>(detected_.size());

  const std::size_t total = topo_.size();
  if (!lifetime_.fnd && m.alive_count < total) lifetime_.fnd = round_;
  if (!lifetime_.hna && 2 * std::size_t{m.alive_count} <= total) lifetime_.hna = round_;
  if (!lifetime_.lnd && m.alive_count == 0) lifetime_.lnd = round_;
  return m;
}

Topology generate_topology(const SimConfig& cfg, std::uint64_t seed) {
  return generate_topology(cfg.topology_config(), seed);
}

RunResult run_simulation(const SimConfig& cfg, std::uint64_t seed, Mode mode, const RoundObserver& observer) {
  return run_simulation(cfg, generate_topology(cfg, seed), mode, observer);
}

RunResult run_simulation(const SimConfig& cfg, Topology topo, Mode mode, const RoundObserver& observer) {
  Simulation sim(cfg, std::move(topo), mode);
  RunResult result;
  while (!sim.finished()) {
    result.rounds.push_back(sim.run_round());
    if (observer) observer(sim, result.rounds.back());
  }
  result.lifetime = sim.lifetime();
  return result;
}

ModeOutcome measure(const RunResult& run, std::uint32_t horizon, std::uint32_t reference_round,
                    std::uint32_t max_rounds) {
  ModeOutcome out;
  const std::size_t h = std::min<std::size_t>(horizon, run.rounds.size());
  double delivered = 0.0;
  for (std::size_t k = 0; k < h; ++k) {
    out.cumulative_loss += run.rounds[k].packets_lost;
    delivered += run.rounds[k].packets_delivered;
  }
  out.mean_throughput = h > 0 ? delivered / static_cast<double>(h) : 0.0;
  if (!run.rounds.empty() && reference_round > 0) {
    const std::size_t idx = std::min<std::size_t>(reference_round, run.rounds.size()) - 1;
    out.residual_at_ref = run.rounds[idx].total_residual_energy;
  }
  const double censored = static_cast<double>(max_rounds) + 1.0;
  out.fnd = run.lifetime.fnd ? *run.lifetime.fnd : censored;
  out.hna = run.lifetime.hna ? *run.lifetime.hna : censored;
  out.lnd = run.lifetime.lnd ? *run.lifetime.lnd : censored;
  return out;
}

namespace {

MetricDelta summarize(const std::vector<SeedComparison>& seeds, double ModeOutcome::*field) {
  MetricDelta d;
  for (const auto& s : seeds) {
    const double a = s.outcome_a.*field;
    const double b = s.outcome_b.*field;
    d.mean_a += a;
    d.mean_b += b;
    if (a > b) {
      ++d.a_greater;
    } else if (b > a) {
      ++d.b_greater;
    } else {
      ++d.equal;
    }
  }
  if (!seeds.empty()) {
    d.mean_a /= static_cast<double>(seeds.size());
    d.mean_b /= static_cast<double>(seeds.size());
  }
  d.mean_delta = d.mean_a - d.mean_b;
  return d;
}

}  // namespace

ComparisonReport compare(const SimConfig& cfg, Mode mode_a, Mode mode_b, std::span<const std::uint64_t> seeds) {
  if (seeds.empty()) throw ConfigError("compare needs at least one seed");
  cfg.validate();

  auto one_seed = [&cfg, mode_a, mode_b](std::uint64_t seed) {
    SeedComparison sc;
    sc.seed = seed;
    const Topology topo = generate_topology(cfg, seed);
    sc.a = run_simulation(cfg, topo, mode_a);
    sc.b = run_simulation(cfg, topo, mode_b);
    sc.horizon = static_cast<std::uint32_t>(std::min(sc.a.rounds.size(), sc.b.rounds.size()));
    sc.reference_round = sc.b.lifetime.hna ? *sc.b.lifetime.hna : sc.horizon;
    sc.outcome_a = measure(sc.a, sc.horizon, sc.reference_round, cfg.max_rounds);
    sc.outcome_b = measure(sc.b, sc.horizon, sc.reference_round, cfg.max_rounds);
    return sc;
  };

  std::vector<std::future<SeedComparison>> jobs;
  jobs.reserve(seeds.size());
  for (std::uint64_t seed : seeds) jobs.push_back(std::async(std::launch::async, one_seed, seed));

  ComparisonReport report;
  report.mode_a = mode_a;
  report.mode_b = mode_b;
  for (auto& job : jobs) report.seeds.push_back(job.get());

  report.cumulative_loss = summarize(report.seeds, &ModeOutcome::cumulative_loss);
  report.mean_throughput = summarize(report.seeds, &ModeOutcome::mean_throughput);
  report.residual_at_ref = summarize(report.seeds, &ModeOutcome::residual_at_ref);
  report.fnd = summarize(report.seeds, &ModeOutcome::fnd);
  report.hna = summarize(report.seeds, &ModeOutcome::hna);
  report.lnd = summarize(report.seeds, &ModeOutcome::lnd);
  return report;
}

}  // namespace wsn
