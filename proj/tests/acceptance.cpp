// Acceptance suite. Prints one PASS/FAIL line per criterion and exits nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "wsn/config.hpp"
#include "wsn/election.hpp"
#include "wsn/fuzzy.hpp"
#include "wsn/potential.hpp"
#include "wsn/report.hpp"
#include "wsn/simulation.hpp"
#include "wsn/trust.hpp"

using namespace wsn;

namespace {

// Tolerances and limits.
constexpr double kTrustRuntime = 1.0;        // s
constexpr double kCentroidTolerance = 1e-3;
constexpr std::size_t kCentroidSets = 24;
constexpr std::size_t kOracleCells = 1'000'000;
constexpr double kFuzzyRuntime = 10.0;       // s
constexpr double kReachTolerance = 1e-9;
constexpr int kReachTopologies = 50;
constexpr double kReachRuntime = 5.0;        // s
constexpr int kElectionInstances = 100;
constexpr double kElectionRuntime = 10.0;    // s
constexpr double kHandLedgerTolerance = 1e-12;
constexpr double kClosureTolerance = 1e-9;   // relative
constexpr std::size_t kComparisonSeeds = 20;
constexpr double kSeedShare = 0.8;
constexpr double kComparisonRuntime = 300.0; // s

struct Check {
  bool ok = true;
  std::vector<std::string> notes;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes.push_back(what);
    }
  }
  void note(const std::string& what) { notes.push_back(what); }
};

int failures = 0;

void criterion(int id, const char* title, double limit_s, const std::function<void(Check&)>& body) {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.require(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0.0) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "runtime %.2f s exceeds %.0f s", secs, limit_s);
    c.require(secs < limit_s, buf);
  }
  if (!c.ok) ++failures;
  std::printf("criterion %d: %s  %s (%.2f s)\n", id, c.ok ? "PASS" : "FAIL", title, secs);
  for (const auto& n : c.notes) std::printf("    %s\n", n.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

Topology plain_topology(const std::vector<Position>& pts, double tx_range = 250) {
  Topology t;
  t.field_width = 1000;
  t.field_height = 1000;
  t.tx_range = tx_range;
  t.sink = {500, 500};
  for (std::size_t i = 0; i < pts.size(); ++i) {
    Node n;
    n.id = static_cast<NodeId>(i);
    n.pos = pts[i];
    n.energy = 0.5;
    n.lqi = 200;
    t.nodes.push_back(n);
  }
  return t;
}

void trust_suite(Check& c) {
  for (double x : {0.1, 0.5, 0.9, 0.99}) {
    c.require(trust_factor(0, x) == 100.0, fmt("trust_factor(0, %g) != 100", x));
    for (std::uint32_t n = 0; n < 300; ++n) {
      if (!(trust_factor(n + 1, x) < trust_factor(n, x)) && trust_factor(n, x) > 0.0) {
        c.require(false, fmt("not strictly decreasing at n=%g, x=%g", n, x));
        break;
      }
    }
  }
  // 100 * 0.5 = 50 exactly, so a single drop sits on the threshold.
  auto t = plain_topology({{0, 0}, {10, 0}});
  t.node(0).consecutive_drops = 1;
  const auto det = detect_malicious(t, TrustConfig{0.5, 50.0, 0});
  c.require(det == std::vector<NodeId>{0}, "node with TF == TTF was not detected");
  c.require(t.node(1).status == NodeStatus::Alive, "node without drops was detected");
}

void fuzzy_suite(Check& c) {
  const auto out = fuzzy::default_output();
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (std::size_t k = 0; k < kCentroidSets; ++k) {
    fuzzy::AggregatedSet set(0.0, 1.0);
    std::vector<oracle::Clipped> parts;
    // Alternate between clipped output terms and arbitrary trapezoids.
    const std::size_t count = 1 + k % 5;
    for (std::size_t j = 0; j < count; ++j) {
      fuzzy::MembershipFunction mf;
      if (k % 2 == 0) {
        mf = out.terms()[(k + 2 * j) % out.term_count()].mf;
      } else {
        std::array<double, 4> p{u(rng), u(rng), u(rng), u(rng)};
        std::sort(p.begin(), p.end());
        mf = fuzzy::MembershipFunction::trapezoid(p[0], p[1], p[2], p[3]);
      }
      const double h = 0.05 + 0.95 * u(rng);
      set.add(mf, h);
      parts.push_back({{mf.a, mf.b, mf.c, mf.d}, h});
    }
    const double got = fuzzy::defuzzify_centroid(set);
    const double want = oracle::centroid(0.0, 1.0, parts, kOracleCells);
    worst = std::max(worst, std::abs(got - want));
  }
  c.require(worst <= kCentroidTolerance, fmt("centroid error %.3g exceeds %.0e", worst, kCentroidTolerance));
  c.note(fmt("%.0f random sets, worst centroid error %.3g", static_cast<double>(kCentroidSets), worst));

  // Totality: every antecedent combination resolves to exactly one rule, and a gap is rejected.
  const auto rb = fuzzy::default_rule_base();
  std::set<std::array<std::size_t, 3>> seen;
  for (const auto& r : rb.rules()) seen.insert(r.antecedent);
  c.require(rb.rules().size() == 27 && seen.size() == 27, "default table is not total");
  for (std::size_t e = 0; e < 3; ++e) {
    for (std::size_t r = 0; r < 3; ++r) {
      for (std::size_t p = 0; p < 3; ++p) c.require(rb.lookup({e, r, p}).antecedent == std::array{e, r, p}, "lookup");
    }
  }
  auto partial = fuzzy::default_rules();
  partial.pop_back();
  bool rejected = false;
  try {
    fuzzy::RuleBase(fuzzy::default_inputs(), fuzzy::default_output(), partial);
  } catch (const std::exception&) {
    rejected = true;
  }
  c.require(rejected, "a 26-rule table was accepted");

  const fuzzy::Engine engine(rb);
  const double high = engine.evaluate({0.9, 0.9, 0.9});
  const double low = engine.evaluate({0.1, 0.1, 0.1});
  c.require(high > low, fmt("all-High %.4f not above all-Low %.4f", high, low));
  c.note(fmt("plateau potentials: all-High %.4f, all-Low %.4f", high, low));
}

void reachability_suite(Check& c) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1000.0);
  double worst = 0.0;
  for (int trial = 0; trial < kReachTopologies; ++trial) {
    std::vector<Position> pts;
    std::vector<oracle::Pt> opts;
    for (int i = 0; i < 15; ++i) {
      const double x = u(rng), y = u(rng);
      pts.push_back({x, y});
      opts.push_back({x, y});
    }
    const auto t = plain_topology(pts);
    const auto m = oracle::distance_matrix(opts);
    const std::vector<bool> alive(15, true);
    for (std::size_t i = 0; i < 15; ++i) {
      worst = std::max(worst, std::abs(reachability(t, static_cast<NodeId>(i)) - oracle::reachability(m, alive, i, 250)));
    }
  }
  c.require(worst <= kReachTolerance, fmt("reachability error %.3g exceeds %.0e", worst, kReachTolerance));
  c.note(fmt("worst reachability error %.3g m", worst));
}

void election_suite(Check& c) {
  const ElectionConfig cfg;
  const fuzzy::Engine engine(fuzzy::default_rule_base());
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> u(0.0, 1000.0);
  std::uniform_int_distribution<std::size_t> size(50, 200);
  std::bernoulli_distribution malicious(0.1);
  std::bernoulli_distribution low_energy(0.3);

  std::size_t spacing_violations = 0, malicious_heads = 0, chufl_mismatches = 0;
  for (int trial = 0; trial < kElectionInstances; ++trial) {
    std::vector<Position> pts;
    const std::size_t n = size(rng);
    for (std::size_t i = 0; i < n; ++i) pts.push_back({u(rng), u(rng)});
    auto t = plain_topology(pts);
    for (auto& node : t.nodes) {
      node.lqi = synthetic_lqi(distance(node.pos, t.sink), t.tx_range, 255);
      if (low_energy(rng)) node.energy = 0.5 * u(rng) / 1000.0;
      if (malicious(rng)) node.status = NodeStatus::Malicious;
    }
    const auto scores = score_all(t, engine, 0.5);
    const auto sel = select_heads_dchfc(scores, t, cfg);
    for (std::size_t k = sel.initial_count; k < sel.heads.size(); ++k) {
      for (std::size_t j = 0; j < k; ++j) {
        if (!(distance(t.node(sel.heads[k]).pos, t.node(sel.heads[j]).pos) > cfg.d_threshold)) ++spacing_violations;
      }
    }
    for (NodeId h : sel.heads) {
      if (t.node(h).status == NodeStatus::Malicious) ++malicious_heads;
    }

    std::vector<std::pair<std::uint32_t, double>> pairs;
    for (const auto& s : scores) pairs.emplace_back(s.node_id, s.potential);
    const auto quota = head_quota(cfg.chufl_head_pct, scores.size(), cfg.rounding);
    if (select_heads_chufl(scores, cfg) != oracle::top_k(pairs, quota)) ++chufl_mismatches;
  }
  c.require(spacing_violations == 0, fmt("%.0f spacing violations", static_cast<double>(spacing_violations)));
  c.require(malicious_heads == 0, fmt("%.0f malicious heads", static_cast<double>(malicious_heads)));
  c.require(chufl_mismatches == 0, fmt("%.0f baseline selections differ from the oracle", static_cast<double>(chufl_mismatches)));

  // No detected node heads a cluster over a full protocol run either.
  SimConfig sim_cfg;
  sim_cfg.max_rounds = 300;
  std::size_t run_violations = 0;
  run_simulation(sim_cfg, 1, Mode::Dchfc, [&](const Simulation& sim, const RoundMetrics&) {
    for (NodeId h : sim.last_election().heads) {
      if (std::find(sim.detected().begin(), sim.detected().end(), h) != sim.detected().end()) ++run_violations;
    }
  });
  c.require(run_violations == 0, "a detected node was elected during a run");

  const auto line = plain_topology({{0, 0}, {150, 0}, {400, 0}, {450, 0}, {900, 0}});
  const std::vector<PotentialScore> ls{{0, 0.9}, {1, 0.8}, {2, 0.7}, {3, 0.6}, {4, 0.5}};
  const auto lsel = select_heads_dchfc(ls, line, cfg);
  c.require(lsel.heads == std::vector<NodeId>{0, 2, 4} && lsel.rejected == std::vector<NodeId>{1, 3},
            "five-node line example differs");
}

void conservation_suite(Check& c) {
  // Six-node star: one head on the sink with five members 100 m away.
  auto star = plain_topology({{500, 500}, {600, 500}, {500, 600}, {400, 500}, {500, 400}, {560, 580}});
  const SimConfig defaults;
  Simulation sim(defaults, star, Mode::Dchfc);
  const auto m = sim.run_round();
  c.require(sim.last_election().heads == std::vector<NodeId>{0}, "star head is not node 0");
  double worst = std::abs(sim.topology().node(0).energy - (0.5 - 6e-4));
  for (NodeId i = 1; i < 6; ++i) worst = std::max(worst, std::abs(sim.topology().node(i).energy - (0.5 - 3e-4)));
  c.require(worst <= kHandLedgerTolerance, fmt("hand ledger error %.3g", worst));
  c.require(m.packets_delivered == 6 && m.packets_lost == 0, "star round lost packets");

  std::size_t bad_rounds = 0;
  double worst_rel = 0.0;
  for (Mode mode : {Mode::Dchfc, Mode::ChuflBaseline}) {
    const auto run = run_simulation(defaults, defaults.seed, mode);
    const double initial = defaults.energy.initial_energy * defaults.network.node_count;
    double spent = 0.0;
    for (const auto& r : run.rounds) {
      spent += r.energy_spent;
      worst_rel = std::max(worst_rel, std::abs(initial - spent - r.total_residual_energy) / initial);
      if (r.packets_delivered + r.packets_lost != r.packets_offered) ++bad_rounds;
    }
    // Ordering applies to whichever milestones were reached.
    const auto& lt = run.lifetime;
    const std::string name = to_string(mode);
    if (lt.fnd && lt.hna) c.require(*lt.fnd <= *lt.hna, name + ": fnd after hna");
    if (lt.hna && lt.lnd) c.require(*lt.hna <= *lt.lnd, name + ": hna after lnd");
    if (lt.fnd && lt.lnd) c.require(*lt.fnd <= *lt.lnd, name + ": fnd after lnd");
    auto show = [](const std::optional<std::uint32_t>& v) { return v ? std::to_string(*v) : std::string("not reached"); };
    c.note(name + ": " + std::to_string(run.rounds.size()) + " rounds, fnd " + show(lt.fnd) + ", hna " + show(lt.hna) +
           ", lnd " + show(lt.lnd));
  }
  c.require(worst_rel <= kClosureTolerance, fmt("energy ledger relative error %.3g", worst_rel));
  c.require(bad_rounds == 0, fmt("%.0f rounds with delivered + lost != offered", static_cast<double>(bad_rounds)));
  c.note(fmt("worst relative ledger error %.3g", worst_rel));
}

void comparison_suite(Check& c) {
  SimConfig cfg;
  cfg.network.node_count = 122;
  cfg.network.malicious_count = 13;
  cfg.election.p_initial = 0.08;
  cfg.election.d_threshold = 200.0;
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 1; s <= kComparisonSeeds; ++s) seeds.push_back(s);
  const auto rep = compare(cfg, Mode::Dchfc, Mode::ChuflBaseline, seeds);
  const double need = kSeedShare * static_cast<double>(seeds.size());

  // lower_is_better: DCHFC must be below the baseline.
  auto direction = [&](const char* name, const MetricDelta& d, bool lower_is_better) {
    const bool mean_ok = lower_is_better ? d.mean_a < d.mean_b : d.mean_a > d.mean_b;
    const double wins = lower_is_better ? d.b_greater : d.a_greater;
    const bool ok = mean_ok && wins >= need;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s %-16s dchfc %.4g vs chufl %.4g, dchfc %s in %.0f/%zu seeds", ok ? "ok  " : "FAIL",
                  name, d.mean_a, d.mean_b, lower_is_better ? "lower" : "higher", wins, seeds.size());
    c.require(ok, buf);
    if (ok) c.note(buf);
  };
  direction("packet loss", rep.cumulative_loss, true);
  direction("throughput", rep.mean_throughput, false);
  direction("residual energy", rep.residual_at_ref, false);
  direction("FND", rep.fnd, false);
  direction("HNA", rep.hna, false);
}

void determinism_suite(Check& c) {
  const SimConfig cfg;
  auto csv = [&] {
    std::ostringstream out;
    report::write_rounds_csv(run_simulation(cfg, cfg.seed, Mode::Dchfc).rounds, out);
    return out.str();
  };
  const auto a = csv();
  const auto b = csv();
  c.require(!a.empty() && a == b, "rounds.csv differs between identical runs");
  c.note(fmt("%.0f bytes compared", static_cast<double>(a.size())));
}

}  // namespace

int main() {
  criterion(1, "trust factor and detection threshold", kTrustRuntime, trust_suite);
  criterion(2, "centroid oracle, rule totality, plateau ordering", kFuzzyRuntime, fuzzy_suite);
  criterion(3, "reachability against distance-matrix oracle", kReachRuntime, reachability_suite);
  criterion(4, "election invariants", kElectionRuntime, election_suite);
  criterion(5, "energy and packet conservation", 0.0, conservation_suite);
  criterion(6, "directional comparison over 20 seeds", kComparisonRuntime, comparison_suite);
  criterion(7, "byte-identical reruns", 0.0, determinism_suite);
  std::printf("%d of 7 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
