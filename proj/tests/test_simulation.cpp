#include <doctest.h>

#include <numeric>

#include "wsn/errors.hpp"
#include "wsn/simulation.hpp"

using namespace wsn;

namespace {

// Head candidate on the sink with five members 100 m away.
Topology star_topology() {
  Topology t;
  t.field_width = 1000;
  t.field_height = 1000;
  t.tx_range = 250;
  t.sink = {500, 500};
  const std::vector<Position> pts{{500, 500}, {600, 500}, {500, 600}, {400, 500}, {500, 400}, {560, 580}};
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

SimConfig small_config() {
  SimConfig cfg;
  cfg.network.node_count = 40;
  cfg.network.malicious_count = 4;
  cfg.network.field_width = 500;
  cfg.network.field_height = 500;
  cfg.network.sink = {250, 250};
  cfg.max_rounds = 400;
  return cfg;
}

}  // namespace

TEST_CASE("radio model costs on hand values") {
  const EnergyModel em;
  CHECK(tx_cost(em, 0, 100) == 0.0);
  CHECK(tx_cost(em, 2000, 0) == doctest::Approx(1e-4).epsilon(1e-12));
  CHECK(tx_cost(em, 2000, 100) == doctest::Approx(3e-4).epsilon(1e-12));
  CHECK(rx_cost(em, 2000) == doctest::Approx(1e-4).epsilon(1e-12));
}

TEST_CASE("mode names round-trip") {
  CHECK(parse_mode("dchfc") == Mode::Dchfc);
  CHECK(parse_mode("chufl") == Mode::ChuflBaseline);
  CHECK(parse_mode("chufl-baseline") == Mode::ChuflBaseline);
  CHECK(std::string(to_string(Mode::Dchfc)) == "dchfc");
  CHECK_THROWS_AS(parse_mode("leach"), ConfigError);
}

TEST_CASE("one round on a six-node star matches the hand ledger") {
  const SimConfig cfg;
  Simulation sim(cfg, star_topology(), Mode::Dchfc);
  const auto m = sim.run_round();
  REQUIRE(sim.last_election().heads == std::vector<NodeId>{0});
  CHECK(sim.last_election().initial_count == 1);

  const auto& t = sim.topology();
  CHECK(t.node(0).energy == doctest::Approx(0.5 - 6e-4).epsilon(1e-12));
  for (NodeId i = 1; i < 6; ++i) CHECK(t.node(i).energy == doctest::Approx(0.5 - 3e-4).epsilon(1e-12));

  CHECK(m.packets_offered == 6);
  CHECK(m.packets_delivered == 6);
  CHECK(m.packets_lost == 0);
  CHECK(m.throughput == 6.0);
  CHECK(m.head_count == 1);
  CHECK(m.alive_count == 6);
  CHECK(m.energy_spent == doctest::Approx(2.1e-3).epsilon(1e-12));
  CHECK(m.total_residual_energy == doctest::Approx(3.0 - 2.1e-3).epsilon(1e-12));
}

TEST_CASE("a dropper head in the baseline swallows its members' packets") {
  auto topo = star_topology();
  topo.node(0).is_dropper = true;
  const SimConfig cfg;
  Simulation sim(cfg, topo, Mode::ChuflBaseline);
  const auto m = sim.run_round();
  REQUIRE(sim.last_election().heads == std::vector<NodeId>{0});
  CHECK(m.packets_offered == 6);
  CHECK(m.packets_lost == 5);
  CHECK(m.packets_delivered == 1);
  CHECK(m.dropper_heads == 1);
  CHECK(sim.topology().node(0).consecutive_drops == 5);
  // The dropper pays the same energy as an honest head.
  CHECK(sim.topology().node(0).energy == doctest::Approx(0.5 - 6e-4).epsilon(1e-12));
}

TEST_CASE("dropper heads are detected after warm-up and never elected again") {
  auto topo = star_topology();
  topo.node(0).is_dropper = true;
  SimConfig cfg;
  cfg.max_rounds = 30;
  bool seen_detection = false;
  const auto run = run_simulation(cfg, topo, Mode::Dchfc, [&](const Simulation& sim, const RoundMetrics& m) {
    if (m.round <= cfg.trust.warmup_rounds) CHECK(sim.detected().empty());
    for (NodeId h : sim.last_election().heads) {
      for (NodeId d : sim.detected()) CHECK(h != d);
    }
    if (!sim.detected().empty()) seen_detection = true;
  });
  CHECK(seen_detection);
  CHECK(run.rounds.back().detected_total == 1);
  // Once node 0 is out, an honest head forwards everything.
  CHECK(run.rounds.back().packets_lost == 0);
}

TEST_CASE("an honest single head loses nothing") {
  const SimConfig cfg;
  Simulation sim(cfg, star_topology(), Mode::ChuflBaseline);
  for (int r = 0; r < 10; ++r) CHECK(sim.run_round().packets_lost == 0);
}

TEST_CASE("max_rounds of zero runs nothing") {
  SimConfig cfg = small_config();
  cfg.max_rounds = 0;
  const auto run = run_simulation(cfg, 1, Mode::Dchfc);
  CHECK(run.rounds.empty());
  CHECK(!run.lifetime.fnd);
}

TEST_CASE("nodes that cannot afford one packet all die in the first round") {
  SimConfig cfg = small_config();
  cfg.energy.initial_energy = 1e-6;
  const auto run = run_simulation(cfg, 1, Mode::Dchfc);
  REQUIRE(run.rounds.size() == 1);
  CHECK(run.lifetime.fnd == 1u);
  CHECK(run.lifetime.hna == 1u);
  CHECK(run.lifetime.lnd == 1u);
  CHECK(run.rounds[0].alive_count == 0);
}

TEST_CASE("full runs are deterministic and keep their books") {
  const SimConfig cfg = small_config();
  for (Mode mode : {Mode::Dchfc, Mode::ChuflBaseline}) {
    const auto a = run_simulation(cfg, 3, mode);
    const auto b = run_simulation(cfg, 3, mode);
    CHECK(a.rounds == b.rounds);
    CHECK(a.lifetime == b.lifetime);

    const double initial = cfg.energy.initial_energy * cfg.network.node_count;
    double spent = 0.0;
    std::uint32_t prev_alive = cfg.network.node_count;
    for (const auto& m : a.rounds) {
      spent += m.energy_spent;
      CHECK(std::abs(initial - spent - m.total_residual_energy) < 1e-9);
      CHECK(m.packets_delivered + m.packets_lost == m.packets_offered);
      CHECK(m.alive_count <= prev_alive);
      CHECK(m.throughput == m.packets_delivered);
      prev_alive = m.alive_count;
    }
  }
}

TEST_CASE("lifetime milestones are ordered") {
  SimConfig cfg = small_config();
  cfg.max_rounds = 5000;
  const auto run = run_simulation(cfg, 2, Mode::Dchfc);
  REQUIRE(run.lifetime.fnd);
  REQUIRE(run.lifetime.hna);
  REQUIRE(run.lifetime.lnd);
  CHECK(*run.lifetime.fnd <= *run.lifetime.hna);
  CHECK(*run.lifetime.hna <= *run.lifetime.lnd);
  CHECK(run.rounds.back().alive_count == 0);
}

TEST_CASE("measure censors missing milestones and uses the reference round") {
  RunResult run;
  for (std::uint32_t r = 1; r <= 4; ++r) {
    RoundMetrics m;
    m.round = r;
    m.packets_lost = r;
    m.packets_delivered = 10;
    m.total_residual_energy = 5.0 - r;
    run.rounds.push_back(m);
  }
  run.lifetime.fnd = 2;
  const auto o = measure(run, 3, 2, 100);
  CHECK(o.cumulative_loss == 6.0);
  CHECK(o.mean_throughput == 10.0);
  CHECK(o.residual_at_ref == 3.0);
  CHECK(o.fnd == 2.0);
  CHECK(o.hna == 101.0);
  CHECK(o.lnd == 101.0);
}

TEST_CASE("comparing a mode with itself yields zero deltas") {
  const SimConfig cfg = small_config();
  const std::vector<std::uint64_t> seeds{1, 2};
  const auto rep = compare(cfg, Mode::Dchfc, Mode::Dchfc, seeds);
  REQUIRE(rep.seeds.size() == 2);
  for (const MetricDelta* d : {&rep.cumulative_loss, &rep.mean_throughput, &rep.residual_at_ref, &rep.fnd, &rep.hna,
                               &rep.lnd}) {
    CHECK(d->mean_delta == 0.0);
    CHECK(d->equal == 2);
  }
}

TEST_CASE("both modes coincide on a two-node honest network") {
  SimConfig cfg;
  cfg.network.node_count = 2;
  cfg.network.malicious_count = 0;
  cfg.network.field_width = 100;
  cfg.network.field_height = 100;
  cfg.network.sink = {50, 50};
  cfg.max_rounds = 500;
  const std::vector<std::uint64_t> seeds{4};
  const auto rep = compare(cfg, Mode::Dchfc, Mode::ChuflBaseline, seeds);
  REQUIRE(rep.seeds.size() == 1);
  CHECK(rep.seeds[0].a.rounds == rep.seeds[0].b.rounds);
  CHECK(rep.seeds[0].a.lifetime == rep.seeds[0].b.lifetime);
}
