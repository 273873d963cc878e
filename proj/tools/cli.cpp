#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "wsn/config.hpp"
#include "wsn/errors.hpp"
#include "wsn/report.hpp"
#include "wsn/simulation.hpp"

namespace wsn::cli {

namespace fs = std::filesystem;

namespace {

struct Override {
  std::string key;
  std::string value;
};

// `--section.key=value` arguments are config overrides; everything else goes to CLI11.
std::vector<std::string> split_overrides(const std::vector<std::string>& args, std::vector<Override>& overrides) {
  std::vector<std::string> rest;
  for (const auto& a : args) {
    const auto eq = a.find('=');
    if (a.rfind("--", 0) == 0 && eq != std::string::npos && a.substr(2, eq - 2).find('.') != std::string::npos) {
      overrides.push_back({a.substr(2, eq - 2), a.substr(eq + 1)});
    } else {
      rest.push_back(a);
    }
  }
  return rest;
}

SimConfig resolve_config(const std::string& config_path, const std::vector<Override>& overrides) {
  SimConfig cfg;
  std::string path = config_path;
  if (path.empty()) {
    if (const char* env = std::getenv(kConfigEnvVar); env && *env) path = env;
  }
  if (!path.empty()) cfg = load_config(path);
  for (const auto& o : overrides) {
    try {
      set_value(cfg, o.key, o.value);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("command line: ") + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
}

template <typename Fn>
void write_stream(const fs::path& path, Fn&& fn) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  fn(f);
}

struct RunOptions {
  std::string config_path;
  std::string out_dir = "out/run";
  std::string mode = "dchfc";
  std::optional<std::uint64_t> seed;
  std::string topology_csv;
  std::optional<std::uint32_t> election_round;
  bool svg = false;
  bool export_topology = false;
};

int cmd_run(const RunOptions& opt, const std::vector<Override>& overrides, std::ostream& out) {
  SimConfig cfg = resolve_config(opt.config_path, overrides);
  if (opt.seed) cfg.seed = *opt.seed;
  const Mode mode = parse_mode(opt.mode);

  Topology topo;
  if (opt.topology_csv.empty()) {
    topo = generate_topology(cfg, cfg.seed);
  } else {
    std::ifstream in(opt.topology_csv);
    if (!in) throw ConfigError("cannot open topology file " + opt.topology_csv);
    topo = read_topology_csv(in, cfg.topology_config());
  }

  const fs::path dir(opt.out_dir);
  fs::create_directories(dir);
  write_file(dir / "resolved_config.json", to_json(cfg).dump(2) + "\n");
  if (opt.export_topology) write_stream(dir / "topology.csv", [&](std::ostream& f) { write_topology_csv(topo, f); });

  const std::uint32_t target = opt.election_round.value_or(cfg.trust.warmup_rounds + 1);
  Simulation sim(cfg, std::move(topo), mode);
  RunResult result;
  std::optional<Topology> snap_topo;
  ElectionResult snap_election;
  std::vector<ScoreDetail> snap_scores;
  auto snapshot = [&] {
    snap_topo = sim.topology();
    snap_election = sim.last_election();
    snap_scores = sim.last_scores();
  };
  while (!sim.finished()) {
    result.rounds.push_back(sim.run_round());
    if (sim.round() == target) snapshot();
  }
  if (!snap_topo) snapshot();
  result.lifetime = sim.lifetime();

  write_stream(dir / "rounds.csv", [&](std::ostream& f) { report::write_rounds_csv(result.rounds, f); });
  auto summary = report::run_summary_json(result, mode, cfg.seed);
  summary["election_round"] = result.rounds.empty() ? 0 : std::min<std::size_t>(target, result.rounds.size());
  write_file(dir / "lifetime.json", summary.dump(2) + "\n");

  std::vector<PotentialScore> plain;
  for (const auto& s : snap_scores) plain.push_back({s.node_id, s.potential});
  write_stream(dir / "election.csv",
               [&](std::ostream& f) { write_election_csv(*snap_topo, snap_election, plain, f); });
  write_stream(dir / "potentials.csv", [&](std::ostream& f) { write_scores_csv(snap_scores, f); });
  if (opt.svg) write_file(dir / "topology.svg", report::topology_svg(*snap_topo, snap_election));

  out << to_string(mode) << " seed " << cfg.seed << ": " << result.rounds.size() << " rounds, FND "
      << summary["fnd"].dump() << ", HNA " << summary["hna"].dump() << ", LND " << summary["lnd"].dump()
      << ", delivered " << summary["packets_delivered"].get<std::uint64_t>() << ", lost "
      << summary["packets_lost"].get<std::uint64_t>() << "\n";
  out << "artifacts written to " << dir.string() << "\n";
  return kExitOk;
}

struct CompareOptions {
  std::string config_path;
  std::string out_dir = "out/compare";
  std::string seeds;
  std::string mode_a = "dchfc";
  std::string mode_b = "chufl";
};

void write_compare_artifacts(const ComparisonReport& rep, const fs::path& dir) {
  fs::create_directories(dir);
  write_stream(dir / "compare_rounds.csv", [&](std::ostream& f) { report::write_comparison_csv(rep, f); });
  write_stream(dir / "per_seed.csv", [&](std::ostream& f) { report::write_per_seed_csv(rep, f); });
  write_file(dir / "summary.json", report::comparison_json(rep).dump(2) + "\n");

  std::vector<const RunResult*> ra;
  std::vector<const RunResult*> rb;
  for (const auto& s : rep.seeds) {
    ra.push_back(&s.a);
    rb.push_back(&s.b);
  }
  const auto ma = report::mean_series(ra);
  const auto mb = report::mean_series(rb);
  const std::string na = std::string(to_string(rep.mode_a)) + (rep.mode_a == rep.mode_b ? " (a)" : "");
  const std::string nb = std::string(to_string(rep.mode_b)) + (rep.mode_a == rep.mode_b ? " (b)" : "");

  auto chart = [&](const char* file, const char* title, const char* ylabel, double report::MeanPoint::*field) {
    std::vector<report::Series> series{{na, "#d62728", {}}, {nb, "#1f77b4", {}}};
    for (const auto& p : ma) series[0].points.emplace_back(p.round, p.*field);
    for (const auto& p : mb) series[1].points.emplace_back(p.round, p.*field);
    write_file(dir / file, report::line_chart_svg(title, "round", ylabel, series));
  };
  chart("packet_loss.svg", "Packet loss vs simulation time", "packets lost per round",
        &report::MeanPoint::packets_lost);
  chart("throughput.svg", "Throughput vs simulation time", "packets delivered per round",
        &report::MeanPoint::throughput);
  chart("residual_energy.svg", "Total residual energy of network", "joules",
        &report::MeanPoint::total_residual_energy);

  const std::vector<std::string> cats{"FND", "HNA", "LND"};
  std::vector<report::Series> bars{{na, "#d62728", {{0, rep.fnd.mean_a}, {1, rep.hna.mean_a}, {2, rep.lnd.mean_a}}},
                                   {nb, "#1f77b4", {{0, rep.fnd.mean_b}, {1, rep.hna.mean_b}, {2, rep.lnd.mean_b}}}};
  write_file(dir / "lifetime.svg", report::bar_chart_svg("Network lifetime milestones", "round", cats, bars));
}

void print_delta(std::ostream& out, const char* name, const MetricDelta& d) {
  out << "  " << name << ": a " << d.mean_a << ", b " << d.mean_b << ", delta " << d.mean_delta << " (a>b in "
      << d.a_greater << ", b>a in " << d.b_greater << ", equal in " << d.equal << ")\n";
}

int cmd_compare(const CompareOptions& opt, const std::vector<Override>& overrides, std::ostream& out) {
  SimConfig cfg = resolve_config(opt.config_path, overrides);
  const auto seeds = opt.seeds.empty() ? cfg.seeds : parse_seed_list(opt.seeds);
  const Mode a = parse_mode(opt.mode_a);
  const Mode b = parse_mode(opt.mode_b);

  const auto rep = compare(cfg, a, b, seeds);
  const fs::path dir(opt.out_dir);
  fs::create_directories(dir);
  write_file(dir / "resolved_config.json", to_json(cfg).dump(2) + "\n");
  write_compare_artifacts(rep, dir);

  out << to_string(a) << " (a) vs " << to_string(b) << " (b) over " << seeds.size() << " seeds\n";
  print_delta(out, "cumulative packet loss", rep.cumulative_loss);
  print_delta(out, "mean throughput", rep.mean_throughput);
  print_delta(out, "residual energy at b's HNA", rep.residual_at_ref);
  print_delta(out, "FND", rep.fnd);
  print_delta(out, "HNA", rep.hna);
  print_delta(out, "LND", rep.lnd);
  out << "artifacts written to " << dir.string() << "\n";
  return kExitOk;
}

struct SweepOptions {
  std::string config_path;
  std::string out_dir = "out/sweep";
  std::string seeds;
  std::string key;
  std::vector<std::string> values;
  std::string mode_a = "dchfc";
  std::string mode_b = "chufl";
};

int cmd_sweep(const SweepOptions& opt, const std::vector<Override>& overrides, std::ostream& out) {
  const SimConfig base = resolve_config(opt.config_path, overrides);
  const auto seeds = opt.seeds.empty() ? base.seeds : parse_seed_list(opt.seeds);
  const Mode a = parse_mode(opt.mode_a);
  const Mode b = parse_mode(opt.mode_b);
  if (opt.values.empty()) throw ConfigError("sweep needs at least one value");

  const fs::path dir(opt.out_dir);
  fs::create_directories(dir);
  std::ofstream csv(dir / "sweep.csv", std::ios::binary);
  if (!csv) throw std::runtime_error("cannot write sweep.csv");
  csv << "key,value";
  for (const char* side : {"a", "b"}) {
    for (const char* f : {"cumulative_loss", "mean_throughput", "residual_at_ref", "fnd", "hna", "lnd"}) {
      csv << ',' << side << '_' << f;
    }
  }
  csv << '\n' << std::setprecision(12);

  for (const auto& value : opt.values) {
    SimConfig cfg = base;
    try {
      set_value(cfg, opt.key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("sweep: ") + e.what());
    }
    cfg.validate();
    const auto rep = compare(cfg, a, b, seeds);
    csv << opt.key << ',' << value;
    for (auto side : {&MetricDelta::mean_a, &MetricDelta::mean_b}) {
      for (const auto* d : {&rep.cumulative_loss, &rep.mean_throughput, &rep.residual_at_ref, &rep.fnd, &rep.hna,
                            &rep.lnd}) {
        csv << ',' << d->*side;
      }
    }
    csv << '\n';
    out << opt.key << " = " << value << ": HNA " << rep.hna.mean_a << " vs " << rep.hna.mean_b << "\n";
  }
  out << "artifacts written to " << dir.string() << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<Override> overrides;
  std::vector<std::string> cli_args = split_overrides(args, overrides);

  CLI::App app{"Cluster-head election simulator for wireless sensor networks", "wsnsim"};
  app.require_subcommand(1);

  RunOptions run_opt;
  auto* run_cmd = app.add_subcommand("run", "Simulate one network and write its artifacts");
  run_cmd->add_option("-c,--config", run_opt.config_path, "Config file (default: $WSNSIM_CONFIG)");
  run_cmd->add_option("-o,--out", run_opt.out_dir, "Output directory");
  run_cmd->add_option("-m,--mode", run_opt.mode, "dchfc or chufl");
  run_cmd->add_option("-s,--seed", run_opt.seed, "Topology seed (overrides simulation.seed)");
  run_cmd->add_option("--topology", run_opt.topology_csv, "Load the topology from CSV instead of generating it");
  run_cmd->add_option("--election-round", run_opt.election_round,
                      "Round whose election is dumped (default: first round after the trust warm-up)");
  run_cmd->add_flag("--svg", run_opt.svg, "Also write topology.svg");
  run_cmd->add_flag("--export-topology", run_opt.export_topology, "Also write topology.csv");

  CompareOptions cmp_opt;
  auto* cmp_cmd = app.add_subcommand("compare", "Run two modes on identical topologies over several seeds");
  cmp_cmd->add_option("-c,--config", cmp_opt.config_path, "Config file (default: $WSNSIM_CONFIG)");
  cmp_cmd->add_option("-o,--out", cmp_opt.out_dir, "Output directory (created if missing)");
  cmp_cmd->add_option("--seeds", cmp_opt.seeds, "Seed list, e.g. 1..20 or 1,4,9");
  cmp_cmd->add_option("--mode-a", cmp_opt.mode_a, "First mode");
  cmp_cmd->add_option("--mode-b", cmp_opt.mode_b, "Second mode");

  SweepOptions sw_opt;
  auto* sw_cmd = app.add_subcommand("sweep", "Repeat compare while varying one config key");
  sw_cmd->add_option("-c,--config", sw_opt.config_path, "Config file (default: $WSNSIM_CONFIG)");
  sw_cmd->add_option("-o,--out", sw_opt.out_dir, "Output directory (created if missing)");
  sw_cmd->add_option("--seeds", sw_opt.seeds, "Seed list");
  sw_cmd->add_option("-k,--key", sw_opt.key, "Dotted config key to vary")->required();
  sw_cmd->add_option("-v,--values", sw_opt.values, "Values to try")->required()->delimiter(',');
  sw_cmd->add_option("--mode-a", sw_opt.mode_a, "First mode");
  sw_cmd->add_option("--mode-b", sw_opt.mode_b, "Second mode");

  try {
    std::vector<std::string> reversed(cli_args.rbegin(), cli_args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  }

  try {
    if (*run_cmd) return cmd_run(run_opt, overrides, out);
    if (*cmp_cmd) return cmd_compare(cmp_opt, overrides, out);
    if (*sw_cmd) return cmd_sweep(sw_opt, overrides, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << "\n";
    return kExitRuntimeError;
  }
  return kExitRuntimeError;
}

}  // namespace wsn::cli
