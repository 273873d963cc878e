#include "wsn/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>

#include "wsn/errors.hpp"

namespace wsn {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError(std::string(key) + ": expected a number, got '" + std::string(text) + "'");
  }
  return v;
}

std::uint64_t parse_uint(std::string_view key, std::string_view text) {
  text = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError(std::string(key) + ": expected a non-negative integer, got '" + std::string(text) + "'");
  }
  return v;
}

std::uint32_t parse_u32(std::string_view key, std::string_view text) {
  const auto v = parse_uint(key, text);
  if (v > UINT32_MAX) throw ConfigError(std::string(key) + ": value out of range");
  return static_cast<std::uint32_t>(v);
}

bool parse_bool(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError(std::string(key) + ": expected true or false, got '" + std::string(text) + "'");
}

Rounding parse_rounding(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "ceil") return Rounding::Ceil;
  if (text == "floor") return Rounding::Floor;
  if (text == "nearest" || text == "round") return Rounding::Nearest;
  throw ConfigError(std::string(key) + ": expected ceil, floor or nearest, got '" + std::string(text) + "'");
}

const char* rounding_name(Rounding r) {
  switch (r) {
    case Rounding::Ceil:
      return "ceil";
    case Rounding::Floor:
      return "floor";
    case Rounding::Nearest:
      return "nearest";
  }
  return "?";
}

fuzzy::MembershipFunction parse_breakpoints(std::string_view key, std::string_view text) {
  std::vector<double> v;
  std::string_view rest = text;
  while (true) {
    const auto comma = rest.find(',');
    v.push_back(parse_double(key, rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  if (v.size() != 4) throw ConfigError(std::string(key) + ": expected four breakpoints a,b,c,d");
  try {
    return fuzzy::MembershipFunction::trapezoid(v[0], v[1], v[2], v[3]);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(key) + ": " + e.what());
  }
}

nlohmann::json breakpoints_json(const fuzzy::MembershipFunction& mf) { return {mf.a, mf.b, mf.c, mf.d}; }

struct KeySpec {
  std::function<void(SimConfig&, std::string_view key, std::string_view value)> set;
  std::function<nlohmann::json(const SimConfig&)> get;
};

const std::map<std::string, KeySpec, std::less<>>& registry() {
  static const std::map<std::string, KeySpec, std::less<>> keys = [] {
    std::map<std::string, KeySpec, std::less<>> k;
#define WSN_DOUBLE(name, field)                                                                         \
  k[name] = {[](SimConfig& c, std::string_view key, std::string_view v) { c.field = parse_double(key, v); }, \
             [](const SimConfig& c) { return nlohmann::json(c.field); }}
#define WSN_U32(name, field)                                                                         \
  k[name] = {[](SimConfig& c, std::string_view key, std::string_view v) { c.field = parse_u32(key, v); }, \
             [](const SimConfig& c) { return nlohmann::json(c.field); }}

    WSN_U32("network.node_count", network.node_count);
    WSN_DOUBLE("network.field_width", network.field_width);
    WSN_DOUBLE("network.field_height", network.field_height);
    WSN_DOUBLE("network.tx_range", network.tx_range);
    WSN_DOUBLE("network.sink_x", network.sink.x);
    WSN_DOUBLE("network.sink_y", network.sink.y);
    WSN_U32("network.malicious_count", network.malicious_count);
    WSN_DOUBLE("network.lqi_max", network.lqi_max);

    WSN_DOUBLE("trust.x", trust.x);
    WSN_DOUBLE("trust.ttf", trust.ttf);
    WSN_U32("trust.warmup_rounds", trust.warmup_rounds);

    WSN_DOUBLE("election.p_initial", election.p_initial);
    WSN_DOUBLE("election.d_threshold", election.d_threshold);
    WSN_DOUBLE("election.chufl_head_pct", election.chufl_head_pct);
    k["election.rounding"] = {
        [](SimConfig& c, std::string_view key, std::string_view v) { c.election.rounding = parse_rounding(key, v); },
        [](const SimConfig& c) { return nlohmann::json(rounding_name(c.election.rounding)); }};
    k["election.strict_initial_spacing"] = {
        [](SimConfig& c, std::string_view key, std::string_view v) {
          c.election.strict_initial_spacing = parse_bool(key, v);
        },
        [](const SimConfig& c) { return nlohmann::json(c.election.strict_initial_spacing); }};

    WSN_DOUBLE("energy.e_elec", energy.e_elec);
    WSN_DOUBLE("energy.eps_amp", energy.eps_amp);
    WSN_DOUBLE("energy.packet_bits", energy.packet_bits);
    WSN_DOUBLE("energy.initial_energy", energy.initial_energy);
    WSN_DOUBLE("energy.compute_cost", energy.compute_cost);

    k["fuzzy.rulebase_path"] = {
        [](SimConfig& c, std::string_view, std::string_view v) { c.fuzzy.rulebase_path = std::string(trim(v)); },
        [](const SimConfig& c) { return nlohmann::json(c.fuzzy.rulebase_path); }};
    k["fuzzy.low"] = {
        [](SimConfig& c, std::string_view key, std::string_view v) { c.fuzzy.terms.low = parse_breakpoints(key, v); },
        [](const SimConfig& c) { return breakpoints_json(c.fuzzy.terms.low); }};
    k["fuzzy.medium"] = {[](SimConfig& c, std::string_view key,
                            std::string_view v) { c.fuzzy.terms.medium = parse_breakpoints(key, v); },
                         [](const SimConfig& c) { return breakpoints_json(c.fuzzy.terms.medium); }};
    k["fuzzy.high"] = {
        [](SimConfig& c, std::string_view key, std::string_view v) { c.fuzzy.terms.high = parse_breakpoints(key, v); },
        [](const SimConfig& c) { return breakpoints_json(c.fuzzy.terms.high); }};
    k["fuzzy.resolution"] = {
        [](SimConfig& c, std::string_view key, std::string_view v) { c.fuzzy.resolution = parse_uint(key, v); },
        [](const SimConfig& c) { return nlohmann::json(c.fuzzy.resolution); }};

    WSN_U32("simulation.max_rounds", max_rounds);
    k["simulation.seed"] = {
        [](SimConfig& c, std::string_view key, std::string_view v) { c.seed = parse_uint(key, v); },
        [](const SimConfig& c) { return nlohmann::json(c.seed); }};
    k["simulation.seeds"] = {
        [](SimConfig& c, std::string_view key, std::string_view v) {
          try {
            c.seeds = parse_seed_list(v);
          } catch (const ConfigError& e) {
            throw ConfigError(std::string(key) + ": " + e.what());
          }
        },
        [](const SimConfig& c) { return nlohmann::json(c.seeds); }};
#undef WSN_DOUBLE
#undef WSN_U32
    return k;
  }();
  return keys;
}

}  // namespace

void EnergyModel::validate() const {
  if (!(e_elec > 0.0)) throw ConfigError("energy.e_elec must be > 0");
  if (!(eps_amp > 0.0)) throw ConfigError("energy.eps_amp must be > 0");
  if (!(packet_bits > 0.0)) throw ConfigError("energy.packet_bits must be > 0");
  if (!(initial_energy > 0.0)) throw ConfigError("energy.initial_energy must be > 0");
  if (!(compute_cost >= 0.0)) throw ConfigError("energy.compute_cost must be >= 0");
}

TopologyConfig SimConfig::topology_config() const {
  TopologyConfig t = network;
  t.initial_energy = energy.initial_energy;
  return t;
}

void SimConfig::validate() const {
  try {
    topology_config().validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("network: ") + e.what());
  }
  trust.validate();
  election.validate();
  energy.validate();
  if (fuzzy.resolution < 2) throw ConfigError("fuzzy.resolution must be >= 2");
  try {
    (void)fuzzy::default_inputs(fuzzy.terms);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("fuzzy: ") + e.what());
  }
  if (seeds.empty()) throw ConfigError("simulation.seeds must list at least one seed");
}

fuzzy::Engine SimConfig::make_engine() const {
  if (fuzzy.rulebase_path.empty()) return fuzzy::Engine(fuzzy::default_rule_base(fuzzy.terms), fuzzy.resolution);
  return fuzzy::Engine(fuzzy::load_rule_base(fuzzy.rulebase_path, fuzzy.terms), fuzzy.resolution);
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& [k, _] : registry()) out.push_back(k);
    return out;
  }();
  return keys;
}

void set_value(SimConfig& cfg, std::string_view key, std::string_view value) {
  const auto it = registry().find(key);
  if (it == registry().end()) throw ConfigError("unknown config key '" + std::string(key) + "'");
  it->second.set(cfg, key, value);
}

SimConfig parse_config(std::istream& in, SimConfig base) {
  std::string line;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = line;
    if (const auto c = body.find_first_of("#;"); c != std::string_view::npos) body = body.substr(0, c);
    body = trim(body);
    if (body.empty()) continue;

    const auto where = [&] { return "config line " + std::to_string(line_no) + ": "; };
    if (body.front() == '[') {
      if (body.back() != ']') throw ConfigError(where() + "unterminated section header");
      section = std::string(trim(body.substr(1, body.size() - 2)));
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where() + "expected 'key = value'");
    const std::string_view name = trim(body.substr(0, eq));
    const std::string key = section.empty() ? std::string(name) : section + "." + std::string(name);
    try {
      set_value(base, key, body.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(where() + e.what());
    }
  }
  return base;
}

SimConfig load_config(const std::filesystem::path& path, SimConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  try {
    return parse_config(in, std::move(base));
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

nlohmann::json to_json(const SimConfig& cfg) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [key, spec] : registry()) {
    const auto dot = key.find('.');
    out[key.substr(0, dot)][key.substr(dot + 1)] = spec.get(cfg);
  }
  return out;
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  std::vector<std::uint64_t> seeds;
  std::string_view rest = text;
  while (!trim(rest).empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = trim(rest.substr(0, comma));
    if (const auto range = item.find(".."); range != std::string_view::npos) {
      const auto lo = parse_uint("seed range", item.substr(0, range));
      const auto hi = parse_uint("seed range", item.substr(range + 2));
      if (hi < lo) throw ConfigError("seed range " + std::string(item) + " is descending");
      if (hi - lo > 1'000'000) throw ConfigError("seed range " + std::string(item) + " is too large");
      for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
    } else {
      seeds.push_back(parse_uint("seed", item));
    }
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  if (seeds.empty()) throw ConfigError("empty seed list");
  return seeds;
}

}  // namespace wsn
