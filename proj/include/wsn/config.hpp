#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "wsn/election.hpp"
#include "wsn/fuzzy.hpp"
#include "wsn/topology.hpp"
#include "wsn/trust.hpp"

namespace wsn {

/// First-order radio model.
struct EnergyModel {
  double e_elec = 50e-9;    // J/bit
  double eps_amp = 10e-12;  // J/bit/m^2
  double packet_bits = 2000.0;
  double initial_energy = 0.5;  // J
  // Per-node charge for running the fuzzy scoring in-network; 0 means the work is offloaded.
  double compute_cost = 0.0;  // J per scored node per round

  void validate() const;
};

struct FuzzyConfig {
  std::string rulebase_path;  // empty: built-in table
  fuzzy::InputTerms terms;
  std::size_t resolution = fuzzy::kDefaultResolution;
};

struct SimConfig {
  TopologyConfig network;  // network.initial_energy is ignored in favor of energy.initial_energy
  TrustConfig trust;
  ElectionConfig election;
  EnergyModel energy;
  FuzzyConfig fuzzy;
  std::uint32_t max_rounds = 5000;
  std::uint64_t seed = 1;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20};

  TopologyConfig topology_config() const;
  /// Checks every bound; throws ConfigError naming the offending key.
  void validate() const;
  /// Builds the inference engine (loading the rule file if one is configured).
  fuzzy::Engine make_engine() const;
};

/// Keys accepted by set_value / load_config, in the dotted `section.key` form.
const std::vector<std::string>& config_keys();

/// Sets one dotted key from its textual value; unknown keys and malformed values throw ConfigError.
void set_value(SimConfig& cfg, std::string_view key, std::string_view value);

/// Reads an INI-style file (`[section]` headers, `key = value` lines, `#`/`;` comments).
/// Errors carry the offending line number.
SimConfig parse_config(std::istream& in, SimConfig base = {});
SimConfig load_config(const std::filesystem::path& path, SimConfig base = {});

/// Every resolved value, keyed as in the config file.
nlohmann::json to_json(const SimConfig& cfg);

/// Seed lists: "1,2,5", "1..20", or a mix ("1..3,7").
std::vector<std::uint64_t> parse_seed_list(std::string_view text);

}  // namespace wsn
