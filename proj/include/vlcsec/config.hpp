#pragma once

#include <optional>
#include <string>

#include "vlcsec/sim.hpp"
#include "vlcsec/topology.hpp"

namespace vlcsec::cfg {

inline constexpr const char* kToolName = "vlcsec";
inline constexpr const char* kToolVersion = "0.1.0";

/// Command-line overrides layered on top of a configuration document.
struct Overrides {
  std::optional<std::string> scenario;
  std::optional<std::string> strategy;    // broadcasting | simple | smart
  std::optional<std::string> allocation;  // fixed | optimized
  std::optional<long long> trials;
  std::optional<std::uint64_t> seed;
  std::vector<double> power_dbm;          // replaces the configured sweep when nonempty
  std::optional<std::string> eve;         // uniform | fixed:x,y | grid:step | clone:k
  std::optional<int> threads;
};

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

/// Fully resolved campaign (defaults filled in, LED lattice built, scenario
/// coordinates expanded, every range checked).
struct Resolved {
  sim::CampaignConfig campaign;
  topology::LatticeSpec lattice;
  std::string scenario_name;
};

/// Resolves a configuration document given as JSON text. An empty document
/// yields the built-in defaults. Throws SchemaError on unknown keys or wrong
/// types (message carries the field path) and RangeError on out-of-range
/// values.
Resolved resolve_config_text(const std::string& text, const Overrides& overrides = {});

/// Reads and resolves a configuration file. A manifest written by a previous
/// run is accepted too: its embedded resolved configuration is reused, which
/// reproduces the original outputs. Missing path yields the defaults only if
/// empty_ok is set by passing an empty string.
Resolved load_config(const std::string& path, const Overrides& overrides = {});

/// Serialized resolved configuration, suitable for the manifest echo.
std::string config_echo_json(const Resolved& resolved);

}  // namespace vlcsec::cfg
