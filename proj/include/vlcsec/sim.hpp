#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vlcsec/channel.hpp"
#include "vlcsec/noma.hpp"
#include "vlcsec/topology.hpp"
#include "vlcsec/vec3.hpp"

namespace vlcsec::sim {

struct BodyParams {
  double height = 0.0;         // H, meters
  double radius = 0.0;         // r, meters
  double device_offset = 0.0;  // l_d, horizontal distance body axis to device
};

struct SystemParams {
  double room_length = 0.0;
  double room_width = 0.0;
  double room_height = 0.0;
  double device_z = 0.0;
  double theta_half = 0.0;  // LED half-intensity angle, radians
  channel::PdParams pd;
  double noise_var = 0.0;  // watts
  BodyParams body;
};

enum class EveMode { fixed, uniform, grid, clone };

struct EvePlacement {
  EveMode mode = EveMode::uniform;
  double x = 0.0;  // fixed position (also carries a resolved grid node)
  double y = 0.0;
  double x_min = 1.0, x_max = 39.0, y_min = 1.0, y_max = 39.0;  // uniform / grid box
  double step = 2.0;  // grid spacing
  int clone_of = 0;   // user index mirrored by a colocated, co-oriented eavesdropper
};

struct Scenario {
  std::string name;
  std::vector<Vec3> users;  // device-plane positions
  EvePlacement eve;
};

enum class AllocationScheme { fixed, optimized };

struct CampaignConfig {
  SystemParams sys;
  Scenario scenario;
  std::vector<Vec3> leds;
  topology::Strategy strategy = topology::Strategy::broadcasting;
  AllocationScheme scheme = AllocationScheme::fixed;
  double zeta = 0.6;
  noma::InterferenceSet interference = noma::InterferenceSet::physical;
  std::vector<double> power_watts = {0.25};
  std::vector<double> power_dbm;  // display values parallel to power_watts; may be empty
  long long trials = 10000;
  std::uint64_t master_seed = 1;
  int threads = 0;  // 0 picks hardware concurrency
};

struct TrialResult {
  std::vector<double> user_rate;
  std::vector<double> wiretap_rate;
  std::vector<double> secrecy;
  double sum_rate = 0.0;
  double sum_secrecy = 0.0;
  int blocked_pairs = 0;      // receiver/LED pairs occluded by some body
  bool solver_flagged = false;
};

struct CampaignStats {
  double power_watts = 0.0;
  double power_dbm = 0.0;  // as configured, not reconverted
  bool eve_fixed = false;  // true when the eavesdropper sat at one (x, y)
  double eve_x = 0.0;
  double eve_y = 0.0;
  double mean_sum_rate = 0.0;
  double se_sum_rate = 0.0;
  double mean_sum_secrecy = 0.0;
  double se_sum_secrecy = 0.0;
  std::vector<double> user_mean_rate;
  std::vector<double> user_mean_wiretap;
  std::vector<double> user_mean_secrecy;
  long long trials = 0;
  std::uint64_t seed = 0;
  int unserved_users = 0;       // users outside every serving set
  long long clipped_terms = 0;  // user/trial pairs where the wiretap rate won
  long long flagged_trials = 0;
  double mean_blocked_pairs = 0.0;
};

/// Trial-invariant campaign state: the group assignment with SIC orders and
/// the estimated gain matrix feeding power allocation.
struct Prepared {
  CampaignConfig cfg;
  noma::GroupAssignment assignment;
  std::vector<channel::LedParams> leds;
  std::vector<std::vector<double>> estimated_gains;  // [user][led]
};

Prepared prepare(const CampaignConfig& cfg);

/// Per-group power splits for one transmission power. Fixed-scheme splits
/// depend only on group size; optimized splits are recomputed per power.
std::vector<noma::PowerAllocation> allocations_for(const Prepared& prep, double power);

/// One Monte Carlo realization. Draw order from the trial's stream: the
/// eavesdropper position (uniform mode only), user orientations by index,
/// then the eavesdropper orientation (clone mode copies the cloned user's).
TrialResult run_trial(const Prepared& prep,
                      const std::vector<noma::PowerAllocation>& alloc, double power,
                      const EvePlacement& eve, std::uint64_t trial_index);

/// Averages trials for a single power point and a non-grid eavesdropper
/// placement. Per-trial streams derive from (master_seed, trial index), so the
/// result does not depend on execution order or thread count.
CampaignStats run_campaign(const CampaignConfig& cfg);

/// One row per (power, eavesdropper node): powers in the given order, grid
/// nodes swept row-major (y outer, x inner). Each row equals a standalone
/// run_campaign with the same master seed.
std::vector<CampaignStats> sweep(const CampaignConfig& cfg);

}  // namespace vlcsec::sim
