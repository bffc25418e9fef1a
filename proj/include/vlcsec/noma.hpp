#pragma once

#include <span>
#include <vector>

namespace vlcsec::noma {

/// Which LEDs count as cross-signal interference for a receiver decoding
/// user k. `physical`: LEDs transmitting a superposition that does not carry
/// k's message. `literal`: LEDs serving k other than the decode group's
/// representative (lowest-indexed) LED.
enum class InterferenceSet { physical, literal };

/// Power split of one superposed signal, indexed by decode position
/// (position 0 is decoded first and carries the most power).
struct PowerAllocation {
  std::vector<double> betas;
  bool converged = true;  // false when the optimizer stopped at its iteration cap
};

/// One distinct superposed signal: the users it carries and the LEDs that
/// transmit it. sic_order lists the member user ids in decode order.
struct SignalGroup {
  std::vector<int> users;
  std::vector<int> leds;
  std::vector<int> sic_order;
};

/// Per-LED serving sets together with the derived lookup structures used by
/// the rate equations.
struct GroupAssignment {
  int n_leds = 0;
  int n_users = 0;
  std::vector<std::vector<int>> led_users;    // serving set of each LED (ascending ids)
  std::vector<SignalGroup> groups;            // distinct nonempty serving sets
  std::vector<int> led_group;                 // group index per LED, -1 when idle
  std::vector<std::vector<int>> user_groups;  // group indices containing each user
  std::vector<std::vector<int>> user_leds;    // LED indices serving each user
};

/// Per-user rates for one channel realization.
struct RateReport {
  std::vector<double> user_rate;
  std::vector<double> wiretap_rate;
  std::vector<double> secrecy;  // [user_rate - wiretap_rate]^+
  double sum_rate = 0.0;
  double sum_secrecy = 0.0;
};

/// Builds the derived structures from per-LED serving sets. Identical sets
/// collapse into one signal group (they carry the same superposition); group
/// ids follow first appearance by LED index. SIC orders are left empty.
GroupAssignment make_assignment(int n_leds, int n_users,
                                std::vector<std::vector<int>> led_users);

/// Geometric power split with ratio zeta in (0.5, 1]: position k gets
/// zeta (1-zeta)^k except the last position, which takes the remainder so the
/// split sums to one. Throws RangeError outside the zeta range.
PowerAllocation fixed_allocation(int group_size, double zeta);

/// Decode order of a group: ascending estimated gain (weakest channel decoded
/// first, with the most power), ties by ascending user id. `gain_of[u]` must
/// be valid for every member.
std::vector<int> sic_order(const std::vector<int>& users,
                           const std::vector<double>& gain_of);

/// Fills every group's sic_order from combined estimated gains summed over the
/// group's own LEDs.
void assign_sic_orders(GroupAssignment& ga,
                       const std::vector<std::vector<double>>& estimated_gains);

/// Post-SIC SINR of user k at their own receiver. `gains[k][n]` is the channel
/// gain from LED n to user k's receiver. One PowerAllocation per group.
double user_sinr(int k, const GroupAssignment& ga,
                 const std::vector<std::vector<double>>& gains,
                 std::span<const PowerAllocation> alloc, double power,
                 double noise_var, InterferenceSet mode);

/// SINR of the eavesdropper decoding user k's message with user k's grouping
/// and power split, through the eavesdropper's own channel row.
double eve_sinr(int k, const GroupAssignment& ga, std::span<const double> eve_gains,
                std::span<const PowerAllocation> alloc, double power,
                double noise_var, InterferenceSet mode);

/// Shannon rate of a real-valued intensity channel, (1/2) log2(1 + sinr).
double rate(double sinr);

/// Per-user secrecy terms and sums from realized and wiretapped rates.
RateReport secrecy_terms(std::span<const double> user_rates,
                         std::span<const double> wiretap_rates);

/// Power split maximizing the estimated sum rate of `group` subject to the
/// budget (sum <= 1), monotone nonincreasing betas, and nonnegativity.
/// Projected gradient ascent over the constraint set with 8 deterministic
/// restarts; stops a restart once the objective improves by less than 1e-9
/// over 50 iterations, or flags the result after 10^4 iterations.
PowerAllocation optimize_allocation(const SignalGroup& group, const GroupAssignment& ga,
                                    const std::vector<std::vector<double>>& estimated_gains,
                                    double power, double noise_var,
                                    InterferenceSet mode);

}  // namespace vlcsec::noma
