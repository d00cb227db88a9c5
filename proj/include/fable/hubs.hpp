#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fable/feature_maps.hpp"

namespace fable {

/// Width of one episodic-memory row; every hub code is one row.
inline constexpr int kRowBits = 50;
/// Positive bits in an object-hub code.
inline constexpr int kSparseBits = 5;

using BipolarRow = std::array<std::int8_t, kRowBits>;

enum class HubKind { object, action, body, reward };

struct HubCode {
    HubKind hub = HubKind::object;
    BipolarRow bits{};
};

int hamming(const BipolarRow& a, const BipolarRow& b);
std::string row_to_string(const BipolarRow& row);   // '+'/'-' per bit
BipolarRow row_from_string(const std::string& s);

enum class BodyState { goal_unreachable, goal_realized, goal_failed, idle };
enum class ActionGoal { reach, grasp, drop };

const char* to_string(BodyState s);
const char* to_string(ActionGoal g);

/// Fixed, pairwise-distinct bipolar codes for the discrete hubs.
HubCode body_code(BodyState s);
HubCode action_code(ActionGoal g);
/// The reserved pattern used for unused episode rows.
BipolarRow padding_row();

// ---- Reward thermometer code --------------------------------------------

inline constexpr double kRewardRangeCm3 = 500.0;

struct RewardCode {
    double value_cm3 = 0.0;  // clamped value the code represents
    BipolarRow bits{};
    bool clamped = false;  // input exceeded the codable range
};

RewardCode encode_reward(double volume_cm3);
double decode_reward(const RewardCode& code);
double decode_reward_row(const BipolarRow& row);

// ---- Object hub binding ---------------------------------------------------

/// Expected top-down activity in one property map: a delta at the expected
/// winner, scaled by the channel gain. An absent winner means "no
/// expectation" (gain zero, or nothing recalled).
struct TopDownExpectation {
    Channel channel = Channel::color;
    std::optional<GridCoord> winner;
    double strength = 0.0;
};

/// Distinct map winners that can occur in a scenario, per channel. The
/// binder allocates hub units for these up front so that codes depend only
/// on which winners an object has, never on presentation order.
struct WinnerInventory {
    std::array<std::vector<GridCoord>, kChannelCount> winners;

    void add(Channel c, const GridCoord& w);
};

/// Bidirectional binarized wiring between the property maps and the object
/// hub, plus the per-channel connection gains that the learning rules act
/// on. Binding derives a 5-of-50 sparse code from the winners of all
/// gain-positive channels; every winning map neuron is wired to every
/// active hub unit (and back).
class DualDyadConnectivity {
  public:
    DualDyadConnectivity() = default;
    DualDyadConnectivity(const WinnerInventory& inventory, std::uint64_t seed);

    double gain(Channel c) const { return gains_[static_cast<int>(c)]; }
    void set_gain(Channel c, double g) { gains_[static_cast<int>(c)] = g; }

    /// Binds one object from its per-channel activations (channels with
    /// gain zero are ignored). Throws if every gain is zero.
    HubCode bind(const std::vector<MapActivation>& activations);

    /// Gated top-down expectations for a previously bound code. Unknown
    /// codes yield all-empty expectations.
    std::array<TopDownExpectation, kChannelCount> retro_activate(
        const HubCode& code) const;

    /// Forward dyads: hub units wired to a winning map neuron.
    const std::set<int>* forward(Channel c, const GridCoord& w) const;
    /// Backward dyads: (channel, winner) pairs wired to a hub unit.
    const std::set<std::pair<int, GridCoord>>& backward(int unit) const;

    bool knows_code(const HubCode& code) const;
    size_t bound_tuples() const { return code_by_tuple_.size(); }

  private:
    using Tuple = std::vector<std::pair<int, GridCoord>>;  // sorted by channel

    std::vector<int> units_for_tuple(const Tuple& tuple) const;
    int allocated_unit(int channel, const GridCoord& w, int k) const;

    std::array<double, kChannelCount> gains_{1.0, 1.0, 1.0, 1.0};
    // (channel, row, col, k) -> hub unit, fixed at construction
    std::map<std::tuple<int, int, int, int>, int> allocation_;
    std::map<std::pair<int, GridCoord>, std::set<int>> forward_;
    std::array<std::set<std::pair<int, GridCoord>>, kRowBits> backward_;
    std::map<std::string, HubCode> code_by_tuple_;
    std::map<std::string, std::string> tuple_by_code_;
};

}  // namespace fable
