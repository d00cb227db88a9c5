#include "fable/hubs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fable/rng.hpp"

namespace fable {

namespace {

// Disjoint hub-unit ranges per channel. Keeping them disjoint means two
// codes can only share a unit by sharing the same (channel, winner), which
// is what makes code overlap mirror property overlap.
struct ChannelRange {
    int base;
    int width;
    int units_per_winner;
};
constexpr ChannelRange kRanges[kChannelCount] = {
    {0, 6, 1},    // color
    {6, 8, 2},    // shape
    {14, 14, 2},  // size
    {28, 22, 2},  // weight
};

constexpr std::uint64_t kFixedCodeSeed = 0x0fab1e5eed5017ull;

BipolarRow fixed_row(std::uint64_t tag) {
    BipolarRow row{};
    std::uint64_t state = rng::hash_mix(kFixedCodeSeed, tag);
    for (int i = 0; i < kRowBits; ++i)
        row[i] = (rng::splitmix64(state) & 1u) ? 1 : -1;
    return row;
}

std::string tuple_key(
    const std::vector<std::pair<int, GridCoord>>& tuple) {
    std::string key;
    for (const auto& [c, w] : tuple) {
        key += std::to_string(c) + ':' + std::to_string(w.row) + ',' +
               std::to_string(w.col) + ';';
    }
    return key;
}

}  // namespace

int hamming(const BipolarRow& a, const BipolarRow& b) {
    int d = 0;
    for (int i = 0; i < kRowBits; ++i) d += a[i] != b[i];
    return d;
}

std::string row_to_string(const BipolarRow& row) {
    std::string s(kRowBits, '-');
    for (int i = 0; i < kRowBits; ++i)
        if (row[i] > 0) s[i] = '+';
    return s;
}

BipolarRow row_from_string(const std::string& s) {
    if (s.size() != kRowBits)
        throw std::invalid_argument("bad row string length");
    BipolarRow row{};
    for (int i = 0; i < kRowBits; ++i) row[i] = s[i] == '+' ? 1 : -1;
    return row;
}

const char* to_string(BodyState s) {
    switch (s) {
        case BodyState::goal_unreachable: return "goal_unreachable";
        case BodyState::goal_realized: return "goal_realized";
        case BodyState::goal_failed: return "goal_failed";
        case BodyState::idle: return "idle";
    }
    return "?";
}

const char* to_string(ActionGoal g) {
    switch (g) {
        case ActionGoal::reach: return "reach";
        case ActionGoal::grasp: return "grasp";
        case ActionGoal::drop: return "drop";
    }
    return "?";
}

HubCode body_code(BodyState s) {
    return {HubKind::body, fixed_row(0x100 + static_cast<int>(s))};
}

HubCode action_code(ActionGoal g) {
    return {HubKind::action, fixed_row(0x200 + static_cast<int>(g))};
}

BipolarRow padding_row() { return fixed_row(0x300); }

RewardCode encode_reward(double volume_cm3) {
    RewardCode code;
    code.clamped = volume_cm3 > kRewardRangeCm3 || volume_cm3 < 0.0;
    const double v = std::clamp(volume_cm3, 0.0, kRewardRangeCm3);
    code.value_cm3 = v;
    const int positive =
        static_cast<int>(std::llround(kRowBits * v / kRewardRangeCm3));
    for (int u = 0; u < kRowBits; ++u) code.bits[u] = u < positive ? 1 : -1;
    return code;
}

double decode_reward(const RewardCode& code) {
    return decode_reward_row(code.bits);
}

double decode_reward_row(const BipolarRow& row) {
    int positive = 0;
    for (int u = 0; u < kRowBits; ++u) positive += row[u] > 0;
    return positive * (kRewardRangeCm3 / kRowBits);
}

void WinnerInventory::add(Channel c, const GridCoord& w) {
    auto& list = winners[static_cast<int>(c)];
    if (std::find(list.begin(), list.end(), w) == list.end())
        list.push_back(w);
}

DualDyadConnectivity::DualDyadConnectivity(const WinnerInventory& inventory,
                                           std::uint64_t seed) {
    for (int c = 0; c < kChannelCount; ++c) {
        auto winners = inventory.winners[c];
        std::sort(winners.begin(), winners.end());
        winners.erase(std::unique(winners.begin(), winners.end()),
                      winners.end());

        const ChannelRange& range = kRanges[c];
        const int needed =
            static_cast<int>(winners.size()) * range.units_per_winner;
        if (needed > range.width)
            throw std::runtime_error(
                std::string("hub unit range exhausted for channel ") +
                to_string(static_cast<Channel>(c)));

        const int rot = static_cast<int>(rng::hash_mix(seed, 0xA110C + c) %
                                         range.width);
        int slot = 0;
        for (const auto& w : winners) {
            for (int k = 0; k < range.units_per_winner; ++k, ++slot) {
                allocation_[{c, w.row, w.col, k}] =
                    range.base + (rot + slot) % range.width;
            }
        }
    }
}

int DualDyadConnectivity::allocated_unit(int channel, const GridCoord& w,
                                         int k) const {
    auto it = allocation_.find({channel, w.row, w.col, k});
    if (it == allocation_.end())
        throw std::runtime_error(
            std::string("no hub unit allocated for ") +
            to_string(static_cast<Channel>(channel)) + " winner (" +
            std::to_string(w.row) + "," + std::to_string(w.col) + ")");
    return it->second;
}

std::vector<int> DualDyadConnectivity::units_for_tuple(
    const Tuple& tuple) const {
    std::vector<int> units;
    for (const auto& [c, w] : tuple) {
        units.push_back(allocated_unit(c, w, 0));
        if (static_cast<Channel>(c) == Channel::shape)
            units.push_back(allocated_unit(c, w, 1));
    }
    // Inactive channels free code slots; remaining channels fill them with
    // their second units, weight first. This keeps codes of objects that
    // share the surviving properties close in Hamming distance.
    for (Channel extra : {Channel::weight, Channel::size}) {
        if (static_cast<int>(units.size()) >= kSparseBits) break;
        for (const auto& [c, w] : tuple) {
            if (static_cast<Channel>(c) == extra) {
                units.push_back(allocated_unit(c, w, 1));
                break;
            }
        }
    }
    if (static_cast<int>(units.size()) != kSparseBits)
        throw std::runtime_error(
            "cannot build a 5-unit object code: too few active channels");
    std::sort(units.begin(), units.end());
    return units;
}

HubCode DualDyadConnectivity::bind(
    const std::vector<MapActivation>& activations) {
    Tuple tuple;
    for (const auto& act : activations) {
        if (gain(act.channel) > 0.0)
            tuple.emplace_back(static_cast<int>(act.channel), act.winner);
    }
    if (tuple.empty()) throw std::runtime_error("object unrepresentable");
    std::sort(tuple.begin(), tuple.end());
    for (size_t i = 1; i < tuple.size(); ++i)
        if (tuple[i].first == tuple[i - 1].first)
            throw std::invalid_argument("duplicate channel activation");

    const std::string key = tuple_key(tuple);
    HubCode code{HubKind::object, {}};
    auto found = code_by_tuple_.find(key);
    if (found != code_by_tuple_.end()) {
        code = found->second;
    } else {
        const std::vector<int> units = units_for_tuple(tuple);
        code.bits.fill(-1);
        for (int u : units) code.bits[u] = 1;
        const std::string code_key = row_to_string(code.bits);
        auto clash = tuple_by_code_.find(code_key);
        if (clash != tuple_by_code_.end() && clash->second != key)
            throw std::logic_error("hub code collision between tuples");
        code_by_tuple_.emplace(key, code);
        tuple_by_code_.emplace(code_key, key);
    }

    // Binarized dual-dyad rule: every winning map neuron is wired to every
    // active hub unit, and the reverse dyad mirrors it.
    for (const auto& [c, w] : tuple) {
        auto& fwd = forward_[{c, w}];
        for (int u = 0; u < kRowBits; ++u) {
            if (code.bits[u] > 0) {
                fwd.insert(u);
                backward_[u].insert({c, w});
            }
        }
    }
    return code;
}

std::array<TopDownExpectation, kChannelCount>
DualDyadConnectivity::retro_activate(const HubCode& code) const {
    std::array<TopDownExpectation, kChannelCount> out;
    for (int c = 0; c < kChannelCount; ++c)
        out[c].channel = static_cast<Channel>(c);
    if (!knows_code(code)) return out;

    for (int c = 0; c < kChannelCount; ++c) {
        const double g = gains_[c];
        if (g <= 0.0) continue;
        // Each active hub unit votes for the map winners it is wired to;
        // the expectation lands on the most supported coordinate.
        std::map<GridCoord, int> votes;
        for (int u = 0; u < kRowBits; ++u) {
            if (code.bits[u] <= 0) continue;
            for (const auto& [cc, w] : backward_[u])
                if (cc == c) ++votes[w];
        }
        if (votes.empty()) continue;
        GridCoord best = votes.begin()->first;
        int best_votes = votes.begin()->second;
        for (const auto& [w, n] : votes) {
            if (n > best_votes) {  // ties keep the lowest coordinate
                best_votes = n;
                best = w;
            }
        }
        out[c].winner = best;
        out[c].strength = g;
    }
    return out;
}

const std::set<int>* DualDyadConnectivity::forward(
    Channel c, const GridCoord& w) const {
    auto it = forward_.find({static_cast<int>(c), w});
    return it == forward_.end() ? nullptr : &it->second;
}

const std::set<std::pair<int, GridCoord>>& DualDyadConnectivity::backward(
    int unit) const {
    return backward_.at(unit);
}

bool DualDyadConnectivity::knows_code(const HubCode& code) const {
    return tuple_by_code_.count(row_to_string(code.bits)) > 0;
}

}  // namespace fable
