#pragma once

#include <array>
#include <optional>
#include <vector>

#include "fable/feature_maps.hpp"
#include "fable/hubs.hpp"
#include "fable/object.hpp"

namespace fable {

enum class CausalStatus { unknown, dominant, irrelevant, likely_irrelevant };
const char* to_string(CausalStatus s);

struct ChannelKnowledge {
    CausalStatus status = CausalStatus::unknown;
    double certainty = 0.0;  // 0 unknown; 1 dominant/irrelevant; (0,1) likely
};

/// Per-property causal knowledge. Dominant and Irrelevant are absorbing.
struct CausalLedger {
    std::array<ChannelKnowledge, kChannelCount> channels{};

    ChannelKnowledge& at(Channel c) { return channels[static_cast<int>(c)]; }
    const ChannelKnowledge& at(Channel c) const {
        return channels[static_cast<int>(c)];
    }
    friend bool operator==(const CausalLedger&, const CausalLedger&);
};

enum class RuleTag { none, elimination, growth, uncertainty, status_quo };
const char* to_string(RuleTag t);

struct RuleInputs {
    std::array<bool, kChannelCount> delta_property{};
    bool delta_contradiction = false;
    std::optional<double> expected_cm3;  // empty when nothing was recalled
    double observed_cm3 = 0.0;
};

struct RuleOutcome {
    CausalLedger ledger;
    std::array<double, kChannelCount> gains{};
    std::array<RuleTag, kChannelCount> tags{};
    bool encode_episode = false;
};

/// Mismatch between bottom-up and top-down winners in one map: true when a
/// top-down expectation exists and the winners are more than one grid cell
/// apart (Chebyshev).
bool delta_property(const MapActivation& bottom_up,
                    const TopDownExpectation& top_down);

/// Mismatch between anticipated and observed reward: relative difference
/// above 20%, with a 10 cm^3 floor on the denominator. No anticipation
/// means no contradiction.
bool delta_contradiction(const std::optional<double>& expected_cm3,
                         double observed_cm3);

/// Applies the four learning rules channel-wise:
///   dP & !dC -> Elimination  (gain 0, Irrelevant)
///   dP &  dC -> Growth       (gain 1, Dominant)
///  !dP &  dC -> Uncertainty  (gain x0.8, LikelyIrrelevant, certainty +0.25)
///  !dP & !dC -> Status Quo
/// Channels already Dominant or Irrelevant are never touched. When nothing
/// was recalled the rules are skipped entirely and the episode is marked
/// for encoding (first experience).
RuleOutcome apply_rules(const RuleInputs& inputs, const CausalLedger& ledger,
                        const std::array<double, kChannelCount>& gains);

struct RecalledExperience {
    ObjectSpec spec;
    double reward_cm3 = 0.0;
    double score = 0.0;
};

/// Weighted average of recalled rewards: inverse-distance over the Dominant
/// channels (1 g regularizer on the weight channel's gram scale), falling
/// back to recall scores while nothing is Dominant yet. Empty recall means
/// no prediction.
std::optional<double> predict_reward(
    const ObjectSpec& target, const std::vector<RecalledExperience>& recalled,
    const CausalLedger& ledger);

/// Choice policy over per-candidate predictions: unpredicted (novel)
/// candidates first, then the highest predicted reward; ties keep the
/// lowest index. Throws on an empty list.
size_t choose_among(const std::vector<std::optional<double>>& predictions);

}  // namespace fable
