#include "fable/causal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fable {

namespace {
constexpr double kContradictionTolerance = 0.2;
constexpr double kContradictionFloorCm3 = 10.0;
constexpr double kUncertaintyGainFactor = 0.8;
constexpr double kUncertaintyCertaintyStep = 0.25;
constexpr double kUncertaintyCertaintyCap = 0.99;

// Feature distance in physical units; on the weight channel this is exactly
// the gram difference, which the 1 g regularizer is calibrated for.
double channel_scale(Channel c) {
    switch (c) {
        case Channel::color: return 100.0;
        case Channel::shape: return 100.0;
        case Channel::size: return kSizeRangeCm;
        case Channel::weight: return kWeightRangeG;
    }
    return 1.0;
}

double channel_distance(Channel c, const ObjectSpec& a, const ObjectSpec& b) {
    const FeatureVector fa = encode_feature(a, c);
    const FeatureVector fb = encode_feature(b, c);
    double d2 = 0.0;
    for (size_t i = 0; i < fa.values.size(); ++i) {
        const double diff = fa.values[i] - fb.values[i];
        d2 += diff * diff;
    }
    return std::sqrt(d2) * channel_scale(c);
}
}  // namespace

bool operator==(const CausalLedger& a, const CausalLedger& b) {
    for (int c = 0; c < kChannelCount; ++c) {
        if (a.channels[c].status != b.channels[c].status ||
            a.channels[c].certainty != b.channels[c].certainty)
            return false;
    }
    return true;
}

const char* to_string(CausalStatus s) {
    switch (s) {
        case CausalStatus::unknown: return "unknown";
        case CausalStatus::dominant: return "dominant";
        case CausalStatus::irrelevant: return "irrelevant";
        case CausalStatus::likely_irrelevant: return "likely_irrelevant";
    }
    return "?";
}

const char* to_string(RuleTag t) {
    switch (t) {
        case RuleTag::none: return "none";
        case RuleTag::elimination: return "elimination";
        case RuleTag::growth: return "growth";
        case RuleTag::uncertainty: return "uncertainty";
        case RuleTag::status_quo: return "status_quo";
    }
    return "?";
}

bool delta_property(const MapActivation& bottom_up,
                    const TopDownExpectation& top_down) {
    if (bottom_up.channel != top_down.channel)
        throw std::invalid_argument("delta_property channel mismatch");
    if (!top_down.winner.has_value()) return false;
    return grid_distance(bottom_up.winner, *top_down.winner) > 1;
}

bool delta_contradiction(const std::optional<double>& expected_cm3,
                         double observed_cm3) {
    if (observed_cm3 < 0.0)
        throw std::invalid_argument("observed reward must be non-negative");
    if (!expected_cm3.has_value()) return false;
    const double denom = std::max(observed_cm3, kContradictionFloorCm3);
    return std::abs(*expected_cm3 - observed_cm3) / denom >
           kContradictionTolerance;
}

RuleOutcome apply_rules(const RuleInputs& inputs, const CausalLedger& ledger,
                        const std::array<double, kChannelCount>& gains) {
    RuleOutcome out;
    out.ledger = ledger;
    out.gains = gains;
    out.tags.fill(RuleTag::none);

    if (!inputs.expected_cm3.has_value()) {
        // First experience: nothing recalled, nothing to compare against.
        out.encode_episode = true;
        return out;
    }

    bool any_growth = false;
    for (int c = 0; c < kChannelCount; ++c) {
        ChannelKnowledge& know = out.ledger.channels[c];
        if (know.status == CausalStatus::dominant ||
            know.status == CausalStatus::irrelevant)
            continue;  // absorbing states

        const bool dp = inputs.delta_property[c];
        const bool dc = inputs.delta_contradiction;
        if (dp && !dc) {
            out.tags[c] = RuleTag::elimination;
            out.gains[c] = 0.0;
            know.status = CausalStatus::irrelevant;
            know.certainty = 1.0;
        } else if (dp && dc) {
            out.tags[c] = RuleTag::growth;
            out.gains[c] = 1.0;
            know.status = CausalStatus::dominant;
            know.certainty = 1.0;
            any_growth = true;
        } else if (!dp && dc) {
            out.tags[c] = RuleTag::uncertainty;
            out.gains[c] *= kUncertaintyGainFactor;
            know.status = CausalStatus::likely_irrelevant;
            know.certainty = std::min(
                know.certainty + kUncertaintyCertaintyStep,
                kUncertaintyCertaintyCap);
        } else {
            out.tags[c] = RuleTag::status_quo;
        }
    }
    out.encode_episode = any_growth;
    return out;
}

std::optional<double> predict_reward(
    const ObjectSpec& target, const std::vector<RecalledExperience>& recalled,
    const CausalLedger& ledger) {
    if (recalled.empty()) return std::nullopt;
    if (recalled.size() == 1) return recalled.front().reward_cm3;

    std::vector<Channel> dominant;
    for (Channel c : kChannels)
        if (ledger.at(c).status == CausalStatus::dominant) dominant.push_back(c);

    double weight_sum = 0.0;
    double value = 0.0;
    for (const RecalledExperience& exp : recalled) {
        double w;
        if (dominant.empty()) {
            w = exp.score;
        } else {
            double dist = 0.0;
            for (Channel c : dominant)
                dist += channel_distance(c, target, exp.spec);
            w = 1.0 / (dist + 1.0);
        }
        weight_sum += w;
        value += w * exp.reward_cm3;
    }
    if (weight_sum <= 0.0) return std::nullopt;
    return value / weight_sum;
}

size_t choose_among(const std::vector<std::optional<double>>& predictions) {
    if (predictions.empty())
        throw std::invalid_argument("no candidates to choose from");
    // Exploration priority: a candidate we cannot predict yet wins.
    for (size_t i = 0; i < predictions.size(); ++i)
        if (!predictions[i].has_value()) return i;
    size_t best = 0;
    for (size_t i = 1; i < predictions.size(); ++i)
        if (*predictions[i] > *predictions[best]) best = i;
    return best;
}

}  // namespace fable
