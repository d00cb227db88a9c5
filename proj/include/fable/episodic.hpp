#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "fable/hubs.hpp"
#include "fable/object.hpp"

namespace fable {

inline constexpr int kSheetRows = 20;
inline constexpr int kSheetBits = kSheetRows * kRowBits;  // 1000 neurons
inline constexpr int kMemoryCapacity = 120;
inline constexpr int kRecallMaxSweeps = 100;
/// Stored episodes whose object row is within this many bits of the settled
/// object row count as recalled.
inline constexpr int kRecallHammingMax = 5;

/// Row layout of an episode sheet.
enum SheetRow : int {
    kBodyRow = 0,
    kObjectRow = 1,
    kActionRow = 2,
    kRewardRow = 3,
    kFirstPaddingRow = 4,
};

using Sheet = std::array<std::int8_t, kSheetBits>;

BipolarRow sheet_row(const Sheet& sheet, int row);
void set_sheet_row(Sheet& sheet, int row, const BipolarRow& bits);

struct EpisodeMeta {
    std::string object_id;
    ObjectSpec spec;
    double observed_cm3 = 0.0;
    int episode_index = 0;
};

/// One 20x50 bipolar event sheet: body state, object code, action code,
/// reward code, then the reserved padding pattern.
struct Episode {
    Sheet sheet{};
    EpisodeMeta meta;
};

Episode make_episode(BodyState body, const HubCode& object_code,
                     ActionGoal action, double observed_cm3,
                     EpisodeMeta meta);

struct RecallMatch {
    size_t ledger_index = 0;
    double score = 0.0;  // (50 - object-row Hamming distance) / 50
};

struct RecallResult {
    Sheet settled{};
    int sweeps = 0;
    std::vector<double> energy;  // one sample per sweep, non-increasing
    std::vector<RecallMatch> matches;
};

struct CapacityProbeResult {
    double mean_bit_accuracy = 0.0;
    bool energy_monotone = true;
};

/// Auto-associative storage of episodes with one-shot Hebbian encoding and
/// partial-cue recall via clamped fixed-point dynamics.
class EpisodicNetwork {
  public:
    EpisodicNetwork();

    /// Hebbian outer-product update; throws when the enforced capacity is
    /// reached.
    void encode(const Episode& episode);

    /// Settles the network from a partial cue (clamped rows held fixed,
    /// unknown rows zeroed) and matches the settled object row against the
    /// stored ledger. An empty match list is the defined "nothing
    /// recalled" outcome.
    RecallResult recall(const Sheet& cue,
                        const std::array<bool, kSheetRows>& clamped) const;

    /// Convenience: recall with only the object row clamped.
    RecallResult recall_object_cue(const HubCode& object_code) const;

    int stored_count() const { return static_cast<int>(ledger_.size()); }
    const std::vector<Episode>& ledger() const { return ledger_; }
    const std::vector<float>& weights() const { return weights_; }

    void save(const std::string& path) const;
    static EpisodicNetwork load(const std::string& path);

  private:
    std::vector<float> weights_;  // kSheetBits x kSheetBits, symmetric
    std::vector<Episode> ledger_;
};

/// Stores n random sheets, cues each with a fraction of rows clamped, and
/// reports the mean bit accuracy of settled vs stored patterns.
CapacityProbeResult capacity_probe(int n_patterns, double cue_fraction,
                                   std::uint64_t seed);

}  // namespace fable
