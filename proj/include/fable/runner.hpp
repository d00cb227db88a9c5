#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "fable/causal.hpp"
#include "fable/episodic.hpp"
#include "fable/feature_maps.hpp"
#include "fable/hubs.hpp"
#include "fable/scenario.hpp"
#include "fable/world.hpp"

namespace fable {

/// Everything the learner carries between episodes: the frozen property
/// maps, the map-hub wiring with its gains, episodic memory, and the causal
/// ledger.
struct Agent {
    std::array<PropertyMap, kChannelCount> maps;
    DualDyadConnectivity conn;
    EpisodicNetwork memory;
    CausalLedger ledger;

    std::array<double, kChannelCount> gains() const {
        return {conn.gain(Channel::color), conn.gain(Channel::shape),
                conn.gain(Channel::size), conn.gain(Channel::weight)};
    }
};

/// Trains the four standard maps and allocates hub units for every winner
/// the scenario's objects and probes can produce.
Agent build_agent(const Scenario& scenario);

WorldState make_world(const JarParams& jar, std::uint64_t seed = 0);

struct EpisodeRecord {
    int episode_index = 0;
    std::string object_id;
    std::optional<double> predicted_cm3;
    double observed_cm3 = 0.0;
    double oracle_cm3 = 0.0;
    std::optional<double> abs_error_cm3;  // |predicted - oracle|
    std::array<RuleTag, kChannelCount> rules{};
    CausalLedger ledger;  // snapshot after the rules were applied
    bool reachable = false;
    bool encoded = false;
};

struct ProbeRecord {
    int after_episode = 0;
    std::string probe_id;
    std::optional<double> predicted_cm3;
    double oracle_cm3 = 0.0;
    std::optional<double> abs_error_cm3;
};

/// One pass of the episode loop: perceive, bind, recall, anticipate, act,
/// learn, encode if warranted.
EpisodeRecord run_episode(Agent& agent, WorldState& world,
                          const ObjectSpec& obj, int episode_index);

/// Pure prediction for a held-out object; the agent, its wiring, and the
/// world are left untouched.
std::optional<double> predict_probe(const Agent& agent, const ObjectSpec& obj);

/// Candidate choice: novel (unpredictable) objects first, then the highest
/// predicted reward.
size_t choose_object(const Agent& agent,
                     const std::vector<ObjectSpec>& candidates);

struct RunResult {
    std::vector<EpisodeRecord> episodes;
    std::vector<ProbeRecord> probes;
    CausalLedger final_ledger;
    std::array<double, kChannelCount> final_gains{};
};

RunResult run_scenario(const Scenario& scenario, size_t order_index);

std::string episodes_csv(const std::vector<EpisodeRecord>& records);
std::string probes_csv(const std::vector<ProbeRecord>& records);

/// Writes episodes.csv and probes.csv into out_dir (created if missing).
void emit_report(const RunResult& result, const std::string& out_dir);

/// The built-in three-episode regression: a heavy red cylinder, its blue
/// twin, and a near-weightless twin. Returns the records plus the final
/// agent state for inspection.
struct FableReplay {
    std::vector<EpisodeRecord> records;
    CausalLedger final_ledger;
    std::array<double, kChannelCount> final_gains{};
};

FableReplay replay_fable();

/// The scenario replay_fable() runs, exposed for tests.
Scenario fable_scenario();

}  // namespace fable
