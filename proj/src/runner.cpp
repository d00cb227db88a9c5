#include "fable/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace fable {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

std::string fmt_opt(const std::optional<double>& v) {
    return v ? fmt(*v) : std::string{};
}

std::vector<RecalledExperience> to_experiences(const EpisodicNetwork& memory,
                                               const RecallResult& recall) {
    std::vector<RecalledExperience> out;
    out.reserve(recall.matches.size());
    for (const RecallMatch& m : recall.matches) {
        const EpisodeMeta& meta = memory.ledger()[m.ledger_index].meta;
        out.push_back({meta.spec, meta.observed_cm3, m.score});
    }
    return out;
}

std::vector<MapActivation> activate_positive_channels(
    const Agent& agent, const DualDyadConnectivity& conn,
    const ObjectSpec& obj) {
    std::vector<MapActivation> acts;
    for (Channel c : kChannels) {
        if (conn.gain(c) > 0.0)
            acts.push_back(bottom_up_activate(
                agent.maps[static_cast<int>(c)], encode_feature(obj, c)));
    }
    return acts;
}

}  // namespace

Agent build_agent(const Scenario& scenario) {
    Agent agent;
    for (Channel c : kChannels)
        agent.maps[static_cast<int>(c)] = train_standard_map(c, scenario.seed);

    WinnerInventory inventory;
    auto register_object = [&](const ObjectSpec& obj) {
        validate(obj);
        for (Channel c : kChannels) {
            const MapActivation act = bottom_up_activate(
                agent.maps[static_cast<int>(c)], encode_feature(obj, c));
            inventory.add(c, act.winner);
        }
    };
    for (const ObjectSpec& obj : scenario.objects) register_object(obj);
    for (const ObjectSpec& probe : scenario.probes) register_object(probe);

    agent.conn = DualDyadConnectivity(inventory, scenario.seed);
    return agent;
}

WorldState make_world(const JarParams& jar, std::uint64_t seed) {
    WorldState world;
    world.cross_section_cm2 = jar.cross_section_cm2;
    world.level_cm = jar.initial_level_cm;
    world.reach_level_cm = jar.reach_level_cm;
    world.water_density = jar.water_density;
    world.noise_sigma_cm3 = jar.noise_sigma_cm3;
    world.noise_seed = seed;
    return world;
}

EpisodeRecord run_episode(Agent& agent, WorldState& world,
                          const ObjectSpec& obj, int episode_index) {
    validate(obj);
    const BodyState body = is_reachable(world) ? BodyState::goal_realized
                                               : BodyState::goal_unreachable;

    // Perceive: bottom-up activation of the gain-positive maps, kept for
    // the later bottom-up/top-down comparison.
    std::array<std::optional<MapActivation>, kChannelCount> bottom_up;
    std::vector<MapActivation> acts;
    for (Channel c : kChannels) {
        if (agent.conn.gain(c) > 0.0) {
            MapActivation act = bottom_up_activate(
                agent.maps[static_cast<int>(c)], encode_feature(obj, c));
            bottom_up[static_cast<int>(c)] = act;
            acts.push_back(std::move(act));
        }
    }

    const HubCode code = agent.conn.bind(acts);
    const RecallResult recall = agent.memory.recall_object_cue(code);
    const std::vector<RecalledExperience> recalled =
        to_experiences(agent.memory, recall);
    const std::optional<double> predicted =
        predict_reward(obj, recalled, agent.ledger);

    const double observed = drop(world, obj);
    // Ground truth for the error column, computed apart from the reward the
    // agent learns from.
    const double oracle = displaced_volume(obj, world.water_density);

    std::array<TopDownExpectation, kChannelCount> top_down;
    for (int c = 0; c < kChannelCount; ++c)
        top_down[c].channel = static_cast<Channel>(c);
    if (!recall.matches.empty()) {
        const Episode& best =
            agent.memory.ledger()[recall.matches.front().ledger_index];
        const HubCode best_code{HubKind::object,
                                sheet_row(best.sheet, kObjectRow)};
        top_down = agent.conn.retro_activate(best_code);
    }

    RuleInputs inputs;
    inputs.expected_cm3 = predicted;
    inputs.observed_cm3 = observed;
    inputs.delta_contradiction = delta_contradiction(predicted, observed);
    for (int c = 0; c < kChannelCount; ++c) {
        inputs.delta_property[c] =
            bottom_up[c] ? delta_property(*bottom_up[c], top_down[c]) : false;
    }

    const RuleOutcome outcome =
        apply_rules(inputs, agent.ledger, agent.gains());
    agent.ledger = outcome.ledger;
    for (Channel c : kChannels)
        agent.conn.set_gain(c, outcome.gains[static_cast<int>(c)]);

    if (outcome.encode_episode) {
        EpisodeMeta meta;
        meta.object_id = obj.id;
        meta.spec = obj;
        meta.episode_index = episode_index;
        agent.memory.encode(
            make_episode(body, code, ActionGoal::drop, observed, meta));
    }

    EpisodeRecord record;
    record.episode_index = episode_index;
    record.object_id = obj.id;
    record.predicted_cm3 = predicted;
    record.observed_cm3 = observed;
    record.oracle_cm3 = oracle;
    if (predicted) record.abs_error_cm3 = std::abs(*predicted - oracle);
    record.rules = outcome.tags;
    record.ledger = agent.ledger;
    record.reachable = is_reachable(world);
    record.encoded = outcome.encode_episode;
    return record;
}

std::optional<double> predict_probe(const Agent& agent,
                                    const ObjectSpec& obj) {
    validate(obj);
    // Probes must not leave a trace: bind against a copy of the wiring.
    DualDyadConnectivity conn = agent.conn;
    const std::vector<MapActivation> acts =
        activate_positive_channels(agent, conn, obj);
    const HubCode code = conn.bind(acts);
    const RecallResult recall = agent.memory.recall_object_cue(code);
    return predict_reward(obj, to_experiences(agent.memory, recall),
                          agent.ledger);
}

size_t choose_object(const Agent& agent,
                     const std::vector<ObjectSpec>& candidates) {
    std::vector<std::optional<double>> predictions;
    predictions.reserve(candidates.size());
    for (const ObjectSpec& obj : candidates)
        predictions.push_back(predict_probe(agent, obj));
    return choose_among(predictions);
}

RunResult run_scenario(const Scenario& scenario, size_t order_index) {
    if (order_index >= scenario.orders.size())
        throw std::invalid_argument("order index out of range");

    Agent agent = build_agent(scenario);
    WorldState world = make_world(scenario.jar, scenario.seed);

    RunResult out;
    const std::vector<int>& order = scenario.orders[order_index];
    for (size_t step = 0; step < order.size(); ++step) {
        const ObjectSpec& obj = scenario.objects[order[step]];
        out.episodes.push_back(
            run_episode(agent, world, obj, static_cast<int>(step)));

        for (const ObjectSpec& probe : scenario.probes) {
            ProbeRecord pr;
            pr.after_episode = static_cast<int>(step);
            pr.probe_id = probe.id;
            pr.predicted_cm3 = predict_probe(agent, probe);
            pr.oracle_cm3 = displaced_volume(probe, scenario.jar.water_density);
            if (pr.predicted_cm3)
                pr.abs_error_cm3 = std::abs(*pr.predicted_cm3 - pr.oracle_cm3);
            out.probes.push_back(std::move(pr));
        }
    }
    out.final_ledger = agent.ledger;
    out.final_gains = agent.gains();
    return out;
}

std::string episodes_csv(const std::vector<EpisodeRecord>& records) {
    std::string csv =
        "episode,object_id,predicted_cm3,observed_cm3,oracle_cm3,"
        "abs_error_cm3,rule_color,rule_shape,rule_size,rule_weight,"
        "ledger_color,ledger_shape,ledger_size,ledger_weight,"
        "certainty_color,certainty_shape,certainty_size,certainty_weight,"
        "reachable,encoded\n";
    for (const EpisodeRecord& r : records) {
        csv += std::to_string(r.episode_index) + ',' + r.object_id + ',';
        csv += fmt_opt(r.predicted_cm3) + ',' + fmt(r.observed_cm3) + ',';
        csv += fmt(r.oracle_cm3) + ',' + fmt_opt(r.abs_error_cm3);
        for (int c = 0; c < kChannelCount; ++c)
            csv += std::string(",") + to_string(r.rules[c]);
        for (int c = 0; c < kChannelCount; ++c)
            csv += std::string(",") + to_string(r.ledger.channels[c].status);
        for (int c = 0; c < kChannelCount; ++c)
            csv += "," + fmt(r.ledger.channels[c].certainty);
        csv += r.reachable ? ",true" : ",false";
        csv += r.encoded ? ",true" : ",false";
        csv += '\n';
    }
    return csv;
}

std::string probes_csv(const std::vector<ProbeRecord>& records) {
    std::string csv = "after_episode,probe_id,predicted_cm3,oracle_cm3,abs_error_cm3\n";
    for (const ProbeRecord& r : records) {
        csv += std::to_string(r.after_episode) + ',' + r.probe_id + ',';
        csv += fmt_opt(r.predicted_cm3) + ',' + fmt(r.oracle_cm3) + ',';
        csv += fmt_opt(r.abs_error_cm3) + '\n';
    }
    return csv;
}

void emit_report(const RunResult& result, const std::string& out_dir) {
    if (result.episodes.empty())
        throw std::invalid_argument("no records to report");
    std::filesystem::create_directories(out_dir);
    auto write = [](const std::string& path, const std::string& content) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write '" + path + "'");
        out << content;
    };
    write(out_dir + "/episodes.csv", episodes_csv(result.episodes));
    write(out_dir + "/probes.csv", probes_csv(result.probes));
}

Scenario fable_scenario() {
    Scenario s;
    s.seed = 7;
    s.objects = {
        ObjectSpec::cylinder("red_heavy_cylinder", Color::red, 3.18, 11.5, 420.0),
        ObjectSpec::cylinder("blue_heavy_cylinder", Color::blue, 3.18, 11.5, 420.0),
        ObjectSpec::cylinder("red_light_cylinder", Color::red, 3.18, 11.5, 14.0),
    };
    s.orders = {{0, 1, 2}};
    return s;
}

FableReplay replay_fable() {
    const Scenario scenario = fable_scenario();
    const RunResult result = run_scenario(scenario, 0);
    return {result.episodes, result.final_ledger, result.final_gains};
}

}  // namespace fable
