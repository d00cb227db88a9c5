#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>

#include "fable/rng.hpp"
#include "fable/runner.hpp"

using namespace fable;

namespace {

Scenario canonical() {
    return parse_scenario(std::string(FABLE_TEST_DATA_DIR) +
                          "/canonical.scenario");
}

int channel_index(Channel c) { return static_cast<int>(c); }

// Mean absolute probe error for one probe sweep; no predictions at all
// counts as unbounded error.
double mean_probe_error(const RunResult& result, int after_episode) {
    double sum = 0.0;
    int count = 0;
    for (const ProbeRecord& p : result.probes) {
        if (p.after_episode != after_episode || !p.abs_error_cm3) continue;
        sum += *p.abs_error_cm3;
        ++count;
    }
    return count == 0 ? std::numeric_limits<double>::infinity() : sum / count;
}

std::string final_ledger_fields(const std::vector<EpisodeRecord>& records) {
    const std::string csv = episodes_csv(records);
    const auto last_line_start = csv.rfind('\n', csv.size() - 2);
    const std::string line = csv.substr(last_line_start + 1);
    // Columns 10..17 carry the ledger statuses and certainties.
    std::stringstream ss(line);
    std::string field;
    std::string out;
    for (int i = 0; std::getline(ss, field, ','); ++i)
        if (i >= 10 && i <= 17) out += field + ',';
    return out;
}

}  // namespace

TEST_CASE("fable replay: the three-episode story") {
    const FableReplay replay = replay_fable();
    REQUIRE(replay.records.size() == 3);
    const EpisodeRecord& ep1 = replay.records[0];
    const EpisodeRecord& ep2 = replay.records[1];
    const EpisodeRecord& ep3 = replay.records[2];

    // Episode 1: nothing recalled, object sinks, goal becomes reachable,
    // one-shot encoding.
    CHECK_FALSE(ep1.predicted_cm3.has_value());
    CHECK(std::abs(ep1.observed_cm3 - 365.3) <= 0.5);
    CHECK(ep1.oracle_cm3 == ep1.observed_cm3);
    CHECK(ep1.reachable);
    CHECK(ep1.encoded);
    for (RuleTag t : ep1.rules) CHECK(t == RuleTag::none);

    // Episode 2: the blue twin is anticipated correctly, color is
    // eliminated, the episode is not encoded.
    REQUIRE(ep2.predicted_cm3.has_value());
    CHECK(std::abs(*ep2.predicted_cm3 - 365.3) <= 5.0);
    CHECK(ep2.rules[channel_index(Channel::color)] == RuleTag::elimination);
    CHECK(ep2.rules[channel_index(Channel::weight)] == RuleTag::status_quo);
    CHECK(ep2.ledger.at(Channel::color).status == CausalStatus::irrelevant);
    CHECK_FALSE(ep2.encoded);

    // Episode 3: the light twin contradicts the anticipation; weight grows
    // dominant, shape and size become likely irrelevant.
    REQUIRE(ep3.predicted_cm3.has_value());
    CHECK(std::abs(*ep3.predicted_cm3 - 365.3) <= 5.0);
    CHECK(ep3.observed_cm3 == doctest::Approx(14.0));
    CHECK(ep3.rules[channel_index(Channel::weight)] == RuleTag::growth);
    CHECK(ep3.rules[channel_index(Channel::shape)] == RuleTag::uncertainty);
    CHECK(ep3.rules[channel_index(Channel::size)] == RuleTag::uncertainty);
    CHECK(ep3.encoded);

    CHECK(replay.final_ledger.at(Channel::weight).status ==
          CausalStatus::dominant);
    CHECK(replay.final_ledger.at(Channel::color).status ==
          CausalStatus::irrelevant);
    CHECK(replay.final_ledger.at(Channel::shape).status ==
          CausalStatus::likely_irrelevant);
    CHECK(replay.final_ledger.at(Channel::shape).certainty ==
          doctest::Approx(0.25));
    CHECK(replay.final_gains[channel_index(Channel::color)] == 0.0);
    CHECK(replay.final_gains[channel_index(Channel::weight)] == 1.0);
    CHECK(replay.final_gains[channel_index(Channel::shape)] ==
          doctest::Approx(0.8));
}

TEST_CASE("a new-weight twin recalls all stored same-shape experiences") {
    Scenario scenario = fable_scenario();
    scenario.probes.push_back(
        ObjectSpec::cylinder("mid_cyl", Color::green, 3.18, 11.5, 200.0));

    Agent agent = build_agent(scenario);
    WorldState world = make_world(scenario.jar);
    for (size_t i = 0; i < scenario.objects.size(); ++i)
        run_episode(agent, world, scenario.objects[i], static_cast<int>(i));

    // Memory holds episodes 1 (365.3) and 3 (14). A cylinder of an
    // unexperienced weight must recall both and land in between.
    const std::optional<double> predicted =
        predict_probe(agent, scenario.probes[0]);
    REQUIRE(predicted.has_value());
    CHECK(*predicted > 14.0);
    CHECK(*predicted < 365.4);

    // The blue twin, with color long eliminated, still recalls episode 1.
    const std::optional<double> blue =
        predict_probe(agent, scenario.objects[1]);
    REQUIRE(blue.has_value());
    CHECK(std::abs(*blue - 365.3) <= 5.0);
}

TEST_CASE("hub code geometry keeps families recallable and strangers apart") {
    const Scenario scenario = canonical();
    const Agent agent = build_agent(scenario);

    // Family membership by object index: the two heavy cylinders teach
    // color, the two wide cylinders teach weight; everything else must stay
    // out of recall range. Probes belong to the wide-cylinder family.
    auto family = [](size_t idx) -> int {
        if (idx <= 1) return 1;
        if (idx <= 3) return 2;
        return 0;  // singleton
    };

    auto code_variants = [&](const ObjectSpec& obj) {
        std::vector<BipolarRow> variants;
        for (bool color_muted : {false, true}) {
            DualDyadConnectivity conn = agent.conn;
            if (color_muted) conn.set_gain(Channel::color, 0.0);
            std::vector<MapActivation> acts;
            for (Channel c : kChannels) {
                if (conn.gain(c) > 0.0)
                    acts.push_back(bottom_up_activate(
                        agent.maps[channel_index(c)], encode_feature(obj, c)));
            }
            variants.push_back(conn.bind(acts).bits);
        }
        return variants;
    };

    std::vector<std::vector<BipolarRow>> object_codes;
    for (const ObjectSpec& obj : scenario.objects)
        object_codes.push_back(code_variants(obj));

    for (size_t i = 0; i < object_codes.size(); ++i) {
        for (size_t j = i + 1; j < object_codes.size(); ++j) {
            const bool related = family(i) != 0 && family(i) == family(j);
            for (const BipolarRow& a : object_codes[i]) {
                for (const BipolarRow& b : object_codes[j]) {
                    const int d = hamming(a, b);
                    if (related)
                        CHECK(d <= kRecallHammingMax);
                    else
                        CHECK(d > kRecallHammingMax);
                }
            }
        }
    }

    // All-gain codes are pairwise distinct across the object set.
    std::set<std::string> full_codes;
    for (const auto& variants : object_codes)
        full_codes.insert(row_to_string(variants[0]));
    CHECK(full_codes.size() == scenario.objects.size());

    // Probes reach exactly the wide-cylinder family.
    for (const ObjectSpec& probe : scenario.probes) {
        for (const BipolarRow& p : code_variants(probe)) {
            for (size_t j = 0; j < object_codes.size(); ++j) {
                for (const BipolarRow& b : object_codes[j]) {
                    const int d = hamming(p, b);
                    if (family(j) == 2)
                        CHECK(d <= kRecallHammingMax);
                    else
                        CHECK(d > kRecallHammingMax);
                }
            }
        }
    }
}

TEST_CASE("identity order: the canonical run learns the fable lessons") {
    const Scenario scenario = canonical();
    const RunResult result = run_scenario(scenario, 0);
    REQUIRE(result.episodes.size() == 8);

    CHECK(result.final_ledger.at(Channel::color).status ==
          CausalStatus::irrelevant);
    CHECK(result.final_ledger.at(Channel::weight).status ==
          CausalStatus::dominant);
    CHECK(result.final_ledger.at(Channel::shape).status ==
          CausalStatus::likely_irrelevant);
    CHECK(result.final_ledger.at(Channel::size).status ==
          CausalStatus::likely_irrelevant);

    // The color lesson comes from the blue twin, the weight lesson from the
    // light wide cylinder.
    CHECK(result.episodes[1].rules[channel_index(Channel::color)] ==
          RuleTag::elimination);
    CHECK_FALSE(result.episodes[1].encoded);
    CHECK(result.episodes[3].rules[channel_index(Channel::weight)] ==
          RuleTag::growth);
    CHECK(result.episodes[3].encoded);

    // Singletons always enter memory: no recall, nothing to compare.
    for (size_t idx : {4u, 5u, 6u, 7u}) {
        CHECK(result.episodes[idx].encoded);
        CHECK_FALSE(result.episodes[idx].predicted_cm3.has_value());
    }

    // Probes are never dropped: eight episodes, every object accounted for.
    CHECK(result.probes.size() == scenario.probes.size() * 8);
}

TEST_CASE("the final ledger is identical across the four canonical orders") {
    const Scenario scenario = canonical();
    std::vector<RunResult> results;
    for (size_t k = 0; k < scenario.orders.size(); ++k)
        results.push_back(run_scenario(scenario, k));

    const std::string reference = final_ledger_fields(results[0].episodes);
    for (size_t k = 1; k < results.size(); ++k) {
        CHECK(results[k].final_ledger == results[0].final_ledger);
        CHECK(results[k].final_gains == results[0].final_gains);
        CHECK(final_ledger_fields(results[k].episodes) == reference);
    }
}

TEST_CASE("the final ledger is invariant under random exploration orders") {
    Scenario scenario = canonical();
    const CausalLedger reference = run_scenario(scenario, 0).final_ledger;

    std::uint64_t state = 0xD1CE;
    for (int trial = 0; trial < 12; ++trial) {
        std::vector<int> order(scenario.objects.size());
        std::iota(order.begin(), order.end(), 0);
        for (size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[rng::below(state, i)]);
        scenario.orders = {order};
        const RunResult result = run_scenario(scenario, 0);
        CHECK(result.final_ledger == reference);
    }
}

TEST_CASE("probe error shrinks from early to final episodes in every order") {
    const Scenario scenario = canonical();
    for (size_t k = 0; k < scenario.orders.size(); ++k) {
        const RunResult result = run_scenario(scenario, k);
        const double early = mean_probe_error(result, 1);
        const double final_error =
            mean_probe_error(result, static_cast<int>(result.episodes.size()) - 1);
        CHECK(std::isfinite(final_error));
        CHECK(final_error < early);
    }
}

TEST_CASE("scenario runs are byte-deterministic") {
    const Scenario scenario = canonical();
    const RunResult a = run_scenario(scenario, 0);
    const RunResult b = run_scenario(scenario, 0);
    CHECK(episodes_csv(a.episodes) == episodes_csv(b.episodes));
    CHECK(probes_csv(a.probes) == probes_csv(b.probes));
}

TEST_CASE("oracle column is independent of the learning path") {
    const Scenario scenario = canonical();
    const RunResult result = run_scenario(scenario, 0);
    for (const EpisodeRecord& r : result.episodes) {
        const auto obj = std::find_if(
            scenario.objects.begin(), scenario.objects.end(),
            [&](const ObjectSpec& o) { return o.id == r.object_id; });
        REQUIRE(obj != scenario.objects.end());
        CHECK(r.oracle_cm3 ==
              doctest::Approx(displaced_volume(*obj, scenario.jar.water_density)));
    }
}

TEST_CASE("reports have the pinned headers and stable bytes") {
    const Scenario scenario = canonical();
    RunResult result = run_scenario(scenario, 0);
    result.episodes.resize(3);

    const std::string episodes = episodes_csv(result.episodes);
    CHECK(std::count(episodes.begin(), episodes.end(), '\n') == 4);
    CHECK(episodes.rfind("episode,object_id,predicted_cm3,observed_cm3,"
                         "oracle_cm3,abs_error_cm3,rule_color,rule_shape,"
                         "rule_size,rule_weight,ledger_color,ledger_shape,"
                         "ledger_size,ledger_weight,certainty_color,"
                         "certainty_shape,certainty_size,certainty_weight,"
                         "reachable,encoded\n",
                         0) == 0);
    CHECK(probes_csv(result.probes)
              .rfind("after_episode,probe_id,predicted_cm3,oracle_cm3,"
                     "abs_error_cm3\n",
                     0) == 0);

    // A missing prediction serializes as an empty field, not a zero.
    CHECK(episodes.find("0,red_heavy_cyl,,") != std::string::npos);

    const auto dir = std::filesystem::temp_directory_path() / "fable_report";
    emit_report(result, dir.string());
    auto slurp = [](const std::filesystem::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    CHECK(slurp(dir / "episodes.csv") == episodes);
    emit_report(result, dir.string());
    CHECK(slurp(dir / "episodes.csv") == episodes);
    std::filesystem::remove_all(dir);

    RunResult empty;
    CHECK_THROWS_AS(emit_report(empty, dir.string()), std::invalid_argument);
}

TEST_CASE("object choice: explore the unknown, then chase reward") {
    const Scenario scenario = canonical();

    // Fresh agent: nothing predictable, the first candidate wins.
    Agent fresh = build_agent(scenario);
    CHECK(choose_object(fresh, scenario.objects) == 0);

    // After the full identity run every object is predictable; the heavy
    // sinkers promise the most water.
    Agent agent = build_agent(scenario);
    WorldState world = make_world(scenario.jar);
    const auto& order = scenario.orders[0];
    for (size_t i = 0; i < order.size(); ++i)
        run_episode(agent, world, scenario.objects[order[i]],
                    static_cast<int>(i));

    const std::vector<ObjectSpec> candidates = {
        scenario.objects[3],  // light wide cylinder, ~14
        scenario.objects[0],  // heavy cylinder, ~365
        scenario.objects[2],  // heavy wide cylinder, ~241
    };
    CHECK(choose_object(agent, candidates) == 1);
}

TEST_CASE("world noise does not leak into acceptance-style runs") {
    Scenario scenario = canonical();
    CHECK(scenario.jar.noise_sigma_cm3 == 0.0);
    const RunResult result = run_scenario(scenario, 0);
    for (const EpisodeRecord& r : result.episodes)
        CHECK(r.observed_cm3 == doctest::Approx(r.oracle_cm3));
}
