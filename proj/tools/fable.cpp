// Command-line front end: scenario runs, the built-in fable replay, and the
// episodic-memory capacity probe.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fable/episodic.hpp"
#include "fable/runner.hpp"

namespace {

void print_ledger(const fable::CausalLedger& ledger,
                  const std::array<double, fable::kChannelCount>& gains) {
    for (fable::Channel c : fable::kChannels) {
        const auto& know = ledger.at(c);
        std::printf("  %-7s %-18s certainty=%.2f gain=%.2f\n",
                    fable::to_string(c), fable::to_string(know.status),
                    know.certainty, gains[static_cast<int>(c)]);
    }
}

int cmd_run(const std::string& scenario_path, std::optional<int> order_index,
            const std::string& out_dir, std::optional<std::uint64_t> seed) {
    fable::Scenario scenario = fable::parse_scenario(scenario_path);
    if (seed) scenario.seed = *seed;

    std::vector<size_t> orders;
    if (order_index) {
        if (*order_index < 0 ||
            *order_index >= static_cast<int>(scenario.orders.size())) {
            std::cerr << "order index out of range (scenario has "
                      << scenario.orders.size() << " orders)\n";
            return 1;
        }
        orders.push_back(static_cast<size_t>(*order_index));
    } else {
        for (size_t k = 0; k < scenario.orders.size(); ++k) orders.push_back(k);
    }

    for (size_t k : orders) {
        const fable::RunResult result = fable::run_scenario(scenario, k);
        const std::string dir = order_index
                                    ? out_dir
                                    : out_dir + "/order" + std::to_string(k);
        fable::emit_report(result, dir);

        double err_sum = 0.0;
        int err_count = 0;
        for (const auto& probe : result.probes) {
            if (probe.after_episode !=
                static_cast<int>(result.episodes.size()) - 1)
                continue;
            if (probe.abs_error_cm3) {
                err_sum += *probe.abs_error_cm3;
                ++err_count;
            }
        }
        std::printf("order %zu: %zu episodes -> %s\n", k,
                    result.episodes.size(), dir.c_str());
        if (err_count > 0)
            std::printf("  final mean probe error: %.2f cm3\n",
                        err_sum / err_count);
        print_ledger(result.final_ledger, result.final_gains);
    }
    return 0;
}

int cmd_replay_fable() {
    const fable::FableReplay replay = fable::replay_fable();
    for (const auto& r : replay.records) {
        std::printf("episode %d: %-20s predicted=%-9s observed=%8.2f "
                    "reachable=%-5s encoded=%s\n",
                    r.episode_index, r.object_id.c_str(),
                    r.predicted_cm3
                        ? (std::to_string(*r.predicted_cm3).substr(0, 7)).c_str()
                        : "none",
                    r.observed_cm3, r.reachable ? "true" : "false",
                    r.encoded ? "true" : "false");
    }
    std::printf("final causal knowledge:\n");
    print_ledger(replay.final_ledger, replay.final_gains);

    // Regression checks for the three-episode story.
    const auto& ep1 = replay.records[0];
    const auto& ep2 = replay.records[1];
    const auto& ep3 = replay.records[2];
    bool ok = true;
    auto check = [&](bool cond, const char* what) {
        if (!cond) {
            std::printf("FAIL: %s\n", what);
            ok = false;
        }
    };
    check(std::abs(ep1.observed_cm3 - 365.3) <= 0.5 && ep1.reachable &&
              ep1.encoded && !ep1.predicted_cm3,
          "episode 1: sink, reachable, one-shot encode");
    check(ep2.predicted_cm3 && std::abs(*ep2.predicted_cm3 - 365.3) <= 5.0 &&
              !ep2.encoded &&
              ep2.rules[static_cast<int>(fable::Channel::color)] ==
                  fable::RuleTag::elimination,
          "episode 2: anticipation met, colour eliminated, not encoded");
    check(ep3.rules[static_cast<int>(fable::Channel::weight)] ==
                  fable::RuleTag::growth &&
              replay.final_ledger.at(fable::Channel::weight).status ==
                  fable::CausalStatus::dominant,
          "episode 3: contradiction, weight dominant");
    std::printf("%s\n", ok ? "replay OK" : "replay FAILED");
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Crow-and-pitcher causal learning agent"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run a scenario and write CSV reports");
    std::string scenario_path;
    std::string out_dir = "out";
    int order_index = -1;
    std::uint64_t seed = 0;
    bool have_seed = false;
    run->add_option("--scenario", scenario_path, "scenario file")->required();
    run->add_option("--order-index", order_index, "run a single order");
    run->add_option("--out-dir", out_dir, "output directory");
    auto* seed_opt = run->add_option("--seed", seed, "override scenario seed");

    auto* probe = app.add_subcommand("probe-capacity",
                                     "episodic memory recall accuracy probe");
    int n_patterns = 50;
    double cue = 0.25;
    std::uint64_t probe_seed = 1;
    probe->add_option("--n", n_patterns, "number of stored patterns")->required();
    probe->add_option("--cue", cue, "fraction of rows clamped as cue")->required();
    probe->add_option("--seed", probe_seed, "probe seed");

    auto* replay = app.add_subcommand("replay-fable",
                                      "run the built-in three-episode regression");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            have_seed = seed_opt->count() > 0;
            return cmd_run(scenario_path,
                           order_index >= 0 ? std::optional<int>(order_index)
                                            : std::nullopt,
                           out_dir,
                           have_seed ? std::optional<std::uint64_t>(seed)
                                     : std::nullopt);
        }
        if (probe->parsed()) {
            const fable::CapacityProbeResult result =
                fable::capacity_probe(n_patterns, cue, probe_seed);
            std::printf("patterns=%d cue=%.2f accuracy=%.4f energy_monotone=%s\n",
                        n_patterns, cue, result.mean_bit_accuracy,
                        result.energy_monotone ? "true" : "false");
            return 0;
        }
        if (replay->parsed()) return cmd_replay_fable();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
