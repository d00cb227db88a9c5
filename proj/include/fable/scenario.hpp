#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fable/object.hpp"

namespace fable {

struct JarParams {
    double cross_section_cm2 = 100.0;
    double initial_level_cm = 10.0;
    double reach_level_cm = 13.5;
    double water_density = 1.0;
    double noise_sigma_cm3 = 0.0;
};

/// One experiment definition: jar geometry, the objects to explore, held-out
/// probes for prediction-error evaluation, and the presentation orders.
struct Scenario {
    JarParams jar;
    std::vector<ObjectSpec> objects;
    std::vector<ObjectSpec> probes;
    std::vector<std::vector<int>> orders;  // permutations of 0..n-1
    std::uint64_t seed = 0;
};

/// Parses the line-based scenario format. Errors carry the offending line
/// number.
Scenario parse_scenario(const std::string& path);
Scenario parse_scenario_text(const std::string& text);

}  // namespace fable
