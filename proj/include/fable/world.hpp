#pragma once

#include <cstdint>
#include <vector>

#include "fable/object.hpp"

namespace fable {

/// Jar of water with a floating target. Objects dropped in raise the level;
/// the target becomes reachable once the level crosses reach_level_cm.
struct WorldState {
    double cross_section_cm2 = 100.0;
    double level_cm = 10.0;
    double reach_level_cm = 13.5;
    double water_density = 1.0;  // g/cm^3
    // Optional uniform observation noise on the reported reward, +/- sigma.
    // Off by default; never used in acceptance runs.
    double noise_sigma_cm3 = 0.0;
    std::uint64_t noise_seed = 0;
    std::vector<std::string> dropped;

    std::uint64_t noise_state_ = 0;  // lazily seeded on first noisy drop
};

/// Geometric volume in cm^3.
double object_volume(const ObjectSpec& obj);

/// Archimedes oracle: full volume when density >= water's (sinks, neutral
/// buoyancy counts as submerged), weight/water_density when it floats.
double displaced_volume(const ObjectSpec& obj, double water_density = 1.0);

bool is_reachable(const WorldState& world);

/// Drops the object, returns the observed displaced volume in cm^3.
/// Throws std::invalid_argument if the same id was already dropped.
double drop(WorldState& world, const ObjectSpec& obj);

}  // namespace fable
