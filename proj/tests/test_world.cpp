#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fable/rng.hpp"
#include "fable/world.hpp"

using namespace fable;

namespace {
ObjectSpec heavy_cylinder() {
    return ObjectSpec::cylinder("heavy", Color::red, 3.18, 11.5, 420.0);
}
ObjectSpec light_cylinder() {
    return ObjectSpec::cylinder("light", Color::red, 3.18, 11.5, 14.0);
}
}  // namespace

TEST_CASE("object volumes match closed-form geometry") {
    // Independent arithmetic: pi * r^2 * h etc., recomputed here.
    const double pi = std::numbers::pi;
    CHECK(object_volume(heavy_cylinder()) ==
          doctest::Approx(pi * 3.18 * 3.18 * 11.5).epsilon(1e-12));
    CHECK(std::abs(object_volume(heavy_cylinder()) - 365.3) < 0.5);

    CHECK(object_volume(ObjectSpec::cube("c", Color::blue, 7.0, 1.0)) ==
          doctest::Approx(343.0));
    CHECK(std::abs(object_volume(ObjectSpec::sphere("s", Color::white, 8.0, 1.0)) -
                   268.1) < 0.1);
    CHECK(object_volume(ObjectSpec::cuboid("b", Color::black, 6, 5, 4, 1.0)) ==
          doctest::Approx(120.0));
}

TEST_CASE("invalid dimensions are rejected") {
    ObjectSpec bad = heavy_cylinder();
    bad.dims.radius = 0.0;
    CHECK_THROWS_AS(object_volume(bad), std::invalid_argument);
    bad = heavy_cylinder();
    bad.weight_g = -1.0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}

TEST_CASE("displaced volume follows Archimedes") {
    const double volume = object_volume(heavy_cylinder());

    // 420 g in ~365 cm^3: density 1.15, sinks fully submerged.
    CHECK(displaced_volume(heavy_cylinder()) == doctest::Approx(volume));
    // 14 g floats: displaces weight / water density.
    CHECK(displaced_volume(light_cylinder()) == doctest::Approx(14.0));

    // Neutral buoyancy counts as submerged.
    ObjectSpec neutral = heavy_cylinder();
    neutral.weight_g = volume;  // density exactly 1
    CHECK(displaced_volume(neutral) == doctest::Approx(volume));
}

TEST_CASE("displaced volume is continuous at the sink/float boundary") {
    const double volume = object_volume(heavy_cylinder());
    ObjectSpec below = heavy_cylinder();
    ObjectSpec above = heavy_cylinder();
    const double eps = 5e-7;
    below.weight_g = volume - eps;
    above.weight_g = volume + eps;
    CHECK(std::abs(displaced_volume(below) - displaced_volume(above)) < 1e-6);
}

TEST_CASE("displaced volume is non-decreasing in weight") {
    std::uint64_t state = 2024;
    for (int trial = 0; trial < 1000; ++trial) {
        ObjectSpec obj = ObjectSpec::cylinder(
            "t", Color::green, 0.5 + 4.5 * rng::uniform01(state),
            1.0 + 20.0 * rng::uniform01(state), 1.0);
        double prev = -1.0;
        for (double w = 5.0; w <= 600.0; w += 35.0) {
            obj.weight_g = w;
            const double d = displaced_volume(obj);
            CHECK(d >= prev - 1e-12);
            prev = d;
        }
    }
}

TEST_CASE("drop raises the level and flips reachability") {
    WorldState world;  // cross 100, level 10, reach 13.5
    CHECK_FALSE(is_reachable(world));

    const double reward = drop(world, heavy_cylinder());
    CHECK(std::abs(reward - 365.3) < 0.5);
    CHECK(world.level_cm == doctest::Approx(10.0 + reward / 100.0));
    CHECK(is_reachable(world));

    CHECK_THROWS_WITH_AS(drop(world, heavy_cylinder()),
                         "object 'heavy' already dropped",
                         std::invalid_argument);
}

TEST_CASE("a floating object barely moves the level") {
    WorldState world;
    const double reward = drop(world, light_cylinder());
    CHECK(reward == doctest::Approx(14.0));
    CHECK(world.level_cm == doctest::Approx(10.14));
    CHECK_FALSE(is_reachable(world));
}

TEST_CASE("reachability threshold is closed") {
    WorldState world;
    world.level_cm = world.reach_level_cm;
    CHECK(is_reachable(world));
    world.level_cm = world.reach_level_cm - 1e-9;
    CHECK_FALSE(is_reachable(world));
}

TEST_CASE("level equals initial plus summed displacements") {
    WorldState world;
    std::uint64_t state = 99;
    double sum = 0.0;
    for (int i = 0; i < 20; ++i) {
        ObjectSpec obj = ObjectSpec::cylinder(
            "obj" + std::to_string(i), Color::yellow,
            0.5 + 3.0 * rng::uniform01(state), 1.0 + 10.0 * rng::uniform01(state),
            1.0 + 400.0 * rng::uniform01(state));
        sum += displaced_volume(obj);
        drop(world, obj);
    }
    CHECK(world.level_cm ==
          doctest::Approx(10.0 + sum / 100.0).epsilon(1e-9));
}

TEST_CASE("observation noise stays within the configured band") {
    WorldState world;
    world.noise_sigma_cm3 = 5.0;
    world.noise_seed = 3;
    const double truth = displaced_volume(heavy_cylinder());
    const double observed = drop(world, heavy_cylinder());
    CHECK(std::abs(observed - truth) <= 5.0);
    // The level itself tracks the true displacement, not the noisy reading.
    CHECK(world.level_cm == doctest::Approx(10.0 + truth / 100.0));
}
