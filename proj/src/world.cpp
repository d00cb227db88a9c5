#include "fable/world.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fable/rng.hpp"

namespace fable {

double object_volume(const ObjectSpec& obj) {
    validate(obj);
    const double pi = std::numbers::pi;
    switch (obj.shape) {
        case Shape::cylinder:
            return pi * obj.dims.radius * obj.dims.radius * obj.dims.height;
        case Shape::cube:
            return obj.dims.edge * obj.dims.edge * obj.dims.edge;
        case Shape::sphere:
            return pi * obj.dims.diameter * obj.dims.diameter *
                   obj.dims.diameter / 6.0;
        case Shape::cuboid:
            return obj.dims.length * obj.dims.width * obj.dims.height;
    }
    return 0.0;
}

double displaced_volume(const ObjectSpec& obj, double water_density) {
    const double volume = object_volume(obj);
    const double density = obj.weight_g / volume;
    if (density >= water_density) return volume;
    return obj.weight_g / water_density;
}

bool is_reachable(const WorldState& world) {
    return world.level_cm >= world.reach_level_cm;
}

double drop(WorldState& world, const ObjectSpec& obj) {
    if (std::find(world.dropped.begin(), world.dropped.end(), obj.id) !=
        world.dropped.end())
        throw std::invalid_argument("object '" + obj.id + "' already dropped");

    const double displaced = displaced_volume(obj, world.water_density);
    world.level_cm += displaced / world.cross_section_cm2;
    world.dropped.push_back(obj.id);

    double observed = displaced;
    if (world.noise_sigma_cm3 > 0.0) {
        if (world.noise_state_ == 0)
            world.noise_state_ = world.noise_seed ^ 0x9e3779b97f4a7c15ull;
        const double u = rng::uniform01(world.noise_state_);
        observed = std::max(0.0, displaced +
                                     (2.0 * u - 1.0) * world.noise_sigma_cm3);
    }
    return observed;
}

}  // namespace fable
