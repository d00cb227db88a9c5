#pragma once

#include <cstdint>
#include <vector>

#include "fable/object.hpp"

namespace fable {

enum class Channel { color, shape, size, weight };
inline constexpr int kChannelCount = 4;
inline constexpr Channel kChannels[kChannelCount] = {
    Channel::color, Channel::shape, Channel::size, Channel::weight};

const char* to_string(Channel c);

/// Feature dimensionality per channel: RGB(3), one-hot shape(4), scalar(1).
int feature_dim(Channel c);

/// Map side length; every property map is kMapSide x kMapSide.
inline constexpr int kMapSide = 10;
inline constexpr int kMapUnits = kMapSide * kMapSide;

/// Normalization ranges for the scalar channels.
inline constexpr double kSizeRangeCm = 30.0;
inline constexpr double kWeightRangeG = 1000.0;

struct FeatureVector {
    Channel channel = Channel::color;
    std::vector<double> values;  // each component in [0, 1]
};

struct GridCoord {
    int row = 0;
    int col = 0;
    friend bool operator==(const GridCoord&, const GridCoord&) = default;
    friend auto operator<=>(const GridCoord&, const GridCoord&) = default;
};

/// Chebyshev distance on the map grid.
int grid_distance(const GridCoord& a, const GridCoord& b);

struct SomConfig {
    int epochs = 150;
    double learning_rate_start = 0.4;
    double learning_rate_end = 0.01;
    double radius_start = 5.0;
    double radius_end = 0.5;
};

/// One trained self-organizing map for a single property channel.
/// Codebooks are frozen after training; bottom-up activation never
/// mutates them.
struct PropertyMap {
    Channel channel = Channel::color;
    int dim = 0;
    std::vector<double> codebook;  // kMapUnits x dim, row-major
    bool trained = false;

    const double* unit(int index) const { return codebook.data() + index * dim; }
};

struct MapActivation {
    Channel channel = Channel::color;
    std::vector<double> activity;  // kMapUnits, non-negative, sums to 1
    GridCoord winner;
};

/// Deterministic feature encoding: RGB lookup, one-hot shape,
/// range-normalized scalars clamped to [0, 1].
FeatureVector encode_feature(const ObjectSpec& obj, Channel channel);

/// Standard Kohonen training: nearest-codebook winner, Gaussian
/// neighborhood, geometrically decaying rate and radius. Deterministic for
/// a given seed. Throws std::invalid_argument on an empty sample list.
PropertyMap train_map(const std::vector<FeatureVector>& samples,
                      const SomConfig& config, std::uint64_t seed);

/// Softmax over negated squared distance with temperature 0.01; the winner
/// is the nearest unit, ties broken by lowest (row, col).
MapActivation bottom_up_activate(const PropertyMap& map,
                                 const FeatureVector& f);

/// The samples the agent pre-trains each channel map on: a uniform grid of
/// the channel's feature space, not the scenario objects.
std::vector<FeatureVector> standard_training_set(Channel channel);

PropertyMap train_standard_map(Channel channel, std::uint64_t seed,
                               const SomConfig& config = {});

}  // namespace fable
