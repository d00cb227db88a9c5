#include "fable/feature_maps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "fable/rng.hpp"

namespace fable {

namespace {
constexpr double kSoftmaxTau = 0.01;

double squared_distance(const double* a, const double* b, int dim) {
    double d = 0.0;
    for (int i = 0; i < dim; ++i) {
        const double diff = a[i] - b[i];
        d += diff * diff;
    }
    return d;
}

int nearest_unit(const PropertyMap& map, const std::vector<double>& x) {
    int best = 0;
    double best_d = squared_distance(map.unit(0), x.data(), map.dim);
    for (int u = 1; u < kMapUnits; ++u) {
        const double d = squared_distance(map.unit(u), x.data(), map.dim);
        if (d < best_d) {  // strict: ties keep the lowest (row, col) index
            best_d = d;
            best = u;
        }
    }
    return best;
}
}  // namespace

const char* to_string(Channel c) {
    switch (c) {
        case Channel::color: return "color";
        case Channel::shape: return "shape";
        case Channel::size: return "size";
        case Channel::weight: return "weight";
    }
    return "?";
}

int feature_dim(Channel c) {
    switch (c) {
        case Channel::color: return 3;
        case Channel::shape: return 4;
        case Channel::size: return 1;
        case Channel::weight: return 1;
    }
    return 0;
}

int grid_distance(const GridCoord& a, const GridCoord& b) {
    return std::max(std::abs(a.row - b.row), std::abs(a.col - b.col));
}

FeatureVector encode_feature(const ObjectSpec& obj, Channel channel) {
    validate(obj);
    FeatureVector f;
    f.channel = channel;
    switch (channel) {
        case Channel::color: {
            const auto c = rgb(obj.color);
            f.values.assign(c.begin(), c.end());
            break;
        }
        case Channel::shape: {
            f.values.assign(kShapeCount, 0.0);
            f.values[static_cast<int>(obj.shape)] = 1.0;
            break;
        }
        case Channel::size: {
            const double v = characteristic_length_cm(obj) / kSizeRangeCm;
            f.values.push_back(std::clamp(v, 0.0, 1.0));
            break;
        }
        case Channel::weight: {
            const double v = obj.weight_g / kWeightRangeG;
            f.values.push_back(std::clamp(v, 0.0, 1.0));
            break;
        }
    }
    return f;
}

PropertyMap train_map(const std::vector<FeatureVector>& samples,
                      const SomConfig& config, std::uint64_t seed) {
    if (samples.empty()) throw std::invalid_argument("no training data");
    const Channel channel = samples.front().channel;
    const int dim = feature_dim(channel);
    for (const auto& s : samples) {
        if (s.channel != channel)
            throw std::invalid_argument("mixed channels in training set");
        if (static_cast<int>(s.values.size()) != dim)
            throw std::invalid_argument("bad feature dimension");
    }
    if (config.epochs < 1 || config.learning_rate_start <= 0.0 ||
        config.learning_rate_start > 1.0 || config.radius_start <= 0.0)
        throw std::invalid_argument("bad SOM config");

    PropertyMap map;
    map.channel = channel;
    map.dim = dim;
    map.codebook.resize(static_cast<size_t>(kMapUnits) * dim);
    std::uint64_t state = rng::hash_mix(seed, 0xf0f0f0f0ull);
    for (auto& w : map.codebook) w = rng::uniform01(state);

    std::vector<int> order(samples.size());
    std::iota(order.begin(), order.end(), 0);

    const int last = std::max(1, config.epochs - 1);
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        const double t = static_cast<double>(epoch) / last;
        const double alpha = config.learning_rate_start *
                             std::pow(config.learning_rate_end /
                                          config.learning_rate_start,
                                      t);
        const double sigma =
            config.radius_start *
            std::pow(config.radius_end / config.radius_start, t);
        const double inv_two_sigma2 = 1.0 / (2.0 * sigma * sigma);

        // Fisher-Yates with the seeded generator keeps epochs deterministic.
        for (size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[rng::below(state, i)]);

        for (int idx : order) {
            const auto& x = samples[idx].values;
            const int win = nearest_unit(map, x);
            const int wr = win / kMapSide, wc = win % kMapSide;
            for (int u = 0; u < kMapUnits; ++u) {
                const int dr = u / kMapSide - wr;
                const int dc = u % kMapSide - wc;
                const double g =
                    std::exp(-(dr * dr + dc * dc) * inv_two_sigma2);
                double* w = map.codebook.data() + static_cast<size_t>(u) * dim;
                for (int k = 0; k < dim; ++k)
                    w[k] += alpha * g * (x[k] - w[k]);
            }
        }
    }
    map.trained = true;
    return map;
}

MapActivation bottom_up_activate(const PropertyMap& map,
                                 const FeatureVector& f) {
    if (!map.trained)
        throw std::invalid_argument("property map is not trained");
    if (f.channel != map.channel)
        throw std::invalid_argument("channel mismatch");
    if (static_cast<int>(f.values.size()) != map.dim)
        throw std::invalid_argument("bad feature dimension");

    std::vector<double> d2(kMapUnits);
    double min_d2 = std::numeric_limits<double>::max();
    int win = 0;
    for (int u = 0; u < kMapUnits; ++u) {
        d2[u] = squared_distance(map.unit(u), f.values.data(), map.dim);
        if (d2[u] < min_d2) {
            min_d2 = d2[u];
            win = u;
        }
    }

    MapActivation act;
    act.channel = map.channel;
    act.activity.resize(kMapUnits);
    double sum = 0.0;
    for (int u = 0; u < kMapUnits; ++u) {
        act.activity[u] = std::exp(-(d2[u] - min_d2) / kSoftmaxTau);
        sum += act.activity[u];
    }
    for (auto& a : act.activity) a /= sum;
    act.winner = {win / kMapSide, win % kMapSide};
    return act;
}

std::vector<FeatureVector> standard_training_set(Channel channel) {
    std::vector<FeatureVector> out;
    switch (channel) {
        case Channel::color: {
            // 5x5x5 grid over RGB space; covers the six named colors at the
            // cube corners.
            for (int r = 0; r <= 4; ++r)
                for (int g = 0; g <= 4; ++g)
                    for (int b = 0; b <= 4; ++b)
                        out.push_back(
                            {channel, {r / 4.0, g / 4.0, b / 4.0}});
            break;
        }
        case Channel::shape: {
            for (int rep = 0; rep < 25; ++rep)
                for (int s = 0; s < kShapeCount; ++s) {
                    FeatureVector f{channel, std::vector<double>(kShapeCount, 0.0)};
                    f.values[s] = 1.0;
                    out.push_back(std::move(f));
                }
            break;
        }
        case Channel::size:
        case Channel::weight: {
            for (int i = 0; i <= 100; ++i)
                out.push_back({channel, {i / 100.0}});
            break;
        }
    }
    return out;
}

PropertyMap train_standard_map(Channel channel, std::uint64_t seed,
                               const SomConfig& config) {
    return train_map(standard_training_set(channel), config,
                     rng::hash_mix(seed, static_cast<std::uint64_t>(channel)));
}

}  // namespace fable
