#include "fable/episodic.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "fable/rng.hpp"

namespace fable {

namespace {
constexpr float kHebbScale = 1.0f / kSheetBits;
}

BipolarRow sheet_row(const Sheet& sheet, int row) {
    BipolarRow bits{};
    std::memcpy(bits.data(), sheet.data() + row * kRowBits, kRowBits);
    return bits;
}

void set_sheet_row(Sheet& sheet, int row, const BipolarRow& bits) {
    std::memcpy(sheet.data() + row * kRowBits, bits.data(), kRowBits);
}

Episode make_episode(BodyState body, const HubCode& object_code,
                     ActionGoal action, double observed_cm3,
                     EpisodeMeta meta) {
    Episode ep;
    ep.meta = std::move(meta);
    ep.meta.observed_cm3 = observed_cm3;
    set_sheet_row(ep.sheet, kBodyRow, body_code(body).bits);
    set_sheet_row(ep.sheet, kObjectRow, object_code.bits);
    set_sheet_row(ep.sheet, kActionRow, action_code(action).bits);
    set_sheet_row(ep.sheet, kRewardRow, encode_reward(observed_cm3).bits);
    const BipolarRow pad = padding_row();
    for (int r = kFirstPaddingRow; r < kSheetRows; ++r)
        set_sheet_row(ep.sheet, r, pad);
    return ep;
}

EpisodicNetwork::EpisodicNetwork()
    : weights_(static_cast<size_t>(kSheetBits) * kSheetBits, 0.0f) {}

void EpisodicNetwork::encode(const Episode& episode) {
    if (stored_count() >= kMemoryCapacity)
        throw std::runtime_error("episodic memory full");
    const Sheet& x = episode.sheet;
    for (int i = 0; i < kSheetBits; ++i) {
        float* row = weights_.data() + static_cast<size_t>(i) * kSheetBits;
        const float xi = static_cast<float>(x[i]) * kHebbScale;
        for (int j = 0; j < kSheetBits; ++j) row[j] += xi * x[j];
        row[i] = 0.0f;  // zero diagonal
    }
    ledger_.push_back(episode);
}

RecallResult EpisodicNetwork::recall(
    const Sheet& cue, const std::array<bool, kSheetRows>& clamped) const {
    if (std::none_of(clamped.begin(), clamped.end(), [](bool b) { return b; }))
        throw std::invalid_argument("recall cue must clamp at least one row");

    std::array<bool, kSheetBits> bit_clamped{};
    Sheet x{};
    for (int r = 0; r < kSheetRows; ++r) {
        for (int i = r * kRowBits; i < (r + 1) * kRowBits; ++i) {
            bit_clamped[i] = clamped[r];
            x[i] = clamped[r] ? cue[i] : 0;
        }
    }

    // Local fields, maintained incrementally: flipping one bit costs one
    // column update instead of a full matrix pass.
    std::vector<double> field(kSheetBits, 0.0);
    for (int j = 0; j < kSheetBits; ++j) {
        if (x[j] == 0) continue;
        const float* col = weights_.data() + static_cast<size_t>(j) * kSheetBits;
        const double xj = x[j];
        for (int i = 0; i < kSheetBits; ++i) field[i] += xj * col[i];
    }
    std::vector<double> clamped_field(kSheetBits, 0.0);
    for (int j = 0; j < kSheetBits; ++j) {
        if (!bit_clamped[j] || x[j] == 0) continue;
        const float* col = weights_.data() + static_cast<size_t>(j) * kSheetBits;
        const double xj = x[j];
        for (int i = 0; i < kSheetBits; ++i) clamped_field[i] += xj * col[i];
    }

    RecallResult result;
    auto energy = [&]() {
        double e = 0.0;
        for (int i = 0; i < kSheetBits; ++i)
            if (!bit_clamped[i] && x[i] != 0)
                e += x[i] * (field[i] + clamped_field[i]);
        return -0.5 * e;
    };
    result.energy.push_back(energy());

    for (int sweep = 0; sweep < kRecallMaxSweeps; ++sweep) {
        bool changed = false;
        for (int i = 0; i < kSheetBits; ++i) {
            if (bit_clamped[i]) continue;
            const double h = field[i];
            std::int8_t next;
            if (h > 0.0)
                next = 1;
            else if (h < 0.0)
                next = -1;
            else
                next = x[i] != 0 ? x[i] : std::int8_t{1};
            if (next == x[i]) continue;
            const double delta = next - x[i];
            const float* col =
                weights_.data() + static_cast<size_t>(i) * kSheetBits;
            for (int k = 0; k < kSheetBits; ++k) field[k] += delta * col[k];
            x[i] = next;
            changed = true;
        }
        ++result.sweeps;
        result.energy.push_back(energy());
        if (!changed) break;
    }

    result.settled = x;
    const BipolarRow settled_object = sheet_row(x, kObjectRow);
    for (size_t idx = 0; idx < ledger_.size(); ++idx) {
        const int d =
            hamming(sheet_row(ledger_[idx].sheet, kObjectRow), settled_object);
        if (d <= kRecallHammingMax)
            result.matches.push_back(
                {idx, static_cast<double>(kRowBits - d) / kRowBits});
    }
    std::stable_sort(result.matches.begin(), result.matches.end(),
                     [](const RecallMatch& a, const RecallMatch& b) {
                         return a.score > b.score;
                     });
    return result;
}

RecallResult EpisodicNetwork::recall_object_cue(
    const HubCode& object_code) const {
    Sheet cue{};
    set_sheet_row(cue, kObjectRow, object_code.bits);
    std::array<bool, kSheetRows> clamped{};
    clamped[kObjectRow] = true;
    return recall(cue, clamped);
}

void EpisodicNetwork::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for write");
    out.write("EPIMEM1", 7);
    out.write(reinterpret_cast<const char*>(weights_.data()),
              static_cast<std::streamsize>(weights_.size() * sizeof(float)));

    const std::uint32_t count = static_cast<std::uint32_t>(ledger_.size());
    out.write(reinterpret_cast<const char*>(&count), sizeof(count));
    for (const Episode& ep : ledger_) {
        nlohmann::json j;
        j["episode_index"] = ep.meta.episode_index;
        j["object_id"] = ep.meta.object_id;
        j["observed_cm3"] = ep.meta.observed_cm3;
        std::string sheet;
        sheet.reserve(kSheetBits);
        for (int i = 0; i < kSheetBits; ++i)
            sheet += ep.sheet[i] > 0 ? '+' : '-';
        j["sheet"] = sheet;
        const ObjectSpec& s = ep.meta.spec;
        j["spec"] = {{"id", s.id},
                     {"color", to_string(s.color)},
                     {"shape", to_string(s.shape)},
                     {"weight_g", s.weight_g},
                     {"radius", s.dims.radius},
                     {"height", s.dims.height},
                     {"edge", s.dims.edge},
                     {"diameter", s.dims.diameter},
                     {"length", s.dims.length},
                     {"width", s.dims.width}};
        const std::string record = j.dump();
        const std::uint32_t len = static_cast<std::uint32_t>(record.size());
        out.write(reinterpret_cast<const char*>(&len), sizeof(len));
        out.write(record.data(), len);
    }
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

EpisodicNetwork EpisodicNetwork::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    char magic[7];
    in.read(magic, 7);
    if (!in || std::memcmp(magic, "EPIMEM1", 7) != 0)
        throw std::runtime_error("bad snapshot header in '" + path + "'");

    EpisodicNetwork net;
    in.read(reinterpret_cast<char*>(net.weights_.data()),
            static_cast<std::streamsize>(net.weights_.size() * sizeof(float)));
    std::uint32_t count = 0;
    in.read(reinterpret_cast<char*>(&count), sizeof(count));
    if (!in) throw std::runtime_error("truncated snapshot '" + path + "'");
    for (std::uint32_t k = 0; k < count; ++k) {
        std::uint32_t len = 0;
        in.read(reinterpret_cast<char*>(&len), sizeof(len));
        std::string record(len, '\0');
        in.read(record.data(), len);
        if (!in) throw std::runtime_error("truncated snapshot '" + path + "'");
        const nlohmann::json j = nlohmann::json::parse(record);

        Episode ep;
        ep.meta.episode_index = j.at("episode_index").get<int>();
        ep.meta.object_id = j.at("object_id").get<std::string>();
        ep.meta.observed_cm3 = j.at("observed_cm3").get<double>();
        const std::string sheet = j.at("sheet").get<std::string>();
        for (int i = 0; i < kSheetBits; ++i)
            ep.sheet[i] = sheet[i] == '+' ? 1 : -1;
        const auto& s = j.at("spec");
        ep.meta.spec.id = s.at("id").get<std::string>();
        ep.meta.spec.color = color_from_string(s.at("color").get<std::string>());
        ep.meta.spec.shape = shape_from_string(s.at("shape").get<std::string>());
        ep.meta.spec.weight_g = s.at("weight_g").get<double>();
        ep.meta.spec.dims.radius = s.at("radius").get<double>();
        ep.meta.spec.dims.height = s.at("height").get<double>();
        ep.meta.spec.dims.edge = s.at("edge").get<double>();
        ep.meta.spec.dims.diameter = s.at("diameter").get<double>();
        ep.meta.spec.dims.length = s.at("length").get<double>();
        ep.meta.spec.dims.width = s.at("width").get<double>();
        net.ledger_.push_back(std::move(ep));
    }
    return net;
}

CapacityProbeResult capacity_probe(int n_patterns, double cue_fraction,
                                   std::uint64_t seed) {
    if (n_patterns < 1 || n_patterns > kMemoryCapacity)
        throw std::invalid_argument("n_patterns out of range");
    if (!(cue_fraction > 0.0) || cue_fraction > 1.0)
        throw std::invalid_argument("cue_fraction out of range");

    std::uint64_t state = rng::hash_mix(seed, 0xCAFE);
    EpisodicNetwork net;
    std::vector<Sheet> patterns(n_patterns);
    for (int p = 0; p < n_patterns; ++p) {
        Episode ep;
        ep.meta.object_id = "probe_" + std::to_string(p);
        ep.meta.episode_index = p;
        for (int i = 0; i < kSheetBits; ++i)
            ep.sheet[i] = (rng::splitmix64(state) & 1u) ? 1 : -1;
        patterns[p] = ep.sheet;
        net.encode(ep);
    }

    const int clamp_rows = std::max(
        1, static_cast<int>(std::llround(kSheetRows * cue_fraction)));
    CapacityProbeResult result;
    double total_accuracy = 0.0;
    for (int p = 0; p < n_patterns; ++p) {
        std::array<int, kSheetRows> rows;
        for (int r = 0; r < kSheetRows; ++r) rows[r] = r;
        for (int r = kSheetRows; r > 1; --r)
            std::swap(rows[r - 1], rows[rng::below(state, r)]);

        std::array<bool, kSheetRows> clamped{};
        for (int k = 0; k < clamp_rows; ++k) clamped[rows[k]] = true;

        const RecallResult recall = net.recall(patterns[p], clamped);
        for (size_t e = 1; e < recall.energy.size(); ++e)
            if (recall.energy[e] > recall.energy[e - 1] + 1e-9)
                result.energy_monotone = false;

        int correct = 0;
        for (int i = 0; i < kSheetBits; ++i)
            correct += recall.settled[i] == patterns[p][i];
        total_accuracy += static_cast<double>(correct) / kSheetBits;
    }
    result.mean_bit_accuracy = total_accuracy / n_patterns;
    return result;
}

}  // namespace fable
