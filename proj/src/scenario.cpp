#include "fable/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fable {

namespace {

[[noreturn]] void fail(const std::string& msg, int line) {
    throw std::runtime_error(msg + " (line " + std::to_string(line) + ")");
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_number(const std::string& value, const std::string& key,
                    int line) {
    try {
        size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        fail("invalid number '" + value + "' for key '" + key + "'", line);
    }
}

struct PendingObject {
    std::map<std::string, std::string> fields;
    std::map<std::string, int> lines;
    int start_line = 0;
    bool is_probe = false;
};

ObjectSpec finish_object(const PendingObject& pending) {
    auto require = [&](const char* key) -> const std::string& {
        auto it = pending.fields.find(key);
        if (it == pending.fields.end())
            fail(std::string("missing field '") + key + "' in [" +
                     (pending.is_probe ? "probe" : "object") + "]",
                 pending.start_line);
        return it->second;
    };
    auto number = [&](const char* key) {
        const std::string& value = require(key);
        return parse_number(value, key, pending.lines.at(key));
    };

    ObjectSpec obj;
    obj.id = require("id");
    try {
        obj.color = color_from_string(require("color"));
        obj.shape = shape_from_string(require("shape"));
    } catch (const std::invalid_argument& e) {
        fail(e.what(), pending.start_line);
    }
    switch (obj.shape) {
        case Shape::cylinder:
            obj.dims.radius = number("radius_cm");
            obj.dims.height = number("height_cm");
            break;
        case Shape::cube:
            obj.dims.edge = number("edge_cm");
            break;
        case Shape::sphere:
            obj.dims.diameter = number("diameter_cm");
            break;
        case Shape::cuboid:
            obj.dims.length = number("length_cm");
            obj.dims.width = number("width_cm");
            obj.dims.height = number("height_cm");
            break;
    }
    obj.weight_g = number("weight_g");

    static const std::set<std::string> known = {
        "id",        "color",    "shape",     "radius_cm", "height_cm",
        "edge_cm",   "diameter_cm", "length_cm", "width_cm", "weight_g"};
    for (const auto& [key, value] : pending.fields)
        if (!known.count(key))
            fail("unknown key '" + key + "'", pending.lines.at(key));

    try {
        validate(obj);
    } catch (const std::invalid_argument& e) {
        fail(e.what(), pending.start_line);
    }
    return obj;
}

std::vector<int> parse_order(const std::string& value, int line) {
    std::vector<int> order;
    std::stringstream ss(value);
    std::string token;
    while (std::getline(ss, token, ',')) {
        token = trim(token);
        try {
            size_t used = 0;
            order.push_back(std::stoi(token, &used));
            if (used != token.size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            fail("invalid order entry '" + token + "'", line);
        }
    }
    return order;
}

}  // namespace

Scenario parse_scenario_text(const std::string& text) {
    Scenario scenario;
    enum class Section { none, jar, object, probe, orders };
    Section section = Section::none;
    bool have_jar = false;

    std::map<std::string, double> jar_fields;
    std::optional<PendingObject> pending;
    std::vector<std::pair<std::vector<int>, int>> orders_with_lines;

    auto flush_pending = [&]() {
        if (!pending) return;
        ObjectSpec obj = finish_object(*pending);
        (pending->is_probe ? scenario.probes : scenario.objects)
            .push_back(std::move(obj));
        pending.reset();
    };

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (const auto hash = raw.find('#'); hash != std::string::npos)
            raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') fail("malformed section header", line_no);
            const std::string name = line.substr(1, line.size() - 2);
            flush_pending();
            if (name == "jar") {
                section = Section::jar;
                have_jar = true;
            } else if (name == "object" || name == "probe") {
                if (!have_jar) fail("missing [jar] section", line_no);
                section = name == "probe" ? Section::probe : Section::object;
                pending = PendingObject{};
                pending->start_line = line_no;
                pending->is_probe = name == "probe";
            } else if (name == "orders") {
                if (!have_jar) fail("missing [jar] section", line_no);
                section = Section::orders;
            } else {
                fail("unknown section [" + name + "]", line_no);
            }
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) fail("expected 'key = value'", line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        switch (section) {
            case Section::none:
                fail("missing [jar] section", line_no);
            case Section::jar: {
                static const std::set<std::string> known = {
                    "cross_section_cm2", "initial_level_cm", "reach_level_cm",
                    "water_density", "noise_sigma_cm3"};
                if (!known.count(key)) fail("unknown key '" + key + "'", line_no);
                jar_fields[key] = parse_number(value, key, line_no);
                break;
            }
            case Section::object:
            case Section::probe:
                pending->fields[key] = value;
                pending->lines[key] = line_no;
                break;
            case Section::orders: {
                if (key == "order") {
                    orders_with_lines.emplace_back(parse_order(value, line_no),
                                                   line_no);
                } else if (key == "seed") {
                    scenario.seed = std::stoull(value);
                } else {
                    fail("unknown key '" + key + "'", line_no);
                }
                break;
            }
        }
    }
    flush_pending();

    if (!have_jar) fail("missing [jar] section", line_no == 0 ? 1 : line_no);
    for (const char* key : {"cross_section_cm2", "initial_level_cm",
                            "reach_level_cm", "water_density"}) {
        if (!jar_fields.count(key))
            fail(std::string("missing field '") + key + "' in [jar]", 1);
    }
    scenario.jar.cross_section_cm2 = jar_fields["cross_section_cm2"];
    scenario.jar.initial_level_cm = jar_fields["initial_level_cm"];
    scenario.jar.reach_level_cm = jar_fields["reach_level_cm"];
    scenario.jar.water_density = jar_fields["water_density"];
    if (jar_fields.count("noise_sigma_cm3"))
        scenario.jar.noise_sigma_cm3 = jar_fields["noise_sigma_cm3"];

    if (scenario.objects.empty())
        throw std::runtime_error("scenario defines no objects");

    std::set<std::string> ids;
    for (const auto& obj : scenario.objects) {
        if (!ids.insert(obj.id).second)
            throw std::runtime_error("duplicate object id '" + obj.id + "'");
    }
    for (const auto& probe : scenario.probes) {
        if (!ids.insert(probe.id).second)
            throw std::runtime_error("duplicate object id '" + probe.id + "'");
    }

    const int n = static_cast<int>(scenario.objects.size());
    for (auto& [order, line] : orders_with_lines) {
        std::vector<bool> seen(n, false);
        bool ok = static_cast<int>(order.size()) == n;
        for (int idx : order) {
            if (idx < 0 || idx >= n || seen[idx]) {
                ok = false;
                break;
            }
            seen[idx] = true;
        }
        if (!ok) fail("order is not a permutation", line);
        scenario.orders.push_back(std::move(order));
    }
    if (scenario.orders.empty()) {
        std::vector<int> identity(n);
        for (int i = 0; i < n; ++i) identity[i] = i;
        scenario.orders.push_back(std::move(identity));
    }
    return scenario;
}

Scenario parse_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario_text(buffer.str());
}

}  // namespace fable
