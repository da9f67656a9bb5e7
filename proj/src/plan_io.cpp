#include "coexsim/plan_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "coexsim/csv.hpp"

namespace coexsim {

namespace {

// Measured channel combinations, quantum channel 39.
const std::map<std::string, std::vector<int>> kPresets = {
    {"A", {40, 38, 37}},
    {"B", {40, 38, 37, 36}},
    {"C", {44, 40, 38, 37, 36, 35}},
    {"D", {44, 40, 38, 37, 36, 35, 30, 29}},
    {"E", {45, 44, 40, 38, 37, 36, 35, 30, 29, 28}},
    {"F", {45, 44, 40, 38, 37, 36, 35, 30, 29, 28, 27}},
    {"G", {50, 49, 45, 44, 40, 38, 37, 36, 35, 30, 29, 28, 27, 25}},
};

}  // namespace

bool is_preset_name(const std::string& name) { return kPresets.contains(name); }

ChannelPlan preset_plan(const std::string& name, Direction direction, Power per_channel) {
    const auto it = kPresets.find(name);
    if (it == kPresets.end()) throw ConfigError("unknown plan preset '" + name + "'");
    ChannelPlan plan;
    plan.quantum_channel = ItuChannel{39};
    plan.direction = direction;
    for (int ch : it->second) plan.data_channels.push_back({ItuChannel{ch}, per_channel});
    plan.validate();
    return plan;
}

ChannelPlan parse_plan_file(const std::string& path, Direction default_direction,
                            Power default_power) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open plan file '" + path + "'");

    ChannelPlan plan;
    plan.quantum_channel = ItuChannel{39};
    plan.direction = default_direction;
    std::set<int> seen;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        const auto fail = [&](const std::string& what) -> ConfigError {
            return ConfigError(path + ":" + std::to_string(lineno) + ": " + what);
        };
        if (tok == "quantum_channel") {
            std::string eq;
            int idx = 0;
            if (!(ls >> eq >> idx) || eq != "=") throw fail("expected 'quantum_channel = <index>'");
            plan.quantum_channel = ItuChannel{idx};
            validate_channel(plan.quantum_channel);
        } else if (tok == "direction") {
            std::string eq, dir;
            if (!(ls >> eq >> dir) || eq != "=") throw fail("expected 'direction = co|counter'");
            try {
                plan.direction = direction_from_string(dir);
            } catch (const std::invalid_argument& e) {
                throw fail(e.what());
            }
        } else if (tok == "channel") {
            int idx = 0;
            double dbm = 0.0;
            if (!(ls >> idx)) throw fail("expected 'channel <index> [power_dbm]'");
            if (!(ls >> dbm)) dbm = watts_to_dbm(default_power);
            if (!seen.insert(idx).second) throw fail("duplicate channel " + std::to_string(idx));
            validate_channel(ItuChannel{idx});
            plan.data_channels.push_back({ItuChannel{idx}, dbm_to_watts(dbm)});
        } else {
            throw fail("unknown directive '" + tok + "'");
        }
    }
    for (const auto& [ch, p] : plan.data_channels) {
        if (ch == plan.quantum_channel)
            throw ConfigError(path + ": channel " + std::to_string(ch.index) +
                              " listed as classical but is the quantum channel");
        (void)p;
    }
    plan.validate();
    return plan;
}

ChannelPlan load_plan(const std::string& name_or_path, Direction direction, Power per_channel) {
    if (is_preset_name(name_or_path)) return preset_plan(name_or_path, direction, per_channel);
    return parse_plan_file(name_or_path, direction, per_channel);
}

std::string describe_plan(const ChannelPlan& plan) {
    std::ostringstream out;
    out << "quantum_channel=" << plan.quantum_channel.index << " direction="
        << to_string(plan.direction) << " channels=";
    for (std::size_t i = 0; i < plan.data_channels.size(); ++i) {
        const auto& [ch, p] = plan.data_channels[i];
        if (i) out << ",";
        out << ch.index << "@" << fmt_double(watts_to_dbm(p)) << "dBm";
    }
    if (plan.data_channels.empty()) out << "(none)";
    return out.str();
}

}  // namespace coexsim
