#include "legsynth/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "legsynth/errors.hpp"

namespace legsynth {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* expected) {
    throw Error(ErrorCode::InvalidArgument, "config key '" + key + "': expected " + expected + ", got '" + value + "'");
}

double as_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out)) {
        bad_value(key, v, "a number");
    }
    return out;
}

std::uint64_t as_uint(const std::string& key, const std::string& v) {
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        bad_value(key, v, "a non-negative integer");
    }
    return out;
}

MechanismKind as_kind(const std::string& key, const std::string& v) {
    if (v == "1" || v == "2" || v == "3") {
        return kind_from_int(v[0] - '0');
    }
    bad_value(key, v, "1, 2 or 3");
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

GridSpec& grid_of(RunConfig& c) {
    if (!c.grid) {
        c.grid.emplace();
    }
    return *c.grid;
}

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"pipe.r_min", [](RunConfig& c, auto& k, auto& v) { c.pipe.r_min = as_double(k, v); }},
        {"pipe.r_max", [](RunConfig& c, auto& k, auto& v) { c.pipe.r_max = as_double(k, v); }},
        {"pipe.r_p", [](RunConfig& c, auto& k, auto& v) { c.pipe.elbow.r_p = as_double(k, v); }},
        {"pipe.r_c", [](RunConfig& c, auto& k, auto& v) { c.pipe.elbow.r_c = as_double(k, v); }},
        {"pipe.d_r", [](RunConfig& c, auto& k, auto& v) { c.pipe.elbow.d_r = as_double(k, v); }},
        {"optimizer.population", [](RunConfig& c, auto& k, auto& v) { c.optimizer.population = as_uint(k, v); }},
        {"optimizer.generations", [](RunConfig& c, auto& k, auto& v) { c.optimizer.generations = as_uint(k, v); }},
        {"optimizer.pareto_fraction",
         [](RunConfig& c, auto& k, auto& v) { c.optimizer.pareto_fraction = as_double(k, v); }},
        {"optimizer.tolerance", [](RunConfig& c, auto& k, auto& v) { c.optimizer.tolerance = as_double(k, v); }},
        {"optimizer.stall_generations",
         [](RunConfig& c, auto& k, auto& v) { c.optimizer.stall_generations = as_uint(k, v); }},
        {"optimizer.sessions", [](RunConfig& c, auto& k, auto& v) { c.optimizer.sessions = as_uint(k, v); }},
        {"optimizer.seed", [](RunConfig& c, auto& k, auto& v) { c.optimizer.seed = as_uint(k, v); }},
        {"optimizer.crossover_rate",
         [](RunConfig& c, auto& k, auto& v) { c.optimizer.crossover_rate = as_double(k, v); }},
        {"optimizer.mutation_rate",
         [](RunConfig& c, auto& k, auto& v) { c.optimizer.mutation_rate = as_double(k, v); }},
        {"optimizer.sbx_index", [](RunConfig& c, auto& k, auto& v) { c.optimizer.sbx_index = as_double(k, v); }},
        {"optimizer.mutation_index",
         [](RunConfig& c, auto& k, auto& v) { c.optimizer.mutation_index = as_double(k, v); }},
        {"optimizer.length_min", [](RunConfig& c, auto& k, auto& v) { c.optimizer.bounds.lo = as_double(k, v); }},
        {"optimizer.length_max", [](RunConfig& c, auto& k, auto& v) { c.optimizer.bounds.hi = as_double(k, v); }},
        {"optimizer.samples", [](RunConfig& c, auto& k, auto& v) { c.optimizer.samples = as_uint(k, v); }},
        {"optimizer.threads", [](RunConfig& c, auto& k, auto& v) { c.optimizer.threads = as_uint(k, v); }},
        {"optimizer.fixed_kind",
         [](RunConfig& c, auto& k, auto& v) {
             if (v == "any") {
                 c.fixed_kind.reset();
             } else {
                 c.fixed_kind = as_kind(k, v);
             }
         }},
        {"grid.kinds",
         [](RunConfig& c, auto& k, auto& v) {
             auto& g = grid_of(c);
             g.kinds.clear();
             std::stringstream ss(v);
             for (std::string item; std::getline(ss, item, ',');) {
                 g.kinds.push_back(as_kind(k, trim(item)));
             }
         }},
        {"grid.l1", [](RunConfig& c, auto&, auto& v) { grid_of(c).l1 = parse_grid_range(v); }},
        {"grid.l2", [](RunConfig& c, auto&, auto& v) { grid_of(c).l2 = parse_grid_range(v); }},
        {"grid.l3", [](RunConfig& c, auto&, auto& v) { grid_of(c).l3 = parse_grid_range(v); }},
        {"grid.budget", [](RunConfig& c, auto& k, auto& v) { grid_of(c).budget = as_uint(k, v); }},
        {"output.dir", [](RunConfig& c, auto&, auto& v) { c.output.dir = v; }},
        {"output.csv", [](RunConfig& c, auto&, auto& v) { c.output.csv = v; }},
        {"output.json", [](RunConfig& c, auto&, auto& v) { c.output.json = v; }},
        {"output.svg", [](RunConfig& c, auto&, auto& v) { c.output.svg = v; }},
    };
    return table;
}

} // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig config;
    std::istringstream in(text);
    std::string section;
    std::string raw;
    for (std::size_t line_no = 1; std::getline(in, raw); ++line_no) {
        const auto comment = raw.find_first_of("#;");
        const std::string line = trim(comment == std::string::npos ? raw : raw.substr(0, comment));
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw Error(ErrorCode::InvalidArgument, "config line " + std::to_string(line_no) + ": bad section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::InvalidArgument, "config line " + std::to_string(line_no) + ": expected key=value");
        }
        std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!section.empty()) {
            key = section + "." + key;
        }
        const auto it = setters().find(key);
        if (it == setters().end()) {
            throw Error(ErrorCode::InvalidArgument, "unknown config key '" + key + "'");
        }
        it->second(config, key, value);
    }
    config.optimizer.validate();
    validate(config.pipe);
    if (config.grid) {
        config.grid->validate();
    }
    return config;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::InvalidArgument, "cannot read config file '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

} // namespace legsynth
