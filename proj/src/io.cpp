#include "legsynth/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "legsynth/errors.hpp"

#ifndef LEGSYNTH_GIT_DESCRIBE
#define LEGSYNTH_GIT_DESCRIBE "unknown"
#endif

namespace legsynth {

namespace {

double round_to(double v, double scale) { return std::round(v * scale) / scale; }

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
        out.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

double parse_field(const std::string& text, std::size_t line_no, const char* name) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
        throw Error(ErrorCode::InvalidArgument,
                    "line " + std::to_string(line_no) + ": bad " + name + " '" + text + "'");
    }
    return v;
}

struct Series {
    MechanismKind kind;
    const char* color;
    const char* label;
};

constexpr Series kSeries[] = {
    {MechanismKind::SlotFollower, "#1f77b4", "d=1 slot-follower"},
    {MechanismKind::CrankSlider4, "#d62728", "d=2 crank-slider 4-bar"},
    {MechanismKind::CrankSlider6, "#2ca02c", "d=3 crank-slider 6-bar"},
};

std::string marker(MechanismKind kind, double x, double y, const char* color) {
    char buf[256];
    switch (kind) {
    case MechanismKind::SlotFollower:
        std::snprintf(buf, sizeof(buf), "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3.5\" fill=\"%s\"/>", x, y, color);
        break;
    case MechanismKind::CrankSlider4:
        std::snprintf(buf, sizeof(buf), "<rect x=\"%.2f\" y=\"%.2f\" width=\"7\" height=\"7\" fill=\"%s\"/>",
                      x - 3.5, y - 3.5, color);
        break;
    case MechanismKind::CrankSlider6:
        std::snprintf(buf, sizeof(buf), "<polygon points=\"%.2f,%.2f %.2f,%.2f %.2f,%.2f\" fill=\"%s\"/>", x,
                      y - 4.5, x - 4.0, y + 3.5, x + 4.0, y + 3.5, color);
        break;
    }
    return buf;
}

// Round-number tick positions covering [lo, hi].
std::vector<double> ticks(double lo, double hi) {
    const double raw = (hi - lo) / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (m * mag >= raw) {
            step = m * mag;
            break;
        }
    }
    std::vector<double> out;
    for (double t = std::ceil(lo / step - 1e-9) * step; t <= hi + 1e-9 * step; t += step) {
        out.push_back(std::abs(t) < 1e-12 ? 0.0 : t);
    }
    return out;
}

} // namespace

Individual quantized(const Individual& ind) {
    Individual q = ind;
    auto& len = q.design.lengths;
    len.l1 = round_to(len.l1, 1e4);
    len.l2 = round_to(len.l2, 1e4);
    if (len.l3) {
        len.l3 = round_to(*len.l3, 1e4);
    }
    q.objectives.delta_x = round_to(q.objectives.delta_x, 1e4);
    q.objectives.eta = round_to(q.objectives.eta, 1e6);
    return q;
}

std::vector<Individual> export_order(std::span<const Individual> members) {
    std::vector<Individual> q;
    q.reserve(members.size());
    for (const auto& m : members) {
        q.push_back(quantized(m));
    }
    auto front = pareto_filter(q);
    std::stable_sort(front.begin(), front.end(), [](const Individual& a, const Individual& b) {
        if (a.objectives.delta_x != b.objectives.delta_x) {
            return a.objectives.delta_x < b.objectives.delta_x;
        }
        if (a.objectives.eta != b.objectives.eta) {
            return a.objectives.eta > b.objectives.eta;
        }
        return to_int(a.design.kind) < to_int(b.design.kind);
    });
    return front;
}

void write_front_csv(std::ostream& os, std::span<const Individual> members) {
    os << kFrontCsvHeader << '\n';
    for (const auto& m : members) {
        const auto& len = m.design.lengths;
        os << to_int(m.design.kind) << ',' << fixed(len.l1, 4) << ',' << fixed(len.l2, 4) << ','
           << (len.l3 ? fixed(*len.l3, 4) : std::string{}) << ',' << fixed(m.objectives.delta_x, 4) << ','
           << fixed(m.objectives.eta, 6) << ',' << m.rank << '\n';
    }
}

std::vector<Individual> read_front_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) {
        throw Error(ErrorCode::InvalidArgument, "empty front CSV");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != kFrontCsvHeader) {
        throw Error(ErrorCode::InvalidArgument, "front CSV header must be '" + std::string(kFrontCsvHeader) + "'");
    }
    std::vector<Individual> out;
    for (std::size_t line_no = 2; std::getline(is, line); ++line_no) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const auto f = split_csv(line);
        if (f.size() != 7) {
            throw Error(ErrorCode::InvalidArgument,
                        "line " + std::to_string(line_no) + ": expected 7 fields, got " + std::to_string(f.size()));
        }
        const double kind_value = parse_field(f[0], line_no, "kind");
        MechanismKind kind{};
        try {
            kind = kind_from_int(static_cast<int>(kind_value));
        } catch (const Error&) {
            throw Error(ErrorCode::InvalidArgument, "line " + std::to_string(line_no) + ": bad kind '" + f[0] + "'");
        }
        Individual ind;
        ind.design.kind = kind;
        ind.design.lengths.l1 = parse_field(f[1], line_no, "l1");
        ind.design.lengths.l2 = parse_field(f[2], line_no, "l2");
        if (kind == MechanismKind::SlotFollower) {
            if (!f[3].empty()) {
                throw Error(ErrorCode::InvalidArgument, "line " + std::to_string(line_no) + ": l3 must be empty for kind 1");
            }
        } else {
            ind.design.lengths.l3 = parse_field(f[3], line_no, "l3");
        }
        ind.objectives.delta_x = parse_field(f[4], line_no, "delta_x");
        ind.objectives.eta = parse_field(f[5], line_no, "eta_min");
        ind.rank = static_cast<std::size_t>(parse_field(f[6], line_no, "rank"));
        out.push_back(ind);
    }
    return out;
}

void write_front_svg(std::ostream& os, std::span<const Individual> members) {
    constexpr double width = 800.0;
    constexpr double height = 600.0;
    constexpr double left = 80.0;
    constexpr double right = 30.0;
    constexpr double top = 30.0;
    constexpr double bottom = 70.0;

    double x_lo = 15.0, x_hi = 35.0, y_lo = 0.3, y_hi = 1.3;
    if (!members.empty()) {
        x_lo = y_lo = std::numeric_limits<double>::infinity();
        x_hi = y_hi = -std::numeric_limits<double>::infinity();
        for (const auto& m : members) {
            x_lo = std::min(x_lo, m.objectives.delta_x);
            x_hi = std::max(x_hi, m.objectives.delta_x);
            y_lo = std::min(y_lo, m.objectives.eta);
            y_hi = std::max(y_hi, m.objectives.eta);
        }
        const double px = std::max(0.05 * (x_hi - x_lo), 0.5);
        const double py = std::max(0.05 * (y_hi - y_lo), 0.02);
        x_lo -= px;
        x_hi += px;
        y_lo -= py;
        y_hi += py;
    }
    const auto sx = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * (width - left - right); };
    const auto sy = [&](double y) { return height - bottom - (y - y_lo) / (y_hi - y_lo) * (height - top - bottom); };

    char buf[256];
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" width=\"800\" height=\"600\">\n";
    os << "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n";
    std::snprintf(buf, sizeof(buf),
                  "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"none\" stroke=\"black\"/>\n",
                  left, top, width - left - right, height - top - bottom);
    os << buf;

    os << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
    for (double t : ticks(x_lo, x_hi)) {
        std::snprintf(buf, sizeof(buf),
                      "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>"
                      "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\">%g</text>\n",
                      sx(t), height - bottom, sx(t), height - bottom + 5.0, sx(t), height - bottom + 20.0, t);
        os << buf;
    }
    for (double t : ticks(y_lo, y_hi)) {
        std::snprintf(buf, sizeof(buf),
                      "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>"
                      "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"end\">%g</text>\n",
                      left - 5.0, sy(t), left, sy(t), left - 8.0, sy(t) + 4.0, t);
        os << buf;
    }
    std::snprintf(buf, sizeof(buf), "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\" font-size=\"14\">Delta x (mm)</text>\n",
                  left + (width - left - right) / 2.0, height - 25.0);
    os << buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"20\" y=\"%.2f\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 20 %.2f)\">eta_f</text>\n",
                  top + (height - top - bottom) / 2.0, top + (height - top - bottom) / 2.0);
    os << buf;
    os << "</g>\n";

    double legend_y = top + 15.0;
    for (const auto& series : kSeries) {
        const bool present = std::any_of(members.begin(), members.end(),
                                         [&](const Individual& m) { return m.design.kind == series.kind; });
        if (!present) {
            continue;
        }
        os << "<g class=\"series\" data-kind=\"" << to_int(series.kind) << "\">\n";
        for (const auto& m : members) {
            if (m.design.kind == series.kind) {
                os << marker(series.kind, sx(m.objectives.delta_x), sy(m.objectives.eta), series.color) << '\n';
            }
        }
        os << "</g>\n";
        os << marker(series.kind, width - right - 190.0, legend_y, series.color) << '\n';
        std::snprintf(buf, sizeof(buf), "<text x=\"%.2f\" y=\"%.2f\" font-family=\"sans-serif\" font-size=\"12\">%s</text>\n",
                      width - right - 180.0, legend_y + 4.0, series.label);
        os << buf;
        legend_y += 18.0;
    }
    os << "</svg>\n";
}

std::string version_string() { return LEGSYNTH_GIT_DESCRIBE; }

std::string provenance_json(const ParetoSet& front, const RunInfo& info) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["tool"] = "legsynth";
    j["version"] = info.version.empty() ? version_string() : info.version;
    const auto& p = front.provenance;
    j["method"] = p.method;
    j["pipe"] = {{"r_min", info.pipe.r_min},
                 {"r_max", info.pipe.r_max},
                 {"r_p", info.pipe.elbow.r_p},
                 {"r_c", info.pipe.elbow.r_c},
                 {"d_r", info.pipe.elbow.d_r}};
    if (p.settings) {
        const auto& s = *p.settings;
        j["settings"] = {{"population", s.population},
                         {"generations", s.generations},
                         {"pareto_fraction", s.pareto_fraction},
                         {"tolerance", s.tolerance},
                         {"stall_generations", s.stall_generations},
                         {"sessions", s.sessions},
                         {"seed", s.seed},
                         {"crossover_rate", s.crossover_rate},
                         {"mutation_rate", s.mutation_rate},
                         {"sbx_index", s.sbx_index},
                         {"mutation_index", s.mutation_index},
                         {"length_min", s.bounds.lo},
                         {"length_max", s.bounds.hi},
                         {"samples", s.samples}};
    }
    j["fixed_kind"] = p.fixed_kind ? ordered_json(to_int(*p.fixed_kind)) : ordered_json(nullptr);
    j["seeds"] = p.seeds;
    j["generations_run"] = p.generations_run;
    if (!p.grid.empty()) {
        j["grid"] = p.grid;
    }
    j["evaluations"] = p.evaluations;
    j["front_size"] = front.members.size();
    j["wall_time_s"] = info.wall_time_s;
    return j.dump(2) + "\n";
}

} // namespace legsynth
