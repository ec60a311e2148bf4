#include "legsynth/oracle.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "legsynth/errors.hpp"
#include "legsynth/parallel.hpp"

namespace legsynth {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double parse_number(std::string_view text, const std::string& context) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
        throw Error(ErrorCode::InvalidArgument, "bad number '" + std::string(text) + "' in " + context);
    }
    return value;
}

struct Chunk {
    MechanismKind kind;
    std::size_t i1;
};

} // namespace

std::size_t GridRange::count() const {
    return static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
}

double GridRange::value(std::size_t i) const {
    return std::round((lo + static_cast<double>(i) * step) * 1e9) / 1e9;
}

GridRange parse_grid_range(const std::string& text) {
    std::vector<std::string_view> parts;
    std::string_view rest = text;
    for (std::size_t pos; (pos = rest.find(':')) != std::string_view::npos;) {
        parts.push_back(rest.substr(0, pos));
        rest.remove_prefix(pos + 1);
    }
    parts.push_back(rest);
    if (parts.size() != 3) {
        throw Error(ErrorCode::InvalidArgument, "grid range '" + text + "' is not lo:hi:step");
    }
    return {parse_number(parts[0], text), parse_number(parts[1], text), parse_number(parts[2], text)};
}

std::string to_string(const GridRange& range) {
    std::ostringstream os;
    os << range.lo << ':' << range.hi << ':' << range.step;
    return os.str();
}

void GridSpec::validate() const {
    if (kinds.empty()) {
        throw Error(ErrorCode::InvalidArgument, "grid has no mechanism kinds");
    }
    const auto check = [](const GridRange& r, const char* name) {
        if (!(r.step > 0.0) || !(r.lo <= r.hi) || r.lo < 1.0 || r.hi > 50.0) {
            throw Error(ErrorCode::InvalidArgument,
                        std::string("grid range ") + name + " = " + to_string(r) + " must satisfy 1 <= lo <= hi <= 50, step > 0");
        }
    };
    check(l1, "l1");
    check(l2, "l2");
    if (std::any_of(kinds.begin(), kinds.end(), [](MechanismKind k) { return k != MechanismKind::SlotFollower; })) {
        check(l3, "l3");
    }
}

std::size_t GridSpec::combinations() const {
    std::size_t total = 0;
    for (MechanismKind k : kinds) {
        const double n = static_cast<double>(l1.count()) * static_cast<double>(l2.count()) *
                         (k == MechanismKind::SlotFollower ? 1.0 : static_cast<double>(l3.count()));
        if (n >= static_cast<double>(std::numeric_limits<std::size_t>::max() / 4)) {
            return std::numeric_limits<std::size_t>::max();
        }
        total += static_cast<std::size_t>(n);
    }
    return total;
}

std::string to_string(const GridSpec& grid) {
    std::ostringstream os;
    os << "kinds=";
    for (std::size_t i = 0; i < grid.kinds.size(); ++i) {
        os << (i ? "," : "") << to_int(grid.kinds[i]);
    }
    os << " l1=" << to_string(grid.l1) << " l2=" << to_string(grid.l2) << " l3=" << to_string(grid.l3);
    return os.str();
}

ParetoSet grid_oracle(const GridSpec& grid, const PipeSpec& pipe, const OracleOptions& options,
                      OracleProgress* stats) {
    grid.validate();
    validate(pipe);
    const std::size_t total = grid.combinations();
    if (total > grid.budget) {
        throw Error(ErrorCode::BudgetExceeded, "grid has " + std::to_string(total) + " combinations, budget is " +
                                                   std::to_string(grid.budget));
    }

    std::vector<Chunk> chunks;
    for (MechanismKind k : grid.kinds) {
        for (std::size_t i1 = 0; i1 < grid.l1.count(); ++i1) {
            chunks.push_back({k, i1});
        }
    }

    struct ChunkResult {
        std::vector<Individual> front;
        std::size_t visited = 0;
        std::size_t evaluated = 0;
        std::size_t feasible = 0;
    };
    std::vector<ChunkResult> results(chunks.size());
    const EvaluationOptions eval_options{options.samples, options.limits};

    const auto run_chunk = [&](std::size_t c) {
        const Chunk& chunk = chunks[c];
        ChunkResult& out = results[c];
        const double l1 = grid.l1.value(chunk.i1);
        const std::size_t n3 = chunk.kind == MechanismKind::SlotFollower ? 1 : grid.l3.count();
        std::vector<Individual> feasible;
        for (std::size_t i2 = 0; i2 < grid.l2.count(); ++i2) {
            for (std::size_t i3 = 0; i3 < n3; ++i3) {
                ++out.visited;
                const DesignVector design = make_design(chunk.kind, l1, grid.l2.value(i2), grid.l3.value(i3));
                const auto statics = static_constraints(design, pipe, options.limits);
                if (!std::all_of(statics.begin(), statics.end(), [](const auto& s) { return s.satisfied; })) {
                    continue;
                }
                ++out.evaluated;
                const Evaluation ev = evaluate_design(design, pipe, eval_options);
                if (!ev.feasible) {
                    continue;
                }
                ++out.feasible;
                Individual ind;
                ind.design = design;
                ind.objectives = {*ev.delta_x, *ev.eta_min};
                feasible.push_back(ind);
            }
        }
        out.front = pareto_filter(feasible);
    };

    OracleProgress progress{0, total, 0, 0};
    const std::size_t threads =
        options.threads ? options.threads : std::max<std::size_t>(1, std::thread::hardware_concurrency());
    const std::size_t batch = std::max<std::size_t>(1, 4 * threads);
    for (std::size_t begin = 0; begin < chunks.size(); begin += batch) {
        const std::size_t end = std::min(chunks.size(), begin + batch);
        parallel_for(
            end - begin, [&](std::size_t i) { run_chunk(begin + i); }, threads);
        for (std::size_t c = begin; c < end; ++c) {
            progress.done += results[c].visited;
            progress.evaluated += results[c].evaluated;
            progress.feasible += results[c].feasible;
        }
        if (options.progress) {
            options.progress(progress);
        }
    }

    std::vector<Individual> merged;
    for (auto& r : results) {
        merged.insert(merged.end(), r.front.begin(), r.front.end());
    }
    ParetoSet out;
    out.members = pareto_filter(merged);
    out.provenance.method = "grid";
    out.provenance.evaluations = progress.evaluated;
    out.provenance.grid = to_string(grid);
    if (stats) {
        *stats = progress;
    }
    return out;
}

std::string_view to_string(BandWinner winner) noexcept {
    switch (winner) {
    case BandWinner::First:
        return "first";
    case BandWinner::Second:
        return "second";
    case BandWinner::Tie:
        return "tie";
    case BandWinner::Mixed:
        return "mixed";
    case BandWinner::Neither:
        return "neither";
    }
    return "unknown";
}

double attainment(std::span<const ObjectivePoint> front, double level) {
    double best = kInf;
    for (const auto& p : front) {
        if (p.eta >= level) {
            best = std::min(best, p.delta_x);
        }
    }
    return best;
}

std::vector<DominanceBand> front_dominance_report(std::span<const ObjectivePoint> first,
                                                  std::span<const ObjectivePoint> second,
                                                  const DominanceOptions& options) {
    if (first.empty() || second.empty()) {
        throw Error(ErrorCode::InvalidArgument, "dominance report needs two non-empty fronts");
    }
    if (!(options.band_width > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "band width must be positive");
    }
    double eta_lo = kInf;
    double eta_hi = -kInf;
    for (auto span : {first, second}) {
        for (const auto& p : span) {
            eta_lo = std::min(eta_lo, p.eta);
            eta_hi = std::max(eta_hi, p.eta);
        }
    }
    const double w = options.band_width;
    const auto k_lo = static_cast<long long>(std::floor(eta_lo / w + 1e-9));
    const auto k_hi = static_cast<long long>(std::floor(eta_hi / w + 1e-9));

    std::vector<DominanceBand> bands;
    for (long long k = k_lo; k <= k_hi; ++k) {
        DominanceBand band;
        band.eta_lo = static_cast<double>(k) * w;
        band.eta_hi = static_cast<double>(k + 1) * w;
        band.first_delta_x = attainment(first, band.eta_lo);
        band.second_delta_x = attainment(second, band.eta_lo);

        // Attainment is a step function of the level; probing the band edge
        // and just above every front efficiency inside the band visits each
        // of its values.
        std::vector<double> levels{band.eta_lo};
        for (auto span : {first, second}) {
            for (const auto& p : span) {
                if (p.eta >= band.eta_lo && p.eta < band.eta_hi) {
                    levels.push_back(p.eta);
                    const double above = std::nextafter(p.eta, kInf);
                    if (above < band.eta_hi) {
                        levels.push_back(above);
                    }
                }
            }
        }
        bool first_wins = false;
        bool second_wins = false;
        bool any = false;
        for (double level : levels) {
            const double a = attainment(first, level);
            const double b = attainment(second, level);
            if (std::isinf(a) && std::isinf(b)) {
                continue;
            }
            any = true;
            if (a < b - options.tie_tolerance) {
                first_wins = true;
            } else if (b < a - options.tie_tolerance) {
                second_wins = true;
            }
        }
        if (!any) {
            band.winner = BandWinner::Neither;
        } else if (first_wins && second_wins) {
            band.winner = BandWinner::Mixed;
        } else if (first_wins) {
            band.winner = BandWinner::First;
        } else if (second_wins) {
            band.winner = BandWinner::Second;
        } else {
            band.winner = BandWinner::Tie;
        }
        bands.push_back(band);
    }
    return bands;
}

} // namespace legsynth
