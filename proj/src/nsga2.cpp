#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "legsynth/optimizer.hpp"
#include "legsynth/parallel.hpp"

namespace legsynth {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Genome {
    MechanismKind kind = MechanismKind::SlotFollower;
    std::array<double, 3> lengths{};
};

struct Member {
    Genome genome;
    Individual ind;
};

using Rng = std::mt19937_64;

double uniform(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

MechanismKind random_kind(Rng& rng) {
    return kAllKinds[std::uniform_int_distribution<std::size_t>(0, kAllKinds.size() - 1)(rng)];
}

bool constraint_dominates(const Individual& a, const Individual& b) noexcept {
    const bool fa = a.feasible();
    const bool fb = b.feasible();
    if (fa != fb) {
        return fa;
    }
    if (!fa) {
        return a.violation < b.violation;
    }
    return dominates(a.objectives, b.objectives);
}

// Crowding distance over (delta_x, eta) within one front.
void assign_crowding(std::vector<Individual*>& front) {
    for (auto* ind : front) {
        ind->crowding = 0.0;
    }
    if (front.empty() || !front.front()->feasible()) {
        return;
    }
    const auto accumulate = [&](auto key) {
        std::stable_sort(front.begin(), front.end(), [&](auto* a, auto* b) { return key(*a) < key(*b); });
        const double span = key(*front.back()) - key(*front.front());
        front.front()->crowding = kInf;
        front.back()->crowding = kInf;
        if (span <= 0.0) {
            return;
        }
        for (std::size_t i = 1; i + 1 < front.size(); ++i) {
            front[i]->crowding += (key(*front[i + 1]) - key(*front[i - 1])) / span;
        }
    };
    accumulate([](const Individual& i) { return i.objectives.delta_x; });
    accumulate([](const Individual& i) { return i.objectives.eta; });
}

// Fast non-dominated sort under constraint-domination.  Fronts hold indices
// in ascending order.
std::vector<std::vector<std::size_t>> sort_fronts(std::vector<Member>& members) {
    const std::size_t n = members.size();
    std::vector<std::vector<std::size_t>> dominated(n);
    std::vector<std::size_t> counter(n, 0);
    std::vector<std::vector<std::size_t>> fronts(1);
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
            if (constraint_dominates(members[p].ind, members[q].ind)) {
                dominated[p].push_back(q);
                ++counter[q];
            } else if (constraint_dominates(members[q].ind, members[p].ind)) {
                dominated[q].push_back(p);
                ++counter[p];
            }
        }
    }
    for (std::size_t p = 0; p < n; ++p) {
        if (counter[p] == 0) {
            fronts[0].push_back(p);
        }
    }
    for (std::size_t rank = 0; !fronts[rank].empty(); ++rank) {
        std::vector<std::size_t> next;
        for (std::size_t p : fronts[rank]) {
            members[p].ind.rank = rank;
            for (std::size_t q : dominated[p]) {
                if (--counter[q] == 0) {
                    next.push_back(q);
                }
            }
        }
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(next));
    }
    fronts.pop_back();
    for (auto& front : fronts) {
        std::vector<Individual*> view;
        view.reserve(front.size());
        for (std::size_t i : front) {
            view.push_back(&members[i].ind);
        }
        assign_crowding(view);
    }
    return fronts;
}

std::vector<std::size_t> by_crowding(const std::vector<Member>& members, std::vector<std::size_t> front) {
    std::stable_sort(front.begin(), front.end(), [&](std::size_t a, std::size_t b) {
        return members[a].ind.crowding > members[b].ind.crowding;
    });
    return front;
}

class Session {
public:
    Session(const OptimizerSettings& settings, const PipeSpec& pipe, std::optional<MechanismKind> fixed_kind,
            const DesignLimits& limits, std::uint64_t seed)
        : settings_(settings), pipe_(pipe), fixed_kind_(fixed_kind), limits_(limits), rng_(seed) {}

    struct Outcome {
        std::vector<Individual> front;
        double best_violation = kInf;
        std::size_t generations = 0;
        std::size_t evaluations = 0;
    };

    Outcome run() {
        Outcome out;
        std::vector<Member> population(settings_.population);
        for (auto& m : population) {
            m.genome = random_genome();
        }
        evaluate(population, out);
        sort_fronts(population);

        double hv_prev = front_hypervolume(population);
        std::size_t stall = 0;
        for (std::size_t gen = 1; gen <= settings_.generations; ++gen) {
            std::vector<Member> offspring = make_offspring(population);
            evaluate(offspring, out);
            population.insert(population.end(), std::make_move_iterator(offspring.begin()),
                              std::make_move_iterator(offspring.end()));
            population = select(std::move(population));
            out.generations = gen;

            const double hv = front_hypervolume(population);
            stall = hv > 0.0 && std::abs(hv - hv_prev) < settings_.tolerance ? stall + 1 : 0;
            hv_prev = hv;
            if (stall >= settings_.stall_generations) {
                break;
            }
        }

        std::vector<Individual> final_front;
        for (const auto& m : population) {
            if (m.ind.rank == 0 && m.ind.feasible()) {
                final_front.push_back(m.ind);
            }
        }
        out.front = pareto_filter(final_front);
        return out;
    }

private:
    Genome random_genome() {
        Genome g;
        g.kind = fixed_kind_ ? *fixed_kind_ : random_kind(rng_);
        for (auto& l : g.lengths) {
            l = settings_.bounds.lo + (settings_.bounds.hi - settings_.bounds.lo) * uniform(rng_);
        }
        return g;
    }

    void evaluate(std::vector<Member>& members, Outcome& out) {
        EvaluationOptions options{settings_.samples, limits_};
        parallel_for(
            members.size(),
            [&](std::size_t i) {
                auto& m = members[i];
                const auto& l = m.genome.lengths;
                m.ind = Individual{};
                m.ind.design = make_design(m.genome.kind, l[0], l[1], l[2]);
                try {
                    const Evaluation ev = evaluate_design(m.ind.design, pipe_, options);
                    m.ind.violation = ev.feasible ? 0.0 : ev.total_violation();
                    m.ind.objectives = {ev.delta_x.value_or(kInf), ev.eta_min.value_or(-kInf)};
                } catch (const Error&) {
                    m.ind.violation = 1e9;
                    m.ind.objectives = {kInf, -kInf};
                }
            },
            settings_.threads);
        out.evaluations += members.size();
        for (const auto& m : members) {
            out.best_violation = std::min(out.best_violation, m.ind.violation);
        }
    }

    std::size_t tournament(const std::vector<Member>& population) {
        std::uniform_int_distribution<std::size_t> pick(0, population.size() - 1);
        const std::size_t a = pick(rng_);
        const std::size_t b = pick(rng_);
        const auto& ia = population[a].ind;
        const auto& ib = population[b].ind;
        if (ia.rank != ib.rank) {
            return ia.rank < ib.rank ? a : b;
        }
        return ib.crowding > ia.crowding ? b : a;
    }

    // Simulated binary crossover, bounded form.
    void sbx(double& x1, double& x2) {
        const double lo = settings_.bounds.lo;
        const double hi = settings_.bounds.hi;
        const double eta = settings_.sbx_index;
        if (uniform(rng_) > 0.5 || std::abs(x1 - x2) <= 1e-14) {
            return;
        }
        const double y1 = std::min(x1, x2);
        const double y2 = std::max(x1, x2);
        const auto spread = [&](double beta, double u) {
            const double alpha = 2.0 - std::pow(beta, -(eta + 1.0));
            return u <= 1.0 / alpha ? std::pow(u * alpha, 1.0 / (eta + 1.0))
                                    : std::pow(1.0 / (2.0 - u * alpha), 1.0 / (eta + 1.0));
        };
        const double u = uniform(rng_);
        const double bq1 = spread(1.0 + 2.0 * (y1 - lo) / (y2 - y1), u);
        const double bq2 = spread(1.0 + 2.0 * (hi - y2) / (y2 - y1), u);
        const double c1 = std::clamp(0.5 * ((y1 + y2) - bq1 * (y2 - y1)), lo, hi);
        const double c2 = std::clamp(0.5 * ((y1 + y2) + bq2 * (y2 - y1)), lo, hi);
        if (uniform(rng_) <= 0.5) {
            x1 = c2;
            x2 = c1;
        } else {
            x1 = c1;
            x2 = c2;
        }
    }

    // Polynomial mutation, bounded form.
    void mutate(Genome& g) {
        const double lo = settings_.bounds.lo;
        const double hi = settings_.bounds.hi;
        const double eta = settings_.mutation_index;
        if (!fixed_kind_ && uniform(rng_) < settings_.mutation_rate) {
            g.kind = random_kind(rng_);
        }
        for (auto& x : g.lengths) {
            if (uniform(rng_) >= settings_.mutation_rate) {
                continue;
            }
            const double d1 = (x - lo) / (hi - lo);
            const double d2 = (hi - x) / (hi - lo);
            const double u = uniform(rng_);
            const double power = 1.0 / (eta + 1.0);
            double dq = 0.0;
            if (u <= 0.5) {
                const double v = 2.0 * u + (1.0 - 2.0 * u) * std::pow(1.0 - d1, eta + 1.0);
                dq = std::pow(v, power) - 1.0;
            } else {
                const double v = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(1.0 - d2, eta + 1.0);
                dq = 1.0 - std::pow(v, power);
            }
            x = std::clamp(x + dq * (hi - lo), lo, hi);
        }
    }

    std::vector<Member> make_offspring(const std::vector<Member>& population) {
        std::vector<Member> offspring;
        offspring.reserve(population.size());
        while (offspring.size() < population.size()) {
            Genome a = population[tournament(population)].genome;
            Genome b = population[tournament(population)].genome;
            if (uniform(rng_) < settings_.crossover_rate) {
                for (std::size_t k = 0; k < 3; ++k) {
                    sbx(a.lengths[k], b.lengths[k]);
                }
                if (!fixed_kind_ && uniform(rng_) < 0.5) {
                    std::swap(a.kind, b.kind);
                }
            }
            mutate(a);
            mutate(b);
            offspring.push_back({a, {}});
            if (offspring.size() < population.size()) {
                offspring.push_back({b, {}});
            }
        }
        return offspring;
    }

    // Elitist replacement; the first front may fill at most pareto_fraction
    // of the population so the rest keeps exploring.
    std::vector<Member> select(std::vector<Member> combined) {
        const std::size_t n = settings_.population;
        const auto fronts = sort_fronts(combined);
        const auto cap = static_cast<std::size_t>(
            std::max(1.0, std::ceil(settings_.pareto_fraction * static_cast<double>(n))));

        std::vector<std::size_t> chosen;
        chosen.reserve(n);
        const auto first = by_crowding(combined, fronts[0]);
        const std::size_t take_first = std::min(cap, first.size());
        chosen.insert(chosen.end(), first.begin(), first.begin() + static_cast<std::ptrdiff_t>(take_first));
        for (std::size_t f = 1; f < fronts.size() && chosen.size() < n; ++f) {
            const auto ordered = by_crowding(combined, fronts[f]);
            const std::size_t room = std::min(n - chosen.size(), ordered.size());
            chosen.insert(chosen.end(), ordered.begin(), ordered.begin() + static_cast<std::ptrdiff_t>(room));
        }
        for (std::size_t i = take_first; i < first.size() && chosen.size() < n; ++i) {
            chosen.push_back(first[i]);
        }

        std::vector<Member> next;
        next.reserve(n);
        for (std::size_t i : chosen) {
            next.push_back(std::move(combined[i]));
        }
        return next;
    }

    double front_hypervolume(const std::vector<Member>& population) const {
        std::vector<ObjectivePoint> points;
        for (const auto& m : population) {
            if (m.ind.rank == 0 && m.ind.feasible()) {
                points.push_back(m.ind.objectives);
            }
        }
        return hypervolume(points, {limits_.delta_x_max, limits_.eta_min});
    }

    const OptimizerSettings& settings_;
    const PipeSpec& pipe_;
    std::optional<MechanismKind> fixed_kind_;
    const DesignLimits& limits_;
    Rng rng_;
};

} // namespace

void OptimizerSettings::validate() const {
    const auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); };
    if (population < 4 || population % 2 != 0) {
        fail("population must be even and at least 4");
    }
    if (!(pareto_fraction > 0.0 && pareto_fraction <= 1.0)) {
        fail("pareto_fraction must lie in (0, 1]");
    }
    if (!(tolerance > 0.0)) {
        fail("tolerance must be positive");
    }
    if (sessions < 1) {
        fail("sessions must be at least 1");
    }
    if (generations < 1) {
        fail("generations must be at least 1");
    }
    if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0) || !(mutation_rate >= 0.0 && mutation_rate <= 1.0)) {
        fail("crossover and mutation rates must lie in [0, 1]");
    }
    if (!(sbx_index > 0.0) || !(mutation_index > 0.0)) {
        fail("distribution indices must be positive");
    }
    if (!(bounds.lo > 0.0 && bounds.hi > bounds.lo)) {
        fail("length bounds must satisfy 0 < lo < hi");
    }
    if (samples < 2) {
        fail("samples must be at least 2");
    }
}

std::vector<ObjectivePoint> ParetoSet::points() const {
    std::vector<ObjectivePoint> out;
    out.reserve(members.size());
    for (const auto& m : members) {
        out.push_back(m.objectives);
    }
    return out;
}

std::vector<Individual> pareto_filter(std::span<const Individual> candidates) {
    std::vector<Individual> feasible;
    for (const auto& c : candidates) {
        if (c.feasible()) {
            feasible.push_back(c);
        }
    }
    std::vector<ObjectivePoint> points;
    points.reserve(feasible.size());
    for (const auto& f : feasible) {
        points.push_back(f.objectives);
    }
    std::vector<Individual> front;
    for (std::size_t i : non_dominated_filter(points)) {
        front.push_back(feasible[i]);
        front.back().rank = 0;
    }
    std::vector<Individual*> view;
    for (auto& f : front) {
        view.push_back(&f);
    }
    assign_crowding(view);
    return front;
}

ParetoSet merge_fronts(std::span<const ParetoSet> fronts) {
    std::vector<Individual> all;
    ParetoSet merged;
    for (const auto& f : fronts) {
        all.insert(all.end(), f.members.begin(), f.members.end());
        merged.provenance.seeds.insert(merged.provenance.seeds.end(), f.provenance.seeds.begin(),
                                       f.provenance.seeds.end());
        merged.provenance.evaluations += f.provenance.evaluations;
    }
    merged.provenance.method = "merge";
    merged.members = pareto_filter(all);
    return merged;
}

ParetoSet nsga2_run(const OptimizerSettings& settings, const PipeSpec& pipe, std::optional<MechanismKind> fixed_kind,
                    const DesignLimits& limits) {
    settings.validate();
    validate(pipe);

    ParetoSet result;
    result.provenance.method = "nsga2";
    result.provenance.settings = settings;
    result.provenance.fixed_kind = fixed_kind;

    std::vector<Individual> archive;
    double best_violation = kInf;
    for (std::size_t s = 0; s < settings.sessions; ++s) {
        const std::uint64_t seed = settings.seed + s;
        Session session(settings, pipe, fixed_kind, limits, seed);
        auto outcome = session.run();
        result.provenance.seeds.push_back(seed);
        result.provenance.generations_run.push_back(outcome.generations);
        result.provenance.evaluations += outcome.evaluations;
        best_violation = std::min(best_violation, outcome.best_violation);
        archive.insert(archive.end(), outcome.front.begin(), outcome.front.end());
    }

    result.members = pareto_filter(archive);
    if (result.members.empty()) {
        throw Error(ErrorCode::NoFeasible,
                    "no feasible design found; best total constraint violation " + std::to_string(best_violation));
    }
    return result;
}

} // namespace legsynth
