#pragma once

// Mixed-variable bi-objective genetic optimizer (NSGA-II with
// constraint-domination) and the archive types shared with the grid oracle.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "legsynth/evaluation.hpp"
#include "legsynth/pareto.hpp"

namespace legsynth {

struct LengthBounds {
    double lo = 1.0;
    double hi = 50.0;
};

struct OptimizerSettings {
    std::size_t population = 200;
    std::size_t generations = 150;
    double pareto_fraction = 0.5; // cap on the first front inside the population
    double tolerance = 1e-4;      // hypervolume stagnation threshold
    std::size_t stall_generations = 50;
    std::size_t sessions = 5;
    std::uint64_t seed = 1;
    double crossover_rate = 0.9;
    double mutation_rate = 0.25; // per gene
    double sbx_index = 15.0;
    double mutation_index = 20.0;
    LengthBounds bounds{};
    std::size_t samples = 512; // stroke samples per evaluation
    std::size_t threads = 0;   // 0 = hardware concurrency

    /// Throws InvalidArgument on a broken invariant.
    void validate() const;
};

struct Individual {
    DesignVector design;
    ObjectivePoint objectives;
    std::size_t rank = 0;
    double crowding = 0.0;
    double violation = 0.0; // sum of constraint deficits

    [[nodiscard]] bool feasible() const noexcept { return violation == 0.0; }
};

struct Provenance {
    std::string method; // "nsga2" or "grid"
    std::optional<OptimizerSettings> settings;
    std::optional<MechanismKind> fixed_kind;
    std::vector<std::uint64_t> seeds;
    std::vector<std::size_t> generations_run; // one entry per session
    std::size_t evaluations = 0;
    std::string grid; // textual grid description for oracle runs
};

struct ParetoSet {
    std::vector<Individual> members;
    Provenance provenance;

    [[nodiscard]] std::vector<ObjectivePoint> points() const;
};

/// Non-dominated subset of the feasible candidates (first occurrence kept on
/// ties), with crowding distances recomputed.
std::vector<Individual> pareto_filter(std::span<const Individual> candidates);

/// Union of several archives filtered back to a front.
ParetoSet merge_fronts(std::span<const ParetoSet> fronts);

/// Runs `settings.sessions` independent seeded NSGA-II sessions and returns
/// the union of their final fronts.  `fixed_kind` freezes the discrete
/// variable.  Throws NoFeasible when no feasible design survives.
ParetoSet nsga2_run(const OptimizerSettings& settings, const PipeSpec& pipe,
                    std::optional<MechanismKind> fixed_kind = std::nullopt,
                    const DesignLimits& limits = {});

} // namespace legsynth
