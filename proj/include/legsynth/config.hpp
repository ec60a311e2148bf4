#pragma once

// Run configuration: flat key=value text with dotted keys, optional
// [section] headers, '#' or ';' comments.

#include <optional>
#include <string>

#include "legsynth/evaluation.hpp"
#include "legsynth/optimizer.hpp"
#include "legsynth/oracle.hpp"

namespace legsynth {

struct OutputPaths {
    std::string dir = ".";
    std::string csv = "front.csv";
    std::string json = "provenance.json";
    std::string svg = "front.svg";
};

struct RunConfig {
    PipeSpec pipe;
    OptimizerSettings optimizer;
    std::optional<MechanismKind> fixed_kind;
    std::optional<GridSpec> grid;
    OutputPaths output;
};

/// Throws InvalidArgument; unknown keys are reported by name.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

} // namespace legsynth
