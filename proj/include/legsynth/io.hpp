#pragma once

// Front export: CSV, SVG chart, provenance JSON.

#include <iosfwd>
#include <string>
#include <vector>

#include "legsynth/optimizer.hpp"

namespace legsynth {

inline constexpr const char* kFrontCsvHeader = "kind,l1,l2,l3,delta_x,eta_min,rank";

/// Rounds lengths and delta_x to 4 decimals and eta to 6, the CSV precision.
Individual quantized(const Individual& ind);

/// Quantizes, re-filters and orders by (delta_x, -eta, kind) so the written
/// CSV is itself a front and survives a parse/filter round trip unchanged.
std::vector<Individual> export_order(std::span<const Individual> members);

void write_front_csv(std::ostream& os, std::span<const Individual> members);

/// Throws InvalidArgument naming the offending line.
std::vector<Individual> read_front_csv(std::istream& is);

/// 800x600 scatter of delta_x against eta, one marker series per kind.
/// Output depends only on the members and their order.
void write_front_svg(std::ostream& os, std::span<const Individual> members);

struct RunInfo {
    PipeSpec pipe;
    double wall_time_s = 0.0;
    std::string version;
};

/// Pretty-printed JSON with settings, seeds, counts, wall time and version.
std::string provenance_json(const ParetoSet& front, const RunInfo& info);

/// Build identifier baked in at configure time.
std::string version_string();

} // namespace legsynth
