#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gwhk/anneal.hpp"
#include "gwhk/isolation.hpp"
#include "gwhk/ocean_chain.hpp"
#include "gwhk/spectral.hpp"

namespace gwhk {

/// printf "%.17g".
std::string format_double(double x);

/// CSV writers. A non-empty `comment` is emitted first as "# <comment>".
std::string returns_csv(const ReturnSeries& series, std::string_view comment = {});
std::string events_csv(const std::vector<EventRow>& rows, std::string_view comment = {});
std::string fits_csv(const std::vector<FitResult>& fits, std::string_view comment = {});

/// Reads "s,value,stderr,n" rows; '#' lines and the header are skipped.
ReturnSeries parse_returns_csv(std::string_view text);

/// {q, islands, deltas}, plus "meta" when `meta_json` is non-empty.
std::string decomposition_json(const IslandDecomposition& decomp, std::string_view meta_json = {});
IslandDecomposition parse_decomposition_json(std::string_view text, std::size_t tree_size);

/// {edges: [{x, y, w}...], vertex_weights: [{x, w}...], frontier_weights: [...]}.
std::string ocean_graph_json(const WeightedOceanGraph& graph, std::string_view meta_json = {});

/// JSON object with every ExperimentConfig field (one line).
std::string config_json(const ExperimentConfig& config);
/// Fields absent from the JSON keep the values already in `base`.
ExperimentConfig parse_config_json(std::string_view text, ExperimentConfig base = {});

}  // namespace gwhk
