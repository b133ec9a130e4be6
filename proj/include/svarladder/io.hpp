#pragma once

#include <string>
#include <vector>

#include "svarladder/ladder.hpp"
#include "svarladder/model.hpp"
#include "svarladder/pipeline.hpp"

namespace svl {

/// Visual parameters of the SVG ladder rendering.
///
/// Stroke width scales linearly with |factor|: an edge at the graph's maximum
/// magnitude gets max_stroke, one near zero approaches min_stroke. Negative
/// edges are dashed. When highlight_positive_feedback is set, every edge that
/// participates in a positive multi-edge feedback loop is overdrawn in
/// highlight_color (self loops are exempt: an SNL edge of positive sign is
/// always its own positive loop and highlighting those would flood the pane).
struct RenderStyle {
    double min_stroke = 1.0;
    double max_stroke = 6.0;
    double axis_spacing = 220.0;
    double channel_spacing = 70.0;
    std::string lagged_color = "green";
    std::string structural_color = "blue";
    std::string highlight_color = "red";
    std::string dash_pattern = "6,4";
    bool highlight_positive_feedback = true;
};

/// Reads a whitespace-delimited numeric text file, one sample per line, G
/// columns inferred from the first line (the layout used by run-to-failure
/// bearing datasets). sample_interval defaults to the 50 microsecond spacing
/// of those recordings. NaN/Inf tokens are rejected as malformed.
MultiChannelSeries read_ims_file(const std::string& path, double sample_interval = 50e-6);

/// Writes the same whitespace-delimited layout, no header.
void write_ims_file(const MultiChannelSeries& series, const std::string& path);

/// Comma-separated numeric matrix; optional header row supplies channel
/// names. Write emits a header, 17 significant digits and LF line endings, so
/// write -> read round-trips exactly.
MultiChannelSeries read_csv(const std::string& path, bool has_header);
void write_csv(const MultiChannelSeries& series, const std::string& path);

/// Factor-table JSON schema:
///   {channels, lag_order, threshold, tail_window,
///    structural: GxG, lagged: [GxG, ...], preprocessing: {means, stds}}
/// Numbers round-trip exactly (shortest-representation serialization).
/// read_factors_json throws SchemaViolation with the offending JSON pointer;
/// threshold/tail_window/preprocessing are optional on read.
void write_factors_json(const EstimationResult& result, const std::string& path);
void write_factors_json(const CausalFactors& factors, const std::string& path,
                        double threshold = 0.0, int tail_window = 0);
CausalFactors read_factors_json(const std::string& path);

/// Renders the ladder graph as a standalone SVG: three vertical axes (T-1, T,
/// T), lagged edges in the left pane, structural edges in the right pane.
/// Output is deterministic, fixed element order and decimal precision.
std::string render_svg(const LadderGraph& graph, const std::vector<FeedbackLoop>& loops,
                       const RenderStyle& style = {});

/// Time-unrolled digraph in DOT syntax: nodes "<channel>@T-1" and
/// "<channel>@T", lagged edges crossing time, structural edges within T.
/// Edge attributes carry kind, sign, magnitude; negative edges are dashed.
std::string render_dot(const LadderGraph& graph);

}  // namespace svl
