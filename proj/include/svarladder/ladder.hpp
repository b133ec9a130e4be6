#pragma once

#include <array>
#include <string>
#include <vector>

#include "svarladder/model.hpp"
#include "svarladder/statespace.hpp"

namespace svl {

/// One arrow of the ladder graph. Direction is cause -> effect; sign is
/// carried separately from the positive magnitude.
struct LadderEdge {
    FactorKind kind = FactorKind::SNL;
    int from_channel = 0;  // cause
    int to_channel = 0;    // effect
    int lag = 0;           // 0 for INS, >= 1 otherwise
    int sign = +1;
    double magnitude = 0.0;

    double signed_value() const { return sign * magnitude; }
    bool operator==(const LadderEdge&) const = default;
};

/// Typed edge set over the three ladder axes (T-1, T, T). Lagged edges (SNL,
/// INL) span the left pane, structural edges (INS) the right pane; an INS
/// edge from a channel to itself is forbidden. Edge order is deterministic:
/// structural matrix scanned row-major, then each lag matrix row-major.
struct LadderGraph {
    std::vector<std::string> channels;
    std::vector<LadderEdge> edges;

    int channel_count() const { return static_cast<int>(channels.size()); }
    int count(FactorKind kind) const;
};

/// One edge per nonzero factor entry.
LadderGraph build_ladder(const CausalFactors& factors);

/// A cycle in the time-unrolled graph with total lag >= 1. Edges chain
/// head-to-tail through distinct channels and return to the starting channel;
/// the product of edge signs classifies the loop: +1 amplifies (positive
/// feedback), -1 damps (negative feedback).
struct FeedbackLoop {
    std::vector<LadderEdge> path;
    int total_lag = 0;
    int sign_product = +1;

    bool positive_feedback() const { return sign_product > 0; }
    std::vector<int> channel_path() const;
};

/// Directed statement "cause channel at time t+offset raises/lowers effect
/// channel at time t", generated from one ladder path: a single lagged edge
/// optionally followed by structural hops, or one bare structural edge
/// (offset 0). Strength is the product of signed factors along the path.
/// `conflicting` is set when another proposition shares (cause, effect,
/// offset) but pulls in the opposite direction.
struct Proposition {
    int cause_channel = 0;
    int effect_channel = 0;
    int cause_time_offset = 0;  // <= 0
    bool raises = true;
    std::vector<LadderEdge> path;
    double strength = 0.0;
    bool conflicting = false;
};

/// Unordered channel pairs {i, j} with INS edges in both directions; each is
/// an instantaneous 2-cycle that a DAG cannot contain. Sorted ascending.
std::vector<std::array<int, 2>> detect_x_patterns(const LadderGraph& graph);

/// Every elementary cycle of the INS-only subgraph (length >= 2), as channel
/// sequences starting at the cycle's smallest channel. An empty result
/// certifies the structural part is a DAG. Sorted by length, then channels.
std::vector<std::vector<int>> detect_structural_cycles(const LadderGraph& graph);

/// Elementary cycles of the full graph with total lag >= 1 and at most
/// max_edges edges. SNL edges count: each one is a lag-1 self cycle. Ordered
/// by total lag, then lexicographic channel path.
std::vector<FeedbackLoop> detect_feedback_loops(const LadderGraph& graph, int max_edges = 6);

/// All propositions from paths with exactly one lagged edge followed by up to
/// max_structural_hops INS edges (no channel revisited within the structural
/// segment), plus one per bare INS edge. Deterministically ordered by
/// (cause, effect, offset, path).
std::vector<Proposition> generate_propositions(const LadderGraph& graph,
                                               int max_structural_hops = 2);

/// Plain-text form, e.g. "B1(t-1) raises B1(t)".
std::string proposition_statement(const Proposition& p, const std::vector<std::string>& channels);

}  // namespace svl
