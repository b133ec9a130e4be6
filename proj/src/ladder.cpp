#include "svarladder/ladder.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <tuple>

namespace svl {

int LadderGraph::count(FactorKind kind) const {
    return static_cast<int>(
        std::count_if(edges.begin(), edges.end(),
                      [kind](const LadderEdge& e) { return e.kind == kind; }));
}

LadderGraph build_ladder(const CausalFactors& factors) {
    validate_factors(factors);
    const int g = factors.channels();

    LadderGraph graph;
    graph.channels = factors.channel_names;
    auto emit = [&graph](FactorKind kind, int effect, int cause, int lag, double v) {
        if (v == 0.0) return;
        graph.edges.push_back({kind, cause, effect, lag, v > 0.0 ? +1 : -1, std::abs(v)});
    };
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) emit(FactorKind::INS, i, j, 0, factors.structural(i, j));
    for (int d = 0; d < factors.lag_order(); ++d)
        for (int i = 0; i < g; ++i)
            for (int j = 0; j < g; ++j)
                emit(i == j ? FactorKind::SNL : FactorKind::INL, i, j, d + 1,
                     factors.lagged[d](i, j));
    return graph;
}

std::vector<int> FeedbackLoop::channel_path() const {
    std::vector<int> channels;
    channels.reserve(path.size());
    for (const auto& e : path) channels.push_back(e.from_channel);
    return channels;
}

namespace {

int kind_rank(FactorKind k) {
    switch (k) {
        case FactorKind::SNL: return 0;
        case FactorKind::INL: return 1;
        case FactorKind::INS: return 2;
    }
    return 3;
}

bool edge_less(const LadderEdge& a, const LadderEdge& b) {
    return std::tuple(a.from_channel, a.to_channel, a.lag, kind_rank(a.kind)) <
           std::tuple(b.from_channel, b.to_channel, b.lag, kind_rank(b.kind));
}

// Outgoing edges per channel in a deterministic order, independent of the
// order edges were inserted into the graph.
std::vector<std::vector<LadderEdge>> adjacency(const LadderGraph& graph, bool structural_only) {
    std::vector<std::vector<LadderEdge>> adj(graph.channel_count());
    for (const auto& e : graph.edges) {
        if (structural_only && e.kind != FactorKind::INS) continue;
        adj[e.from_channel].push_back(e);
    }
    for (auto& list : adj) std::sort(list.begin(), list.end(), edge_less);
    return adj;
}

std::vector<int> edge_key(const std::vector<LadderEdge>& path) {
    std::vector<int> key;
    key.reserve(path.size() * 4);
    for (const auto& e : path) {
        key.push_back(e.from_channel);
        key.push_back(e.to_channel);
        key.push_back(e.lag);
        key.push_back(kind_rank(e.kind));
    }
    return key;
}

// Elementary-cycle DFS: every cycle is discovered exactly once, rooted at its
// smallest channel (only channels > root may be visited mid-path).
void cycle_dfs(const std::vector<std::vector<LadderEdge>>& adj, int root, int current,
               int max_edges, std::vector<LadderEdge>& path, std::vector<bool>& visited,
               const std::function<void(const std::vector<LadderEdge>&)>& on_cycle) {
    for (const auto& e : adj[current]) {
        if (e.to_channel == root) {
            path.push_back(e);
            on_cycle(path);
            path.pop_back();
            continue;
        }
        if (e.to_channel < root || visited[e.to_channel]) continue;
        if (static_cast<int>(path.size()) + 1 >= max_edges) continue;
        visited[e.to_channel] = true;
        path.push_back(e);
        cycle_dfs(adj, root, e.to_channel, max_edges, path, visited, on_cycle);
        path.pop_back();
        visited[e.to_channel] = false;
    }
}

}  // namespace

std::vector<std::array<int, 2>> detect_x_patterns(const LadderGraph& graph) {
    std::set<std::pair<int, int>> structural;
    for (const auto& e : graph.edges)
        if (e.kind == FactorKind::INS) structural.insert({e.from_channel, e.to_channel});

    std::vector<std::array<int, 2>> pairs;
    for (const auto& [i, j] : structural)
        if (i < j && structural.count({j, i})) pairs.push_back({i, j});
    std::sort(pairs.begin(), pairs.end());
    return pairs;
}

std::vector<std::vector<int>> detect_structural_cycles(const LadderGraph& graph) {
    const auto adj = adjacency(graph, /*structural_only=*/true);
    std::vector<std::vector<int>> cycles;
    std::vector<LadderEdge> path;
    std::vector<bool> visited(graph.channel_count(), false);
    for (int root = 0; root < graph.channel_count(); ++root) {
        visited[root] = true;
        cycle_dfs(adj, root, root, graph.channel_count(), path, visited,
                  [&cycles](const std::vector<LadderEdge>& loop) {
                      std::vector<int> channels;
                      for (const auto& e : loop) channels.push_back(e.from_channel);
                      if (channels.size() >= 2) cycles.push_back(std::move(channels));
                  });
        visited[root] = false;
    }
    std::sort(cycles.begin(), cycles.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return cycles;
}

std::vector<FeedbackLoop> detect_feedback_loops(const LadderGraph& graph, int max_edges) {
    if (max_edges < 2) throw InvalidDimension("max_edges must be >= 2");
    const auto adj = adjacency(graph, /*structural_only=*/false);

    std::vector<FeedbackLoop> loops;
    std::vector<LadderEdge> path;
    std::vector<bool> visited(graph.channel_count(), false);
    for (int root = 0; root < graph.channel_count(); ++root) {
        visited[root] = true;
        cycle_dfs(adj, root, root, max_edges, path, visited,
                  [&loops](const std::vector<LadderEdge>& cycle) {
                      FeedbackLoop loop;
                      loop.path = cycle;
                      for (const auto& e : cycle) {
                          loop.total_lag += e.lag;
                          loop.sign_product *= e.sign;
                      }
                      // Zero total lag is a structural cycle, not feedback.
                      if (loop.total_lag >= 1) loops.push_back(std::move(loop));
                  });
        visited[root] = false;
    }

    std::sort(loops.begin(), loops.end(), [](const FeedbackLoop& a, const FeedbackLoop& b) {
        return std::tuple(a.total_lag, a.channel_path(), edge_key(a.path)) <
               std::tuple(b.total_lag, b.channel_path(), edge_key(b.path));
    });
    return loops;
}

std::vector<Proposition> generate_propositions(const LadderGraph& graph,
                                               int max_structural_hops) {
    if (max_structural_hops < 0) throw InvalidDimension("max_structural_hops must be >= 0");
    const auto structural = adjacency(graph, /*structural_only=*/true);

    std::vector<Proposition> props;
    auto emit = [&props](int cause, int offset, const std::vector<LadderEdge>& path) {
        Proposition p;
        p.cause_channel = cause;
        p.effect_channel = path.back().to_channel;
        p.cause_time_offset = offset;
        p.path = path;
        p.strength = 1.0;
        for (const auto& e : path) p.strength *= e.signed_value();
        p.raises = p.strength > 0.0;
        props.push_back(std::move(p));
    };

    // Structural extensions form a simple path within the current instant.
    std::function<void(int, int, std::vector<LadderEdge>&, std::vector<bool>&, int)> extend =
        [&](int cause, int offset, std::vector<LadderEdge>& path, std::vector<bool>& visited,
            int hops_left) {
            if (hops_left == 0) return;
            for (const auto& e : structural[path.back().to_channel]) {
                if (visited[e.to_channel]) continue;
                visited[e.to_channel] = true;
                path.push_back(e);
                emit(cause, offset, path);
                extend(cause, offset, path, visited, hops_left - 1);
                path.pop_back();
                visited[e.to_channel] = false;
            }
        };

    std::vector<LadderEdge> path;
    std::vector<bool> visited(graph.channel_count(), false);
    for (const auto& e : graph.edges) {
        if (e.kind == FactorKind::INS) {
            path = {e};
            emit(e.from_channel, 0, path);
            continue;
        }
        path = {e};
        emit(e.from_channel, -e.lag, path);
        visited.assign(visited.size(), false);
        visited[e.to_channel] = true;  // the lagged cause sits on the earlier axis
        extend(e.from_channel, -e.lag, path, visited, max_structural_hops);
    }

    std::sort(props.begin(), props.end(), [](const Proposition& a, const Proposition& b) {
        return std::tuple(a.cause_channel, a.effect_channel, a.cause_time_offset, a.path.size(),
                          edge_key(a.path)) <
               std::tuple(b.cause_channel, b.effect_channel, b.cause_time_offset, b.path.size(),
                          edge_key(b.path));
    });

    // Opposite directions for the same (cause, effect, offset) triple are kept
    // and flagged, never merged.
    std::map<std::tuple<int, int, int>, std::pair<bool, bool>> directions;
    for (const auto& p : props) {
        auto& [raises, lowers] = directions[{p.cause_channel, p.effect_channel, p.cause_time_offset}];
        (p.raises ? raises : lowers) = true;
    }
    for (auto& p : props) {
        const auto& [raises, lowers] =
            directions[{p.cause_channel, p.effect_channel, p.cause_time_offset}];
        p.conflicting = raises && lowers;
    }
    return props;
}

std::string proposition_statement(const Proposition& p, const std::vector<std::string>& channels) {
    const std::string cause_time =
        p.cause_time_offset == 0 ? "(t)" : "(t" + std::to_string(p.cause_time_offset) + ")";
    return channels[p.cause_channel] + cause_time + (p.raises ? " raises " : " lowers ") +
           channels[p.effect_channel] + "(t)";
}

}  // namespace svl
