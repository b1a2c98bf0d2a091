#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cuckoo/hypergraph.hpp"

// Orientability: every edge (item) must be assigned an own vertex (location)
// it contains, injectively. Equivalent to a left-perfect matching in the
// item-location bipartite graph, and by Hall's theorem to the absence of a
// vertex subset inducing more edges than vertices. Exponential subset
// enumeration backs the small-instance oracles.

namespace cuckoo {

/// edge index -> assigned vertex; kUnassigned for edges left out of a
/// maximum matching that is not left-perfect.
struct Assignment {
    static constexpr std::int64_t kUnassigned = -1;
    std::vector<std::int64_t> edge_to_vertex;
};

struct MatchingResult {
    std::size_t size = 0;
    Assignment assignment;
};

struct DenseWitness {
    std::vector<VertexId> vertex_set;
    std::int64_t internal_edges = 0;
    bool over_dense = false;  // e_U > |U|, as opposed to exactly e_U == |U|
};

namespace detail {

constexpr std::size_t kEnumerationLimit = 24;

inline void require_distinct_vertex_edges(const Hypergraph& graph, const char* who) {
    if (graph.multiset_edges())
        throw std::invalid_argument(
            std::string(who) +
            ": edges with repeated vertices are not orientable input; cloning-model "
            "graphs carry their own degree/leftover diagnostics instead");
}

inline std::vector<std::uint32_t> edge_bitmasks(const Hypergraph& graph) {
    std::vector<std::uint32_t> masks(graph.edge_count(), 0);
    for (std::size_t e = 0; e < graph.edge_count(); ++e)
        for (const VertexId v : graph.edge(e)) masks[e] |= 1u << v;
    return masks;
}

inline std::vector<VertexId> mask_to_vertices(std::uint32_t mask) {
    std::vector<VertexId> vertices;
    for (VertexId v = 0; mask != 0; ++v, mask >>= 1)
        if (mask & 1u) vertices.push_back(v);
    return vertices;
}

/// Next bitmask with the same popcount (Gosper's hack).
inline std::uint32_t next_same_popcount(std::uint32_t mask) {
    const std::uint32_t c = mask & (0 - mask);
    const std::uint32_t r = mask + c;
    return (((r ^ mask) >> 2) / c) | r;
}

} // namespace detail

/// Maximum matching in the bipartite graph with the m edges on the left and
/// the n vertices on the right. Hopcroft-Karp with a greedy warm start,
/// O(E sqrt(V)); neighbor scans follow the ascending vertex order inside each
/// edge, so the returned assignment is deterministic.
inline MatchingResult max_matching(const Hypergraph& graph) {
    detail::require_distinct_vertex_edges(graph, "max_matching");
    const std::size_t m = graph.edge_count();
    const VertexId n = graph.vertex_count();
    constexpr std::int64_t kFree = -1;
    constexpr std::uint32_t kInf = std::numeric_limits<std::uint32_t>::max();

    std::vector<std::int64_t> match_edge(m, kFree);   // edge -> vertex
    std::vector<std::int64_t> match_vertex(n, kFree); // vertex -> edge
    std::size_t matched = 0;

    for (std::size_t e = 0; e < m; ++e)
        for (const VertexId v : graph.edge(e))
            if (match_vertex[v] == kFree) {
                match_vertex[v] = static_cast<std::int64_t>(e);
                match_edge[e] = v;
                ++matched;
                break;
            }

    std::vector<std::uint32_t> dist(m);
    std::vector<std::size_t> bfs_queue;
    bfs_queue.reserve(m);
    // Iterative DFS stack: (edge, index of the next vertex to try inside it).
    std::vector<std::pair<std::size_t, int>> stack;

    while (matched < m && matched < n) {
        bfs_queue.clear();
        for (std::size_t e = 0; e < m; ++e) {
            dist[e] = match_edge[e] == kFree ? 0 : kInf;
            if (dist[e] == 0) bfs_queue.push_back(e);
        }
        bool reachable_free_vertex = false;
        for (std::size_t head = 0; head < bfs_queue.size(); ++head) {
            const std::size_t e = bfs_queue[head];
            for (const VertexId v : graph.edge(e)) {
                const std::int64_t owner = match_vertex[v];
                if (owner == kFree) {
                    reachable_free_vertex = true;
                } else if (dist[owner] == kInf) {
                    dist[owner] = dist[e] + 1;
                    bfs_queue.push_back(static_cast<std::size_t>(owner));
                }
            }
        }
        if (!reachable_free_vertex) break;

        for (std::size_t root = 0; root < m; ++root) {
            if (match_edge[root] != kFree) continue;
            stack.clear();
            stack.emplace_back(root, 0);
            bool augmented = false;
            while (!stack.empty()) {
                auto& [e, next] = stack.back();
                if (augmented) {
                    // Unwind, flipping matched pairs along the augmenting path.
                    const VertexId v = graph.edge(e)[next - 1];
                    match_edge[e] = v;
                    match_vertex[v] = static_cast<std::int64_t>(e);
                    stack.pop_back();
                    continue;
                }
                if (next >= graph.arity()) {
                    dist[e] = kInf;
                    stack.pop_back();
                    continue;
                }
                const VertexId v = graph.edge(e)[next++];
                const std::int64_t owner = match_vertex[v];
                if (owner == kFree) {
                    augmented = true;
                    match_edge[e] = v;
                    match_vertex[v] = static_cast<std::int64_t>(e);
                    stack.pop_back();
                } else if (dist[owner] == dist[e] + 1) {
                    stack.emplace_back(static_cast<std::size_t>(owner), 0);
                }
            }
            if (augmented) ++matched;
        }
    }

    MatchingResult result;
    result.size = matched;
    result.assignment.edge_to_vertex = std::move(match_edge);
    return result;
}

/// True iff every item can occupy one of its chosen locations.
inline bool is_orientable(const Hypergraph& graph) {
    return max_matching(graph).size == graph.edge_count();
}

/// Exhaustive search for a dense vertex subset: with strict, any U with
/// e_U > |U| (the Hall violation); otherwise any 1-dense U (e_U >= |U|).
/// Scans subsets in order of increasing size, so a returned witness has
/// minimum cardinality. Requires n <= 24.
inline std::optional<DenseWitness> brute_force_dense_subset(const Hypergraph& graph,
                                                            bool strict) {
    if (graph.vertex_count() > detail::kEnumerationLimit)
        throw std::length_error("brute_force_dense_subset: requires n <= 24");
    const auto masks = detail::edge_bitmasks(graph);
    const VertexId n = graph.vertex_count();
    for (VertexId size = 1; size <= n; ++size) {
        const std::uint32_t last = ((1u << size) - 1) << (n - size);
        for (std::uint32_t subset = (1u << size) - 1;;
             subset = detail::next_same_popcount(subset)) {
            std::int64_t internal = 0;
            for (const std::uint32_t mask : masks)
                if ((mask & ~subset) == 0) ++internal;
            const auto threshold = static_cast<std::int64_t>(size);
            if (internal > threshold || (!strict && internal == threshold))
                return DenseWitness{detail::mask_to_vertices(subset), internal,
                                    internal > threshold};
            if (subset == last) break;
        }
    }
    return std::nullopt;
}

/// Structural signature of an inclusion-maximal 1-dense set inside a graph of
/// overall density < 1: e_U = |U| and no edge meets U in exactly k-1 vertices.
inline bool check_maximal_1dense_properties(const Hypergraph& graph,
                                            std::span<const VertexId> subset) {
    std::vector<bool> in_subset(graph.vertex_count(), false);
    std::size_t size = 0;
    for (const VertexId v : subset) {
        if (v >= graph.vertex_count())
            throw std::domain_error("check_maximal_1dense_properties: vertex out of range");
        if (!in_subset[v]) {
            in_subset[v] = true;
            ++size;
        }
    }
    std::int64_t internal = 0;
    for (std::size_t e = 0; e < graph.edge_count(); ++e) {
        int inside = 0;
        for (const VertexId v : graph.edge(e)) inside += in_subset[v] ? 1 : 0;
        if (inside == graph.arity()) ++internal;
        if (inside == graph.arity() - 1) return false;
    }
    return internal == static_cast<std::int64_t>(size);
}

/// For 3-graphs: smallest "bad" set with e_U = |U| and no edge meeting U in
/// exactly 2 vertices, searched over 4 <= |U| <= max_size. Requires n <= 24.
inline std::optional<std::vector<VertexId>> bad_subset_search_3graph(
    const Hypergraph& graph, VertexId max_size) {
    if (graph.arity() != 3)
        throw std::domain_error("bad_subset_search_3graph: requires k = 3");
    if (graph.vertex_count() > detail::kEnumerationLimit)
        throw std::length_error("bad_subset_search_3graph: requires n <= 24");
    const VertexId n = graph.vertex_count();
    const VertexId limit = std::min(max_size, n);
    for (VertexId size = 4; size <= limit; ++size) {
        const std::uint32_t last = ((1u << size) - 1) << (n - size);
        for (std::uint32_t subset = (1u << size) - 1;;
             subset = detail::next_same_popcount(subset)) {
            std::int64_t internal = 0;
            bool meets_in_two = false;
            for (std::size_t e = 0; e < graph.edge_count() && !meets_in_two; ++e) {
                int inside = 0;
                for (const VertexId v : graph.edge(e)) inside += (subset >> v) & 1u;
                if (inside == 3) ++internal;
                if (inside == 2) meets_in_two = true;
            }
            if (!meets_in_two && internal == static_cast<std::int64_t>(size))
                return detail::mask_to_vertices(subset);
            if (subset == last) break;
        }
    }
    return std::nullopt;
}

/// Validates an assignment against its graph: every assigned vertex belongs
/// to its edge and no vertex is used twice. Returns the number of assigned
/// edges, or nullopt if the assignment is inconsistent.
inline std::optional<std::size_t> validate_assignment(const Hypergraph& graph,
                                                      const Assignment& assignment) {
    if (assignment.edge_to_vertex.size() != graph.edge_count()) return std::nullopt;
    std::vector<bool> used(graph.vertex_count(), false);
    std::size_t assigned = 0;
    for (std::size_t e = 0; e < graph.edge_count(); ++e) {
        const std::int64_t v = assignment.edge_to_vertex[e];
        if (v == Assignment::kUnassigned) continue;
        if (v < 0 || v >= static_cast<std::int64_t>(graph.vertex_count())) return std::nullopt;
        const auto edge = graph.edge(e);
        if (std::find(edge.begin(), edge.end(), static_cast<VertexId>(v)) == edge.end())
            return std::nullopt;
        if (used[static_cast<std::size_t>(v)]) return std::nullopt;
        used[static_cast<std::size_t>(v)] = true;
        ++assigned;
    }
    return assigned;
}

} // namespace cuckoo
