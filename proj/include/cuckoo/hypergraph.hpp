#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cuckoo/rng.hpp"

// Random k-uniform hypergraph models and structural queries. Vertices are
// table slots, each k-edge is one item's set of location choices. Four
// generators: uniform multigraph, uniform simple graph, binomial (each
// k-tuple present independently), and the Poisson cloning / configuration
// model with its 2-truncated variant for cores.

namespace cuckoo {

using VertexId = std::uint32_t;

class Hypergraph {
public:
    Hypergraph(VertexId n, int k, bool multiset_edges = false)
        : n_(n), k_(k), multiset_(multiset_edges) {
        if (k < 2) throw std::invalid_argument("Hypergraph: edge arity k must be >= 2");
    }

    VertexId vertex_count() const noexcept { return n_; }
    int arity() const noexcept { return k_; }
    std::size_t edge_count() const noexcept { return flat_.size() / k_; }
    bool multiset_edges() const noexcept { return multiset_; }

    std::span<const VertexId> edge(std::size_t i) const noexcept {
        return {flat_.data() + i * k_, static_cast<std::size_t>(k_)};
    }

    /// Appends an edge; vertices are sorted ascending. Repeated vertices are
    /// rejected unless the graph was declared multiset (cloning-model output).
    void add_edge(std::span<const VertexId> vertices) {
        if (vertices.size() != static_cast<std::size_t>(k_))
            throw std::invalid_argument("Hypergraph::add_edge: wrong arity");
        const std::size_t base = flat_.size();
        flat_.insert(flat_.end(), vertices.begin(), vertices.end());
        std::sort(flat_.begin() + base, flat_.end());
        for (int i = 0; i < k_; ++i) {
            const VertexId v = flat_[base + i];
            if (v >= n_) {
                flat_.resize(base);
                throw std::invalid_argument("Hypergraph::add_edge: vertex index out of range");
            }
            if (!multiset_ && i > 0 && v == flat_[base + i - 1]) {
                flat_.resize(base);
                throw std::invalid_argument(
                    "Hypergraph::add_edge: repeated vertex in a distinct-vertex edge");
            }
        }
    }

    bool operator==(const Hypergraph& other) const noexcept {
        return n_ == other.n_ && k_ == other.k_ && multiset_ == other.multiset_ &&
               flat_ == other.flat_;
    }

private:
    VertexId n_;
    int k_;
    bool multiset_;
    std::vector<VertexId> flat_;
};

struct DegreeSequence {
    std::vector<std::uint32_t> degrees;
    std::uint64_t total = 0;
};

struct CoreSubgraph {
    std::vector<VertexId> vertices;         // surviving vertices, ascending
    std::vector<std::size_t> edge_indices;  // surviving edges, ascending
    std::size_t n2 = 0;
    std::size_t m2 = 0;
};

/// Exact ratio of internal edge count to subset size; never goes through
/// floating point.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Rational reduced(std::int64_t n, std::int64_t d) {
        const std::int64_t g = std::gcd(n, d);
        return g == 0 ? Rational{n, d} : Rational{n / g, d / g};
    }
    bool operator==(const Rational&) const = default;
};

namespace detail {

/// One uniform k-subset of {0, ..., n-1}, by rejection until distinct.
inline void sample_edge(VertexId n, int k, Xoshiro256ss& rng, std::vector<VertexId>& out) {
    out.clear();
    while (out.size() < static_cast<std::size_t>(k)) {
        const auto v = static_cast<VertexId>(rng.below(n));
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    }
    std::sort(out.begin(), out.end());
}

/// C(n, k) saturated at cap.
inline std::uint64_t binomial_capped(std::uint64_t n, int k,
                                     std::uint64_t cap = (1ULL << 62)) {
    if (static_cast<std::uint64_t>(k) > n) return 0;
    unsigned __int128 result = 1;
    for (int i = 1; i <= k; ++i) {
        result = result * (n - k + i) / i;  // exact: product of i consecutive ints
        if (result > cap) return cap;
    }
    return static_cast<std::uint64_t>(result);
}

/// Realizes a uniform k-matching on a multiset of clones and contracts it to
/// edges: shuffle, group consecutive k-blocks, drop the < k leftover clones.
inline Hypergraph contract_clones(VertexId n, int k, std::vector<VertexId>& clones,
                                  Xoshiro256ss& rng, std::uint32_t& leftover) {
    for (std::size_t i = clones.size(); i > 1; --i)
        std::swap(clones[i - 1], clones[rng.below(i)]);
    const std::size_t m = clones.size() / k;
    leftover = static_cast<std::uint32_t>(clones.size() - m * k);
    Hypergraph graph(n, k, /*multiset_edges=*/true);
    for (std::size_t e = 0; e < m; ++e)
        graph.add_edge({clones.data() + e * k, static_cast<std::size_t>(k)});
    return graph;
}

} // namespace detail

/// H*_{n,m,k}: m independent uniform k-subsets; edges may coincide.
inline Hypergraph gen_multigraph(VertexId n, std::size_t m, int k, std::uint64_t seed) {
    if (n < static_cast<VertexId>(k))
        throw std::invalid_argument("gen_multigraph: requires n >= k");
    Hypergraph graph(n, k);
    Xoshiro256ss rng(seed);
    std::vector<VertexId> edge;
    for (std::size_t i = 0; i < m; ++i) {
        detail::sample_edge(n, k, rng, edge);
        graph.add_edge(edge);
    }
    return graph;
}

/// H_{n,m,k}: m pairwise-distinct uniform k-subsets (rejection on duplicates).
inline Hypergraph gen_simple(VertexId n, std::size_t m, int k, std::uint64_t seed) {
    if (n < static_cast<VertexId>(k))
        throw std::invalid_argument("gen_simple: requires n >= k");
    if (m > detail::binomial_capped(n, k))
        throw std::invalid_argument("gen_simple: m exceeds the number of k-subsets");
    Hypergraph graph(n, k);
    Xoshiro256ss rng(seed);
    std::set<std::vector<VertexId>> seen;
    std::vector<VertexId> edge;
    while (seen.size() < m) {
        detail::sample_edge(n, k, rng, edge);
        if (seen.insert(edge).second) graph.add_edge(edge);
    }
    return graph;
}

/// H_{n,p,k}: every k-tuple present independently with probability p.
/// Realized as M ~ Binomial(C(n,k), p) followed by M distinct uniform edges,
/// which is the same distribution. M is sampled exactly by geometric-gap
/// counting while C(n,k) <= 2^62; above that the count falls back to a
/// normal approximation (mean and variance via lgamma).
inline Hypergraph gen_binomial(VertexId n, double p, int k, std::uint64_t seed) {
    if (n < static_cast<VertexId>(k))
        throw std::invalid_argument("gen_binomial: requires n >= k");
    if (p < 0.0 || p > 1.0)
        throw std::invalid_argument("gen_binomial: p must lie in [0, 1]");
    Xoshiro256ss rng(seed);
    const std::uint64_t total = detail::binomial_capped(n, k);
    std::uint64_t edges = 0;
    if (p >= 1.0) {
        edges = total;
    } else if (p > 0.0 && total < (1ULL << 62)) {
        const double log_skip = std::log1p(-p);
        std::uint64_t position = 0;
        while (true) {
            const double gap = std::floor(std::log(rng.unit_open()) / log_skip);
            const std::uint64_t skip =
                gap >= 9.0e18 ? (1ULL << 63) : static_cast<std::uint64_t>(gap);
            if (skip >= total - position) break;
            position += skip + 1;
            ++edges;
            if (position >= total) break;
        }
    } else if (p > 0.0) {
        double log_total = std::lgamma(static_cast<double>(n) + 1.0) -
                           std::lgamma(static_cast<double>(k) + 1.0) -
                           std::lgamma(static_cast<double>(n - k) + 1.0);
        const double mean = std::exp(log_total + std::log(p));
        const double sd = std::sqrt(mean * (1.0 - p));
        // Box-Muller from two fixed draws keeps the stream deterministic.
        const double u1 = rng.unit_open(), u2 = rng.unit_open();
        const double gauss = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
        edges = static_cast<std::uint64_t>(std::max(0.0, std::round(mean + sd * gauss)));
    }

    Hypergraph graph(n, k);
    std::set<std::vector<VertexId>> seen;
    std::vector<VertexId> edge;
    while (seen.size() < edges) {
        detail::sample_edge(n, k, rng, edge);
        if (seen.insert(edge).second) graph.add_edge(edge);
    }
    return graph;
}

struct CloneExpansion {
    Hypergraph graph;
    DegreeSequence degrees;       // degrees as drawn, before any leftover loss
    std::uint32_t leftover_clones = 0;  // < k clones left unmatched and dropped
};

/// Poisson cloning model: i.i.d. Poisson(lambda) degrees, d(v) clones per
/// vertex, a uniform k-matching of all clones, then contraction back to
/// vertices. Output edges may repeat a vertex.
inline CloneExpansion gen_poisson_cloning(VertexId n, double lambda, int k,
                                          std::uint64_t seed) {
    if (lambda < 0.0) throw std::invalid_argument("gen_poisson_cloning: lambda must be >= 0");
    Xoshiro256ss rng(seed);
    DegreeSequence degrees;
    degrees.degrees.resize(n);
    std::vector<VertexId> clones;
    for (VertexId v = 0; v < n; ++v) {
        const std::uint32_t d = lambda > 0.0 ? rng.poisson(lambda) : 0;
        degrees.degrees[v] = d;
        degrees.total += d;
        clones.insert(clones.end(), d, v);
    }
    std::uint32_t leftover = 0;
    Hypergraph graph = detail::contract_clones(n, k, clones, rng, leftover);
    return CloneExpansion{std::move(graph), std::move(degrees), leftover};
}

/// Core model: degrees i.i.d. Poisson(Lambda) conditioned on being >= 2,
/// clones matched exactly as in the cloning model.
inline CloneExpansion gen_truncated_core_model(VertexId n2, double lambda, int k,
                                               std::uint64_t seed) {
    if (lambda <= 0.0)
        throw std::invalid_argument("gen_truncated_core_model: Lambda must be > 0");
    if (n2 < 1) throw std::invalid_argument("gen_truncated_core_model: requires n2 >= 1");
    Xoshiro256ss rng(seed);
    DegreeSequence degrees;
    degrees.degrees.resize(n2);
    std::vector<VertexId> clones;
    for (VertexId v = 0; v < n2; ++v) {
        const std::uint32_t d = rng.poisson_min2(lambda);
        degrees.degrees[v] = d;
        degrees.total += d;
        clones.insert(clones.end(), d, v);
    }
    std::uint32_t leftover = 0;
    Hypergraph graph = detail::contract_clones(n2, k, clones, rng, leftover);
    return CloneExpansion{std::move(graph), std::move(degrees), leftover};
}

/// Incidence counts per vertex (with multiplicity for multiset edges).
inline DegreeSequence degree_sequence(const Hypergraph& graph) {
    DegreeSequence seq;
    seq.degrees.assign(graph.vertex_count(), 0);
    for (std::size_t e = 0; e < graph.edge_count(); ++e)
        for (const VertexId v : graph.edge(e)) ++seq.degrees[v];
    seq.total = std::accumulate(seq.degrees.begin(), seq.degrees.end(), std::uint64_t{0});
    return seq;
}

/// 2-core: repeatedly delete vertices with fewer than 2 incidences together
/// with their edges. Work-queue peeling over incidence lists, linear time;
/// the result does not depend on deletion order.
inline CoreSubgraph peel_core(const Hypergraph& graph) {
    const VertexId n = graph.vertex_count();
    const std::size_t m = graph.edge_count();

    std::vector<std::uint32_t> degree(n, 0);
    for (std::size_t e = 0; e < m; ++e)
        for (const VertexId v : graph.edge(e)) ++degree[v];

    // CSR incidence lists, one entry per (vertex, edge) occurrence.
    std::vector<std::size_t> offset(n + 1, 0);
    for (VertexId v = 0; v < n; ++v) offset[v + 1] = offset[v] + degree[v];
    std::vector<std::size_t> incidence(offset[n]);
    {
        std::vector<std::size_t> cursor(offset.begin(), offset.end() - 1);
        for (std::size_t e = 0; e < m; ++e)
            for (const VertexId v : graph.edge(e)) incidence[cursor[v]++] = e;
    }

    std::vector<bool> removed(n, false);
    std::vector<bool> edge_alive(m, true);
    std::vector<VertexId> queue;
    queue.reserve(n);
    for (VertexId v = 0; v < n; ++v)
        if (degree[v] < 2) queue.push_back(v);

    while (!queue.empty()) {
        const VertexId v = queue.back();
        queue.pop_back();
        if (removed[v] || degree[v] >= 2) continue;
        removed[v] = true;
        for (std::size_t i = offset[v]; i < offset[v + 1]; ++i) {
            const std::size_t e = incidence[i];
            if (!edge_alive[e]) continue;
            edge_alive[e] = false;
            for (const VertexId u : graph.edge(e)) {
                --degree[u];
                if (!removed[u] && degree[u] < 2) queue.push_back(u);
            }
        }
    }

    CoreSubgraph core;
    for (VertexId v = 0; v < n; ++v)
        if (!removed[v]) core.vertices.push_back(v);
    for (std::size_t e = 0; e < m; ++e)
        if (edge_alive[e]) core.edge_indices.push_back(e);
    core.n2 = core.vertices.size();
    core.m2 = core.edge_indices.size();
    return core;
}

/// Density e_U / |U| of the subgraph induced by U: internal edges are those
/// with every occurrence inside U. Exact rational output.
inline Rational subset_density(const Hypergraph& graph, std::span<const VertexId> subset) {
    if (subset.empty()) throw std::domain_error("subset_density: U must be nonempty");
    std::vector<bool> in_subset(graph.vertex_count(), false);
    for (const VertexId v : subset) {
        if (v >= graph.vertex_count())
            throw std::domain_error("subset_density: vertex index out of range");
        in_subset[v] = true;
    }
    std::int64_t internal = 0;
    for (std::size_t e = 0; e < graph.edge_count(); ++e) {
        const auto edge = graph.edge(e);
        if (std::all_of(edge.begin(), edge.end(), [&](VertexId v) { return in_subset[v]; }))
            ++internal;
    }
    std::vector<VertexId> dedup(subset.begin(), subset.end());
    std::sort(dedup.begin(), dedup.end());
    dedup.erase(std::unique(dedup.begin(), dedup.end()), dedup.end());
    return Rational::reduced(internal, static_cast<std::int64_t>(dedup.size()));
}

/// Restriction of a graph to a peeled core, reindexed over the same vertex ids.
inline Hypergraph core_subgraph(const Hypergraph& graph, const CoreSubgraph& core) {
    Hypergraph sub(graph.vertex_count(), graph.arity(), graph.multiset_edges());
    for (const std::size_t e : core.edge_indices) sub.add_edge(graph.edge(e));
    return sub;
}

// Text format: first non-comment line "n m k", then m lines of k ascending
// vertex indices. Lines starting with '#' are comments.

inline void write_hypergraph(std::ostream& out, const Hypergraph& graph) {
    out << graph.vertex_count() << ' ' << graph.edge_count() << ' ' << graph.arity() << '\n';
    for (std::size_t e = 0; e < graph.edge_count(); ++e) {
        const auto edge = graph.edge(e);
        for (int i = 0; i < graph.arity(); ++i) out << (i ? " " : "") << edge[i];
        out << '\n';
    }
}

inline Hypergraph read_hypergraph(std::istream& in) {
    auto next_line = [&in](std::string& line) {
        while (std::getline(in, line)) {
            const auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos || line[first] == '#') continue;
            return true;
        }
        return false;
    };
    std::string line;
    if (!next_line(line)) throw std::runtime_error("read_hypergraph: missing header line");
    std::istringstream header(line);
    std::uint64_t n = 0, m = 0;
    int k = 0;
    if (!(header >> n >> m >> k))
        throw std::runtime_error("read_hypergraph: malformed header, expected 'n m k'");
    Hypergraph graph(static_cast<VertexId>(n), k, /*multiset_edges=*/false);
    bool multiset = false;
    std::vector<std::vector<VertexId>> edges;
    edges.reserve(m);
    for (std::uint64_t e = 0; e < m; ++e) {
        if (!next_line(line))
            throw std::runtime_error("read_hypergraph: expected " + std::to_string(m) +
                                     " edges, got " + std::to_string(e));
        std::istringstream row(line);
        std::vector<VertexId> edge(k);
        for (int i = 0; i < k; ++i)
            if (!(row >> edge[i]))
                throw std::runtime_error("read_hypergraph: malformed edge line: " + line);
        std::sort(edge.begin(), edge.end());
        multiset |= std::adjacent_find(edge.begin(), edge.end()) != edge.end();
        edges.push_back(std::move(edge));
    }
    if (multiset) graph = Hypergraph(static_cast<VertexId>(n), k, true);
    for (const auto& edge : edges) graph.add_edge(edge);
    return graph;
}

} // namespace cuckoo
