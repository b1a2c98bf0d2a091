#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <vector>

#include "cuckoo/analytic.hpp"
#include "cuckoo/hypergraph.hpp"
#include "cuckoo/rng.hpp"

using namespace cuckoo;

namespace {

std::vector<VertexId> edge_vector(const Hypergraph& graph, std::size_t e) {
    const auto edge = graph.edge(e);
    return {edge.begin(), edge.end()};
}

// Order-independence oracle: peel by scanning for any low-degree vertex in a
// randomized order instead of a work queue.
CoreSubgraph peel_randomized(const Hypergraph& graph, std::uint64_t seed) {
    Xoshiro256ss rng(seed);
    const VertexId n = graph.vertex_count();
    std::vector<bool> removed(n, false);
    std::vector<bool> edge_alive(graph.edge_count(), true);
    for (;;) {
        std::vector<std::uint32_t> degree(n, 0);
        for (std::size_t e = 0; e < graph.edge_count(); ++e)
            if (edge_alive[e])
                for (const VertexId v : graph.edge(e)) ++degree[v];
        std::vector<VertexId> candidates;
        for (VertexId v = 0; v < n; ++v)
            if (!removed[v] && degree[v] < 2) candidates.push_back(v);
        if (candidates.empty()) break;
        const VertexId victim = candidates[rng.below(candidates.size())];
        removed[victim] = true;
        for (std::size_t e = 0; e < graph.edge_count(); ++e) {
            if (!edge_alive[e]) continue;
            const auto edge = graph.edge(e);
            if (std::find(edge.begin(), edge.end(), victim) != edge.end())
                edge_alive[e] = false;
        }
    }
    CoreSubgraph core;
    for (VertexId v = 0; v < n; ++v)
        if (!removed[v]) core.vertices.push_back(v);
    for (std::size_t e = 0; e < graph.edge_count(); ++e)
        if (edge_alive[e]) core.edge_indices.push_back(e);
    core.n2 = core.vertices.size();
    core.m2 = core.edge_indices.size();
    return core;
}

Hypergraph k4_three_graph() {
    Hypergraph graph(4, 3);
    graph.add_edge(std::vector<VertexId>{0, 1, 2});
    graph.add_edge(std::vector<VertexId>{0, 1, 3});
    graph.add_edge(std::vector<VertexId>{0, 2, 3});
    graph.add_edge(std::vector<VertexId>{1, 2, 3});
    return graph;
}

} // namespace

TEST_CASE("multigraph generator basics", "[hypergraph]") {
    const Hypergraph only_choice = gen_multigraph(3, 1, 3, 123);
    REQUIRE(only_choice.edge_count() == 1);
    CHECK(edge_vector(only_choice, 0) == std::vector<VertexId>{0, 1, 2});

    CHECK(gen_multigraph(10, 0, 3, 1).edge_count() == 0);
    CHECK_THROWS_AS(gen_multigraph(2, 1, 3, 1), std::invalid_argument);

    // Determinism: same seed gives a bit-identical edge list.
    CHECK(gen_multigraph(50, 40, 3, 9) == gen_multigraph(50, 40, 3, 9));
    CHECK(!(gen_multigraph(50, 40, 3, 9) == gen_multigraph(50, 40, 3, 10)));
}

TEST_CASE("multigraph duplicate pairs match the birthday count", "[hypergraph]") {
    // n = 20, m = 1e4: expected coincident pairs = C(m,2) / C(20,3).
    const std::size_t m = 10000;
    const double choose = 1140.0;  // C(20,3)
    std::uint64_t pairs = 0;
    for (std::uint64_t t = 0; t < 100; ++t) {
        const Hypergraph graph = gen_multigraph(20, m, 3, derive_seed(1, t));
        std::vector<std::vector<VertexId>> edges;
        for (std::size_t e = 0; e < m; ++e) edges.push_back(edge_vector(graph, e));
        std::sort(edges.begin(), edges.end());
        std::size_t run = 1;
        for (std::size_t e = 1; e <= edges.size(); ++e) {
            if (e < edges.size() && edges[e] == edges[e - 1]) {
                ++run;
            } else {
                pairs += run * (run - 1) / 2;
                run = 1;
            }
        }
    }
    const double mean = static_cast<double>(pairs) / 100.0;
    const double expected = (static_cast<double>(m) * (m - 1) / 2.0) / choose;
    CHECK(std::abs(mean / expected - 1.0) < 0.05);
    CHECK(mean <= static_cast<double>(m) * m / choose);  // first-moment bound
}

TEST_CASE("simple generator basics", "[hypergraph]") {
    const Hypergraph single = gen_simple(3, 1, 3, 5);
    CHECK(edge_vector(single, 0) == std::vector<VertexId>{0, 1, 2});

    // m = C(4,3) forces all four 3-subsets.
    const Hypergraph full = gen_simple(4, 4, 3, 17);
    std::set<std::vector<VertexId>> seen;
    for (std::size_t e = 0; e < 4; ++e) seen.insert(edge_vector(full, e));
    CHECK(seen.size() == 4);

    CHECK_THROWS_AS(gen_simple(4, 5, 3, 1), std::invalid_argument);

    const Hypergraph big = gen_simple(100, 90, 3, 3);
    std::set<std::vector<VertexId>> distinct;
    for (std::size_t e = 0; e < big.edge_count(); ++e) distinct.insert(edge_vector(big, e));
    CHECK(distinct.size() == 90);
}

TEST_CASE("simple generator inclusion frequency is uniform", "[hypergraph]") {
    // Fixed tuple {0,1,2} over 1e4 seeds at n=100, m=90:
    // inclusion probability 90 / C(100,3), so count ~ Binomial(1e4, 5.566e-4).
    const std::vector<VertexId> probe{0, 1, 2};
    int hits = 0;
    for (std::uint64_t t = 0; t < 10000; ++t) {
        const Hypergraph graph = gen_simple(100, 90, 3, derive_seed(77, t));
        for (std::size_t e = 0; e < graph.edge_count(); ++e)
            if (edge_vector(graph, e) == probe) {
                ++hits;
                break;
            }
    }
    const double p = 90.0 / 161700.0;
    const double mean = 10000.0 * p;
    const double sigma = std::sqrt(10000.0 * p * (1.0 - p));
    CHECK(std::abs(hits - mean) <= 3.0 * sigma);
}

TEST_CASE("binomial generator", "[hypergraph]") {
    CHECK(gen_binomial(10, 0.0, 3, 1).edge_count() == 0);
    CHECK(gen_binomial(4, 1.0, 3, 1).edge_count() == 4);

    // Mean edge count p C(n,k) = cn within 3 sigma over 200 seeds.
    const std::uint32_t n = 10000;
    const double c = 0.9;
    const double p = c * 3 / (static_cast<double>(n - 1) * (n - 2) / 2.0);
    double total = 0.0;
    for (std::uint64_t t = 0; t < 200; ++t)
        total += static_cast<double>(gen_binomial(n, p, 3, derive_seed(5, t)).edge_count());
    const double mean = total / 200.0;
    const double sigma_mean = std::sqrt(c * n) / std::sqrt(200.0);
    CHECK(std::abs(mean - c * n) <= 3.0 * sigma_mean);
}

TEST_CASE("poisson cloning model", "[hypergraph]") {
    const CloneExpansion none = gen_poisson_cloning(100, 0.0, 3, 1);
    CHECK(none.graph.edge_count() == 0);
    CHECK(none.degrees.total == 0);

    // Empirical mean degree within 3 sigma of lambda.
    const std::uint32_t n = 100000;
    const double lambda = 3 * 0.9;
    const CloneExpansion expansion = gen_poisson_cloning(n, lambda, 3, 2024);
    const double mean_degree = static_cast<double>(expansion.degrees.total) / n;
    const double sigma = std::sqrt(lambda / n);
    CHECK(std::abs(mean_degree - lambda) <= 3.0 * sigma);
    CHECK(expansion.graph.multiset_edges());
    CHECK(expansion.leftover_clones < 3);
    CHECK(expansion.graph.edge_count() * 3 + expansion.leftover_clones ==
          expansion.degrees.total);

    // Core fraction agrees with the fixed-point prediction across models.
    const CloneExpansion loaded = gen_poisson_cloning(n, 3 * 0.95, 3, 31);
    const CoreSubgraph core = peel_core(loaded.graph);
    const CoreFractions predicted = core_fractions(0.95, 3);
    CHECK(std::abs(static_cast<double>(core.n2) / n - predicted.vertex_fraction) <= 0.01);
}

TEST_CASE("truncated core model", "[hypergraph]") {
    const double xi3 = solve_xi_star(3);

    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        const CloneExpansion expansion = gen_truncated_core_model(2000, xi3, 3, seed);
        CHECK(std::all_of(expansion.degrees.degrees.begin(), expansion.degrees.degrees.end(),
                          [](std::uint32_t d) { return d >= 2; }));
    }

    // Mean degree within 3 sigma of mu(xi*) = 3.
    const std::uint32_t n2 = 100000;
    const CloneExpansion expansion = gen_truncated_core_model(n2, xi3, 3, 99);
    const double mean = static_cast<double>(expansion.degrees.total) / n2;
    double sq = 0.0;
    for (const std::uint32_t d : expansion.degrees.degrees)
        sq += (d - mean) * (d - mean);
    const double sample_sd = std::sqrt(sq / n2);
    CHECK(std::abs(mean - 3.0) <= 3.0 * sample_sd / std::sqrt(static_cast<double>(n2)));

    // Var(D) = Theta(n2): sample variance of D over seeds, scaled by n2.
    const std::uint32_t small_n2 = 10000;
    std::vector<double> totals;
    for (std::uint64_t t = 0; t < 30; ++t)
        totals.push_back(static_cast<double>(
            gen_truncated_core_model(small_n2, xi3, 3, derive_seed(12, t)).degrees.total));
    double total_mean = 0.0;
    for (const double d : totals) total_mean += d;
    total_mean /= totals.size();
    double var = 0.0;
    for (const double d : totals) var += (d - total_mean) * (d - total_mean);
    var /= totals.size();
    CHECK(var / small_n2 >= 0.01);
    CHECK(var / small_n2 <= 100.0);

    CHECK_THROWS_AS(gen_truncated_core_model(0, 1.0, 3, 1), std::invalid_argument);
    CHECK_THROWS_AS(gen_truncated_core_model(10, 0.0, 3, 1), std::invalid_argument);
}

TEST_CASE("2-core peeling", "[hypergraph]") {
    SECTION("single edge peels to nothing") {
        Hypergraph graph(3, 3);
        graph.add_edge(std::vector<VertexId>{0, 1, 2});
        const CoreSubgraph core = peel_core(graph);
        CHECK(core.n2 == 0);
        CHECK(core.m2 == 0);
    }

    SECTION("doubled edge survives whole") {
        Hypergraph graph(3, 3);
        graph.add_edge(std::vector<VertexId>{0, 1, 2});
        graph.add_edge(std::vector<VertexId>{0, 1, 2});
        const CoreSubgraph core = peel_core(graph);
        CHECK(core.n2 == 3);
        CHECK(core.m2 == 2);
    }

    SECTION("complete 3-graph on 4 vertices is its own core") {
        const CoreSubgraph core = peel_core(k4_three_graph());
        CHECK(core.n2 == 4);
        CHECK(core.m2 == 4);
        CHECK(core.vertices == std::vector<VertexId>{0, 1, 2, 3});
    }

    SECTION("idempotent and order-independent on random graphs") {
        for (std::uint64_t t = 0; t < 1000; ++t) {
            const std::uint64_t seed = derive_seed(404, t);
            Xoshiro256ss rng(seed);
            const int k = 2 + static_cast<int>(rng.below(3));
            const VertexId n = static_cast<VertexId>(k) + static_cast<VertexId>(rng.below(40));
            const std::size_t m = rng.below(2 * n + 1);
            const Hypergraph graph = (t % 3 == 0)
                                         ? gen_poisson_cloning(n, 1.5, k, seed).graph
                                         : gen_multigraph(n, m, k, seed);
            const CoreSubgraph core = peel_core(graph);

            const Hypergraph restricted = core_subgraph(graph, core);
            const CoreSubgraph repeeled = peel_core(restricted);
            CHECK(repeeled.n2 == core.n2);
            CHECK(repeeled.m2 == core.m2);
            CHECK(repeeled.vertices == core.vertices);

            if (t < 200) {
                const CoreSubgraph randomized = peel_randomized(graph, derive_seed(t, 7));
                CHECK(randomized.vertices == core.vertices);
                CHECK(randomized.edge_indices == core.edge_indices);
            }

            // Every survivor keeps at least 2 incidences inside the core.
            const DegreeSequence degrees = degree_sequence(restricted);
            for (const VertexId v : core.vertices) CHECK(degrees.degrees[v] >= 2);
        }
    }
}

TEST_CASE("core density straddles 1 around the threshold", "[hypergraph]") {
    const std::uint32_t n = 30000;
    for (std::uint64_t t = 0; t < 5; ++t) {
        const CoreSubgraph dense =
            peel_core(gen_simple(n, static_cast<std::size_t>(0.95 * n), 3, derive_seed(2, t)));
        REQUIRE(dense.n2 > 0);
        CHECK(dense.m2 > dense.n2);

        const CoreSubgraph sparse =
            peel_core(gen_simple(n, static_cast<std::size_t>(0.88 * n), 3, derive_seed(3, t)));
        REQUIRE(sparse.n2 > 0);
        CHECK(sparse.m2 < sparse.n2);
    }
}

TEST_CASE("degree sequence", "[hypergraph]") {
    CHECK(degree_sequence(Hypergraph(5, 3)).total == 0);

    Hypergraph graph(4, 3);
    graph.add_edge(std::vector<VertexId>{0, 1, 2});
    const DegreeSequence degrees = degree_sequence(graph);
    CHECK(degrees.degrees == std::vector<std::uint32_t>{1, 1, 1, 0});
    CHECK(degrees.total == 3);

    const Hypergraph random = gen_multigraph(50, 30, 4, 8);
    CHECK(degree_sequence(random).total == 30 * 4);
}

TEST_CASE("subset density is an exact rational", "[hypergraph]") {
    Hypergraph graph(4, 3);
    graph.add_edge(std::vector<VertexId>{0, 1, 2});

    const std::vector<VertexId> whole_edge{0, 1, 2};
    CHECK(subset_density(graph, whole_edge) == Rational{1, 3});

    const std::vector<VertexId> partial{0, 1, 3};
    CHECK(subset_density(graph, partial) == Rational{0, 1});

    const std::vector<VertexId> all{0, 1, 2, 3};
    CHECK(subset_density(k4_three_graph(), all) == Rational{1, 1});

    CHECK_THROWS_AS(subset_density(graph, std::vector<VertexId>{}), std::domain_error);
}

TEST_CASE("models agree on core fractions at matched load", "[hypergraph]") {
    const std::uint32_t n = 100000;
    const double c = 0.95;
    const double p = c * 3 / (static_cast<double>(n - 1) * (n - 2) / 2.0);
    for (std::uint64_t t = 0; t < 2; ++t) {
        const CoreSubgraph from_multigraph =
            peel_core(gen_multigraph(n, static_cast<std::size_t>(c * n), 3, derive_seed(8, t)));
        const CoreSubgraph from_binomial =
            peel_core(gen_binomial(n, p, 3, derive_seed(9, t)));
        CHECK(std::abs(static_cast<double>(from_multigraph.n2) -
                       static_cast<double>(from_binomial.n2)) /
                  n <=
              0.01);
    }
}

TEST_CASE("text format round trip", "[hypergraph]") {
    const Hypergraph graph = gen_multigraph(30, 20, 3, 55);
    std::stringstream stream;
    write_hypergraph(stream, graph);
    const Hypergraph parsed = read_hypergraph(stream);
    CHECK(parsed == graph);

    SECTION("comments and blank lines are skipped") {
        std::stringstream annotated;
        annotated << "# a comment\n\n3 1 3\n# another\n0 1 2\n";
        const Hypergraph from_text = read_hypergraph(annotated);
        CHECK(from_text.vertex_count() == 3);
        CHECK(from_text.edge_count() == 1);
        CHECK(!from_text.multiset_edges());
    }

    SECTION("repeated vertex in an edge marks the graph multiset") {
        std::stringstream multiset_text;
        multiset_text << "3 1 3\n0 0 1\n";
        CHECK(read_hypergraph(multiset_text).multiset_edges());
    }

    SECTION("malformed inputs are rejected") {
        std::stringstream missing;
        missing << "4 2 3\n0 1 2\n";
        CHECK_THROWS_AS(read_hypergraph(missing), std::runtime_error);
        std::stringstream garbage;
        garbage << "not a header\n";
        CHECK_THROWS_AS(read_hypergraph(garbage), std::runtime_error);
    }

    SECTION("random graphs of every model round trip") {
        for (std::uint64_t t = 0; t < 50; ++t) {
            Xoshiro256ss rng(derive_seed(66, t));
            const int k = 2 + static_cast<int>(rng.below(4));
            const VertexId n = static_cast<VertexId>(k) + static_cast<VertexId>(rng.below(30));
            const Hypergraph original = gen_multigraph(n, rng.below(50), k, derive_seed(t, 1));
            std::stringstream buffer;
            write_hypergraph(buffer, original);
            CHECK(read_hypergraph(buffer) == original);
        }
    }
}
