#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <vector>

#include "cuckoo/hypergraph.hpp"
#include "cuckoo/orientation.hpp"
#include "cuckoo/rng.hpp"

using namespace cuckoo;

namespace {

Hypergraph k4_three_graph() {
    Hypergraph graph(4, 3);
    graph.add_edge(std::vector<VertexId>{0, 1, 2});
    graph.add_edge(std::vector<VertexId>{0, 1, 3});
    graph.add_edge(std::vector<VertexId>{0, 2, 3});
    graph.add_edge(std::vector<VertexId>{1, 2, 3});
    return graph;
}

Hypergraph four_copies_of_one_edge() {
    Hypergraph graph(3, 3);
    for (int i = 0; i < 4; ++i) graph.add_edge(std::vector<VertexId>{0, 1, 2});
    return graph;
}

Hypergraph random_small(std::uint64_t seed, VertexId max_n = 14) {
    Xoshiro256ss rng(seed);
    const int k = 2 + static_cast<int>(rng.below(4));
    const VertexId n =
        static_cast<VertexId>(k) + static_cast<VertexId>(rng.below(max_n - k + 1));
    const std::size_t m = 1 + rng.below(n + 2);
    return gen_multigraph(n, m, k, derive_seed(seed, 1));
}

} // namespace

TEST_CASE("matching on canonical instances", "[orientation]") {
    Hypergraph single(3, 3);
    single.add_edge(std::vector<VertexId>{0, 1, 2});
    CHECK(max_matching(single).size == 1);
    CHECK(is_orientable(single));

    const Hypergraph crowded = four_copies_of_one_edge();
    CHECK(max_matching(crowded).size == 3);  // only 3 locations exist
    CHECK(!is_orientable(crowded));

    const Hypergraph k4 = k4_three_graph();
    const MatchingResult perfect = max_matching(k4);
    CHECK(perfect.size == 4);
    CHECK(is_orientable(k4));
    CHECK(validate_assignment(k4, perfect.assignment) == 4);

    CHECK(is_orientable(Hypergraph(5, 3)));  // no items, nothing to place
}

TEST_CASE("matching refuses multiset edges", "[orientation]") {
    Hypergraph multiset(4, 3, /*multiset_edges=*/true);
    multiset.add_edge(std::vector<VertexId>{0, 0, 1});
    CHECK_THROWS_AS(max_matching(multiset), std::invalid_argument);
    CHECK_THROWS_AS(is_orientable(multiset), std::invalid_argument);
}

TEST_CASE("matching size bounds and monotonicity", "[orientation]") {
    for (std::uint64_t t = 0; t < 300; ++t) {
        Hypergraph graph = random_small(derive_seed(21, t));
        const std::size_t before = max_matching(graph).size;
        CHECK(before <= std::min<std::size_t>(graph.edge_count(), graph.vertex_count()));

        std::vector<VertexId> extra;
        Xoshiro256ss rng(derive_seed(22, t));
        while (extra.size() < static_cast<std::size_t>(graph.arity())) {
            const auto v = static_cast<VertexId>(rng.below(graph.vertex_count()));
            if (std::find(extra.begin(), extra.end(), v) == extra.end()) extra.push_back(v);
        }
        graph.add_edge(extra);
        const std::size_t after = max_matching(graph).size;
        CHECK(after >= before);
        CHECK(after <= before + 1);
    }
}

TEST_CASE("assignments are always valid", "[orientation]") {
    for (std::uint64_t t = 0; t < 500; ++t) {
        const Hypergraph graph = random_small(derive_seed(23, t));
        const MatchingResult matching = max_matching(graph);
        CHECK(validate_assignment(graph, matching.assignment) == matching.size);
    }
}

TEST_CASE("a corrupted assignment is caught", "[orientation]") {
    const Hypergraph k4 = k4_three_graph();
    MatchingResult matching = max_matching(k4);
    REQUIRE(matching.size == 4);

    Assignment duplicated = matching.assignment;
    duplicated.edge_to_vertex[1] = duplicated.edge_to_vertex[0];  // vertex used twice
    CHECK(!validate_assignment(k4, duplicated).has_value());

    Assignment outsider = matching.assignment;
    outsider.edge_to_vertex[3] = 0;  // vertex 0 is not in edge {1,2,3}
    CHECK(!validate_assignment(k4, outsider).has_value());
}

TEST_CASE("brute-force dense subsets", "[orientation]") {
    Hypergraph single(3, 3);
    single.add_edge(std::vector<VertexId>{0, 1, 2});
    CHECK(!brute_force_dense_subset(single, true).has_value());
    CHECK(!brute_force_dense_subset(single, false).has_value());

    const auto over = brute_force_dense_subset(four_copies_of_one_edge(), true);
    REQUIRE(over.has_value());
    CHECK(over->vertex_set == std::vector<VertexId>{0, 1, 2});
    CHECK(over->internal_edges == 4);
    CHECK(over->over_dense);

    const Hypergraph k4 = k4_three_graph();
    CHECK(!brute_force_dense_subset(k4, true).has_value());
    const auto exact = brute_force_dense_subset(k4, false);
    REQUIRE(exact.has_value());
    CHECK(exact->vertex_set == std::vector<VertexId>{0, 1, 2, 3});
    CHECK(exact->internal_edges == 4);
    CHECK(!exact->over_dense);

    CHECK_THROWS_AS(brute_force_dense_subset(Hypergraph(25, 3), true), std::length_error);
}

TEST_CASE("orientability equals absence of over-dense subsets", "[orientation]") {
    for (std::uint64_t t = 0; t < 800; ++t) {
        const Hypergraph graph = random_small(derive_seed(31, t));
        const bool orientable = is_orientable(graph);
        const bool has_violation = brute_force_dense_subset(graph, true).has_value();
        REQUIRE(orientable == !has_violation);
    }
}

TEST_CASE("minimum 1-dense witnesses live in the 2-core", "[orientation]") {
    int found = 0;
    for (std::uint64_t t = 0; t < 400; ++t) {
        const Hypergraph graph = random_small(derive_seed(37, t), 12);
        const auto witness = brute_force_dense_subset(graph, false);
        if (!witness.has_value()) continue;
        ++found;
        const CoreSubgraph core = peel_core(graph);
        for (const VertexId v : witness->vertex_set)
            CHECK(std::binary_search(core.vertices.begin(), core.vertices.end(), v));
    }
    CHECK(found > 50);  // the sample actually exercised the property
}

TEST_CASE("maximal 1-dense structural signature", "[orientation]") {
    const Hypergraph k4 = k4_three_graph();
    const std::vector<VertexId> all{0, 1, 2, 3};
    CHECK(check_maximal_1dense_properties(k4, all));

    // {0,1,2} is met by edge {0,1,3} in exactly k-1 = 2 vertices.
    const std::vector<VertexId> triple{0, 1, 2};
    CHECK(!check_maximal_1dense_properties(k4, triple));

    // e_U > |U| fails the e_U = v_U requirement.
    const std::vector<VertexId> crowded_set{0, 1, 2};
    CHECK(!check_maximal_1dense_properties(four_copies_of_one_edge(), crowded_set));
}

TEST_CASE("bad subsets of 3-graphs", "[orientation]") {
    Hypergraph single(6, 3);
    single.add_edge(std::vector<VertexId>{0, 1, 2});
    CHECK(!bad_subset_search_3graph(single, 6).has_value());

    const auto bad = bad_subset_search_3graph(k4_three_graph(), 4);
    REQUIRE(bad.has_value());
    CHECK(*bad == std::vector<VertexId>{0, 1, 2, 3});

    // Any bad set needs e_U = |U| >= 4 edges.
    const Hypergraph sparse = gen_simple(10, 3, 3, 5);
    CHECK(!bad_subset_search_3graph(sparse, 10).has_value());

    Hypergraph not_three(5, 4);
    CHECK_THROWS_AS(bad_subset_search_3graph(not_three, 5), std::domain_error);
    CHECK_THROWS_AS(bad_subset_search_3graph(Hypergraph(25, 3), 5), std::length_error);

    // Whenever a bad set is reported it satisfies the defining predicate.
    for (std::uint64_t t = 0; t < 200; ++t) {
        Xoshiro256ss rng(derive_seed(41, t));
        const VertexId n = 5 + static_cast<VertexId>(rng.below(8));
        const Hypergraph graph = gen_multigraph(n, 1 + rng.below(n + 2), 3, derive_seed(t, 3));
        const auto found = bad_subset_search_3graph(graph, n);
        if (!found.has_value()) continue;
        CHECK(found->size() >= 4);
        CHECK(check_maximal_1dense_properties(graph, *found));
    }
}
