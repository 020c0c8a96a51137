#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "diskrig/rng.hpp"
#include "diskrig/sparsity.hpp"

using namespace diskrig;
using namespace diskrig::combinatorics;

namespace {

ContactGraph make_graph(int n, std::vector<Edge> edges) {
    std::sort(edges.begin(), edges.end());
    ContactGraph g;
    g.n = n;
    g.edges = std::move(edges);
    g.edge_rel_gaps.assign(g.edges.size(), 0.0);
    return g;
}

int induced_edges(const ContactGraph& g, const std::vector<int>& vertices) {
    const std::set<int> inside(vertices.begin(), vertices.end());
    int count = 0;
    for (const Edge& e : g.edges) {
        if (inside.count(e.i) && inside.count(e.j)) ++count;
    }
    return count;
}

}  // namespace

TEST_SUITE("sparsity") {
    TEST_CASE("small hand-checked graphs") {
        const ContactGraph triangle = make_graph(3, {{0, 1}, {0, 2}, {1, 2}});
        auto report = pebble_game_2_3(triangle);
        CHECK(report.is_laman_sparse);
        CHECK(report.is_laman_graph);

        const ContactGraph path = make_graph(4, {{0, 1}, {1, 2}, {2, 3}});
        report = pebble_game_2_3(path);
        CHECK(report.is_laman_sparse);
        CHECK_FALSE(report.is_laman_graph);  // m = 3 < 2n-3

        const ContactGraph k4 =
            make_graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
        report = pebble_game_2_3(k4);
        CHECK_FALSE(report.is_laman_sparse);
        REQUIRE(report.violating_subgraph.has_value());
        const auto& witness = *report.violating_subgraph;
        CHECK(witness.edge_count > 2 * static_cast<int>(witness.vertices.size()) - 3);
        CHECK(witness.edge_count == induced_edges(k4, witness.vertices));
    }

    TEST_CASE("dense subgraph hiding in a sparse host is found") {
        // K4 on {2,3,4,5} plus pendant edges; total m = 8 = 2n-3 for n = 6,
        // so only the subgraph count betrays it.
        const ContactGraph g = make_graph(
            6, {{0, 1}, {0, 2}, {1, 3}, {2, 3}, {2, 4}, {2, 5}, {3, 4}, {3, 5}, {4, 5}});
        REQUIRE(g.edge_count() == 2 * 6 - 3);
        const auto report = pebble_game_2_3(g);
        CHECK_FALSE(report.is_laman_sparse);
        CHECK_FALSE(report.is_laman_graph);
        REQUIRE(report.violating_subgraph.has_value());
        const auto& witness = *report.violating_subgraph;
        CHECK(witness.edge_count == induced_edges(g, witness.vertices));
        CHECK(witness.edge_count > 2 * static_cast<int>(witness.vertices.size()) - 3);

        const auto oracle = subgraph_oracle(g);
        CHECK_FALSE(oracle.is_laman_sparse);
    }

    TEST_CASE("non-simple input is rejected") {
        ContactGraph g = make_graph(3, {{0, 1}, {1, 2}});
        g.edges.push_back({1, 1});
        std::sort(g.edges.begin(), g.edges.end());
        CHECK_THROWS_AS(pebble_game_2_3(g), SelfLoopError);

        ContactGraph h = make_graph(3, {{0, 1}, {0, 1}, {1, 2}});
        CHECK_THROWS_AS(pebble_game_2_3(h), MultiEdgeError);
    }

    TEST_CASE("oracle refuses oversized graphs") {
        const ContactGraph g = make_graph(17, {{0, 1}});
        CHECK_THROWS_AS(subgraph_oracle(g), TooLargeError);
    }

    TEST_CASE("pebble game agrees with the exhaustive oracle on random graphs") {
        Rng rng(2024);
        int disagreements = 0;
        int sparse_seen = 0;
        int dense_seen = 0;
        for (int trial = 0; trial < 1200; ++trial) {
            const int n = 3 + static_cast<int>(rng.index(8));  // 3..10
            std::vector<Edge> edges;
            const double p = 0.15 + 0.5 * rng.uniform();
            for (int i = 0; i < n; ++i) {
                for (int j = i + 1; j < n; ++j) {
                    if (rng.uniform() < p) edges.push_back({i, j});
                }
            }
            const ContactGraph g = make_graph(n, std::move(edges));
            const auto fast = pebble_game_2_3(g);
            const auto slow = subgraph_oracle(g);
            if (fast.is_laman_sparse != slow.is_laman_sparse ||
                fast.is_laman_graph != slow.is_laman_graph) {
                ++disagreements;
            }
            if (fast.is_laman_sparse) {
                ++sparse_seen;
            } else {
                ++dense_seen;
                REQUIRE(fast.violating_subgraph.has_value());
                const auto& witness = *fast.violating_subgraph;
                CHECK(witness.edge_count == induced_edges(g, witness.vertices));
                CHECK(witness.edge_count > 2 * static_cast<int>(witness.vertices.size()) - 3);
            }
        }
        CHECK(disagreements == 0);
        // The sample must exercise both outcomes to mean anything.
        CHECK(sparse_seen > 100);
        CHECK(dense_seen > 100);
    }

    TEST_CASE("planarity of straight-line embeddings") {
        DiskPacking square;
        square.centers = {Vec2(0, 0), Vec2(1, 0), Vec2(0, 1), Vec2(1, 1)};
        square.radii = {0.4, 0.4, 0.4, 0.4};

        const ContactGraph crossing = make_graph(4, {{0, 3}, {1, 2}});
        CHECK_FALSE(embedding_is_planar(square, crossing));

        const ContactGraph sides = make_graph(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
        CHECK(embedding_is_planar(square, sides));

        // Sharing an endpoint is not a crossing.
        const ContactGraph fan = make_graph(4, {{0, 1}, {0, 2}, {0, 3}});
        CHECK(embedding_is_planar(square, fan));

        DiskPacking collinear;
        collinear.centers = {Vec2(0, 0), Vec2(2, 0), Vec2(1, 0)};
        collinear.radii = {0.1, 0.1, 0.1};
        const ContactGraph through = make_graph(3, {{0, 1}});
        CHECK_FALSE(embedding_is_planar(collinear, through));  // vertex 2 inside the segment
    }
}
