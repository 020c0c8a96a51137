#include "diskrig/sparsity.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace diskrig::combinatorics {

namespace {

// Edges normalized to i < j; rejects self-loops, duplicates, bad indices.
std::vector<Edge> checked_edges(const ContactGraph& graph) {
    std::vector<Edge> edges;
    edges.reserve(graph.edges.size());
    for (Edge e : graph.edges) {
        if (e.i == e.j) throw SelfLoopError(msg("self-loop at vertex ", e.i));
        if (e.i > e.j) std::swap(e.i, e.j);
        if (e.i < 0 || e.j >= graph.n) {
            throw IndexOutOfRangeError(msg("edge (", e.i, ", ", e.j, ") out of range for n=", graph.n));
        }
        edges.push_back(e);
    }
    auto sorted = edges;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        auto it = std::adjacent_find(sorted.begin(), sorted.end());
        throw MultiEdgeError(msg("duplicate edge (", it->i, ", ", it->j, ")"));
    }
    return edges;
}

// Directed multigraph state of the pebble game.
struct Game {
    std::vector<int> pebbles;
    std::vector<std::vector<int>> out;  // ascending out-neighbor lists

    explicit Game(int n) : pebbles(static_cast<size_t>(n), 2), out(static_cast<size_t>(n)) {}

    void add_arc(int u, int v) {
        auto& lst = out[static_cast<size_t>(u)];
        lst.insert(std::lower_bound(lst.begin(), lst.end(), v), v);
    }
    void remove_arc(int u, int v) {
        auto& lst = out[static_cast<size_t>(u)];
        lst.erase(std::lower_bound(lst.begin(), lst.end(), v));
    }

    // DFS from src (lowest index first) for a vertex with a free pebble,
    // never taking one from src or banned.  On success reverses the path
    // and moves the pebble to src.
    bool pull_pebble(int src, int banned) {
        std::vector<int> parent(pebbles.size(), -1);
        std::vector<int> stack{src};
        parent[static_cast<size_t>(src)] = src;
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (int v : out[static_cast<size_t>(u)]) {
                if (parent[static_cast<size_t>(v)] != -1) continue;
                parent[static_cast<size_t>(v)] = u;
                if (v != banned && pebbles[static_cast<size_t>(v)] > 0) {
                    --pebbles[static_cast<size_t>(v)];
                    ++pebbles[static_cast<size_t>(src)];
                    for (int w = v; w != src;) {
                        const int pu = parent[static_cast<size_t>(w)];
                        remove_arc(pu, w);
                        add_arc(w, pu);
                        w = pu;
                    }
                    return true;
                }
                stack.push_back(v);
            }
            // Re-sort so the next pop still expands lowest index first.
            std::sort(stack.begin(), stack.end(), std::greater<>());
            stack.erase(std::unique(stack.begin(), stack.end()), stack.end());
        }
        return false;
    }

    std::vector<int> reachable(int u, int v) const {
        std::vector<char> seen(pebbles.size(), 0);
        std::vector<int> stack{u, v};
        seen[static_cast<size_t>(u)] = seen[static_cast<size_t>(v)] = 1;
        while (!stack.empty()) {
            const int w = stack.back();
            stack.pop_back();
            for (int x : out[static_cast<size_t>(w)]) {
                if (!seen[static_cast<size_t>(x)]) {
                    seen[static_cast<size_t>(x)] = 1;
                    stack.push_back(x);
                }
            }
        }
        std::vector<int> verts;
        for (size_t k = 0; k < seen.size(); ++k) {
            if (seen[k]) verts.push_back(static_cast<int>(k));
        }
        return verts;
    }
};

int induced_edge_count(const std::vector<Edge>& edges, const std::vector<char>& in_set) {
    int count = 0;
    for (const Edge& e : edges) {
        if (in_set[static_cast<size_t>(e.i)] && in_set[static_cast<size_t>(e.j)]) ++count;
    }
    return count;
}

}  // namespace

SparsityReport pebble_game_2_3(const ContactGraph& graph) {
    const std::vector<Edge> edges = checked_edges(graph);
    Game game(graph.n);
    SparsityReport report;
    report.is_laman_sparse = true;
    for (const Edge& e : edges) {
        while (game.pebbles[static_cast<size_t>(e.i)] + game.pebbles[static_cast<size_t>(e.j)] < 4) {
            if (!game.pull_pebble(e.i, e.j) && !game.pull_pebble(e.j, e.i)) break;
        }
        if (game.pebbles[static_cast<size_t>(e.i)] + game.pebbles[static_cast<size_t>(e.j)] < 4) {
            SubgraphWitness witness;
            witness.vertices = game.reachable(e.i, e.j);
            std::vector<char> in_set(static_cast<size_t>(graph.n), 0);
            for (int v : witness.vertices) in_set[static_cast<size_t>(v)] = 1;
            witness.edge_count = induced_edge_count(edges, in_set);
            report.is_laman_sparse = false;
            report.violating_subgraph = std::move(witness);
            return report;
        }
        game.add_arc(e.i, e.j);
        --game.pebbles[static_cast<size_t>(e.i)];
    }
    report.is_laman_graph = static_cast<int>(edges.size()) == 2 * graph.n - 3;
    return report;
}

SparsityReport subgraph_oracle(const ContactGraph& graph) {
    if (graph.n > 16) {
        throw TooLargeError(msg("subgraph oracle limited to n <= 16, got ", graph.n));
    }
    const std::vector<Edge> edges = checked_edges(graph);
    SparsityReport report;
    report.is_laman_sparse = true;
    for (std::uint32_t mask = 0; mask < (1u << graph.n); ++mask) {
        const int nprime = std::popcount(mask);
        if (nprime < 2) continue;
        std::vector<char> in_set(static_cast<size_t>(graph.n), 0);
        for (int v = 0; v < graph.n; ++v) in_set[static_cast<size_t>(v)] = (mask >> v) & 1u;
        const int mprime = induced_edge_count(edges, in_set);
        if (mprime > 2 * nprime - 3) {
            SubgraphWitness witness;
            for (int v = 0; v < graph.n; ++v) {
                if (in_set[static_cast<size_t>(v)]) witness.vertices.push_back(v);
            }
            witness.edge_count = mprime;
            report.is_laman_sparse = false;
            report.violating_subgraph = std::move(witness);
            return report;
        }
    }
    report.is_laman_graph = static_cast<int>(edges.size()) == 2 * graph.n - 3;
    return report;
}

namespace {

constexpr double kGeomEps = 1e-12;

// Sign of the signed area of (a, b, c), zeroed below a relative threshold.
int orient(const Vec2& a, const Vec2& b, const Vec2& c) {
    const Vec2 u = b - a;
    const Vec2 v = c - a;
    const double cross = u.x() * v.y() - u.y() * v.x();
    if (std::abs(cross) <= kGeomEps * u.norm() * v.norm()) return 0;
    return cross > 0 ? 1 : -1;
}

bool properly_cross(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    const int o1 = orient(a, b, c);
    const int o2 = orient(a, b, d);
    const int o3 = orient(c, d, a);
    const int o4 = orient(c, d, b);
    return o1 * o2 < 0 && o3 * o4 < 0;
}

bool interior_to_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
    if (orient(a, b, p) != 0) return false;
    const double t = (p - a).dot(b - a) / (b - a).squaredNorm();
    return t > 0.0 && t < 1.0;
}

}  // namespace

bool embedding_is_planar(const DiskPacking& packing, const ContactGraph& graph) {
    const auto& p = packing.centers;
    for (size_t e = 0; e < graph.edges.size(); ++e) {
        const auto [a, b] = graph.edges[e];
        for (size_t f = e + 1; f < graph.edges.size(); ++f) {
            const auto [c, d] = graph.edges[f];
            if (a == c || a == d || b == c || b == d) continue;
            if (properly_cross(p[static_cast<size_t>(a)], p[static_cast<size_t>(b)],
                               p[static_cast<size_t>(c)], p[static_cast<size_t>(d)])) {
                return false;
            }
        }
        for (int v = 0; v < graph.n; ++v) {
            if (v == a || v == b) continue;
            if (interior_to_segment(p[static_cast<size_t>(v)], p[static_cast<size_t>(a)],
                                    p[static_cast<size_t>(b)])) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace diskrig::combinatorics
