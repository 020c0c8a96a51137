#include "diskrig/packing.hpp"

#include <algorithm>
#include <cmath>

namespace diskrig {

void Tolerances::check() const {
    if (!(contact > 0.0 && contact < 1e-3)) {
        throw Error(msg("contact tolerance ", contact, " outside (0, 1e-3)"));
    }
    if (!(rank > 0.0 && rank < 1e-3)) {
        throw Error(msg("rank tolerance ", rank, " outside (0, 1e-3)"));
    }
}

int ContactGraph::pair_index(int i, int j) const {
    if (i > j) std::swap(i, j);
    if (i < 0 || j >= n || i == j) {
        throw IndexOutOfRangeError(msg("pair (", i, ", ", j, ") out of range for n=", n));
    }
    // row-major upper triangle: offset of row i, then (j - i - 1)
    return i * n - i * (i + 1) / 2 + (j - i - 1);
}

bool ContactGraph::has_edge(int i, int j) const {
    if (i > j) std::swap(i, j);
    return std::binary_search(edges.begin(), edges.end(), Edge{i, j});
}

ContactGraph ContactGraph::without_edge(int i, int j) const {
    if (i > j) std::swap(i, j);
    ContactGraph out = *this;
    auto it = std::find(out.edges.begin(), out.edges.end(), Edge{i, j});
    if (it == out.edges.end()) {
        throw NotInContactError(msg("edge (", i, ", ", j, ") not present"));
    }
    out.edge_rel_gaps.erase(out.edge_rel_gaps.begin() + (it - out.edges.begin()));
    out.edges.erase(it);
    return out;
}

std::vector<std::vector<int>> ContactGraph::adjacency() const {
    std::vector<std::vector<int>> adj(static_cast<size_t>(n));
    for (const Edge& e : edges) {
        adj[static_cast<size_t>(e.i)].push_back(e.j);
        adj[static_cast<size_t>(e.j)].push_back(e.i);
    }
    for (auto& nbrs : adj) std::sort(nbrs.begin(), nbrs.end());
    return adj;
}

std::vector<int> TriCuspPacking::interior() const {
    std::vector<int> inner;
    for (int i = 0; i < packing.size(); ++i) {
        if (i != boundary[0] && i != boundary[1] && i != boundary[2]) inner.push_back(i);
    }
    return inner;
}

std::vector<double> TriCuspPacking::radius_ratios() const {
    const std::vector<int> inner = interior();
    if (inner.empty()) return {};
    const double r_last = packing.radii[static_cast<size_t>(inner.back())];
    std::vector<double> ratios;
    ratios.reserve(inner.size());
    for (int i : inner) ratios.push_back(packing.radii[static_cast<size_t>(i)] / r_last);
    return ratios;
}

namespace {

void check_well_formed(const DiskPacking& packing) {
    if (packing.size() < 2) {
        throw EmptyPackingError(msg("packing needs n >= 2 disks, got ", packing.size()));
    }
    if (packing.centers.size() != packing.radii.size()) {
        throw Error(msg("center/radius count mismatch: ", packing.centers.size(), " vs ",
                        packing.radii.size()));
    }
    for (size_t k = 0; k < packing.radii.size(); ++k) {
        if (!(packing.radii[k] > 0.0) || !std::isfinite(packing.radii[k])) {
            throw NonpositiveRadiusError(msg("radius ", packing.radii[k], " of disk ", k, " not positive"));
        }
    }
}

}  // namespace

ValidationReport validate(const DiskPacking& packing, const Tolerances& tol) {
    tol.check();
    check_well_formed(packing);
    ValidationReport report;
    const int n = packing.size();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double g = packing.relative_gap(i, j);
            if (g < -tol.contact) {
                report.overlaps.push_back({Edge{i, j}, g});
            } else if (g <= tol.contact) {
                report.contacts.push_back(Edge{i, j});
            }
        }
    }
    report.valid = report.overlaps.empty();
    return report;
}

ContactGraph contact_graph(const DiskPacking& packing, const Tolerances& tol) {
    tol.check();
    check_well_formed(packing);
    const int n = packing.size();
    ContactGraph graph;
    graph.n = n;
    graph.pair_rel_gaps.reserve(static_cast<size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double g = packing.relative_gap(i, j);
            graph.pair_rel_gaps.push_back(g);
            if (g < -tol.contact) {
                throw OverlapError(msg("disks ", i, " and ", j, " overlap (relative gap ", g, ")"));
            }
            if (std::abs(g) <= tol.contact) {
                graph.edges.push_back(Edge{i, j});
                graph.edge_rel_gaps.push_back(g);
            }
        }
    }
    return graph;
}

Eigen::VectorXd gap_vector(const DiskPacking& packing, const ContactGraph& graph) {
    const int n = packing.size();
    Eigen::VectorXd gaps(graph.edge_count());
    for (int e = 0; e < graph.edge_count(); ++e) {
        const auto [i, j] = graph.edges[static_cast<size_t>(e)];
        if (i < 0 || j >= n || i >= j) {
            throw IndexOutOfRangeError(msg("edge (", i, ", ", j, ") out of range for n=", n));
        }
        gaps[e] = (packing.centers[static_cast<size_t>(j)] - packing.centers[static_cast<size_t>(i)]).norm() -
                  (packing.radii[static_cast<size_t>(i)] + packing.radii[static_cast<size_t>(j)]);
    }
    return gaps;
}

}  // namespace diskrig
