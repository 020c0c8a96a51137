#pragma once

#include <Eigen/Core>
#include <array>
#include <utility>
#include <vector>

#include "diskrig/errors.hpp"

namespace diskrig {

using Vec2 = Eigen::Vector2d;

/// Numerical tolerances shared by all classification steps.
///
/// `contact` is relative to r_i + r_j, so contact detection is invariant
/// under uniform scaling of the whole packing.  `rank` is relative to the
/// largest singular value of whatever matrix is being ranked.
struct Tolerances {
    double contact = 1e-9;
    double rank = 1e-8;

    /// Throws if a tolerance is outside (0, 1e-3).
    void check() const;
};

/// A planar disk packing: n centers and n positive radii.
///
/// Validity (pairwise interior disjointness up to tolerance) is not
/// enforced by the type; call validate().
struct DiskPacking {
    std::vector<Vec2> centers;
    std::vector<double> radii;

    int size() const { return static_cast<int>(radii.size()); }

    /// Gap between disks i and j relative to r_i + r_j.  Zero means exact
    /// tangency, negative means overlap.
    double relative_gap(int i, int j) const {
        const double sum = radii[static_cast<size_t>(i)] + radii[static_cast<size_t>(j)];
        return ((centers[static_cast<size_t>(j)] - centers[static_cast<size_t>(i)]).norm() - sum) / sum;
    }
};

/// Unordered disk index pair with i < j.
struct Edge {
    int i;
    int j;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Contact graph of a packing: one vertex per disk, one edge per tangent
/// pair.  Relative gaps are retained for every pair so that near-contacts
/// can be inspected after the fact.
struct ContactGraph {
    int n = 0;
    std::vector<Edge> edges;                // sorted lexicographically
    std::vector<double> edge_rel_gaps;      // aligned with edges
    std::vector<double> pair_rel_gaps;      // all pairs i<j, row-major

    int edge_count() const { return static_cast<int>(edges.size()); }

    /// Index of pair (i,j), i != j, into pair_rel_gaps.
    int pair_index(int i, int j) const;
    double rel_gap(int i, int j) const { return pair_rel_gaps[static_cast<size_t>(pair_index(i, j))]; }
    bool has_edge(int i, int j) const;

    /// Neighbor lists (ascending), derived from the edge set.
    std::vector<std::vector<int>> adjacency() const;

    /// Copy of this graph with one edge removed.  Throws NotInContactError
    /// if (i,j) is not an edge.
    ContactGraph without_edge(int i, int j) const;
};

/// A packing whose `boundary` triple indexes three mutually tangent disks
/// forming the container; every other disk is interior to the cusp region
/// between them.
struct TriCuspPacking {
    DiskPacking packing;
    std::array<int, 3> boundary{0, 1, 2};

    /// Ascending indices of the interior disks.
    std::vector<int> interior() const;

    /// Interior radii divided by the last disk's radius, in interior order.
    std::vector<double> radius_ratios() const;
};

struct ValidationReport {
    bool valid = false;
    std::vector<std::pair<Edge, double>> overlaps;  // pair + relative gap
    std::vector<Edge> contacts;
};

/// Checks pairwise disjointness and reports overlapping and tangent pairs.
/// Throws EmptyPackingError (n < 2) or NonpositiveRadiusError.
ValidationReport validate(const DiskPacking& packing, const Tolerances& tol = {});

/// Extracts the contact graph.  Throws OverlapError if validation fails.
ContactGraph contact_graph(const DiskPacking& packing, const Tolerances& tol = {});

/// Residual vector of the tangency constraints: component for edge ij is
/// ||p_i - p_j|| - (r_i + r_j).  Throws IndexOutOfRangeError.
Eigen::VectorXd gap_vector(const DiskPacking& packing, const ContactGraph& graph);

}  // namespace diskrig
