#pragma once

#include <vector>

#include "diskrig/packing.hpp"

namespace diskrig {

struct NewtonOptions {
    double tol = 1e-12;  // infinity-norm bound on the tangency residuals
    int max_iter = 20;
};

struct NewtonResult {
    int iterations = 0;
    double residual = 0.0;
    std::vector<double> residual_history;  // infinity norm before each iteration
};

/// Gauss-Newton solve of the tangency equations ||p_i - p_j|| = r_i + r_j
/// over the given edges, moving only the center coordinates marked free
/// (free_coords has 2n entries, [p_1x, p_1y, p_2x, ...]).  Radii are never
/// touched.  Steps are minimum-norm least-squares solutions, so consistent
/// but underdetermined systems converge to the nearest solution.
///
/// Mutates packing.centers in place.  Throws NewtonDivergenceError when the
/// residual is not below tol after max_iter iterations or becomes
/// non-finite.
NewtonResult solve_contacts(DiskPacking& packing, const std::vector<Edge>& edges,
                            const std::vector<bool>& free_coords,
                            const NewtonOptions& options = {});

/// Standard gauge: every coordinate free except both of p_1 and one
/// coordinate of p_2 (the one whose variation rotates the frame, i.e. the
/// smaller component of p_2 - p_1), pinning the 3 rigid-motion degrees of
/// freedom.  For a packing in canonical position (p_1 at the origin, p_2 on
/// the positive x-axis) this pins p_1 and p_2y.
std::vector<bool> gauge_free_coords(const DiskPacking& packing);

/// The three pinned coordinate indices of gauge_free_coords, ascending.
std::vector<int> gauge_pinned_coords(const DiskPacking& packing);

}  // namespace diskrig
