#pragma once

#include <cstdint>

#include "diskrig/packing.hpp"

namespace diskrig::generators {

struct GeneratorConfig {
    std::uint64_t seed = 0;
    int n = 10;
    double r_min = 0.8;
    double r_max = 1.2;
    double newton_tol = 1e-12;
    int newton_max_iter = 50;

    /// Throws unless 0 < r_min < r_max and r_max / r_min <= 10.
    void check() const;
};

struct GeneratedPacking {
    DiskPacking packing;
    ContactGraph graph;
};

/// Center of a new disk of radius r_new tangent to both given disks,
/// i.e. the intersection of the circles of radii r_a + r_new and
/// r_b + r_new about p_a and p_b.  side +1 picks the intersection to the
/// left of the directed line p_a -> p_b, -1 the right.  Throws
/// NoIntersectionError when the circles miss each other.
Vec2 tangent_disk_position(const Vec2& p_a, double r_a, const Vec2& p_b, double r_b,
                           double r_new, int side);

/// Grows a packing disk by disk on the exterior: a seeded triangle, then
/// each new disk tangent to a randomly chosen existing contact pair,
/// rejected if it comes within a 1e-2 relative gap of any other disk.  The
/// result always has exactly m = 2n - 3 contacts.  Throws
/// PlacementFailureError when 64 attempts for one disk all fail (the
/// caller retries with a fresh seed).
GeneratedPacking sequential_packing(const GeneratorConfig& config, const Tolerances& tol = {});

/// Equal-radius triangular lattice patch: all sites within the given hex
/// distance of the origin, ordered by ring then angle.  rings=1 gives
/// n=7, m=12.
DiskPacking hexagonal_patch(int rings, double radius);

/// Tri-cusp instance with seeded boundary radii.  interior_n = 1 places the
/// inner tangent disk (contacts all three boundary disks, m = 6 = 2n-2);
/// interior_n = 2 builds the braced pair (each interior disk on a different
/// boundary pair, tangent to each other, m = 8 = 2n-2); larger counts fill
/// the cusp disk by disk with two contacts each.
TriCuspPacking tri_cusp_packing(const GeneratorConfig& config, int interior_n,
                                const Tolerances& tol = {});

/// The braced two-disk tri-cusp (same as tri_cusp_packing with
/// interior_n = 2): jammed.
TriCuspPacking fig5a_packing(const GeneratorConfig& config, const Tolerances& tol = {});

/// The stacked two-disk tri-cusp: both interior disks tangent to the same
/// boundary pair and to each other, m = 8, but free to escape up the
/// channel; not jammed.
TriCuspPacking fig5b_packing(const GeneratorConfig& config, const Tolerances& tol = {});

/// Applies seeded relative radius noise of size delta, then re-solves the
/// centers on the same contact set (gauge-pinned Gauss-Newton).  Requires
/// the input to be infinitesimally rigid.  Throws NotInfRigidError,
/// NewtonDivergenceError, or ContactGraphChangedError if the perturbed
/// packing gained/lost contacts or overlaps.
DiskPacking perturb_to_generic(const DiskPacking& packing, const ContactGraph& graph,
                               double delta, const GeneratorConfig& config,
                               const Tolerances& tol = {});

}  // namespace diskrig::generators
