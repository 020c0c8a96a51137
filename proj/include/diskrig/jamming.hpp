#pragma once

#include <optional>
#include <vector>

#include "diskrig/packing.hpp"
#include "diskrig/rigidity.hpp"

namespace diskrig::jamming {

struct TensegrityVerdict {
    bool jammed = false;
    std::optional<rigidity::FlexVector> witness;
    double max_slack = 0.0;
    double witness_nontrivial_norm = 0.0;
};

// Two-stage first-order jamming test. Stage A treats every contact as an
// equality bar and looks for a nontrivial flex; stage B solves an exact
// rational LP that pins the boundary triangle, keeps interior contacts
// non-penetrating, and maximizes the total contact slack. Jammed means both
// stages come up empty.
TensegrityVerdict tensegrity_flex_lp(const TriCuspPacking& packing, const ContactGraph& graph,
                                     const Tolerances& tol = {});

struct IsostaticReport {
    int m = 0;
    int bound = 0;
    bool within_bound = false;
};

IsostaticReport isostatic_count_check(const TriCuspPacking& packing, const ContactGraph& graph);

// True iff the tangent's radius rates vanish on the boundary and are
// proportional to the radii on the interior disks.
bool pi_kernel_scaling_check(const TriCuspPacking& packing, const ContactGraph& graph,
                             const rigidity::FlexVector& tangent);

struct SpineDecomposition {
    std::vector<int> spine;
    std::vector<int> rattlers;
};

// Greedy fixed point: repeatedly drop interior disks that move in an escape
// witness, until the remaining sub-packing is jammed. Boundary disks are
// always kept.
SpineDecomposition spine_decomposition(const TriCuspPacking& packing, const ContactGraph& graph,
                                       const Tolerances& tol = {});

}  // namespace diskrig::jamming
