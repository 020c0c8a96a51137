#pragma once

#include <string>
#include <vector>

#include "diskrig/newton.hpp"
#include "diskrig/packing.hpp"

namespace diskrig::manifold {

/// Raised when a trajectory cannot be continued.  `step` is the 1-based
/// step that failed; `i`, `j` identify the offending disk pair when the
/// contact set changed (-1 otherwise).
struct TrajectoryAbortError : Error {
    int step;
    int i;
    int j;
    TrajectoryAbortError(const std::string& what, int step_, int i_ = -1, int j_ = -1)
        : Error(what), step(step_), i(i_), j(j_) {}
};

/// A non-edge pair reached contact range: the flex left the stratum.
struct NewContactError : TrajectoryAbortError {
    using TrajectoryAbortError::TrajectoryAbortError;
};

/// An edge's tangency could not be restored by the corrector.
struct ContactBrokenError : TrajectoryAbortError {
    using TrajectoryAbortError::TrajectoryAbortError;
};

struct CorrectorDivergenceError : TrajectoryAbortError {
    using TrajectoryAbortError::TrajectoryAbortError;
};

struct FlexTrajectory {
    std::vector<DiskPacking> states;  // states[0] is the input packing
    double h = 0.0;
    std::vector<double> residuals;  // per state, infinity norm of the edge gaps
    std::vector<std::vector<double>> corrector_histories;  // residual before each corrector pass
};

/// Predictor-corrector continuation along a nontrivial flex at fixed radii.
///
/// Each step takes an Euler predictor of length h along a unit vector of
/// the nontrivial bar-flex space (recomputed at the current state, pinned
/// gauge components zeroed by adding rigid motions, direction aligned with
/// the previous step), then corrects back onto the tangency constraints by
/// Gauss-Newton with the radii and gauge held fixed.  The contact set must
/// stay exactly constant: any non-edge pair entering contact range or any
/// unrestorable edge aborts with the step index.
///
/// Requires h <= 1e-2 * min radius.  Throws RigidInputError when the
/// packing has no nontrivial flex.
FlexTrajectory follow_flex(const DiskPacking& packing, const ContactGraph& graph, int steps,
                           double h, const Tolerances& tol = {},
                           const NewtonOptions& corrector = {});

/// Distance between the final and initial states minimized over the orbit
/// of rigid motions (planar Procrustes over rotation + translation).
/// Vanishes for trajectories that only move rigidly.
double nontrivial_displacement(const FlexTrajectory& traj);

/// Tangent dimension of the fixed-radius fiber at this packing
/// (= dim ker of the bar rigidity matrix).  2n - m for generic radii;
/// anything larger flags non-generic radii.
int fiber_dimension(const DiskPacking& packing, const ContactGraph& graph,
                    const Tolerances& tol = {});

}  // namespace diskrig::manifold
