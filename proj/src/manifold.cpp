#include "diskrig/manifold.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "diskrig/rigidity.hpp"

namespace diskrig::manifold {

namespace {

Eigen::MatrixXd trivial_matrix(const DiskPacking& packing) {
    const int n = packing.size();
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(2 * n, 3);
    const auto basis = rigidity::trivial_flex_basis(packing);
    for (int k = 0; k < 3; ++k) T.col(k) = basis[static_cast<size_t>(k)].p_prime;
    return T;
}

// Adds a rigid motion so that the three pinned coordinates of v vanish;
// the result is still a flex of the same framework.
void zero_gauge_components(Eigen::VectorXd& v, const DiskPacking& packing,
                           const std::vector<int>& pinned) {
    const Eigen::MatrixXd T = trivial_matrix(packing);
    Eigen::Matrix3d G;
    Eigen::Vector3d rhs;
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) G(a, b) = T(pinned[static_cast<size_t>(a)], b);
        rhs(a) = v(pinned[static_cast<size_t>(a)]);
    }
    const Eigen::FullPivLU<Eigen::Matrix3d> lu(G);
    if (!lu.isInvertible()) {
        throw DegenerateGaugeError("pinned coordinates do not span the rigid motions");
    }
    v -= T * lu.solve(rhs);
}

double max_edge_gap(const DiskPacking& packing, const ContactGraph& graph) {
    double worst = 0.0;
    for (const Edge& e : graph.edges) {
        const double gap = (packing.centers[static_cast<size_t>(e.i)] -
                            packing.centers[static_cast<size_t>(e.j)])
                               .norm() -
                           (packing.radii[static_cast<size_t>(e.i)] +
                            packing.radii[static_cast<size_t>(e.j)]);
        worst = std::max(worst, std::abs(gap));
    }
    return worst;
}

}  // namespace

FlexTrajectory follow_flex(const DiskPacking& packing, const ContactGraph& graph, int steps,
                           double h, const Tolerances& tol, const NewtonOptions& corrector) {
    tol.check();
    if (steps < 1) throw Error(msg("steps must be >= 1, got ", steps));
    const double r_min = *std::min_element(packing.radii.begin(), packing.radii.end());
    if (!(h > 0.0) || h > 1e-2 * r_min) {
        throw Error(msg("step size ", h, " outside (0, ", 1e-2 * r_min, "]"));
    }

    rigidity::FlexSpace space = rigidity::flex_space(packing, graph, tol);
    if (space.nontrivial_dim < 1) {
        throw RigidInputError("packing is infinitesimally rigid; nothing to follow");
    }

    const std::vector<int> pinned = gauge_pinned_coords(packing);
    const std::vector<bool> free_coords = gauge_free_coords(packing);

    FlexTrajectory traj;
    traj.h = h;
    traj.states.push_back(packing);
    traj.residuals.push_back(max_edge_gap(packing, graph));

    DiskPacking current = packing;
    Eigen::VectorXd prev;
    for (int step = 1; step <= steps; ++step) {
        if (step > 1) {
            space = rigidity::flex_space(current, graph, tol);
            if (space.nontrivial_dim < 1) {
                throw RigidInputError(msg("nontrivial flex space vanished at step ", step));
            }
        }
        Eigen::VectorXd v;
        if (prev.size() == 0) {
            v = space.nontrivial.col(0);
        } else {
            v = space.nontrivial * (space.nontrivial.transpose() * prev);
            if (v.norm() < 1e-8) v = space.nontrivial.col(0);
        }
        zero_gauge_components(v, current, pinned);
        const double norm = v.norm();
        if (!(norm > 1e-12)) {
            throw DegenerateGaugeError(msg("flex direction collapsed at step ", step));
        }
        v /= norm;
        if (prev.size() == 0) {
            for (Eigen::Index c = 0; c < v.size(); ++c) {
                if (std::abs(v(c)) > 1e-9) {
                    if (v(c) < 0.0) v = -v;
                    break;
                }
            }
        } else if (v.dot(prev) < 0.0) {
            v = -v;
        }

        for (int i = 0; i < current.size(); ++i) {
            current.centers[static_cast<size_t>(i)] += h * Vec2(v(2 * i), v(2 * i + 1));
        }
        std::vector<double> history;
        try {
            NewtonResult result = solve_contacts(current, graph.edges, free_coords, corrector);
            history = std::move(result.residual_history);
        } catch (const NewtonDivergenceError& e) {
            throw CorrectorDivergenceError(msg("corrector failed at step ", step, ": ", e.what()),
                                           step);
        }

        for (int i = 0; i < current.size(); ++i) {
            for (int j = i + 1; j < current.size(); ++j) {
                const double g = current.relative_gap(i, j);
                if (graph.has_edge(i, j)) {
                    if (std::abs(g) > tol.contact) {
                        throw ContactBrokenError(msg("edge (", i, ", ", j,
                                                     ") drifted to relative gap ", g, " at step ",
                                                     step),
                                                 step, i, j);
                    }
                } else if (g <= tol.contact) {
                    throw NewContactError(msg("pair (", i, ", ", j, ") reached relative gap ", g,
                                              " at step ", step),
                                          step, i, j);
                }
            }
        }

        traj.states.push_back(current);
        traj.residuals.push_back(max_edge_gap(current, graph));
        traj.corrector_histories.push_back(std::move(history));
        prev = std::move(v);
    }
    return traj;
}

double nontrivial_displacement(const FlexTrajectory& traj) {
    if (traj.states.empty()) throw Error("empty trajectory");
    const DiskPacking& a = traj.states.front();
    const DiskPacking& b = traj.states.back();
    const int n = a.size();

    Vec2 ca = Vec2::Zero();
    Vec2 cb = Vec2::Zero();
    for (int i = 0; i < n; ++i) {
        ca += a.centers[static_cast<size_t>(i)];
        cb += b.centers[static_cast<size_t>(i)];
    }
    ca /= n;
    cb /= n;

    // Optimal planar rotation from the centered cross-covariance.
    double dot = 0.0;
    double cross = 0.0;
    for (int i = 0; i < n; ++i) {
        const Vec2 u = a.centers[static_cast<size_t>(i)] - ca;
        const Vec2 w = b.centers[static_cast<size_t>(i)] - cb;
        dot += u.dot(w);
        cross += u.x() * w.y() - u.y() * w.x();
    }
    const double theta = std::atan2(cross, dot);
    const Eigen::Rotation2D<double> rot(theta);

    double dist2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const Vec2 u = rot * (a.centers[static_cast<size_t>(i)] - ca);
        dist2 += (u - (b.centers[static_cast<size_t>(i)] - cb)).squaredNorm();
    }
    return std::sqrt(dist2);
}

int fiber_dimension(const DiskPacking& packing, const ContactGraph& graph,
                    const Tolerances& tol) {
    return rigidity::pi_kernel_dimension(packing, graph, tol);
}

}  // namespace diskrig::manifold
