#include "diskrig/rigidity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace diskrig::rigidity {

namespace {

void check_edges_are_contacts(const DiskPacking& packing, const ContactGraph& graph,
                              const Tolerances& tol) {
    tol.check();
    for (const Edge& e : graph.edges) {
        if (e.i < 0 || e.j >= packing.size() || e.i >= e.j) {
            throw IndexOutOfRangeError(
                msg("edge (", e.i, ", ", e.j, ") out of range for n=", packing.size()));
        }
        const double g = packing.relative_gap(e.i, e.j);
        if (std::abs(g) > tol.contact) {
            throw NotInContactError(
                msg("edge (", e.i, ", ", e.j, ") has relative gap ", g, ", not a contact"));
        }
    }
}

// Columns: two translations and the infinitesimal rotation about the origin.
Eigen::MatrixXd trivial_matrix(const DiskPacking& packing) {
    const int n = packing.size();
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(2 * n, 3);
    for (int i = 0; i < n; ++i) {
        T(2 * i, 0) = 1.0;
        T(2 * i + 1, 1) = 1.0;
        T(2 * i, 2) = -packing.centers[static_cast<size_t>(i)].y();
        T(2 * i + 1, 2) = packing.centers[static_cast<size_t>(i)].x();
    }
    return T;
}

}  // namespace

int svd_rank(const Eigen::VectorXd& singular_values, double eps_rank) {
    if (singular_values.size() == 0) return 0;
    const double sigma_max = singular_values(0);
    if (sigma_max <= 0.0) return 0;
    const double thr = eps_rank * sigma_max;
    int rank = 0;
    for (Eigen::Index k = 0; k < singular_values.size(); ++k) {
        const double s = singular_values(k);
        if (s > thr / 10.0 && s < thr * 10.0) {
            throw RankAmbiguousError(msg("singular value ", s, " within a factor 10 of threshold ",
                                         thr, "; rank decision would be a guess"));
        }
        if (s >= thr) ++rank;
    }
    return rank;
}

ConstraintJacobian build_jacobian(const DiskPacking& packing, const ContactGraph& graph,
                                  const Tolerances& tol) {
    check_edges_are_contacts(packing, graph, tol);
    const int n = packing.size();
    ConstraintJacobian jac;
    jac.n = n;
    jac.m = graph.edge_count();
    jac.M = Eigen::MatrixXd::Zero(jac.m, 3 * n);
    for (int e = 0; e < jac.m; ++e) {
        const auto [i, j] = graph.edges[static_cast<size_t>(e)];
        const Vec2 d = packing.centers[static_cast<size_t>(i)] - packing.centers[static_cast<size_t>(j)];
        jac.M(e, 2 * i) = 2.0 * d.x();
        jac.M(e, 2 * i + 1) = 2.0 * d.y();
        jac.M(e, 2 * j) = -2.0 * d.x();
        jac.M(e, 2 * j + 1) = -2.0 * d.y();
        const double len = d.norm();
        jac.M(e, 2 * n + i) = -2.0 * len;
        jac.M(e, 2 * n + j) = -2.0 * len;
    }
    return jac;
}

Eigen::MatrixXd rigidity_matrix(const DiskPacking& packing, const ContactGraph& graph,
                                const Tolerances& tol) {
    check_edges_are_contacts(packing, graph, tol);
    const int n = packing.size();
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(graph.edge_count(), 2 * n);
    for (int e = 0; e < graph.edge_count(); ++e) {
        const auto [i, j] = graph.edges[static_cast<size_t>(e)];
        const Vec2 d = packing.centers[static_cast<size_t>(i)] - packing.centers[static_cast<size_t>(j)];
        R(e, 2 * i) = d.x();
        R(e, 2 * i + 1) = d.y();
        R(e, 2 * j) = -d.x();
        R(e, 2 * j + 1) = -d.y();
    }
    return R;
}

std::array<FlexVector, 3> trivial_flex_basis(const DiskPacking& packing) {
    const int n = packing.size();
    if (n < 2) throw EmptyPackingError(msg("trivial flexes need n >= 2, got ", n));
    const Eigen::MatrixXd T = trivial_matrix(packing);
    std::array<FlexVector, 3> basis;
    for (int k = 0; k < 3; ++k) {
        basis[static_cast<size_t>(k)].p_prime = T.col(k);
        basis[static_cast<size_t>(k)].r_prime = Eigen::VectorXd::Zero(n);
    }
    return basis;
}

FlexSpace flex_space(const DiskPacking& packing, const ContactGraph& graph,
                     const Tolerances& tol) {
    const int n = packing.size();
    const int m = graph.edge_count();
    const Eigen::MatrixXd R = rigidity_matrix(packing, graph, tol);

    FlexSpace space;
    if (m > 0) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(R);
        space.singular_values = svd.singularValues();
        space.rank = svd_rank(space.singular_values, tol.rank);
    }
    space.kernel_dim = 2 * n - space.rank;

    // Nontrivial flexes = kernel vectors orthogonal to the rigid motions,
    // computed as the kernel of R stacked on an orthonormal trivial basis.
    const Eigen::MatrixXd T = trivial_matrix(packing);
    const Eigen::MatrixXd Q =
        Eigen::HouseholderQR<Eigen::MatrixXd>(T).householderQ() * Eigen::MatrixXd::Identity(2 * n, 3);
    Eigen::MatrixXd stacked(m + 3, 2 * n);
    if (m > 0) stacked.topRows(m) = R;
    stacked.bottomRows(3) = Q.transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd_stacked(stacked, Eigen::ComputeFullV);
    const int rank_stacked = svd_rank(svd_stacked.singularValues(), tol.rank);
    if (rank_stacked != space.rank + 3) {
        throw RankAmbiguousError(msg("rigid motions not cleanly separable: rank ", space.rank,
                                     " vs stacked rank ", rank_stacked));
    }
    space.nontrivial_dim = 2 * n - rank_stacked;
    space.nontrivial = svd_stacked.matrixV().rightCols(space.nontrivial_dim);
    return space;
}

namespace {

std::vector<StressVector> cokernel(const Eigen::MatrixXd& A, double eps_rank) {
    const int m = static_cast<int>(A.rows());
    if (m == 0) return {};
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullU);
    const int rank = svd_rank(svd.singularValues(), eps_rank);
    std::vector<StressVector> basis;
    for (int k = rank; k < m; ++k) {
        basis.push_back(StressVector{svd.matrixU().col(k)});
    }
    return basis;
}

}  // namespace

std::vector<StressVector> edge_length_stresses(const DiskPacking& packing,
                                               const ContactGraph& graph,
                                               const Tolerances& tol) {
    return cokernel(build_jacobian(packing, graph, tol).M, tol.rank);
}

std::vector<StressVector> bar_equilibrium_stresses(const DiskPacking& packing,
                                                   const ContactGraph& graph,
                                                   const Tolerances& tol) {
    return cokernel(rigidity_matrix(packing, graph, tol), tol.rank);
}

std::vector<VertexStressResidual> stress_residuals(const DiskPacking& packing,
                                                   const ContactGraph& graph,
                                                   const StressVector& stress) {
    if (stress.omega.size() != graph.edge_count()) {
        throw Error(msg("stress has ", stress.omega.size(), " entries for ", graph.edge_count(),
                        " edges"));
    }
    std::vector<VertexStressResidual> residuals(static_cast<size_t>(packing.size()));
    for (int e = 0; e < graph.edge_count(); ++e) {
        const auto [i, j] = graph.edges[static_cast<size_t>(e)];
        const double w = stress.omega(e);
        const Vec2 d = packing.centers[static_cast<size_t>(i)] - packing.centers[static_cast<size_t>(j)];
        residuals[static_cast<size_t>(i)].force += w * d;
        residuals[static_cast<size_t>(j)].force -= w * d;
        residuals[static_cast<size_t>(i)].length_rate += w * d.norm();
        residuals[static_cast<size_t>(j)].length_rate += w * d.norm();
    }
    return residuals;
}

std::vector<int> vertex_indices(const DiskPacking& packing, const ContactGraph& graph,
                                const std::vector<int>& signs) {
    if (static_cast<int>(signs.size()) != graph.edge_count()) {
        throw Error(msg("sign vector has ", signs.size(), " entries for ", graph.edge_count(),
                        " edges"));
    }
    for (int s : signs) {
        if (s != 1 && s != -1) throw Error(msg("sign entries must be +1 or -1, got ", s));
    }

    std::vector<std::vector<std::pair<double, int>>> fans(static_cast<size_t>(packing.size()));
    for (int e = 0; e < graph.edge_count(); ++e) {
        const auto [i, j] = graph.edges[static_cast<size_t>(e)];
        const Vec2 d = packing.centers[static_cast<size_t>(j)] - packing.centers[static_cast<size_t>(i)];
        fans[static_cast<size_t>(i)].push_back({std::atan2(d.y(), d.x()), e});
        fans[static_cast<size_t>(j)].push_back({std::atan2(-d.y(), -d.x()), e});
    }

    std::vector<int> indices(static_cast<size_t>(packing.size()), 0);
    for (size_t v = 0; v < fans.size(); ++v) {
        auto& fan = fans[v];
        std::sort(fan.begin(), fan.end());
        const int deg = static_cast<int>(fan.size());
        for (int k = 0; k + 1 < deg; ++k) {
            if (fan[static_cast<size_t>(k + 1)].first - fan[static_cast<size_t>(k)].first < 1e-12) {
                throw CoincidentNeighborsError(msg("vertex ", v, " has two neighbors at angle ",
                                                   fan[static_cast<size_t>(k)].first));
            }
        }
        if (deg >= 2 &&
            fan[0].first + 2.0 * std::numbers::pi - fan[static_cast<size_t>(deg - 1)].first < 1e-12) {
            throw CoincidentNeighborsError(msg("vertex ", v, " has two neighbors at angle ",
                                               fan[0].first));
        }
        if (deg < 2) continue;
        int changes = 0;
        for (int k = 0; k < deg; ++k) {
            const int s_here = signs[static_cast<size_t>(fan[static_cast<size_t>(k)].second)];
            const int s_next = signs[static_cast<size_t>(fan[static_cast<size_t>((k + 1) % deg)].second)];
            if (s_here != s_next) ++changes;
        }
        indices[v] = changes;
    }
    return indices;
}

bool index_bound_check(const DiskPacking& packing, const ContactGraph& graph,
                       const std::vector<int>& signs) {
    if (packing.size() < 3) {
        throw Error(msg("index bound needs n >= 3, got ", packing.size()));
    }
    const std::vector<int> indices = vertex_indices(packing, graph, signs);
    int total = 0;
    for (int idx : indices) total += idx;
    return total <= 4 * packing.size() - 8;
}

TangentSpace tangent_space(const DiskPacking& packing, const ContactGraph& graph,
                           const Tolerances& tol) {
    const ConstraintJacobian jac = build_jacobian(packing, graph, tol);
    TangentSpace space;
    if (jac.m == 0) {
        space.basis = Eigen::MatrixXd::Identity(3 * jac.n, 3 * jac.n);
        return space;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac.M, Eigen::ComputeFullV);
    space.singular_values = svd.singularValues();
    space.rank = svd_rank(space.singular_values, tol.rank);
    space.basis = svd.matrixV().rightCols(3 * jac.n - space.rank);
    return space;
}

int pi_kernel_dimension(const DiskPacking& packing, const ContactGraph& graph,
                        const Tolerances& tol) {
    const Eigen::MatrixXd R = rigidity_matrix(packing, graph, tol);
    if (R.rows() == 0) return 2 * packing.size();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(R);
    return 2 * packing.size() - svd_rank(svd.singularValues(), tol.rank);
}

}  // namespace diskrig::rigidity
