#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "diskrig/packing.hpp"

namespace diskrig::rigidity {

/// The m x 3n constraint Jacobian.  Column layout is
/// [p_1x, p_1y, ..., p_nx, p_ny, r_1, ..., r_n]; the row for edge ij holds
/// 2(p_i - p_j) in the p_i block, 2(p_j - p_i) in the p_j block, and
/// -2*||p_i - p_j|| in both radius columns.
struct ConstraintJacobian {
    int n = 0;
    int m = 0;
    Eigen::MatrixXd M;

    Eigen::MatrixXd positional() const { return M.leftCols(2 * n); }
    Eigen::MatrixXd radial() const { return M.rightCols(n); }
};

/// Velocity assignment (p', r').  Bar-framework flexes have r' = 0.
struct FlexVector {
    Eigen::VectorXd p_prime;  // length 2n
    Eigen::VectorXd r_prime;  // length n
};

/// Candidate edge-length equilibrium stress, indexed like graph.edges.
struct StressVector {
    Eigen::VectorXd omega;
};

/// Per-vertex residuals of the two equilibrium conditions: the vector sum
/// sum_j w_ij (p_i - p_j) and the length sum sum_j w_ij ||p_i - p_j||.
struct VertexStressResidual {
    Eigen::Vector2d force = Eigen::Vector2d::Zero();
    double length_rate = 0.0;
};

/// Kernel analysis of the bar rigidity matrix.
struct FlexSpace {
    int rank = 0;            // rank of the rigidity matrix
    int kernel_dim = 0;      // 2n - rank
    int nontrivial_dim = 0;  // kernel_dim - 3
    Eigen::MatrixXd nontrivial;      // 2n x nontrivial_dim, orthonormal, trivial motions projected out
    Eigen::VectorXd singular_values; // of the rigidity matrix, descending

    bool infinitesimally_rigid() const { return nontrivial_dim == 0; }
};

/// Kernel analysis of the full Jacobian M.
struct TangentSpace {
    int rank = 0;
    Eigen::MatrixXd basis;           // 3n x (3n - rank), orthonormal
    Eigen::VectorXd singular_values;

    int dimension() const { return static_cast<int>(basis.cols()); }
};

/// Rank from a descending singular value list with relative threshold
/// eps_rank * sigma_max.  Any singular value within a factor 10 of the
/// threshold is ambiguous and raises RankAmbiguousError: borderline
/// instances are surfaced, never silently classified.
int svd_rank(const Eigen::VectorXd& singular_values, double eps_rank);

/// Builds M.  Throws NotInContactError if a graph edge is not a tangency
/// of the packing.
ConstraintJacobian build_jacobian(const DiskPacking& packing, const ContactGraph& graph,
                                  const Tolerances& tol = {});

/// The m x 2n bar rigidity matrix: the positional block of M without the
/// factor 2.  Its kernel is the space of infinitesimal flexes of the
/// underlying bar framework.
Eigen::MatrixXd rigidity_matrix(const DiskPacking& packing, const ContactGraph& graph,
                                const Tolerances& tol = {});

/// Two translations and one infinitesimal rotation (p'_i = (-p_iy, p_ix)),
/// all with r' = 0.
std::array<FlexVector, 3> trivial_flex_basis(const DiskPacking& packing);

FlexSpace flex_space(const DiskPacking& packing, const ContactGraph& graph,
                     const Tolerances& tol = {});

/// Cokernel of M.  Must come back empty for every valid packing: a packing
/// admits no edge-length equilibrium stress.
std::vector<StressVector> edge_length_stresses(const DiskPacking& packing,
                                               const ContactGraph& graph,
                                               const Tolerances& tol = {});

/// Cokernel of the bar rigidity matrix: classical equilibrium stresses of
/// the underlying framework.  Overbraced packings (m > 2n - 3) have these
/// even though edge_length_stresses is empty; the length condition is what
/// fails.
std::vector<StressVector> bar_equilibrium_stresses(const DiskPacking& packing,
                                                   const ContactGraph& graph,
                                                   const Tolerances& tol = {});

std::vector<VertexStressResidual> stress_residuals(const DiskPacking& packing,
                                                   const ContactGraph& graph,
                                                   const StressVector& stress);

/// Sign-change count around each vertex, traversing incident edges in the
/// cyclic (angular) order of the embedding.  signs holds +1/-1 per edge.
/// Every index is even.  Throws CoincidentNeighborsError if two neighbors
/// of a vertex share a direction (impossible for valid packings).
std::vector<int> vertex_indices(const DiskPacking& packing, const ContactGraph& graph,
                                const std::vector<int>& signs);

/// True iff sum_i I_i <= 4n - 8.  Requires n >= 3.
bool index_bound_check(const DiskPacking& packing, const ContactGraph& graph,
                       const std::vector<int>& signs);

TangentSpace tangent_space(const DiskPacking& packing, const ContactGraph& graph,
                           const Tolerances& tol = {});

/// dim ker(rigidity matrix) = dimension of the space of tangent vectors
/// with r' = 0.  Equals 2n - m exactly when the radii are generic; 3 means
/// rigid (only trivial motions).
int pi_kernel_dimension(const DiskPacking& packing, const ContactGraph& graph,
                        const Tolerances& tol = {});

}  // namespace diskrig::rigidity
