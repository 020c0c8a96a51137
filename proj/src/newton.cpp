#include "diskrig/newton.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace diskrig {

std::vector<int> gauge_pinned_coords(const DiskPacking& packing) {
    if (packing.size() < 2) {
        throw EmptyPackingError(msg("gauge needs n >= 2, got ", packing.size()));
    }
    const Vec2 d = packing.centers[1] - packing.centers[0];
    if (d.norm() == 0.0) {
        throw DegenerateGaugeError("first two centers coincide; rotation cannot be pinned");
    }
    // A rotation about p_1 moves p_2 along (-d_y, d_x); pin the p_2
    // coordinate on which that motion is largest.
    const int rot_coord = std::abs(d.x()) >= std::abs(d.y()) ? 3 : 2;
    return {0, 1, rot_coord};
}

std::vector<bool> gauge_free_coords(const DiskPacking& packing) {
    std::vector<bool> free(static_cast<size_t>(2 * packing.size()), true);
    for (int c : gauge_pinned_coords(packing)) free[static_cast<size_t>(c)] = false;
    return free;
}

NewtonResult solve_contacts(DiskPacking& packing, const std::vector<Edge>& edges,
                            const std::vector<bool>& free_coords, const NewtonOptions& options) {
    const int n = packing.size();
    if (static_cast<int>(free_coords.size()) != 2 * n) {
        throw Error(msg("free_coords has ", free_coords.size(), " entries for 2n=", 2 * n));
    }
    std::vector<int> free_index;
    for (int c = 0; c < 2 * n; ++c) {
        if (free_coords[static_cast<size_t>(c)]) free_index.push_back(c);
    }
    const int nf = static_cast<int>(free_index.size());
    const int me = static_cast<int>(edges.size());

    auto residual = [&]() {
        Eigen::VectorXd f(me);
        for (int e = 0; e < me; ++e) {
            const auto [i, j] = edges[static_cast<size_t>(e)];
            f(e) = (packing.centers[static_cast<size_t>(i)] - packing.centers[static_cast<size_t>(j)]).norm() -
                   (packing.radii[static_cast<size_t>(i)] + packing.radii[static_cast<size_t>(j)]);
        }
        return f;
    };

    NewtonResult result;
    for (int iter = 0; iter <= options.max_iter; ++iter) {
        const Eigen::VectorXd f = residual();
        const double rinf = me > 0 ? f.lpNorm<Eigen::Infinity>() : 0.0;
        result.residual_history.push_back(rinf);
        if (!std::isfinite(rinf)) {
            throw NewtonDivergenceError(msg("non-finite residual at iteration ", iter));
        }
        if (rinf <= options.tol) {
            result.iterations = iter;
            result.residual = rinf;
            return result;
        }
        if (iter == options.max_iter) break;

        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(me, nf);
        std::vector<int> col_of(static_cast<size_t>(2 * n), -1);
        for (int k = 0; k < nf; ++k) col_of[static_cast<size_t>(free_index[static_cast<size_t>(k)])] = k;
        for (int e = 0; e < me; ++e) {
            const auto [i, j] = edges[static_cast<size_t>(e)];
            const Vec2 d = packing.centers[static_cast<size_t>(i)] - packing.centers[static_cast<size_t>(j)];
            const double len = d.norm();
            if (len == 0.0) {
                throw NewtonDivergenceError(msg("centers ", i, " and ", j, " coincided"));
            }
            const Vec2 u = d / len;
            const int cols[4] = {2 * i, 2 * i + 1, 2 * j, 2 * j + 1};
            const double vals[4] = {u.x(), u.y(), -u.x(), -u.y()};
            for (int k = 0; k < 4; ++k) {
                const int col = col_of[static_cast<size_t>(cols[k])];
                if (col >= 0) J(e, col) = vals[k];
            }
        }
        const Eigen::VectorXd step = J.completeOrthogonalDecomposition().solve(-f);
        for (int k = 0; k < nf; ++k) {
            const int c = free_index[static_cast<size_t>(k)];
            packing.centers[static_cast<size_t>(c / 2)][c % 2] += step(k);
        }
    }
    throw NewtonDivergenceError(msg("residual ", result.residual_history.back(), " above ",
                                    options.tol, " after ", options.max_iter, " iterations"));
}

}  // namespace diskrig
