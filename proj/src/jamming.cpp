#include "diskrig/jamming.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "diskrig/lp.hpp"

namespace diskrig::jamming {

namespace {

struct EdgeSplit {
    std::vector<Edge> triangle;
    std::vector<Edge> interior;
};

bool is_boundary_pair(const std::array<int, 3>& boundary, const Edge& e) {
    const auto has = [&](int v) {
        return v == boundary[0] || v == boundary[1] || v == boundary[2];
    };
    return has(e.i) && has(e.j);
}

EdgeSplit check_and_split(const TriCuspPacking& tp, const ContactGraph& graph) {
    const int n = tp.packing.size();
    if (graph.n != n) {
        throw Error(msg("graph has ", graph.n, " vertices but packing has ", n));
    }
    for (int b : tp.boundary) {
        if (b < 0 || b >= n) throw IndexOutOfRangeError(msg("boundary index ", b));
    }
    if (tp.boundary[0] == tp.boundary[1] || tp.boundary[0] == tp.boundary[2] ||
        tp.boundary[1] == tp.boundary[2]) {
        throw Error("boundary indices are not distinct");
    }
    for (int a = 0; a < 3; ++a) {
        for (int b = a + 1; b < 3; ++b) {
            if (!graph.has_edge(tp.boundary[a], tp.boundary[b])) {
                throw Error(msg("boundary disks ", tp.boundary[a], " and ", tp.boundary[b],
                                " are not in contact"));
            }
        }
    }

    const Vec2& q0 = tp.packing.centers[static_cast<size_t>(tp.boundary[0])];
    const Vec2& q1 = tp.packing.centers[static_cast<size_t>(tp.boundary[1])];
    const Vec2& q2 = tp.packing.centers[static_cast<size_t>(tp.boundary[2])];
    const double orient = (q1 - q0).x() * (q2 - q0).y() - (q1 - q0).y() * (q2 - q0).x();
    for (int i : tp.interior()) {
        const Vec2& x = tp.packing.centers[static_cast<size_t>(i)];
        const auto side = [&](const Vec2& a, const Vec2& b) {
            const double cross = (b - a).x() * (x - a).y() - (b - a).y() * (x - a).x();
            const double scale = (b - a).norm() * ((x - a).norm() + 1e-300);
            return cross / scale;
        };
        const double s0 = side(q0, q1);
        const double s1 = side(q1, q2);
        const double s2 = side(q2, q0);
        const double lo = std::min({s0 * orient, s1 * orient, s2 * orient});
        if (lo < -1e-9 * std::abs(orient)) {
            throw Error(msg("interior disk ", i, " lies outside the tri-cusp region"));
        }
    }

    EdgeSplit split;
    for (const Edge& e : graph.edges) {
        if (is_boundary_pair(tp.boundary, e)) {
            split.triangle.push_back(e);
        } else {
            split.interior.push_back(e);
        }
    }
    return split;
}

double nontrivial_norm(const DiskPacking& packing, const Eigen::VectorXd& p_prime) {
    const auto basis = rigidity::trivial_flex_basis(packing);
    Eigen::MatrixXd T(p_prime.size(), 3);
    for (int k = 0; k < 3; ++k) T.col(k) = basis[static_cast<size_t>(k)].p_prime;
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(T);
    const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(p_prime.size(), 3);
    return (p_prime - Q * (Q.transpose() * p_prime)).norm();
}

// Variable layout: disk i gets x+ / x- pairs for both coordinates at
// 4i..4i+3, then interior edge k gets slack s_k and box complement u_k.
struct LpLayout {
    int n = 0;
    int interior_edges = 0;

    int p_plus(int i, int coord) const { return 4 * i + 2 * coord; }
    int p_minus(int i, int coord) const { return 4 * i + 2 * coord + 1; }
    int slack(int k) const { return 4 * n + 2 * k; }
    int box(int k) const { return 4 * n + 2 * k + 1; }
    int total() const { return 4 * n + 2 * interior_edges; }
};

void add_p_coeff(std::vector<lp::Rational>& row, const LpLayout& layout, int disk, int coord,
                 const lp::Rational& value) {
    row[static_cast<size_t>(layout.p_plus(disk, coord))] += value;
    row[static_cast<size_t>(layout.p_minus(disk, coord))] -= value;
}

struct LpWitness {
    bool strict = false;
    lp::Rational objective;
    Eigen::VectorXd p_prime;
};

LpWitness solve_slack_lp(const TriCuspPacking& tp, const EdgeSplit& split) {
    const DiskPacking& packing = tp.packing;
    const int n = packing.size();
    LpLayout layout{n, static_cast<int>(split.interior.size())};

    std::vector<lp::Rational> px(static_cast<size_t>(n));
    std::vector<lp::Rational> py(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        px[static_cast<size_t>(i)] = lp::to_rational(packing.centers[static_cast<size_t>(i)].x());
        py[static_cast<size_t>(i)] = lp::to_rational(packing.centers[static_cast<size_t>(i)].y());
    }

    std::vector<std::vector<lp::Rational>> A;
    std::vector<lp::Rational> b;
    const auto new_row = [&]() -> std::vector<lp::Rational>& {
        A.emplace_back(static_cast<size_t>(layout.total()));
        b.emplace_back(0);
        return A.back();
    };

    const int b0 = tp.boundary[0];
    const int b1 = tp.boundary[1];
    {
        auto& row = new_row();
        add_p_coeff(row, layout, b0, 0, 1);
    }
    {
        auto& row = new_row();
        add_p_coeff(row, layout, b0, 1, 1);
    }
    {
        const lp::Rational dx = px[static_cast<size_t>(b1)] - px[static_cast<size_t>(b0)];
        const lp::Rational dy = py[static_cast<size_t>(b1)] - py[static_cast<size_t>(b0)];
        if (dx == 0 && dy == 0) {
            throw DegenerateGaugeError("first two boundary disks share a center");
        }
        auto& row = new_row();
        add_p_coeff(row, layout, b1, 0, -dy);
        add_p_coeff(row, layout, b1, 1, dx);
    }

    const auto add_edge_row = [&](const Edge& e) -> std::vector<lp::Rational>& {
        auto& row = new_row();
        const lp::Rational dx = px[static_cast<size_t>(e.i)] - px[static_cast<size_t>(e.j)];
        const lp::Rational dy = py[static_cast<size_t>(e.i)] - py[static_cast<size_t>(e.j)];
        add_p_coeff(row, layout, e.i, 0, dx);
        add_p_coeff(row, layout, e.i, 1, dy);
        add_p_coeff(row, layout, e.j, 0, -dx);
        add_p_coeff(row, layout, e.j, 1, -dy);
        return row;
    };

    for (const Edge& e : split.triangle) add_edge_row(e);
    for (int k = 0; k < layout.interior_edges; ++k) {
        auto& row = add_edge_row(split.interior[static_cast<size_t>(k)]);
        row[static_cast<size_t>(layout.slack(k))] = -1;
    }
    for (int k = 0; k < layout.interior_edges; ++k) {
        auto& row = new_row();
        row[static_cast<size_t>(layout.slack(k))] = 1;
        row[static_cast<size_t>(layout.box(k))] = 1;
        b.back() = 1;
    }

    std::vector<lp::Rational> c(static_cast<size_t>(layout.total()));
    for (int k = 0; k < layout.interior_edges; ++k) c[static_cast<size_t>(layout.slack(k))] = 1;

    const lp::SimplexResult result = lp::solve(A, b, c);
    if (result.status != lp::Status::Optimal) {
        throw LpNumericalError("slack LP did not reach an optimum; zero is always feasible");
    }

    LpWitness witness;
    witness.objective = result.objective;
    witness.strict = result.objective > 0;
    witness.p_prime = Eigen::VectorXd::Zero(2 * n);
    if (witness.strict) {
        for (int i = 0; i < n; ++i) {
            for (int coord = 0; coord < 2; ++coord) {
                const lp::Rational value =
                    result.x[static_cast<size_t>(layout.p_plus(i, coord))] -
                    result.x[static_cast<size_t>(layout.p_minus(i, coord))];
                witness.p_prime(2 * i + coord) = lp::to_double(value);
            }
        }
    }
    return witness;
}

}  // namespace

TensegrityVerdict tensegrity_flex_lp(const TriCuspPacking& tp, const ContactGraph& graph,
                                     const Tolerances& tol) {
    tol.check();
    const EdgeSplit split = check_and_split(tp, graph);
    const int n = tp.packing.size();

    TensegrityVerdict verdict;
    const rigidity::FlexSpace space = rigidity::flex_space(tp.packing, graph, tol);
    if (space.nontrivial_dim > 0) {
        rigidity::FlexVector flex;
        flex.p_prime = space.nontrivial.col(0);
        flex.r_prime = Eigen::VectorXd::Zero(n);
        verdict.jammed = false;
        verdict.max_slack = 0.0;
        verdict.witness_nontrivial_norm = nontrivial_norm(tp.packing, flex.p_prime);
        verdict.witness = std::move(flex);
        return verdict;
    }

    const LpWitness lp_witness = solve_slack_lp(tp, split);
    verdict.max_slack = lp::to_double(lp_witness.objective);
    if (!lp_witness.strict) {
        verdict.jammed = true;
        return verdict;
    }
    rigidity::FlexVector flex;
    flex.p_prime = lp_witness.p_prime;
    flex.r_prime = Eigen::VectorXd::Zero(n);
    verdict.jammed = false;
    verdict.witness_nontrivial_norm = nontrivial_norm(tp.packing, flex.p_prime);
    verdict.witness = std::move(flex);
    return verdict;
}

IsostaticReport isostatic_count_check(const TriCuspPacking& tp, const ContactGraph& graph) {
    IsostaticReport report;
    report.m = graph.edge_count();
    report.bound = 2 * tp.packing.size() - 2;
    report.within_bound = report.m <= report.bound;
    return report;
}

bool pi_kernel_scaling_check(const TriCuspPacking& tp, const ContactGraph& graph,
                             const rigidity::FlexVector& tangent) {
    const int n = tp.packing.size();
    if (graph.n != n || tangent.r_prime.size() != n) {
        throw Error("tangent dimensions do not match the packing");
    }
    const double r_inf = tangent.r_prime.cwiseAbs().maxCoeff();
    if (r_inf == 0.0) return true;

    for (int b : tp.boundary) {
        if (std::abs(tangent.r_prime(b)) > 1e-9 * r_inf) return false;
    }
    const std::vector<int> interior = tp.interior();
    if (interior.empty()) return true;
    const int ref = interior.back();
    const double radius_max = *std::max_element(tp.packing.radii.begin(), tp.packing.radii.end());
    for (int j : interior) {
        const double cross = tangent.r_prime(j) * tp.packing.radii[static_cast<size_t>(ref)] -
                             tangent.r_prime(ref) * tp.packing.radii[static_cast<size_t>(j)];
        if (std::abs(cross) > 1e-9 * r_inf * radius_max) return false;
    }
    return true;
}

SpineDecomposition spine_decomposition(const TriCuspPacking& tp, const ContactGraph& graph,
                                       const Tolerances& tol) {
    tol.check();
    check_and_split(tp, graph);
    const int n = tp.packing.size();

    std::vector<int> kept(static_cast<size_t>(n));
    std::iota(kept.begin(), kept.end(), 0);

    for (int round = 0; round <= n; ++round) {
        DiskPacking sub;
        for (int i : kept) {
            sub.centers.push_back(tp.packing.centers[static_cast<size_t>(i)]);
            sub.radii.push_back(tp.packing.radii[static_cast<size_t>(i)]);
        }
        std::array<int, 3> sub_boundary{};
        for (int a = 0; a < 3; ++a) {
            const auto it = std::find(kept.begin(), kept.end(), tp.boundary[a]);
            sub_boundary[static_cast<size_t>(a)] = static_cast<int>(it - kept.begin());
        }
        const TriCuspPacking sub_tp{sub, sub_boundary};
        const ContactGraph sub_graph = contact_graph(sub, tol);
        const TensegrityVerdict verdict = tensegrity_flex_lp(sub_tp, sub_graph, tol);
        if (verdict.jammed) break;

        // Remove the trivial motion that best matches the witness on the
        // boundary coordinates, so boundary displacements read as zero.
        Eigen::VectorXd v = verdict.witness->p_prime;
        const auto basis = rigidity::trivial_flex_basis(sub);
        Eigen::MatrixXd T(v.size(), 3);
        for (int k = 0; k < 3; ++k) T.col(k) = basis[static_cast<size_t>(k)].p_prime;
        Eigen::MatrixXd B(6, 3);
        Eigen::VectorXd rhs(6);
        for (int a = 0; a < 3; ++a) {
            for (int coord = 0; coord < 2; ++coord) {
                const int c = 2 * sub_boundary[static_cast<size_t>(a)] + coord;
                B.row(2 * a + coord) = T.row(c);
                rhs(2 * a + coord) = v(c);
            }
        }
        v -= T * B.colPivHouseholderQr().solve(rhs);

        double d_max = 0.0;
        std::vector<double> moved(kept.size(), 0.0);
        for (size_t k = 0; k < kept.size(); ++k) {
            const bool is_boundary = kept[k] == tp.boundary[0] || kept[k] == tp.boundary[1] ||
                                     kept[k] == tp.boundary[2];
            if (is_boundary) continue;
            moved[k] = Vec2(v(2 * static_cast<int>(k)), v(2 * static_cast<int>(k) + 1)).norm();
            d_max = std::max(d_max, moved[k]);
        }
        if (d_max <= 0.0) break;

        std::vector<int> next;
        for (size_t k = 0; k < kept.size(); ++k) {
            if (moved[k] < 1e-8 * d_max) next.push_back(kept[k]);
        }
        if (next.size() == kept.size()) break;
        kept = std::move(next);
    }

    SpineDecomposition result;
    result.spine = kept;
    std::vector<bool> in_spine(static_cast<size_t>(n), false);
    for (int i : kept) in_spine[static_cast<size_t>(i)] = true;
    for (int i = 0; i < n; ++i) {
        if (!in_spine[static_cast<size_t>(i)]) result.rattlers.push_back(i);
    }
    return result;
}

}  // namespace diskrig::jamming
