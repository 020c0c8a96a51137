#include "diskrig/generators.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "diskrig/newton.hpp"
#include "diskrig/rigidity.hpp"
#include "diskrig/rng.hpp"

namespace diskrig::generators {

void GeneratorConfig::check() const {
    if (!(r_min > 0.0) || !(r_max > r_min)) {
        throw Error(msg("radius range [", r_min, ", ", r_max, "] must satisfy 0 < r_min < r_max"));
    }
    if (r_max / r_min > 10.0) {
        throw Error(msg("radius ratio ", r_max / r_min, " > 10 is too ill-conditioned"));
    }
    if (!(newton_tol > 0.0) || newton_max_iter < 1) {
        throw Error("newton_tol must be positive and newton_max_iter >= 1");
    }
}

Vec2 tangent_disk_position(const Vec2& p_a, double r_a, const Vec2& p_b, double r_b,
                           double r_new, int side) {
    if (side != 1 && side != -1) throw Error(msg("side must be +1 or -1, got ", side));
    if (!(r_a > 0.0) || !(r_b > 0.0) || !(r_new > 0.0)) {
        throw NonpositiveRadiusError("tangent placement needs positive radii");
    }
    const double big_a = r_a + r_new;
    const double big_b = r_b + r_new;
    const Vec2 delta = p_b - p_a;
    const double d = delta.norm();
    if (d == 0.0) throw NoIntersectionError("base centers coincide");
    if (d > big_a + big_b) {
        throw NoIntersectionError(msg("separation ", d, " exceeds ", big_a + big_b));
    }
    if (d < std::abs(big_a - big_b)) {
        throw NoIntersectionError(msg("separation ", d, " inside ", std::abs(big_a - big_b)));
    }
    const double along = (d * d + big_a * big_a - big_b * big_b) / (2.0 * d);
    // Negative only by rounding in the tangent case; the guards above hold.
    const double h2 = std::max(0.0, big_a * big_a - along * along);
    const Vec2 u = delta / d;
    return p_a + along * u + side * std::sqrt(h2) * Vec2(-u.y(), u.x());
}

namespace {

struct BoundaryTriangle {
    std::array<Vec2, 3> p;
    std::array<double, 3> r;
    double soddy_radius;
};

double inner_soddy_radius(double r0, double r1, double r2) {
    const double k0 = 1.0 / r0;
    const double k1 = 1.0 / r1;
    const double k2 = 1.0 / r2;
    return 1.0 / (k0 + k1 + k2 + 2.0 * std::sqrt(k0 * k1 + k1 * k2 + k2 * k0));
}

BoundaryTriangle make_boundary(Rng& rng, const GeneratorConfig& config) {
    BoundaryTriangle b;
    for (double& r : b.r) r = rng.uniform(config.r_min, config.r_max);
    b.p[0] = Vec2(0.0, 0.0);
    b.p[1] = Vec2(b.r[0] + b.r[1], 0.0);
    b.p[2] = tangent_disk_position(b.p[0], b.r[0], b.p[1], b.r[1], b.r[2], +1);
    b.soddy_radius = inner_soddy_radius(b.r[0], b.r[1], b.r[2]);
    return b;
}

// Side of the directed line p_i -> p_j on which the third boundary center
// (and hence the cusp region) lies.
int inner_side(const BoundaryTriangle& b, int i, int j) {
    const int k = 3 - i - j;
    const Vec2 u = b.p[static_cast<size_t>(j)] - b.p[static_cast<size_t>(i)];
    const Vec2 v = b.p[static_cast<size_t>(k)] - b.p[static_cast<size_t>(i)];
    return u.x() * v.y() - u.y() * v.x() > 0.0 ? 1 : -1;
}

bool inside_triangle(const Vec2& q, const std::array<Vec2, 3>& p) {
    int pos = 0;
    int neg = 0;
    for (int k = 0; k < 3; ++k) {
        const Vec2 a = p[static_cast<size_t>(k)];
        const Vec2 b = p[static_cast<size_t>((k + 1) % 3)];
        const double cross = (b.x() - a.x()) * (q.y() - a.y()) - (b.y() - a.y()) * (q.x() - a.x());
        if (cross > 0.0) ++pos;
        if (cross < 0.0) ++neg;
    }
    return pos == 0 || neg == 0;
}

// Complex Descartes relation for the center of the inner tangent circle;
// the sign ambiguity is settled by the smaller tangency residual.
Vec2 inner_soddy_center(const BoundaryTriangle& b, double r_inner) {
    using C = std::complex<double>;
    std::array<C, 3> z;
    std::array<double, 3> k{};
    for (int i = 0; i < 3; ++i) {
        z[static_cast<size_t>(i)] = C(b.p[static_cast<size_t>(i)].x(), b.p[static_cast<size_t>(i)].y());
        k[static_cast<size_t>(i)] = 1.0 / b.r[static_cast<size_t>(i)];
    }
    const C weighted = k[0] * z[0] + k[1] * z[1] + k[2] * z[2];
    const C root = std::sqrt(k[0] * k[1] * z[0] * z[1] + k[1] * k[2] * z[1] * z[2] +
                             k[2] * k[0] * z[2] * z[0]);
    const double k_inner = 1.0 / r_inner;
    Vec2 best;
    double best_err = std::numeric_limits<double>::infinity();
    for (const double sgn : {1.0, -1.0}) {
        const C zc = (weighted + sgn * 2.0 * root) / k_inner;
        const Vec2 c(zc.real(), zc.imag());
        double err = 0.0;
        for (int i = 0; i < 3; ++i) {
            err = std::max(err, std::abs((c - b.p[static_cast<size_t>(i)]).norm() -
                                         (b.r[static_cast<size_t>(i)] + r_inner)));
        }
        if (err < best_err) {
            best_err = err;
            best = c;
        }
    }
    return best;
}

std::vector<bool> interior_free_coords(int n, int first_interior) {
    std::vector<bool> free(static_cast<size_t>(2 * n), false);
    for (int c = 2 * first_interior; c < 2 * n; ++c) free[static_cast<size_t>(c)] = true;
    return free;
}

void check_expected_contacts(const GeneratedPacking& result, const std::vector<Edge>& expected) {
    if (result.graph.edges != expected) {
        throw PlacementFailureError(msg("contact set drifted: expected ", expected.size(),
                                        " edges, found ", result.graph.edge_count()));
    }
}

TriCuspPacking finish_tricusp(DiskPacking packing, std::vector<Edge> edges,
                              const std::vector<Edge>& newton_edges,
                              const GeneratorConfig& config, const Tolerances& tol,
                              double margin) {
    solve_contacts(packing, newton_edges, interior_free_coords(packing.size(), 3),
                   NewtonOptions{config.newton_tol, config.newton_max_iter});
    std::sort(edges.begin(), edges.end());
    for (int i = 0; i < packing.size(); ++i) {
        for (int j = i + 1; j < packing.size(); ++j) {
            if (std::binary_search(edges.begin(), edges.end(), Edge{i, j})) continue;
            if (packing.relative_gap(i, j) < margin) {
                throw PlacementFailureError(msg("disks ", i, " and ", j,
                                                " too close for a clean non-contact"));
            }
        }
    }
    GeneratedPacking result{std::move(packing), {}};
    result.graph = contact_graph(result.packing, tol);
    check_expected_contacts(result, edges);
    return TriCuspPacking{std::move(result.packing), {0, 1, 2}};
}

TriCuspPacking soddy_packing(const GeneratorConfig& config, const Tolerances& tol) {
    Rng rng(config.seed);
    const BoundaryTriangle b = make_boundary(rng, config);
    const double r3 = b.soddy_radius;
    DiskPacking packing;
    packing.radii = {b.r[0], b.r[1], b.r[2], r3};
    packing.centers = {b.p[0], b.p[1], b.p[2], inner_soddy_center(b, r3)};
    const std::vector<Edge> edges = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    return finish_tricusp(std::move(packing), edges, {{0, 3}, {1, 3}, {2, 3}}, config, tol, 1e-6);
}

// Shared scaffolding for the two-disk constructions: interior radii
// s*rho3, s*rho4 with s found by bisection on the gap between the two
// interior disks, each of which is placed tangent to its boundary pair.
struct PairScheme {
    std::array<int, 2> pair3;
    std::array<int, 2> pair4;
    std::vector<Edge> edges;         // full expected contact set, unsorted ok
    std::vector<Edge> newton_edges;  // tangencies involving interior disks
};

TriCuspPacking two_disk_tricusp(const GeneratorConfig& config, const Tolerances& tol,
                                const PairScheme& scheme, double rho3, double rho4,
                                const BoundaryTriangle& b) {
    const int side3 = inner_side(b, scheme.pair3[0], scheme.pair3[1]);
    const int side4 = inner_side(b, scheme.pair4[0], scheme.pair4[1]);
    auto centers_at = [&](double s) {
        const auto place = [&](const std::array<int, 2>& pr, double r_new, int side) {
            return tangent_disk_position(b.p[static_cast<size_t>(pr[0])],
                                         b.r[static_cast<size_t>(pr[0])],
                                         b.p[static_cast<size_t>(pr[1])],
                                         b.r[static_cast<size_t>(pr[1])], r_new, side);
        };
        return std::array<Vec2, 2>{place(scheme.pair3, s * rho3, side3),
                                   place(scheme.pair4, s * rho4, side4)};
    };
    auto gap34 = [&](double s) {
        const auto c = centers_at(s);
        return (c[0] - c[1]).norm() - s * (rho3 + rho4);
    };

    // The interior disks cannot outgrow the inner tangent disk, which caps
    // the bracket and excludes the spurious large-s tangency branch.
    double hi = b.soddy_radius / std::max(rho3, rho4);
    double lo = 1e-6 * hi;
    if (!(gap34(lo) > 0.0) || !(gap34(hi) < 0.0)) {
        throw PlacementFailureError(msg("no tangency scale bracket for seed ", config.seed));
    }
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        (gap34(mid) > 0.0 ? lo : hi) = mid;
    }
    const double s = 0.5 * (lo + hi);

    const auto c = centers_at(s);
    DiskPacking packing;
    packing.radii = {b.r[0], b.r[1], b.r[2], s * rho3, s * rho4};
    packing.centers = {b.p[0], b.p[1], b.p[2], c[0], c[1]};
    return finish_tricusp(std::move(packing), scheme.edges, scheme.newton_edges, config, tol,
                          1e-6);
}

}  // namespace

TriCuspPacking fig5a_packing(const GeneratorConfig& config, const Tolerances& tol) {
    config.check();
    tol.check();
    Rng rng(config.seed);
    const BoundaryTriangle b = make_boundary(rng, config);
    const double rho3 = rng.uniform(config.r_min, config.r_max);
    const double rho4 = rng.uniform(config.r_min, config.r_max);
    // Braced: the interior disks sit in different corners sharing boundary
    // disk 2, and touch each other across the middle.
    PairScheme scheme;
    scheme.pair3 = {0, 2};
    scheme.pair4 = {1, 2};
    scheme.edges = {{0, 1}, {0, 2}, {1, 2}, {0, 3}, {2, 3}, {1, 4}, {2, 4}, {3, 4}};
    scheme.newton_edges = {{0, 3}, {2, 3}, {1, 4}, {2, 4}, {3, 4}};
    return two_disk_tricusp(config, tol, scheme, rho3, rho4, b);
}

TriCuspPacking fig5b_packing(const GeneratorConfig& config, const Tolerances& tol) {
    config.check();
    tol.check();
    Rng rng(config.seed);
    const BoundaryTriangle b = make_boundary(rng, config);
    double rho3 = rng.uniform(config.r_min, config.r_max);
    double rho4 = rng.uniform(config.r_min, config.r_max);
    // Stacked: both interior disks in the corner between boundary disks 0
    // and 1, the smaller one deeper in the cusp.
    if (rho3 > rho4) std::swap(rho3, rho4);
    PairScheme scheme;
    scheme.pair3 = {0, 1};
    scheme.pair4 = {0, 1};
    scheme.edges = {{0, 1}, {0, 2}, {1, 2}, {0, 3}, {1, 3}, {0, 4}, {1, 4}, {3, 4}};
    scheme.newton_edges = {{0, 3}, {1, 3}, {0, 4}, {1, 4}, {3, 4}};
    return two_disk_tricusp(config, tol, scheme, rho3, rho4, b);
}

TriCuspPacking tri_cusp_packing(const GeneratorConfig& config, int interior_n,
                                const Tolerances& tol) {
    config.check();
    tol.check();
    if (interior_n < 1) throw Error(msg("interior_n must be >= 1, got ", interior_n));
    if (interior_n == 1) return soddy_packing(config, tol);
    if (interior_n == 2) return fig5a_packing(config, tol);

    Rng rng(config.seed);
    const BoundaryTriangle b = make_boundary(rng, config);
    DiskPacking packing;
    packing.radii = {b.r[0], b.r[1], b.r[2]};
    packing.centers = {b.p[0], b.p[1], b.p[2]};
    std::vector<Edge> edges = {{0, 1}, {0, 2}, {1, 2}};
    const double scale =
        b.soddy_radius / (config.r_max * (1.0 + 0.7 * (interior_n - 1)));
    constexpr double kMargin = 1e-3;
    for (int k = 0; k < interior_n; ++k) {
        const int idx = 3 + k;
        bool placed = false;
        for (int attempt = 0; attempt < 64 && !placed; ++attempt) {
            const double r_new = scale * rng.uniform(config.r_min, config.r_max);
            const Edge base = edges[static_cast<size_t>(rng.index(static_cast<int>(edges.size())))];
            const int side = rng.sign();
            Vec2 c;
            try {
                c = tangent_disk_position(packing.centers[static_cast<size_t>(base.i)],
                                          packing.radii[static_cast<size_t>(base.i)],
                                          packing.centers[static_cast<size_t>(base.j)],
                                          packing.radii[static_cast<size_t>(base.j)], r_new, side);
            } catch (const NoIntersectionError&) {
                continue;
            }
            if (!inside_triangle(c, b.p)) continue;
            bool clear = true;
            for (int d = 0; d < packing.size() && clear; ++d) {
                if (d == base.i || d == base.j) continue;
                const double sum = r_new + packing.radii[static_cast<size_t>(d)];
                clear = ((c - packing.centers[static_cast<size_t>(d)]).norm() - sum) / sum >= kMargin;
            }
            if (!clear) continue;
            packing.centers.push_back(c);
            packing.radii.push_back(r_new);
            edges.push_back({base.i, idx});
            edges.push_back({base.j, idx});
            placed = true;
        }
        if (!placed) {
            throw PlacementFailureError(msg("could not place interior disk ", idx,
                                            " after 64 attempts (seed ", config.seed, ")"));
        }
    }
    std::sort(edges.begin(), edges.end());
    GeneratedPacking result{std::move(packing), {}};
    result.graph = contact_graph(result.packing, tol);
    check_expected_contacts(result, edges);
    return TriCuspPacking{std::move(result.packing), {0, 1, 2}};
}

GeneratedPacking sequential_packing(const GeneratorConfig& config, const Tolerances& tol) {
    config.check();
    tol.check();
    if (config.n < 3) throw Error(msg("sequential packing needs n >= 3, got ", config.n));
    Rng rng(config.seed);
    auto draw = [&] { return rng.uniform(config.r_min, config.r_max); };

    DiskPacking packing;
    packing.radii = {draw(), draw(), draw()};
    packing.centers = {Vec2(0.0, 0.0), Vec2(packing.radii[0] + packing.radii[1], 0.0)};
    packing.centers.push_back(tangent_disk_position(packing.centers[0], packing.radii[0],
                                                    packing.centers[1], packing.radii[1],
                                                    packing.radii[2], +1));
    std::vector<Edge> edges = {{0, 1}, {0, 2}, {1, 2}};

    // Generous clearance keeps the contact set stable under the radius
    // perturbations the rigidity experiments apply afterwards.
    constexpr double kMargin = 1e-2;
    for (int k = 3; k < config.n; ++k) {
        bool placed = false;
        for (int attempt = 0; attempt < 64 && !placed; ++attempt) {
            const double r_new = draw();
            const Edge base = edges[static_cast<size_t>(rng.index(static_cast<int>(edges.size())))];
            const int side = rng.sign();
            const Vec2 c = tangent_disk_position(packing.centers[static_cast<size_t>(base.i)],
                                                 packing.radii[static_cast<size_t>(base.i)],
                                                 packing.centers[static_cast<size_t>(base.j)],
                                                 packing.radii[static_cast<size_t>(base.j)],
                                                 r_new, side);
            bool clear = true;
            for (int d = 0; d < packing.size() && clear; ++d) {
                if (d == base.i || d == base.j) continue;
                const double sum = r_new + packing.radii[static_cast<size_t>(d)];
                clear = ((c - packing.centers[static_cast<size_t>(d)]).norm() - sum) / sum >= kMargin;
            }
            if (!clear) continue;
            packing.centers.push_back(c);
            packing.radii.push_back(r_new);
            edges.push_back({base.i, k});
            edges.push_back({base.j, k});
            placed = true;
        }
        if (!placed) {
            throw PlacementFailureError(msg("could not place disk ", k, " after 64 attempts (seed ",
                                            config.seed, ")"));
        }
    }
    std::sort(edges.begin(), edges.end());
    GeneratedPacking result{std::move(packing), {}};
    result.graph = contact_graph(result.packing, tol);
    check_expected_contacts(result, edges);
    return result;
}

DiskPacking hexagonal_patch(int rings, double radius) {
    if (rings < 1) throw Error(msg("rings must be >= 1, got ", rings));
    if (!(radius > 0.0)) throw NonpositiveRadiusError(msg("radius ", radius, " not positive"));
    struct Site {
        int ring;
        double angle;
        Vec2 pos;
    };
    std::vector<Site> sites;
    for (int q = -rings; q <= rings; ++q) {
        for (int r = std::max(-rings, -q - rings); r <= std::min(rings, -q + rings); ++r) {
            const int ring = (std::abs(q) + std::abs(r) + std::abs(q + r)) / 2;
            const Vec2 pos = 2.0 * radius * Vec2(q + 0.5 * r, r * (std::sqrt(3.0) / 2.0));
            double angle = ring == 0 ? 0.0 : std::atan2(pos.y(), pos.x());
            if (angle < 0.0) angle += 2.0 * std::numbers::pi;
            sites.push_back({ring, angle, pos});
        }
    }
    std::sort(sites.begin(), sites.end(), [](const Site& a, const Site& b) {
        return a.ring != b.ring ? a.ring < b.ring : a.angle < b.angle;
    });
    DiskPacking packing;
    for (const Site& s : sites) {
        packing.centers.push_back(s.pos);
        packing.radii.push_back(radius);
    }
    return packing;
}

DiskPacking perturb_to_generic(const DiskPacking& packing, const ContactGraph& graph,
                               double delta, const GeneratorConfig& config,
                               const Tolerances& tol) {
    config.check();
    tol.check();
    if (!(delta > 0.0) || delta >= 1.0) {
        throw Error(msg("perturbation scale ", delta, " outside (0, 1)"));
    }
    if (!rigidity::flex_space(packing, graph, tol).infinitesimally_rigid()) {
        throw NotInfRigidError("packing has a nontrivial infinitesimal flex");
    }

    Rng rng(config.seed);
    DiskPacking out = packing;
    for (double& r : out.radii) r *= 1.0 + delta * (2.0 * rng.uniform() - 1.0);
    solve_contacts(out, graph.edges, gauge_free_coords(out),
                   NewtonOptions{config.newton_tol, config.newton_max_iter});

    ContactGraph after;
    try {
        after = contact_graph(out, tol);
    } catch (const OverlapError& e) {
        throw ContactGraphChangedError(msg("perturbation introduced an overlap: ", e.what()));
    }
    if (after.edges != graph.edges) {
        throw ContactGraphChangedError(msg("contact set changed: ", graph.edge_count(), " -> ",
                                           after.edge_count(), " edges"));
    }
    return out;
}

}  // namespace diskrig::generators
