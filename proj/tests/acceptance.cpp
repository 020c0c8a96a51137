// Acceptance gate: ten end-to-end checks, one pass/fail line each.
// Exit status is the number of failed checks.

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "diskrig/generators.hpp"
#include "diskrig/jamming.hpp"
#include "diskrig/manifold.hpp"
#include "diskrig/rigidity.hpp"
#include "diskrig/rng.hpp"
#include "diskrig/sparsity.hpp"

using namespace diskrig;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* pattern, ...) {
    va_list args;
    va_start(args, pattern);
    char buf[512];
    std::vsnprintf(buf, sizeof buf, pattern, args);
    va_end(args);
    return buf;
}

// Sequential packings abort when a disk cannot be placed; the documented
// recovery is a fresh seed, so bump it far away and try again.
generators::GeneratedPacking make_sequential(std::uint64_t seed, int n) {
    for (int attempt = 0; attempt < 8; ++attempt) {
        try {
            return generators::sequential_packing({.seed = seed + 1000u * attempt, .n = n});
        } catch (const PlacementFailureError&) {
        }
    }
    throw PlacementFailureError(msg("no seed near ", seed, " places ", n, " disks"));
}

TriCuspPacking make_tri_cusp(std::uint64_t seed, int interior_n) {
    for (int attempt = 0; attempt < 8; ++attempt) {
        try {
            return generators::tri_cusp_packing({.seed = seed + 1000u * attempt, .n = 10},
                                                interior_n);
        } catch (const PlacementFailureError&) {
        }
    }
    throw PlacementFailureError(msg("no seed near ", seed, " fills ", interior_n, " disks"));
}

std::vector<generators::GeneratedPacking> corpus;  // built by check 1, reused by 2-5

bool build_corpus(std::string& detail) {
    const auto start = Clock::now();
    for (int k = 0; k < 200; ++k) {
        const int n = 3 + k % 38;  // 3..40
        corpus.push_back(make_sequential(10'000u + static_cast<std::uint64_t>(k), n));
    }

    int oracle_checked = 0;
    for (const auto& gen : corpus) {
        const int n = gen.packing.size();
        if (gen.graph.edge_count() != 2 * n - 3) {
            detail = fmt("n=%d has m=%d, want %d", n, gen.graph.edge_count(), 2 * n - 3);
            return false;
        }
        const auto pebble = combinatorics::pebble_game_2_3(gen.graph);
        if (!pebble.is_laman_sparse || !pebble.is_laman_graph) {
            detail = fmt("n=%d not Laman", n);
            return false;
        }
        if (n <= 10) {
            const auto oracle = combinatorics::subgraph_oracle(gen.graph);
            if (oracle.is_laman_sparse != pebble.is_laman_sparse ||
                oracle.is_laman_graph != pebble.is_laman_graph) {
                detail = fmt("pebble/oracle disagree at n=%d", n);
                return false;
            }
            ++oracle_checked;
        }
        if (!combinatorics::embedding_is_planar(gen.packing, gen.graph)) {
            detail = fmt("embedding not planar at n=%d", n);
            return false;
        }
    }
    const double elapsed = seconds_since(start);
    detail = fmt("200 packings, m=2n-3 throughout, %d oracle-confirmed, planar, %.2fs (limit 10s)",
                 oracle_checked, elapsed);
    return elapsed < 10.0;
}

bool check_dichotomy(std::string& detail) {
    Rng rng(777);
    double worst_margin = 1e300;
    for (const auto& gen : corpus) {
        const int n = gen.packing.size();
        const auto space = rigidity::flex_space(gen.packing, gen.graph);
        if (space.nontrivial_dim != 0 || space.rank != 2 * n - 3) {
            detail = fmt("n=%d: rank=%d nontrivial=%d", n, space.rank, space.nontrivial_dim);
            return false;
        }
        const double sigma1 = space.singular_values(0);
        const double sigma_m = space.singular_values(space.rank - 1);
        worst_margin = std::min(worst_margin, sigma_m / (1e-8 * sigma1));

        const Edge cut = gen.graph.edges[static_cast<size_t>(rng.index(gen.graph.edge_count()))];
        const auto cut_space =
            rigidity::flex_space(gen.packing, gen.graph.without_edge(cut.i, cut.j));
        if (cut_space.nontrivial_dim != 1) {
            detail = fmt("n=%d minus (%d,%d): nontrivial=%d", n, cut.i, cut.j,
                         cut_space.nontrivial_dim);
            return false;
        }
    }
    detail = fmt("200x nontrivial dim 0 and dim 1 after one removed contact; "
                 "worst margin %.1fx threshold (need 1e6x)",
                 worst_margin);
    return worst_margin >= 1e6;
}

bool check_jacobian_rank(std::string& detail) {
    double worst_ratio = 1e300;
    auto full_rank = [&](const DiskPacking& p, const ContactGraph& g) {
        const auto jac = rigidity::build_jacobian(p, g);
        const Eigen::VectorXd sv = jac.M.jacobiSvd().singularValues();
        const double ratio = sv(jac.m - 1) / sv(0);
        worst_ratio = std::min(worst_ratio, ratio);
        return ratio > 1e-8;
    };
    for (const auto& gen : corpus) {
        if (!full_rank(gen.packing, gen.graph)) {
            detail = fmt("rank(M) < m on a sequential packing (ratio %.2e)", worst_ratio);
            return false;
        }
    }
    const DiskPacking hex = generators::hexagonal_patch(1, 1.0);
    const ContactGraph hg = contact_graph(hex);
    if (!full_rank(hex, hg)) {
        detail = fmt("rank(M) < m on the hexagonal patch (ratio %.2e)", worst_ratio);
        return false;
    }

    const auto stresses = rigidity::bar_equilibrium_stresses(hex, hg);
    if (stresses.size() != 1) {
        detail = fmt("hex bar stress count %zu, want 1", stresses.size());
        return false;
    }
    double mean_len = 0.0;
    for (const Edge& e : hg.edges) {
        mean_len +=
            (hex.centers[static_cast<size_t>(e.i)] - hex.centers[static_cast<size_t>(e.j)]).norm();
    }
    mean_len /= hg.edge_count();
    double worst_length = 0.0;
    for (const auto& r : rigidity::stress_residuals(hex, hg, stresses.front())) {
        worst_length = std::max(worst_length, std::abs(r.length_rate));
    }
    const double needed = 1e-3 * stresses.front().omega.norm() * mean_len;
    detail = fmt("rank(M)=m on 201 frameworks (worst sigma_m/sigma_1 %.2e > 1e-8); "
                 "hex length residual %.3f > %.2e",
                 worst_ratio, worst_length, needed);
    return worst_length > needed;
}

bool check_index_bound(std::string& detail) {
    Rng rng(4242);
    int vectors = 0;
    int frameworks = 0;
    for (size_t k = 0; k < corpus.size(); k += 9) {  // 23 frameworks
        const auto& gen = corpus[k];
        ++frameworks;
        const int m = gen.graph.edge_count();
        const int n = gen.packing.size();
        for (int trial = 0; trial < 450; ++trial) {
            std::vector<int> signs(static_cast<size_t>(m));
            for (int& s : signs) s = rng.sign();
            const auto idx = rigidity::vertex_indices(gen.packing, gen.graph, signs);
            int total = 0;
            for (const int v : idx) {
                if (v % 2 != 0) {
                    detail = fmt("odd index %d at n=%d", v, n);
                    return false;
                }
                total += v;
            }
            if (total > 4 * n - 8) {
                detail = fmt("sum %d > 4n-8 = %d at n=%d", total, 4 * n - 8, n);
                return false;
            }
            if (!rigidity::index_bound_check(gen.packing, gen.graph, signs)) {
                detail = fmt("index_bound_check false at n=%d", n);
                return false;
            }
            ++vectors;
        }
    }
    detail = fmt("%d sign vectors over %d frameworks: all indices even, sum <= 4n-8", vectors,
                 frameworks);
    return vectors >= 10'000 && frameworks >= 20;
}

bool check_fiber_dimension(std::string& detail) {
    for (size_t k = 0; k < corpus.size(); k += 4) {
        const auto& gen = corpus[k];
        const int want = 2 * gen.packing.size() - gen.graph.edge_count();
        const int got = manifold::fiber_dimension(gen.packing, gen.graph);
        if (got != want) {
            detail = fmt("sequential n=%d: fiber %d, want 2n-m=%d", gen.packing.size(), got, want);
            return false;
        }
    }
    for (int n = 3; n <= 10; ++n) {
        DiskPacking chain;
        for (int i = 0; i < n; ++i) {
            chain.radii.push_back(1.0);
            chain.centers.emplace_back(2.0 * i, 0.0);
        }
        const ContactGraph cg = contact_graph(chain);
        const int got = manifold::fiber_dimension(chain, cg);
        if (got != 2 * n - cg.edge_count()) {
            detail = fmt("chain n=%d: fiber %d, want %d", n, got, 2 * n - cg.edge_count());
            return false;
        }
    }
    const DiskPacking hex = generators::hexagonal_patch(1, 1.0);
    const ContactGraph hg = contact_graph(hex);
    const int hex_fiber = manifold::fiber_dimension(hex, hg);
    const int hex_generic = 2 * hex.size() - hg.edge_count();
    detail = fmt("fiber = 2n-m on 50 sequential + 8 chains; hex fiber %d > %d flags equal radii",
                 hex_fiber, hex_generic);
    return hex_fiber > hex_generic;
}

bool check_flex_following(std::string& detail) {
    DiskPacking chain;
    chain.radii = {1, 1, 1};
    chain.centers = {Vec2(0, 0), Vec2(2, 0), Vec2(4, 0)};
    const int steps = 100;
    const double h = 1e-3;
    const auto traj = manifold::follow_flex(chain, contact_graph(chain), steps, h);

    const double theta = steps * std::atan(h / 2.0);
    const Vec2 expected = Vec2(2, 0) + 2.0 * Vec2(std::cos(theta), std::sin(theta));
    const double err = (traj.states.back().centers[2] - expected).norm();

    double drift = 0.0;
    for (const double r : traj.residuals) drift = std::max(drift, r);
    for (const auto& s : traj.states) {
        if (s.radii != chain.radii) {
            detail = "radii changed along the trajectory";
            return false;
        }
    }
    detail = fmt("final error %.2e (<= 1e-6), max drift %.2e (<= 1e-9), radii bit-identical", err,
                 drift);
    return err <= 1e-6 && drift <= 1e-9;
}

bool check_two_disk_figures(std::string& detail) {
    const auto t5a = Clock::now();
    const TriCuspPacking braced = generators::fig5a_packing({.seed = 1, .n = 10});
    const ContactGraph bg = contact_graph(braced.packing);
    const auto bv = jamming::tensegrity_flex_lp(braced, bg);
    const double sec_a = seconds_since(t5a);
    if (bg.edge_count() != 8 || !bv.jammed) {
        detail = fmt("braced: m=%d jammed=%d", bg.edge_count(), bv.jammed ? 1 : 0);
        return false;
    }

    const auto t5b = Clock::now();
    const TriCuspPacking stacked = generators::fig5b_packing({.seed = 1, .n = 10});
    const ContactGraph sg = contact_graph(stacked.packing);
    const auto sv = jamming::tensegrity_flex_lp(stacked, sg);
    const double sec_b = seconds_since(t5b);
    if (sg.edge_count() != 8 || sv.jammed || !sv.witness.has_value()) {
        detail = fmt("stacked: m=%d jammed=%d witness=%d", sg.edge_count(), sv.jammed ? 1 : 0,
                     sv.witness.has_value() ? 1 : 0);
        return false;
    }

    const Eigen::VectorXd& w = sv.witness->p_prime;
    const double scale = w.norm();
    double best_opening = 0.0;
    const auto& b = stacked.boundary;
    for (const Edge& e : sg.edges) {
        const Vec2 u = (stacked.packing.centers[static_cast<size_t>(e.i)] -
                        stacked.packing.centers[static_cast<size_t>(e.j)])
                           .normalized();
        const Vec2 vi(w(2 * e.i), w(2 * e.i + 1));
        const Vec2 vj(w(2 * e.j), w(2 * e.j + 1));
        const double rate = u.dot(vi - vj);
        const auto on_boundary = [&](int v) { return v == b[0] || v == b[1] || v == b[2]; };
        if (on_boundary(e.i) && on_boundary(e.j)) {
            if (std::abs(rate) > 1e-9 * scale) {
                detail = fmt("witness moves boundary edge (%d,%d) at rate %.2e", e.i, e.j, rate);
                return false;
            }
        } else {
            if (rate < -1e-9 * scale) {
                detail = fmt("witness closes contact (%d,%d) at rate %.2e", e.i, e.j, rate);
                return false;
            }
            best_opening = std::max(best_opening, rate);
        }
    }
    if (best_opening <= 1e-9 * scale) {
        detail = "witness opens no interior contact";
        return false;
    }
    detail = fmt("braced m=8=2n-2 jammed (%.3fs); stacked m=8 NOT jammed, witness slacks >= 0, "
                 "best opening %.3f (%.3fs); limits 1s",
                 sec_a, best_opening / scale, sec_b);
    return sec_a < 1.0 && sec_b < 1.0;
}

bool check_isostatic_bound(std::string& detail) {
    int jammed_count = 0;
    for (int k = 0; k < 50; ++k) {
        const int interior_n = 1 + k % 3;
        const TriCuspPacking t = make_tri_cusp(20'000u + static_cast<std::uint64_t>(k), interior_n);
        const ContactGraph g = contact_graph(t.packing);
        const auto count = jamming::isostatic_count_check(t, g);
        if (!count.within_bound) {
            detail = fmt("instance %d: m=%d exceeds 2n-2=%d", k, count.m, count.bound);
            return false;
        }
        const auto verdict = jamming::tensegrity_flex_lp(t, g);
        if (verdict.jammed) {
            ++jammed_count;
            if (count.m != count.bound) {
                detail = fmt("instance %d jammed with m=%d != 2n-2=%d", k, count.m, count.bound);
                return false;
            }
        }
    }
    detail = fmt("50 instances: m <= 2n-2 always; %d jammed, each at exactly 2n-2", jammed_count);
    return jammed_count > 0;
}

bool check_perturbation(std::string& detail) {
    int ok = 0;
    int typed_failures = 0;
    for (int k = 0; k < 50; ++k) {
        const auto gen = make_sequential(30'000u + static_cast<std::uint64_t>(k), 4 + k % 17);
        try {
            const DiskPacking moved = generators::perturb_to_generic(
                gen.packing, gen.graph, 1e-4, {.seed = 555u + static_cast<std::uint64_t>(k)});
            if (contact_graph(moved).edges != gen.graph.edges) {
                detail = fmt("instance %d: silent contact change", k);
                return false;
            }
            ++ok;
        } catch (const NotInfRigidError&) {
            ++typed_failures;
        } catch (const NewtonDivergenceError&) {
            ++typed_failures;
        } catch (const ContactGraphChangedError&) {
            ++typed_failures;
        }
    }
    detail = fmt("%d/50 perturbed cleanly (need >= 48), %d typed failures, no silent changes", ok,
                 typed_failures);
    return ok >= 48;  // 95% of 50, rounded up
}

bool check_finite_difference(std::string& detail) {
    const double s_values[3] = {1e-3, 1e-4, 1e-5};
    const double floor = 1e-13;
    double worst_q = 1e300;
    int fitted = 0;
    int floored = 0;
    for (int k = 0; k < 20; ++k) {
        const auto gen = make_sequential(40'000u + static_cast<std::uint64_t>(k), 4 + k);
        const auto ts = rigidity::tangent_space(gen.packing, gen.graph);
        const int n = gen.packing.size();
        for (int col = 0; col < ts.dimension(); ++col) {
            const Eigen::VectorXd v = ts.basis.col(col);
            double res[3];
            for (int si = 0; si < 3; ++si) {
                DiskPacking moved = gen.packing;
                for (int i = 0; i < n; ++i) {
                    moved.centers[static_cast<size_t>(i)] +=
                        s_values[si] * Vec2(v(2 * i), v(2 * i + 1));
                    moved.radii[static_cast<size_t>(i)] += s_values[si] * v(2 * n + i);
                }
                res[si] = gap_vector(moved, gen.graph).lpNorm<Eigen::Infinity>();
            }
            // Fit log-res against log-s over the points above the numeric
            // floor; fewer than two usable points means the residual already
            // vanishes faster than measurable.
            std::vector<double> xs, ys;
            for (int si = 0; si < 3; ++si) {
                if (res[si] > floor) {
                    xs.push_back(std::log(s_values[si]));
                    ys.push_back(std::log(res[si]));
                }
            }
            if (xs.size() < 2) {
                ++floored;
                continue;
            }
            double mx = 0, my = 0;
            for (size_t i = 0; i < xs.size(); ++i) {
                mx += xs[i];
                my += ys[i];
            }
            mx /= static_cast<double>(xs.size());
            my /= static_cast<double>(xs.size());
            double num = 0, den = 0;
            for (size_t i = 0; i < xs.size(); ++i) {
                num += (xs[i] - mx) * (ys[i] - my);
                den += (xs[i] - mx) * (xs[i] - mx);
            }
            const double q = num / den;
            worst_q = std::min(worst_q, q);
            ++fitted;
            if (q < 1.9) {
                detail = fmt("packing %d basis %d: fitted order %.3f < 1.9", k, col, q);
                return false;
            }
        }
    }
    detail = fmt("%d tangent directions: fitted order >= %.3f (need 1.9); %d below residual floor",
                 fitted, worst_q, floored);
    return true;
}

}  // namespace

int main() {
    using Check = std::pair<const char*, std::function<bool(std::string&)>>;
    const std::vector<Check> checks = {
        {"1 contact counts, Laman sparsity, planarity", build_corpus},
        {"2 rigidity dichotomy under contact removal", check_dichotomy},
        {"3 Jacobian rank and hex bar stress", check_jacobian_rank},
        {"4 stress index bound", check_index_bound},
        {"5 fiber dimension vs 2n-m", check_fiber_dimension},
        {"6 nonlinear flex vs analytic chain", check_flex_following},
        {"7 two-disk verdicts with witness", check_two_disk_figures},
        {"8 isostatic count at jamming", check_isostatic_bound},
        {"9 generic radius perturbation", check_perturbation},
        {"10 finite-difference tangency order", check_finite_difference},
    };

    int failures = 0;
    for (const auto& [name, fn] : checks) {
        std::string detail;
        bool pass = false;
        try {
            pass = fn(detail);
        } catch (const std::exception& e) {
            detail = fmt("exception: %s", e.what());
        }
        std::printf("%s  criterion %s: %s\n", pass ? "PASS" : "FAIL", name, detail.c_str());
        std::fflush(stdout);
        if (!pass) ++failures;
    }
    return failures;
}
