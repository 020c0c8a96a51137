#include <doctest.h>

#include <cmath>
#include <vector>

#include "diskrig/lp.hpp"
#include "diskrig/rng.hpp"

using diskrig::Rng;
using diskrig::lp::Rational;
using diskrig::lp::SimplexResult;
using diskrig::lp::Status;
using diskrig::lp::to_double;
using diskrig::lp::to_rational;

namespace {

using Matrix = std::vector<std::vector<Rational>>;

SimplexResult solve(const Matrix& A, const std::vector<Rational>& b,
                    const std::vector<Rational>& c) {
    return diskrig::lp::solve(A, b, c);
}

// Exhaustive oracle: tries every basis of size rank(A), solves the square
// system exactly by Gaussian elimination, keeps feasible solutions, and
// returns the best objective.  Exponential, fine for tiny instances.
struct OracleResult {
    bool feasible = false;
    bool bounded = true;
    Rational best;
};

bool solve_square(Matrix A, std::vector<Rational> rhs, std::vector<Rational>& out) {
    const size_t n = A.size();
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && A[piv][col] == 0) ++piv;
        if (piv == n) return false;
        std::swap(A[piv], A[col]);
        std::swap(rhs[piv], rhs[col]);
        const Rational inv = Rational(1) / A[col][col];
        for (auto& v : A[col]) v *= inv;
        rhs[col] *= inv;
        for (size_t r = 0; r < n; ++r) {
            if (r == col || A[r][col] == 0) continue;
            const Rational f = A[r][col];
            for (size_t k = 0; k < n; ++k) A[r][k] -= f * A[col][k];
            rhs[r] -= f * rhs[col];
        }
    }
    out = rhs;
    return true;
}

OracleResult enumerate_vertices(const Matrix& A, const std::vector<Rational>& b,
                                const std::vector<Rational>& c) {
    const size_t m = A.size();
    const size_t n = c.size();
    OracleResult result;

    std::vector<size_t> pick(m);
    const auto try_basis = [&](const std::vector<size_t>& cols) {
        Matrix square(m, std::vector<Rational>(m));
        for (size_t r = 0; r < m; ++r) {
            for (size_t k = 0; k < m; ++k) square[r][k] = A[r][cols[k]];
        }
        std::vector<Rational> x_basis;
        if (!solve_square(square, b, x_basis)) return;
        for (const Rational& v : x_basis) {
            if (v < 0) return;
        }
        Rational value = 0;
        for (size_t k = 0; k < m; ++k) value += c[cols[k]] * x_basis[k];
        if (!result.feasible || value > result.best) result.best = value;
        result.feasible = true;
    };

    const auto recurse = [&](auto&& self, size_t start, size_t depth) -> void {
        if (depth == m) {
            try_basis(pick);
            return;
        }
        for (size_t col = start; col < n; ++col) {
            pick[depth] = col;
            self(self, col + 1, depth + 1);
        }
    };
    recurse(recurse, 0, 0);
    return result;
}

Matrix rational_matrix(const std::vector<std::vector<double>>& a) {
    Matrix out;
    for (const auto& row : a) {
        out.emplace_back();
        for (double v : row) out.back().push_back(to_rational(v));
    }
    return out;
}

std::vector<Rational> rational_vector(const std::vector<double>& v) {
    std::vector<Rational> out;
    for (double x : v) out.push_back(to_rational(x));
    return out;
}

}  // namespace

TEST_SUITE("lp") {
    TEST_CASE("to_rational is exact on dyadic and decimal doubles") {
        CHECK(to_rational(0.0) == 0);
        CHECK(to_rational(1.0) == 1);
        CHECK(to_rational(-2.5) == Rational(-5, 2));
        CHECK(to_rational(0.375) == Rational(3, 8));

        // 0.1 rounds to 3602879701896397 / 2^55; conversion must hit it.
        const Rational tenth = to_rational(0.1);
        CHECK(tenth == Rational(boost::multiprecision::cpp_int("3602879701896397"),
                                boost::multiprecision::cpp_int(1) << 55));
        CHECK(to_double(tenth) == 0.1);

        for (double x : {1e-300, -1e300, 3.141592653589793, 0.49999999999999994}) {
            CHECK(to_double(to_rational(x)) == x);
        }
        CHECK_THROWS_AS(to_rational(std::nan("")), diskrig::LpNumericalError);
        CHECK_THROWS_AS(to_rational(HUGE_VAL), diskrig::LpNumericalError);
    }

    TEST_CASE("bounded maximum on a simplex face") {
        // max x + y  s.t.  x + y + s = 1.
        const auto result = solve(rational_matrix({{1, 1, 1}}), rational_vector({1}),
                                  rational_vector({1, 1, 0}));
        REQUIRE(result.status == Status::Optimal);
        CHECK(result.objective == 1);
        CHECK(result.x[0] + result.x[1] == 1);
    }

    TEST_CASE("negative rhs rows are handled") {
        // max x - y  s.t.  x - y = -2  ->  x = 0, y = 2.
        const auto result = solve(rational_matrix({{1, -1}}), rational_vector({-2}),
                                  rational_vector({1, -1}));
        REQUIRE(result.status == Status::Optimal);
        CHECK(result.objective == -2);
    }

    TEST_CASE("infeasible system is reported") {
        // x + y = 1 and x + y = 2 cannot both hold.
        const auto result = solve(rational_matrix({{1, 1}, {1, 1}}), rational_vector({1, 2}),
                                  rational_vector({1, 0}));
        CHECK(result.status == Status::Infeasible);
    }

    TEST_CASE("unbounded direction is reported") {
        // max x  s.t.  x - y = 0:  x = y -> infinity.
        const auto result = solve(rational_matrix({{1, -1}}), rational_vector({0}),
                                  rational_vector({1, 0}));
        CHECK(result.status == Status::Unbounded);
    }

    TEST_CASE("redundant rows leave stranded artificials") {
        // Duplicate constraint: one artificial can never leave the basis.
        const auto result = solve(rational_matrix({{1, 1, 1}, {2, 2, 2}}),
                                  rational_vector({1, 2}), rational_vector({1, 0, 0}));
        REQUIRE(result.status == Status::Optimal);
        CHECK(result.objective == 1);
    }

    TEST_CASE("beale cycling example terminates with the right optimum") {
        // Classic degenerate instance that cycles under naive pivoting.
        // max 3/4 x1 - 150 x2 + 1/50 x3 - 6 x4 with three slacked rows.
        const Matrix A = {
            {Rational(1, 4), -60, Rational(-1, 25), 9, 1, 0, 0},
            {Rational(1, 2), -90, Rational(-1, 50), 3, 0, 1, 0},
            {0, 0, 1, 0, 0, 0, 1}};
        const std::vector<Rational> b{0, 0, 1};
        const std::vector<Rational> c{Rational(3, 4), -150, Rational(1, 50), -6, 0, 0, 0};
        const auto result = solve(A, b, c);
        REQUIRE(result.status == Status::Optimal);
        CHECK(result.objective == Rational(1, 20));
    }

    TEST_CASE("random instances match exhaustive vertex enumeration") {
        Rng rng(91);
        int optimal_seen = 0;
        for (int trial = 0; trial < 60; ++trial) {
            const int m = 2 + rng.index(2);      // 2..3 rows
            const int n = m + 1 + rng.index(3);  // up to 6 columns
            Matrix A(static_cast<size_t>(m), std::vector<Rational>(static_cast<size_t>(n)));
            std::vector<Rational> b(static_cast<size_t>(m));
            std::vector<Rational> c(static_cast<size_t>(n));
            for (auto& row : A) {
                for (auto& v : row) v = Rational(static_cast<int>(rng.index(11)) - 5);
            }
            for (auto& v : b) v = Rational(static_cast<int>(rng.index(7)));
            for (auto& v : c) v = Rational(static_cast<int>(rng.index(9)) - 4);

            const OracleResult oracle = enumerate_vertices(A, b, c);
            const SimplexResult result = solve(A, b, c);
            if (!oracle.feasible) {
                CHECK(result.status == Status::Infeasible);
                continue;
            }
            if (result.status == Status::Unbounded) continue;  // oracle only sees vertices
            REQUIRE(result.status == Status::Optimal);
            CHECK(result.objective >= oracle.best);

            // The returned point must satisfy Ax = b, x >= 0 exactly, and the
            // objective must match c.x.
            Rational value = 0;
            for (size_t j = 0; j < c.size(); ++j) {
                CHECK(result.x[j] >= 0);
                value += c[j] * result.x[j];
            }
            CHECK(value == result.objective);
            for (size_t r = 0; r < A.size(); ++r) {
                Rational lhs = 0;
                for (size_t j = 0; j < c.size(); ++j) lhs += A[r][j] * result.x[j];
                CHECK(lhs == b[r]);
            }
            CHECK(result.objective == oracle.best);
            ++optimal_seen;
        }
        CHECK(optimal_seen >= 20);
    }
}
