#include "diskrig/lp.hpp"

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <utility>

namespace diskrig::lp {

namespace {

using Tableau = std::vector<std::vector<Rational>>;

// Rows are constraints, columns are variables plus a trailing rhs column.
// The last row holds the (negated) objective coefficients of the current
// dictionary; basis[r] is the basic variable of row r.
struct Dictionary {
    Tableau rows;
    std::vector<Rational> cost;
    Rational objective_shift;
    std::vector<int> basis;
    int num_vars = 0;
    // Columns >= allowed may leave the basis but never enter; phase 2 sets
    // this to the original variable count to lock the artificials out.
    int allowed = 0;
};

int entering_column(const Dictionary& dict) {
    for (int j = 0; j < dict.allowed; ++j) {
        if (dict.cost[static_cast<size_t>(j)] > 0) return j;
    }
    return -1;
}

int leaving_row(const Dictionary& dict, int col) {
    const int m = static_cast<int>(dict.rows.size());
    int best = -1;
    Rational best_ratio;
    for (int r = 0; r < m; ++r) {
        const Rational& a = dict.rows[static_cast<size_t>(r)][static_cast<size_t>(col)];
        if (a <= 0) continue;
        Rational ratio = dict.rows[static_cast<size_t>(r)].back() / a;
        if (best < 0 || ratio < best_ratio ||
            (ratio == best_ratio &&
             dict.basis[static_cast<size_t>(r)] < dict.basis[static_cast<size_t>(best)])) {
            best = r;
            best_ratio = std::move(ratio);
        }
    }
    return best;
}

void pivot(Dictionary& dict, int row, int col) {
    auto& pr = dict.rows[static_cast<size_t>(row)];
    const Rational inv = Rational(1) / pr[static_cast<size_t>(col)];
    for (auto& v : pr) v *= inv;
    const int m = static_cast<int>(dict.rows.size());
    for (int r = 0; r < m; ++r) {
        if (r == row) continue;
        auto& tr = dict.rows[static_cast<size_t>(r)];
        const Rational factor = tr[static_cast<size_t>(col)];
        if (factor == 0) continue;
        for (size_t j = 0; j < tr.size(); ++j) tr[j] -= factor * pr[j];
    }
    const Rational cf = dict.cost[static_cast<size_t>(col)];
    if (cf != 0) {
        for (int j = 0; j < dict.num_vars; ++j) {
            dict.cost[static_cast<size_t>(j)] -= cf * pr[static_cast<size_t>(j)];
        }
        dict.objective_shift += cf * pr.back();
    }
    dict.basis[static_cast<size_t>(row)] = col;
}

// Returns false when the problem is unbounded in the improving direction.
bool run_simplex(Dictionary& dict) {
    for (;;) {
        const int col = entering_column(dict);
        if (col < 0) return true;
        const int row = leaving_row(dict, col);
        if (row < 0) return false;
        pivot(dict, row, col);
    }
}

}  // namespace

Rational to_rational(double x) {
    if (!std::isfinite(x)) throw LpNumericalError(msg("non-finite value ", x));
    if (x == 0.0) return Rational(0);
    int exp = 0;
    const double mant = std::frexp(x, &exp);
    const auto scaled = static_cast<std::int64_t>(std::ldexp(mant, 53));
    Rational r(scaled);
    const int shift = exp - 53;
    boost::multiprecision::cpp_int pow2 = boost::multiprecision::cpp_int(1)
                                          << static_cast<unsigned>(std::abs(shift));
    if (shift >= 0) {
        r *= Rational(pow2);
    } else {
        r /= Rational(pow2);
    }
    return r;
}

double to_double(const Rational& x) { return static_cast<double>(x); }

SimplexResult solve(const std::vector<std::vector<Rational>>& A, const std::vector<Rational>& b,
                    const std::vector<Rational>& c) {
    const int m = static_cast<int>(A.size());
    const int n = static_cast<int>(c.size());
    for (const auto& row : A) {
        if (static_cast<int>(row.size()) != n) {
            throw LpNumericalError("constraint row width does not match objective length");
        }
    }
    if (static_cast<int>(b.size()) != m) {
        throw LpNumericalError("rhs length does not match constraint count");
    }

    Dictionary dict;
    dict.num_vars = n + m;
    dict.rows.assign(static_cast<size_t>(m), std::vector<Rational>(static_cast<size_t>(n + m + 1)));
    dict.basis.resize(static_cast<size_t>(m));
    for (int r = 0; r < m; ++r) {
        auto& row = dict.rows[static_cast<size_t>(r)];
        const int sign = (b[static_cast<size_t>(r)] < 0) ? -1 : 1;
        for (int j = 0; j < n; ++j) row[static_cast<size_t>(j)] = sign * A[static_cast<size_t>(r)][static_cast<size_t>(j)];
        row[static_cast<size_t>(n + r)] = 1;
        row.back() = sign * b[static_cast<size_t>(r)];
        dict.basis[static_cast<size_t>(r)] = n + r;
    }

    // Phase 1: minimize the sum of artificials, i.e. maximize its negation.
    dict.allowed = dict.num_vars;
    dict.cost.assign(static_cast<size_t>(dict.num_vars), Rational(0));
    dict.objective_shift = 0;
    for (int r = 0; r < m; ++r) {
        for (int j = 0; j < n; ++j) {
            dict.cost[static_cast<size_t>(j)] += dict.rows[static_cast<size_t>(r)][static_cast<size_t>(j)];
        }
        dict.objective_shift -= dict.rows[static_cast<size_t>(r)].back();
    }
    if (!run_simplex(dict)) {
        throw LpNumericalError("phase 1 reported unbounded; artificial objective is bounded");
    }
    if (dict.objective_shift != 0) {
        SimplexResult result;
        result.status = Status::Infeasible;
        return result;
    }

    // Drive any artificial still in the basis out, or drop its redundant row.
    for (int r = 0; r < m; ++r) {
        if (dict.basis[static_cast<size_t>(r)] < n) continue;
        int col = -1;
        for (int j = 0; j < n; ++j) {
            if (dict.rows[static_cast<size_t>(r)][static_cast<size_t>(j)] != 0) {
                col = j;
                break;
            }
        }
        if (col >= 0) {
            pivot(dict, r, col);
        } else {
            dict.basis[static_cast<size_t>(r)] = -1;
        }
    }

    // Phase 2: original objective, artificial columns locked out of the basis.
    dict.allowed = n;
    dict.cost.assign(static_cast<size_t>(dict.num_vars), Rational(0));
    dict.objective_shift = 0;
    for (int j = 0; j < n; ++j) dict.cost[static_cast<size_t>(j)] = c[static_cast<size_t>(j)];
    for (int r = 0; r < m; ++r) {
        const int bv = dict.basis[static_cast<size_t>(r)];
        if (bv < 0 || bv >= n) continue;
        const Rational cf = dict.cost[static_cast<size_t>(bv)];
        if (cf == 0) continue;
        for (int j = 0; j < n; ++j) {
            dict.cost[static_cast<size_t>(j)] -= cf * dict.rows[static_cast<size_t>(r)][static_cast<size_t>(j)];
        }
        dict.objective_shift += cf * dict.rows[static_cast<size_t>(r)].back();
    }

    SimplexResult result;
    if (!run_simplex(dict)) {
        result.status = Status::Unbounded;
        return result;
    }

    result.status = Status::Optimal;
    result.objective = dict.objective_shift;
    result.x.assign(static_cast<size_t>(n), Rational(0));
    for (int r = 0; r < m; ++r) {
        const int bv = dict.basis[static_cast<size_t>(r)];
        if (bv >= 0 && bv < n) result.x[static_cast<size_t>(bv)] = dict.rows[static_cast<size_t>(r)].back();
    }
    return result;
}

}  // namespace diskrig::lp
