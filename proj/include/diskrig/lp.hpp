#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

#include "diskrig/errors.hpp"

namespace diskrig::lp {

using Rational = boost::multiprecision::cpp_rational;

// Exact conversion: every finite double is a dyadic rational.
Rational to_rational(double x);
double to_double(const Rational& x);

enum class Status { Optimal, Infeasible, Unbounded };

struct SimplexResult {
    Status status = Status::Infeasible;
    Rational objective;
    std::vector<Rational> x;
};

// Maximizes c^T x subject to A x = b, x >= 0, over exact rationals.
// Two-phase dense tableau simplex with Bland's rule, so the result is
// deterministic and cycling-free.
SimplexResult solve(const std::vector<std::vector<Rational>>& A, const std::vector<Rational>& b,
                    const std::vector<Rational>& c);

}  // namespace diskrig::lp
