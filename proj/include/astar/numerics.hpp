#pragma once

#include <functional>
#include <span>

namespace astar::numerics {

using ScalarFn = std::function<double(double)>;

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance
/// `abs_tol`. The range is first cut at `breaks` (points in (a, b) where f
/// jumps or kinks) and each piece receives tolerance in proportion to its
/// length. Throws NumericError if the recursion depth limit is reached.
double integrate(const ScalarFn& f, double a, double b, double abs_tol = 1e-8,
                 std::span<const double> breaks = {});

/// Last point where `inside` holds when moving from `inside_end` toward
/// `outside_end`, to within `tol`. Requires inside(inside_end) true and
/// inside(outside_end) false; the predicate must switch exactly once.
/// Always returns a point at which the predicate was observed true, so
/// results are monotone in any parameter that monotonically shrinks the
/// predicate's true set.
double bisect_boundary(const std::function<bool(double)>& inside, double inside_end,
                       double outside_end, double tol = 1e-12);

/// Argmax of a unimodal f on [a, b] by golden-section search.
double golden_section_argmax(const ScalarFn& f, double a, double b, double tol = 1e-10);

/// Argmin of a unimodal f on [a, b] by golden-section search.
double golden_section_argmin(const ScalarFn& f, double a, double b, double tol = 1e-10);

}  // namespace astar::numerics
