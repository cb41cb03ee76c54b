#pragma once

#include <cstddef>
#include <functional>

namespace nugap {

struct Peak {
    double location = 0.0;
    double value = 0.0;
    /// Best value seen on the uniform grid before refinement.
    double grid_value = 0.0;
};

/// Maximizes f over [lo, hi]: uniform scan with `grid` points (endpoints
/// included), then golden-section search inside the bracket around the best
/// sample until the bracket is narrower than `tol`. The returned value never
/// falls below the grid maximum.
[[nodiscard]] Peak maximize_on_interval(const std::function<double(double)>& f, double lo, double hi,
                                        std::size_t grid, double tol);

}  // namespace nugap
