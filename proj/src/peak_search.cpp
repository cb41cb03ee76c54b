#include "nugap/peak_search.hpp"

#include <algorithm>
#include <cmath>

#include "nugap/error.hpp"

namespace nugap {

Peak maximize_on_interval(const std::function<double(double)>& f, double lo, double hi, std::size_t grid,
                          double tol) {
    if (grid < 2 || !(hi > lo) || !(tol > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "invalid peak search interval");
    }
    const double step = (hi - lo) / static_cast<double>(grid - 1);
    std::size_t best = 0;
    double best_value = f(lo);
    for (std::size_t i = 1; i < grid; ++i) {
        const double v = f(i + 1 == grid ? hi : lo + step * static_cast<double>(i));
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }
    Peak peak;
    peak.location = best + 1 == grid ? hi : lo + step * static_cast<double>(best);
    peak.value = best_value;
    peak.grid_value = best_value;

    double a = best == 0 ? lo : lo + step * static_cast<double>(best - 1);
    double b = best + 1 >= grid ? hi : lo + step * static_cast<double>(best + 1);
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = f(x1);
        }
    }
    const double xm = 0.5 * (a + b);
    const double candidates[] = {x1, x2, xm, a, b};
    for (double x : candidates) {
        const double v = f(x);
        if (v > peak.value) {
            peak.value = v;
            peak.location = x;
        }
    }
    return peak;
}

}  // namespace nugap
