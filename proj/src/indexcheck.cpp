#include "nugap/indexcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nugap/error.hpp"

namespace nugap::indexcheck {

void accumulate(IndexAccumulators& acc, const Spectrum& U, const Spectrum& Y, const Spectrum& Y0) {
    const std::size_t n = acc.size();
    if (U.size() != n || Y.size() != n || Y0.size() != n) {
        throw Error(ErrorCode::LengthMismatch, "spectra do not match the accumulator length");
    }
    for (std::size_t k = 0; k < n; ++k) {
        const Complex uc = std::conj(U.bins[k]);
        acc.S_yu[k] += Y.bins[k] * uc;
        acc.S_y0u[k] += Y0.bins[k] * uc;
        acc.S_u[k] += std::norm(U.bins[k]);
    }
    ++acc.batches_accumulated;
}

IndexFunctions build_index_functions(const IndexAccumulators& acc, double epsilon0) {
    if (acc.batches_accumulated == 0) {
        throw Error(ErrorCode::InvalidArgument, "no batches accumulated");
    }
    if (!(epsilon0 > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "epsilon0 must be positive");
    }
    const std::size_t n = acc.size();
    IndexFunctions out{std::vector<Complex>(n), std::vector<Complex>(n)};
    for (std::size_t k = 0; k < n; ++k) {
        const double s = std::max(acc.S_u[k], epsilon0);
        const double s2 = s * s;
        out.f1[k] = Complex{1.0 + std::norm(acc.S_y0u[k]) / s2, 0.0};
        out.f2[k] = 1.0 + acc.S_yu[k] * std::conj(acc.S_y0u[k]) / s2;
    }
    return out;
}

WindingResult measure_winding(std::span<const Complex> path) noexcept {
    WindingResult r;
    const std::size_t n = path.size();
    for (std::size_t k = 0; k < n; ++k) {
        const Complex next = path[(k + 1) % n];
        // arg(next / cur) without the division; arg(0) = 0.
        const double step = std::arg(next * std::conj(path[k]));
        r.theta += step;
        r.max_step = std::max(r.max_step, std::abs(step));
    }
    r.wno = static_cast<int>(std::lround(r.theta / (2.0 * std::numbers::pi)));
    return r;
}

WindingResult winding_number(std::span<const Complex> path) {
    for (const Complex& z : path) {
        if (z == Complex{0.0, 0.0}) {
            throw Error(ErrorCode::PathThroughOrigin, "path passes through the origin");
        }
    }
    const WindingResult r = measure_winding(path);
    if (r.max_step > std::numbers::pi / 2.0) {
        throw Error(ErrorCode::CoarseGrid, "phase step " + std::to_string(r.max_step) + " rad exceeds pi/2");
    }
    return r;
}

double Tolerance::resolve(std::span<const Complex> f2) const {
    if (!(value > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "tol_f must be positive");
    }
    if (mode == Mode::Absolute || f2.empty()) {
        return value;
    }
    std::vector<double> mags(f2.size());
    std::transform(f2.begin(), f2.end(), mags.begin(), [](Complex z) { return std::abs(z); });
    auto mid = mags.begin() + static_cast<std::ptrdiff_t>(mags.size() / 2);
    std::nth_element(mags.begin(), mid, mags.end());
    return value * *mid;
}

IndexCheckResult evaluate(std::span<const Complex> f1, std::span<const Complex> f2, const Tolerance& tol) {
    if (f1.size() != f2.size() || f1.empty()) {
        throw Error(ErrorCode::LengthMismatch, "index functions must have equal nonzero length");
    }
    IndexCheckResult r;
    auto min_abs = [](std::span<const Complex> f) {
        double m = std::abs(f[0]);
        for (const Complex& z : f) {
            m = std::min(m, std::abs(z));
        }
        return m;
    };
    r.m1 = min_abs(f1);
    r.m2 = min_abs(f2);
    r.tol_f = tol.resolve(f2);

    const WindingResult w1 = measure_winding(f1);
    const WindingResult w2 = measure_winding(f2);
    r.wno_f1 = w1.wno;
    r.wno_f2 = w2.wno;
    r.theta1 = w1.theta;
    r.theta2 = w2.theta;
    r.max_phase_step = std::max(w1.max_step, w2.max_step);
    r.coarse_grid = r.max_phase_step > std::numbers::pi / 2.0;

    r.in_C = r.m1 > r.tol_f && r.m2 > r.tol_f && r.wno_f1 == r.wno_f2 && !r.coarse_grid;
    return r;
}

IndexCheckResult check_index(const IndexAccumulators& acc, double epsilon0, const Tolerance& tol) {
    const IndexFunctions f = build_index_functions(acc, epsilon0);
    return evaluate(f.f1, f.f2, tol);
}

}  // namespace nugap::indexcheck
