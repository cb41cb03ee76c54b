#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "nugap/spectral.hpp"

/// Data-driven verification that (G0, G) satisfies the winding-number index
/// condition, from cross-spectra averaged over several experiments.
namespace nugap::indexcheck {

using Complex = std::complex<double>;
using spectral::Spectrum;

/// Running sums over experiments n of Y_n U_n^*, Y0_n U_n^* and |U_n|^2 per bin.
struct IndexAccumulators {
    std::vector<Complex> S_yu;
    std::vector<Complex> S_y0u;
    std::vector<double> S_u;
    std::size_t batches_accumulated = 0;

    IndexAccumulators() = default;
    explicit IndexAccumulators(std::size_t n) : S_yu(n), S_y0u(n), S_u(n, 0.0) {}

    [[nodiscard]] std::size_t size() const noexcept { return S_u.size(); }
};

/// Throws LengthMismatch unless all spectra have the accumulator length.
void accumulate(IndexAccumulators& acc, const Spectrum& U, const Spectrum& Y, const Spectrum& Y0);

struct IndexFunctions {
    std::vector<Complex> f1;  // 1 + |S_y0u|^2 / max(S_u, eps0)^2, real >= 1
    std::vector<Complex> f2;  // 1 + S_yu conj(S_y0u) / max(S_u, eps0)^2
};

[[nodiscard]] IndexFunctions build_index_functions(const IndexAccumulators& acc, double epsilon0);

struct WindingResult {
    int wno = 0;
    double theta = 0.0;     // summed principal-value phase increments, rad
    double max_step = 0.0;  // largest |increment|, rad
};

/// Phase-increment sum around the closed path path[0], ..., path[N-1], path[0].
/// Never throws; zero samples contribute a zero increment.
[[nodiscard]] WindingResult measure_winding(std::span<const Complex> path) noexcept;

/// As measure_winding, but throws PathThroughOrigin when a sample is exactly
/// zero and CoarseGrid when any increment exceeds pi/2.
[[nodiscard]] WindingResult winding_number(std::span<const Complex> path);

/// Origin-distance threshold of the check. In Relative mode the threshold is
/// value * median_k |f2[k]|; in Absolute mode it is `value` itself.
struct Tolerance {
    enum class Mode { Relative, Absolute };
    double value = 1e-3;
    Mode mode = Mode::Relative;

    [[nodiscard]] double resolve(std::span<const Complex> f2) const;
};

struct IndexCheckResult {
    double m1 = 0.0;
    double m2 = 0.0;
    int wno_f1 = 0;
    int wno_f2 = 0;
    bool in_C = false;
    double theta1 = 0.0;
    double theta2 = 0.0;
    double max_phase_step = 0.0;
    double tol_f = 0.0;        // resolved absolute threshold actually used
    bool coarse_grid = false;  // a phase step exceeded pi/2; in_C forced false
};

/// Minimum origin distances, winding numbers, and the in-C verdict for two
/// sampled index functions.
[[nodiscard]] IndexCheckResult evaluate(std::span<const Complex> f1, std::span<const Complex> f2,
                                        const Tolerance& tol);

[[nodiscard]] IndexCheckResult check_index(const IndexAccumulators& acc, double epsilon0, const Tolerance& tol);

}  // namespace nugap::indexcheck
