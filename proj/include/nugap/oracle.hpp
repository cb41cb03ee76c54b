#pragma once

#include <complex>
#include <cstddef>

#include "nugap/indexcheck.hpp"
#include "nugap/lti.hpp"
#include "nugap/peak_search.hpp"

/// Exact reference computations from known transfer functions. Plays the role
/// of a model-based nu-gap routine against which the data-driven estimator is
/// validated.
namespace nugap::oracle {

using Complex = std::complex<double>;
using lti::TransferFunction;

/// |g1 - g2| / sqrt((1 + |g1|^2)(1 + |g2|^2)), in [0, 1].
[[nodiscard]] double chordal_distance(Complex g1, Complex g2) noexcept;

struct ChordalPeak {
    double value = 0.0;
    double omega_star = 0.0;
    double grid_max = 0.0;
};

inline constexpr std::size_t kDefaultGrid = std::size_t{1} << 16;
inline constexpr double kDefaultRefineTol = 1e-8;
inline constexpr std::size_t kDefaultIndexGrid = std::size_t{1} << 14;

/// sup over w in [0, pi] of the chordal distance between the two responses.
/// Throws PoleOnUnitCircle if either plant has a pole within 1e-9 of the circle.
[[nodiscard]] ChordalPeak chordal_sup(const TransferFunction& a, const TransferFunction& b,
                                      std::size_t grid = kDefaultGrid, double tol = kDefaultRefineTol);

/// Index check from exact responses: f1 = 1 + |G0|^2 and f2 = 1 + G conj(G0)
/// sampled at w_k = 2 pi k / grid. Throws CoarseGrid if the grid cannot
/// resolve the winding of either curve.
[[nodiscard]] indexcheck::IndexCheckResult exact_index_check(const TransferFunction& nominal,
                                                             const TransferFunction& plant,
                                                             std::size_t grid = kDefaultIndexGrid,
                                                             const indexcheck::Tolerance& tol = {});

struct OracleResult {
    double chordal_sup = 0.0;
    double omega_star = 0.0;
    bool in_C = false;
    int wno_f1 = 0;
    int wno_f2 = 0;
    double nu_gap = 1.0;
    std::size_t grid_size = 0;
    indexcheck::IndexCheckResult index;
};

/// Gated nu-gap: chordal_sup if the index condition holds, 1 otherwise.
[[nodiscard]] OracleResult nu_gap(const TransferFunction& nominal, const TransferFunction& plant,
                                  std::size_t grid = kDefaultGrid, std::size_t index_grid = kDefaultIndexGrid);

/// Largest singular value of the SISO closed-loop map T(G0, C) at w.
[[nodiscard]] double closed_loop_gain(const TransferFunction& nominal, const TransferFunction& controller,
                                      double omega);

/// b = 1 / sup_w sigma_max(T(G0, C)) if the loop is internally stable, else 0.
[[nodiscard]] double stability_margin(const TransferFunction& nominal, const TransferFunction& controller,
                                      std::size_t grid = kDefaultGrid);

/// sup_w |G(e^{jw})| by grid scan plus refinement.
[[nodiscard]] Peak hinf_norm(const TransferFunction& tf, std::size_t grid = kDefaultGrid,
                             double tol = kDefaultRefineTol);

/// Largest singular value of the N x N lower-triangular Toeplitz matrix built
/// from the first N impulse-response samples, by power iteration on G^T G.
[[nodiscard]] double induced_norm_toeplitz(const TransferFunction& tf, std::size_t n);

}  // namespace nugap::oracle
