#include "nugap/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "nugap/error.hpp"
#include "nugap/polynomial.hpp"
#include "nugap/spectral.hpp"

namespace nugap::oracle {
namespace {

constexpr double kCircleMargin = 1e-9;

// Largest eigenvalue of the symmetric tridiagonal matrix (diag, off) by Sturm
// bisection; lower is a known lower bound.
double largest_tridiagonal_eigenvalue(const std::vector<double>& diag, const std::vector<double>& off, double lower) {
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < diag.size(); ++i) {
        const double left = i > 0 ? std::abs(off[i - 1]) : 0.0;
        const double right = i < off.size() ? std::abs(off[i]) : 0.0;
        hi = std::max(hi, diag[i] + left + right);
    }
    double lo = std::min(lower, hi);
    // Number of eigenvalues strictly greater than x.
    const auto count_above = [&](double x) {
        std::size_t count = 0;
        double d = 1.0;
        for (std::size_t i = 0; i < diag.size(); ++i) {
            const double o = i > 0 ? off[i - 1] : 0.0;
            d = diag[i] - x - (i > 0 ? o * o / d : 0.0);
            if (d == 0.0) {
                d = -1e-300;
            }
            count += d > 0.0 ? 1 : 0;
        }
        return count;
    };
    while (hi - lo > 1e-15 * std::max(std::abs(hi), 1e-300)) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        (count_above(mid) > 0 ? lo : hi) = mid;
    }
    return hi;
}

void require_no_circle_poles(const TransferFunction& tf) {
    for (const Complex& p : lti::poles(tf)) {
        if (std::abs(std::abs(p) - 1.0) < kCircleMargin) {
            throw Error(ErrorCode::PoleOnUnitCircle, "plant has a pole on the unit circle");
        }
    }
}

}  // namespace

double chordal_distance(Complex g1, Complex g2) noexcept {
    const double num = std::abs(g1 - g2);
    if (num == 0.0) {
        return 0.0;
    }
    const double den = std::sqrt(1.0 + std::norm(g1)) * std::sqrt(1.0 + std::norm(g2));
    return std::min(1.0, num / den);
}

ChordalPeak chordal_sup(const TransferFunction& a, const TransferFunction& b, std::size_t grid, double tol) {
    require_no_circle_poles(a);
    require_no_circle_poles(b);
    const auto chord = [&](double w) { return chordal_distance(lti::freq_response(a, w), lti::freq_response(b, w)); };
    const Peak p = maximize_on_interval(chord, 0.0, std::numbers::pi, grid, tol);
    return {p.value, p.location, p.grid_value};
}

indexcheck::IndexCheckResult exact_index_check(const TransferFunction& nominal, const TransferFunction& plant,
                                               std::size_t grid, const indexcheck::Tolerance& tol) {
    if (grid < 1024) {
        throw Error(ErrorCode::InvalidArgument, "exact index check needs a grid of at least 1024 points");
    }
    require_no_circle_poles(nominal);
    require_no_circle_poles(plant);
    std::vector<Complex> f1(grid);
    std::vector<Complex> f2(grid);
    for (std::size_t k = 0; k < grid; ++k) {
        const double w = spectral::bin_frequency(k, grid);
        const Complex g0 = lti::freq_response(nominal, w);
        const Complex g = lti::freq_response(plant, w);
        f1[k] = Complex{1.0 + std::norm(g0), 0.0};
        f2[k] = 1.0 + g * std::conj(g0);
    }
    indexcheck::IndexCheckResult r = indexcheck::evaluate(f1, f2, tol);
    if (r.coarse_grid) {
        throw Error(ErrorCode::CoarseGrid, "index-function phase step exceeds pi/2 on a grid of " +
                                               std::to_string(grid) + " points");
    }
    return r;
}

OracleResult nu_gap(const TransferFunction& nominal, const TransferFunction& plant, std::size_t grid,
                    std::size_t index_grid) {
    OracleResult r;
    const ChordalPeak peak = chordal_sup(nominal, plant, grid);
    r.chordal_sup = peak.value;
    r.omega_star = peak.omega_star;
    r.grid_size = grid;
    r.index = exact_index_check(nominal, plant, index_grid);
    r.in_C = r.index.in_C;
    r.wno_f1 = r.index.wno_f1;
    r.wno_f2 = r.index.wno_f2;
    r.nu_gap = r.in_C ? r.chordal_sup : 1.0;
    return r;
}

double closed_loop_gain(const TransferFunction& nominal, const TransferFunction& controller, double omega) {
    const Complex g = lti::freq_response(nominal, omega);
    const Complex c = lti::freq_response(controller, omega);
    // T = [G; 1] (1 + CG)^-1 [-C 1] is rank one, so its norm is a product of vector norms.
    return std::sqrt(1.0 + std::norm(g)) * std::sqrt(1.0 + std::norm(c)) / std::abs(1.0 + c * g);
}

double stability_margin(const TransferFunction& nominal, const TransferFunction& controller, std::size_t grid) {
    const std::vector<double> characteristic = lti::closed_loop_characteristic(nominal, controller);
    if (characteristic[0] == 0.0) {
        return 0.0;
    }
    if (poly::max_root_radius(characteristic) >= 1.0 - kCircleMargin) {
        return 0.0;
    }
    require_no_circle_poles(nominal);
    require_no_circle_poles(controller);
    const auto gain = [&](double w) { return closed_loop_gain(nominal, controller, w); };
    const Peak p = maximize_on_interval(gain, 0.0, std::numbers::pi, grid, kDefaultRefineTol);
    return std::clamp(1.0 / p.value, 0.0, 1.0);
}

Peak hinf_norm(const TransferFunction& tf, std::size_t grid, double tol) {
    require_no_circle_poles(tf);
    return maximize_on_interval([&](double w) { return std::abs(lti::freq_response(tf, w)); }, 0.0,
                                std::numbers::pi, grid, tol);
}

double induced_norm_toeplitz(const TransferFunction& tf, std::size_t n) {
    if (n == 0 || n > 4096) {
        throw Error(ErrorCode::InvalidArgument, "Toeplitz size must lie in [1, 4096]");
    }
    const std::vector<double> g = lti::impulse_response(tf, n);
    if (std::all_of(g.begin(), g.end(), [](double v) { return v == 0.0; })) {
        return 0.0;
    }

    // Products with the triangular Toeplitz matrix are truncated linear
    // convolutions; compute them on a zero-padded FFT grid of length >= 2n.
    const std::size_t len = std::bit_ceil(2 * n);
    std::vector<Complex> kernel(len);
    std::copy(g.begin(), g.end(), kernel.begin());
    kernel = spectral::forward(kernel);

    const auto apply = [&](const std::vector<double>& x) {
        std::vector<Complex> buf(len);
        std::copy(x.begin(), x.end(), buf.begin());
        buf = spectral::forward(buf);
        for (std::size_t k = 0; k < len; ++k) {
            buf[k] *= kernel[k];
        }
        buf = spectral::inverse(buf);
        std::vector<double> out(n);
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = buf[i].real();
        }
        return out;
    };
    // G^T x = reverse(G reverse(x)) for a lower-triangular Toeplitz G.
    const auto apply_transpose = [&](std::vector<double> x) {
        std::reverse(x.begin(), x.end());
        std::vector<double> out = apply(x);
        std::reverse(out.begin(), out.end());
        return out;
    };
    const auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            s += a[i] * b[i];
        }
        return s;
    };

    // Lanczos on the normal operator G^T G. The top singular values of a long
    // Toeplitz section cluster near sup|G|, where plain power iteration needs
    // far more than 10 n steps to settle. Without reorthogonalization the
    // recurrence may produce spurious copies of converged Ritz values, which
    // does not disturb the largest one.
    std::mt19937_64 rng(0x5eed);
    std::normal_distribution<double> gauss;
    std::vector<double> q(n);
    for (double& v : q) {
        v = gauss(rng);
    }
    const double q_norm = std::sqrt(dot(q, q));
    for (double& v : q) {
        v /= q_norm;
    }

    std::vector<double> q_prev(n, 0.0);
    std::vector<double> alpha;
    std::vector<double> beta;
    double lambda = 0.0;
    double b_prev = 0.0;
    for (std::size_t k = 0; k < 10 * n; ++k) {
        std::vector<double> w = apply_transpose(apply(q));
        const double a_k = dot(q, w);
        for (std::size_t i = 0; i < n; ++i) {
            w[i] -= a_k * q[i] + b_prev * q_prev[i];
        }
        alpha.push_back(a_k);
        // Ritz values of nested tridiagonal sections interlace, so the top one
        // rises monotonically towards lambda_max; stop once it stops moving
        // over ten steps.
        bool settled = false;
        if (k % 10 == 0) {
            const double previous = lambda;
            lambda = std::max(lambda, largest_tridiagonal_eigenvalue(alpha, beta, lambda));
            settled = k > 0 && lambda - previous <= 1e-12 * lambda;
        }
        const double b_next = std::sqrt(dot(w, w));
        if (settled || b_next <= 1e-14 * std::max(lambda, 1e-300)) {
            break;
        }
        if (k + 1 == 10 * n) {
            break;
        }
        beta.push_back(b_next);
        q_prev = std::move(q);
        q = std::move(w);
        for (double& v : q) {
            v /= b_next;
        }
        b_prev = b_next;
    }
    lambda = std::max(lambda, largest_tridiagonal_eigenvalue(alpha, beta, lambda));
    return std::sqrt(lambda);
}

}  // namespace nugap::oracle
