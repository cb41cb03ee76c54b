#pragma once

#include <complex>
#include <cstddef>
#include <random>
#include <vector>

#include "nugap/signal.hpp"

namespace nugap::lti {

using Complex = std::complex<double>;

/// Rational SISO system in the unit delay,
///
///     G(z) = z^-d * (b0 + b1 z^-1 + ...) / (a0 + a1 z^-1 + ...)
///
/// Coefficients are ascending powers of z^-1 and the denominator is stored
/// normalized to a0 = 1. Pure dead time lives in the integer delay d and
/// never inflates the polynomial order.
class DiscreteTransferFunction {
public:
    /// Identity system.
    DiscreteTransferFunction();
    DiscreteTransferFunction(std::vector<double> numerator, std::vector<double> denominator,
                             std::size_t input_delay = 0, double sample_time = 1.0);

    [[nodiscard]] static DiscreteTransferFunction gain(double k, double sample_time = 1.0);
    [[nodiscard]] static DiscreteTransferFunction delay(std::size_t samples, double sample_time = 1.0);

    [[nodiscard]] const std::vector<double>& numerator() const noexcept { return numerator_; }
    [[nodiscard]] const std::vector<double>& denominator() const noexcept { return denominator_; }
    [[nodiscard]] std::size_t input_delay() const noexcept { return input_delay_; }
    [[nodiscard]] double sample_time() const noexcept { return sample_time_; }

    [[nodiscard]] bool is_zero() const noexcept;

    friend bool operator==(const DiscreteTransferFunction&, const DiscreteTransferFunction&) = default;

private:
    std::vector<double> numerator_;
    std::vector<double> denominator_;
    std::size_t input_delay_ = 0;
    double sample_time_ = 1.0;
};

using TransferFunction = DiscreteTransferFunction;

struct NoiseSpec {
    double variance = 0.0;
    bool enabled = false;

    [[nodiscard]] static NoiseSpec none() { return {}; }
    [[nodiscard]] static NoiseSpec gaussian(double variance) { return {variance, variance > 0.0}; }
};

/// G(e^{jw}), including the e^{-jwd} delay factor. Throws PoleOnUnitCircle if
/// the denominator magnitude at e^{jw} is below 1e-14.
[[nodiscard]] Complex freq_response(const TransferFunction& tf, double omega);

/// G(e^{j 2 pi k / n}) for k = 0..n-1. Throws PoleOnGrid if any denominator
/// value is within 1e-12 of zero.
[[nodiscard]] std::vector<Complex> grid_response(const TransferFunction& tf, std::size_t n);

[[nodiscard]] std::vector<Complex> poles(const TransferFunction& tf);
[[nodiscard]] double max_pole_radius(const TransferFunction& tf);
/// All poles strictly inside the disk of radius 1 - margin.
[[nodiscard]] bool is_stable(const TransferFunction& tf, double margin = 1e-9);

/// Zero-state response of the difference equation, input shifted by the delay,
/// with optional additive white Gaussian measurement noise. Throws
/// NonFiniteOutput on overflow.
[[nodiscard]] SignalRecord simulate_transient(const TransferFunction& tf, const SignalRecord& input,
                                              const NoiseSpec& noise, std::mt19937_64& rng);
[[nodiscard]] SignalRecord simulate_transient(const TransferFunction& tf, const SignalRecord& input);

/// Periodic steady-state response: y = IDFT(G(w_k) DFT(u)[k]).
[[nodiscard]] SignalRecord simulate_circular(const TransferFunction& tf, const SignalRecord& input);

[[nodiscard]] std::vector<double> impulse_response(const TransferFunction& tf, std::size_t length);

/// a * b. Sample times must agree.
[[nodiscard]] TransferFunction series(const TransferFunction& a, const TransferFunction& b);

/// forward / (1 + loop * forward), i.e. the map from the disturbance at the
/// forward input to the forward output under negative feedback.
[[nodiscard]] TransferFunction feedback(const TransferFunction& forward, const TransferFunction& loop);

/// Characteristic polynomial d_f d_l + z^-(df+dl) n_f n_l of the negative
/// feedback loop. Its roots are the closed-loop poles.
[[nodiscard]] std::vector<double> closed_loop_characteristic(const TransferFunction& forward,
                                                             const TransferFunction& loop);

/// Zero-order-hold image of gain / (T s + 1): pole p = exp(-Ts/T), numerator
/// gain (1 - p), so the DC gain is preserved exactly.
[[nodiscard]] TransferFunction discretize_first_order_lag(double gain, double time_constant,
                                                          double sample_time);

}  // namespace nugap::lti
