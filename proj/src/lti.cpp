#include "nugap/lti.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nugap/error.hpp"
#include "nugap/polynomial.hpp"
#include "nugap/spectral.hpp"

namespace nugap::lti {
namespace {

void require_finite(const std::vector<double>& c, const char* what) {
    if (c.empty()) {
        throw Error(ErrorCode::InvalidArgument, std::string(what) + " has no coefficients");
    }
    for (double v : c) {
        if (!std::isfinite(v)) {
            throw Error(ErrorCode::InvalidArgument, std::string(what) + " has non-finite coefficients");
        }
    }
}

void require_same_sample_time(const TransferFunction& a, const TransferFunction& b) {
    if (std::abs(a.sample_time() - b.sample_time()) > 1e-12 * std::max(a.sample_time(), b.sample_time())) {
        throw Error(ErrorCode::InvalidArgument, "sample times differ");
    }
}

}  // namespace

DiscreteTransferFunction::DiscreteTransferFunction() : DiscreteTransferFunction({1.0}, {1.0}) {}

DiscreteTransferFunction::DiscreteTransferFunction(std::vector<double> numerator,
                                                   std::vector<double> denominator,
                                                   std::size_t input_delay, double sample_time)
    : input_delay_(input_delay), sample_time_(sample_time) {
    require_finite(numerator, "numerator");
    require_finite(denominator, "denominator");
    if (denominator[0] == 0.0) {
        throw Error(ErrorCode::InvalidArgument, "leading denominator coefficient is zero");
    }
    if (!(sample_time > 0.0) || !std::isfinite(sample_time)) {
        throw Error(ErrorCode::InvalidArgument, "sample time must be positive");
    }
    const double a0 = denominator[0];
    for (double& v : numerator) {
        v /= a0;
    }
    for (double& v : denominator) {
        v /= a0;
    }
    numerator_ = poly::trim(std::move(numerator));
    denominator_ = poly::trim(std::move(denominator));
}

DiscreteTransferFunction DiscreteTransferFunction::gain(double k, double sample_time) {
    return {{k}, {1.0}, 0, sample_time};
}

DiscreteTransferFunction DiscreteTransferFunction::delay(std::size_t samples, double sample_time) {
    return {{1.0}, {1.0}, samples, sample_time};
}

bool DiscreteTransferFunction::is_zero() const noexcept {
    return std::all_of(numerator_.begin(), numerator_.end(), [](double v) { return v == 0.0; });
}

Complex freq_response(const TransferFunction& tf, double omega) {
    const Complex zinv = std::polar(1.0, -omega);
    const Complex den = poly::evaluate(tf.denominator(), zinv);
    if (std::abs(den) < 1e-14) {
        throw Error(ErrorCode::PoleOnUnitCircle, "denominator vanishes at w = " + std::to_string(omega));
    }
    const Complex num = poly::evaluate(tf.numerator(), zinv);
    const Complex shift = std::polar(1.0, -omega * static_cast<double>(tf.input_delay()));
    return num / den * shift;
}

std::vector<Complex> grid_response(const TransferFunction& tf, std::size_t n) {
    std::vector<Complex> out(n);
    const std::size_t d = tf.input_delay();
    for (std::size_t k = 0; k < n; ++k) {
        const double w = spectral::bin_frequency(k, n);
        const Complex zinv = std::polar(1.0, -w);
        const Complex den = poly::evaluate(tf.denominator(), zinv);
        if (std::abs(den) < 1e-12) {
            throw Error(ErrorCode::PoleOnGrid, "pole on DFT grid at bin " + std::to_string(k));
        }
        // Reduce k*d mod n so the delay phase stays exact for long delays.
        const double wd = spectral::bin_frequency((k * d) % n, n);
        out[k] = poly::evaluate(tf.numerator(), zinv) / den * std::polar(1.0, -wd);
    }
    return out;
}

std::vector<Complex> poles(const TransferFunction& tf) { return poly::roots(tf.denominator()); }

double max_pole_radius(const TransferFunction& tf) { return poly::max_root_radius(tf.denominator()); }

bool is_stable(const TransferFunction& tf, double margin) { return max_pole_radius(tf) < 1.0 - margin; }

SignalRecord simulate_transient(const TransferFunction& tf, const SignalRecord& input,
                                const NoiseSpec& noise, std::mt19937_64& rng) {
    const std::size_t n = input.size();
    if (n == 0) {
        throw Error(ErrorCode::InvalidArgument, "input is empty");
    }
    const auto& b = tf.numerator();
    const auto& a = tf.denominator();
    const std::size_t d = tf.input_delay();
    const auto u = input.samples();

    std::vector<double> y(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < b.size(); ++i) {
            const std::size_t lag = i + d;
            if (lag > k) {
                break;
            }
            acc += b[i] * u[k - lag];
        }
        for (std::size_t i = 1; i < a.size() && i <= k; ++i) {
            acc -= a[i] * y[k - i];
        }
        y[k] = acc;
    }
    if (noise.enabled && noise.variance > 0.0) {
        std::normal_distribution<double> gauss(0.0, std::sqrt(noise.variance));
        for (double& v : y) {
            v += gauss(rng);
        }
    }
    for (double v : y) {
        if (!std::isfinite(v)) {
            throw Error(ErrorCode::NonFiniteOutput, "simulation overflowed");
        }
    }
    return SignalRecord(std::move(y), input.sample_time());
}

SignalRecord simulate_transient(const TransferFunction& tf, const SignalRecord& input) {
    std::mt19937_64 unused(0);
    return simulate_transient(tf, input, NoiseSpec::none(), unused);
}

SignalRecord simulate_circular(const TransferFunction& tf, const SignalRecord& input) {
    if (input.size() < 2) {
        throw Error(ErrorCode::InvalidArgument, "circular simulation needs at least two samples");
    }
    spectral::Spectrum spec = spectral::dft(input);
    const std::vector<Complex> h = grid_response(tf, input.size());
    for (std::size_t k = 0; k < spec.size(); ++k) {
        spec.bins[k] *= h[k];
    }
    return spectral::idft(spec);
}

std::vector<double> impulse_response(const TransferFunction& tf, std::size_t length) {
    if (length == 0) {
        throw Error(ErrorCode::InvalidArgument, "impulse response length must be positive");
    }
    const SignalRecord y = simulate_transient(tf, SignalRecord::impulse(length, tf.sample_time()));
    return {y.samples().begin(), y.samples().end()};
}

TransferFunction series(const TransferFunction& a, const TransferFunction& b) {
    require_same_sample_time(a, b);
    return {poly::multiply(a.numerator(), b.numerator()), poly::multiply(a.denominator(), b.denominator()),
            a.input_delay() + b.input_delay(), a.sample_time()};
}

std::vector<double> closed_loop_characteristic(const TransferFunction& forward, const TransferFunction& loop) {
    require_same_sample_time(forward, loop);
    return poly::add_shifted(poly::multiply(forward.denominator(), loop.denominator()),
                             poly::multiply(forward.numerator(), loop.numerator()),
                             forward.input_delay() + loop.input_delay());
}

TransferFunction feedback(const TransferFunction& forward, const TransferFunction& loop) {
    std::vector<double> den = closed_loop_characteristic(forward, loop);
    if (den[0] == 0.0) {
        throw Error(ErrorCode::InvalidArgument, "feedback loop is not well posed (1 + L = 0 at infinity)");
    }
    return {poly::multiply(forward.numerator(), loop.denominator()), std::move(den), forward.input_delay(),
            forward.sample_time()};
}

TransferFunction discretize_first_order_lag(double gain, double time_constant, double sample_time) {
    if (!(time_constant > 0.0)) {
        throw Error(ErrorCode::NonPositiveTimeConstant, "time constant must be positive");
    }
    if (!(sample_time > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "sample time must be positive");
    }
    const double p = std::exp(-sample_time / time_constant);
    return {{gain * (1.0 - p)}, {1.0, -p}, 0, sample_time};
}

}  // namespace nugap::lti
