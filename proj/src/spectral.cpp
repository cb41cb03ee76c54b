#include "nugap/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "nugap/error.hpp"

namespace nugap {

SignalRecord::SignalRecord(std::vector<double> samples, double sample_time)
    : samples_(std::move(samples)), sample_time_(sample_time) {
    if (!(sample_time_ > 0.0) || !std::isfinite(sample_time_)) {
        throw Error(ErrorCode::InvalidArgument, "sample time must be positive and finite");
    }
    for (double v : samples_) {
        if (!std::isfinite(v)) {
            throw Error(ErrorCode::InvalidArgument, "signal contains non-finite samples");
        }
    }
}

SignalRecord SignalRecord::impulse(std::size_t length, double sample_time) {
    std::vector<double> s(length, 0.0);
    if (length > 0) {
        s[0] = 1.0;
    }
    return SignalRecord(std::move(s), sample_time);
}

SignalRecord SignalRecord::zeros(std::size_t length, double sample_time) {
    return SignalRecord(std::vector<double>(length, 0.0), sample_time);
}

double SignalRecord::norm() const noexcept {
    double acc = 0.0;
    for (double v : samples_) {
        acc += v * v;
    }
    return std::sqrt(acc);
}

namespace spectral {
namespace {

constexpr std::size_t kDirectThreshold = 64;

// Plain complex product; std::complex operator* takes the slow Annex G path.
inline Complex mul(Complex a, Complex b) noexcept {
    return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

// In-place iterative radix-2 transform with a precomputed twiddle table.
class Radix2 {
public:
    explicit Radix2(std::size_t n) : n_(n), twiddle_(n / 2), bitrev_(n) {
        const int bits = std::countr_zero(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t r = 0;
            for (int b = 0; b < bits; ++b) {
                r |= ((i >> b) & 1U) << (bits - 1 - b);
            }
            bitrev_[i] = r;
        }
        for (std::size_t k = 0; k < n / 2; ++k) {
            const double a = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
            twiddle_[k] = {std::cos(a), std::sin(a)};
        }
    }

    // sign < 0: forward kernel e^{-j...}; sign > 0: conjugate kernel (unnormalized).
    void run(std::vector<Complex>& a, int sign) const {
        for (std::size_t i = 0; i < n_; ++i) {
            if (i < bitrev_[i]) {
                std::swap(a[i], a[bitrev_[i]]);
            }
        }
        const double s = sign > 0 ? -1.0 : 1.0;
        for (std::size_t len = 2; len <= n_; len <<= 1) {
            const std::size_t half = len / 2;
            const std::size_t stride = n_ / len;
            for (std::size_t start = 0; start < n_; start += len) {
                for (std::size_t j = 0; j < half; ++j) {
                    const Complex w = twiddle_[j * stride];
                    const double wr = w.real();
                    const double wi = s * w.imag();
                    Complex& lo = a[start + j];
                    Complex& hi = a[start + j + half];
                    const double tr = wr * hi.real() - wi * hi.imag();
                    const double ti = wr * hi.imag() + wi * hi.real();
                    hi = {lo.real() - tr, lo.imag() - ti};
                    lo = {lo.real() + tr, lo.imag() + ti};
                }
            }
        }
    }

    [[nodiscard]] std::size_t size() const noexcept { return n_; }

private:
    std::size_t n_;
    std::vector<Complex> twiddle_;
    std::vector<std::size_t> bitrev_;
};

// Bluestein chirp-z: an N-point DFT expressed as a circular convolution of
// power-of-two length L >= 2N - 1.
class Bluestein {
public:
    explicit Bluestein(std::size_t n) : n_(n), fft_(std::bit_ceil(2 * n - 1)), chirp_(n) {
        const std::size_t l = fft_.size();
        for (std::size_t k = 0; k < n; ++k) {
            // k^2 mod 2N keeps the phase argument small and exact.
            const auto k2 = static_cast<unsigned long long>(k) * k % (2ULL * n);
            const double a = -std::numbers::pi * static_cast<double>(k2) / static_cast<double>(n);
            chirp_[k] = {std::cos(a), std::sin(a)};
        }
        filter_.assign(l, Complex{});
        filter_[0] = std::conj(chirp_[0]);
        for (std::size_t k = 1; k < n; ++k) {
            filter_[k] = std::conj(chirp_[k]);
            filter_[l - k] = std::conj(chirp_[k]);
        }
        fft_.run(filter_, -1);
    }

    [[nodiscard]] std::vector<Complex> forward(std::span<const Complex> x) const {
        const std::size_t l = fft_.size();
        std::vector<Complex> a(l, Complex{});
        for (std::size_t k = 0; k < n_; ++k) {
            a[k] = mul(x[k], chirp_[k]);
        }
        fft_.run(a, -1);
        for (std::size_t k = 0; k < l; ++k) {
            a[k] = mul(a[k], filter_[k]);
        }
        fft_.run(a, +1);
        const double scale = 1.0 / static_cast<double>(l);
        std::vector<Complex> out(n_);
        for (std::size_t k = 0; k < n_; ++k) {
            out[k] = mul(a[k], chirp_[k]) * scale;
        }
        return out;
    }

private:
    std::size_t n_;
    Radix2 fft_;
    std::vector<Complex> chirp_;
    std::vector<Complex> filter_;
};

class Plan {
public:
    explicit Plan(std::size_t n) : n_(n) {
        if (n < kDirectThreshold) {
            return;
        }
        if (std::has_single_bit(n)) {
            radix2_ = std::make_unique<Radix2>(n);
        } else {
            bluestein_ = std::make_unique<Bluestein>(n);
        }
    }

    [[nodiscard]] std::vector<Complex> forward(std::span<const Complex> x) const {
        if (radix2_) {
            std::vector<Complex> a(x.begin(), x.end());
            radix2_->run(a, -1);
            return a;
        }
        if (bluestein_) {
            return bluestein_->forward(x);
        }
        return direct(x);
    }

private:
    [[nodiscard]] std::vector<Complex> direct(std::span<const Complex> x) const {
        std::vector<Complex> out(n_);
        for (std::size_t k = 0; k < n_; ++k) {
            Complex acc{};
            for (std::size_t t = 0; t < n_; ++t) {
                const std::size_t idx = (k * t) % n_;
                const double a = -2.0 * std::numbers::pi * static_cast<double>(idx) / static_cast<double>(n_);
                acc += x[t] * Complex{std::cos(a), std::sin(a)};
            }
            out[k] = acc;
        }
        return out;
    }

    std::size_t n_;
    std::unique_ptr<Radix2> radix2_;
    std::unique_ptr<Bluestein> bluestein_;
};

std::shared_ptr<const Plan> plan_for(std::size_t n) {
    static std::mutex mutex;
    static std::map<std::size_t, std::shared_ptr<const Plan>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot) {
        slot = std::make_shared<const Plan>(n);
    }
    return slot;
}

}  // namespace

double bin_frequency(std::size_t k, std::size_t n) noexcept {
    return 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
}

std::vector<Complex> forward(std::span<const Complex> x) {
    if (x.empty()) {
        return {};
    }
    return plan_for(x.size())->forward(x);
}

std::vector<Complex> inverse(std::span<const Complex> x) {
    if (x.empty()) {
        return {};
    }
    // idft(X) = conj(dft(conj(X))) / N
    std::vector<Complex> c(x.size());
    std::transform(x.begin(), x.end(), c.begin(), [](Complex z) { return std::conj(z); });
    std::vector<Complex> out = plan_for(x.size())->forward(c);
    const double scale = 1.0 / static_cast<double>(x.size());
    for (Complex& z : out) {
        z = std::conj(z) * scale;
    }
    return out;
}

Spectrum dft(const SignalRecord& signal) {
    if (signal.size() < 2) {
        throw Error(ErrorCode::InvalidArgument, "dft requires at least two samples");
    }
    std::vector<Complex> x(signal.size());
    const auto s = signal.samples();
    std::transform(s.begin(), s.end(), x.begin(), [](double v) { return Complex{v, 0.0}; });
    return Spectrum{forward(x), signal.sample_time()};
}

SignalRecord idft(const Spectrum& spectrum) {
    if (spectrum.size() < 2) {
        throw Error(ErrorCode::InvalidArgument, "idft requires at least two bins");
    }
    const std::vector<Complex> x = inverse(spectrum.bins);
    double max_re = 0.0;
    double max_im = 0.0;
    for (const Complex& z : x) {
        max_re = std::max(max_re, std::abs(z.real()));
        max_im = std::max(max_im, std::abs(z.imag()));
    }
    if (max_im > 1e-9 * std::max(1.0, max_re)) {
        throw Error(ErrorCode::NonNegligibleImaginaryPart,
                    "inverse transform has imaginary residue " + std::to_string(max_im));
    }
    std::vector<double> out(x.size());
    std::transform(x.begin(), x.end(), out.begin(), [](Complex z) { return z.real(); });
    return SignalRecord(std::move(out), spectrum.sample_time);
}

}  // namespace spectral
}  // namespace nugap
