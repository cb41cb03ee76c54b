#pragma once

#include <complex>
#include <span>
#include <vector>

#include "nugap/signal.hpp"

/// Arbitrary-length DFT on the grid w_k = 2 pi k / N. Forward transform is
/// unnormalized; the inverse carries the 1/N factor.
namespace nugap::spectral {

using Complex = std::complex<double>;

struct Spectrum {
    std::vector<Complex> bins;
    double sample_time = 1.0;

    [[nodiscard]] std::size_t size() const noexcept { return bins.size(); }
    [[nodiscard]] Complex operator[](std::size_t k) const { return bins[k]; }
};

/// Grid frequency of bin k, in rad/sample.
[[nodiscard]] double bin_frequency(std::size_t k, std::size_t n) noexcept;

[[nodiscard]] std::vector<Complex> forward(std::span<const Complex> x);
[[nodiscard]] std::vector<Complex> inverse(std::span<const Complex> x);

[[nodiscard]] Spectrum dft(const SignalRecord& signal);

/// Throws NonNegligibleImaginaryPart when the spectrum is not conjugate
/// symmetric, i.e. max|Im| > 1e-9 * max(1, max|Re|).
[[nodiscard]] SignalRecord idft(const Spectrum& spectrum);

}  // namespace nugap::spectral
