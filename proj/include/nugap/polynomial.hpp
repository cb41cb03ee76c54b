#pragma once

#include <complex>
#include <span>
#include <vector>

/// Helpers for real polynomials stored in ascending powers of the unit delay,
/// p(z^-1) = c[0] + c[1] z^-1 + ... + c[n] z^-n.
namespace nugap::poly {

using Complex = std::complex<double>;

[[nodiscard]] std::vector<double> multiply(std::span<const double> a, std::span<const double> b);

/// a + z^-shift * b
[[nodiscard]] std::vector<double> add_shifted(std::span<const double> a, std::span<const double> b,
                                              std::size_t shift);

/// Drops trailing (highest-delay) coefficients that are exactly zero, keeping at least one.
[[nodiscard]] std::vector<double> trim(std::vector<double> c);

/// Horner evaluation of p at z^-1 = x.
[[nodiscard]] Complex evaluate(std::span<const double> c, Complex x) noexcept;

/// Roots in z of z^n p(z^-1). Trailing zero coefficients are trimmed first, so
/// they do not contribute roots at the origin.
[[nodiscard]] std::vector<Complex> roots(std::span<const double> c);

[[nodiscard]] double max_root_radius(std::span<const double> c);

/// Monic delay-polynomial prod_i (1 - r_i z^-1). Roots must come in conjugate
/// pairs; the imaginary residue of the product is dropped.
[[nodiscard]] std::vector<double> from_roots(std::span<const Complex> roots);

}  // namespace nugap::poly
