#include "nugap/polynomial.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

#include "nugap/error.hpp"

namespace nugap::poly {

std::vector<double> multiply(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) {
        return {0.0};
    }
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            out[i + j] += a[i] * b[j];
        }
    }
    return out;
}

std::vector<double> add_shifted(std::span<const double> a, std::span<const double> b,
                                std::size_t shift) {
    std::vector<double> out(std::max(a.size(), b.size() + shift), 0.0);
    std::copy(a.begin(), a.end(), out.begin());
    for (std::size_t i = 0; i < b.size(); ++i) {
        out[i + shift] += b[i];
    }
    return out;
}

std::vector<double> trim(std::vector<double> c) {
    while (c.size() > 1 && c.back() == 0.0) {
        c.pop_back();
    }
    if (c.empty()) {
        c.push_back(0.0);
    }
    return c;
}

Complex evaluate(std::span<const double> c, Complex x) noexcept {
    Complex acc{0.0, 0.0};
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        acc = acc * x + *it;
    }
    return acc;
}

std::vector<Complex> roots(std::span<const double> c) {
    const std::vector<double> p = trim({c.begin(), c.end()});
    if (p[0] == 0.0) {
        throw Error(ErrorCode::InvalidArgument, "leading coefficient of a delay polynomial is zero");
    }
    const auto n = static_cast<Eigen::Index>(p.size() - 1);
    if (n == 0) {
        return {};
    }
    // Companion matrix of z^n + (p1/p0) z^(n-1) + ... + pn/p0.
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        companion(0, j) = -p[static_cast<std::size_t>(j + 1)] / p[0];
    }
    for (Eigen::Index i = 1; i < n; ++i) {
        companion(i, i - 1) = 1.0;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::InvalidArgument, "polynomial root solver did not converge");
    }
    std::vector<Complex> out(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = solver.eigenvalues()[i];
    }
    return out;
}

double max_root_radius(std::span<const double> c) {
    double r = 0.0;
    for (const Complex& z : roots(c)) {
        r = std::max(r, std::abs(z));
    }
    return r;
}

std::vector<double> from_roots(std::span<const Complex> rs) {
    std::vector<Complex> acc{Complex{1.0, 0.0}};
    for (const Complex& r : rs) {
        std::vector<Complex> next(acc.size() + 1, Complex{0.0, 0.0});
        for (std::size_t i = 0; i < acc.size(); ++i) {
            next[i] += acc[i];
            next[i + 1] -= r * acc[i];
        }
        acc = std::move(next);
    }
    std::vector<double> out(acc.size());
    std::transform(acc.begin(), acc.end(), out.begin(), [](Complex z) { return z.real(); });
    return out;
}

}  // namespace nugap::poly
