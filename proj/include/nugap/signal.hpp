#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nugap {

/// Real, uniformly sampled time-domain record.
class SignalRecord {
public:
    SignalRecord() = default;
    /// Throws InvalidArgument on non-finite samples or a non-positive sample time.
    explicit SignalRecord(std::vector<double> samples, double sample_time = 1.0);

    [[nodiscard]] static SignalRecord impulse(std::size_t length, double sample_time = 1.0);
    [[nodiscard]] static SignalRecord zeros(std::size_t length, double sample_time = 1.0);

    [[nodiscard]] std::size_t size() const noexcept { return samples_.size(); }
    [[nodiscard]] double sample_time() const noexcept { return sample_time_; }
    [[nodiscard]] std::span<const double> samples() const noexcept { return samples_; }
    [[nodiscard]] double operator[](std::size_t i) const { return samples_[i]; }

    [[nodiscard]] double norm() const noexcept;

private:
    std::vector<double> samples_;
    double sample_time_ = 1.0;
};

}  // namespace nugap
