#include "nugap/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nugap/error.hpp"

namespace nugap::estimator {
namespace {

constexpr double kDeadUpdateNorm = 1e-14;
constexpr std::size_t kConvergenceWindow = 10;
constexpr double kConvergenceSpread = 1e-3;

SignalRecord normalized(const SignalRecord& x) {
    const double s = x.norm();
    if (!(s > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "starting input has zero norm");
    }
    std::vector<double> v(x.samples().begin(), x.samples().end());
    for (double& e : v) {
        e /= s;
    }
    return SignalRecord(std::move(v), x.sample_time());
}

SignalRecord checked_apply(Experiment& e, const SignalRecord& u, const char* who) {
    SignalRecord y = e.apply(u);
    if (y.size() != u.size()) {
        throw Error(ErrorCode::LengthMismatch, std::string(who) + " experiment returned " +
                                                   std::to_string(y.size()) + " samples for an input of " +
                                                   std::to_string(u.size()));
    }
    return y;
}

void attach_diagnostics(EstimationResult& r, const Spectrum& U, const Spectrum& Ut, const Spectrum& Y0,
                        double guard) {
    try {
        const PeakDiagnostics d = peak_diagnostics(U, Ut, Y0, guard);
        r.omega_peak = d.omega_peak;
        r.p0 = d.p0;
        r.diagnostics_valid = true;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::DeadPeakBin) {
            throw;
        }
        r.diagnostics_valid = false;
    }
}

// The loop shared by the full estimator and the standalone index check.
EstimationResult iterate(Experiment& plant, Experiment& nominal, const EstimationConfig& cfg,
                         const SignalRecord& start, bool stop_at_index_check) {
    cfg.validate();
    if (start.size() != cfg.N) {
        throw Error(ErrorCode::LengthMismatch, "starting input length differs from N");
    }
    EstimationResult result;
    result.trace.reserve(cfg.M);

    SignalRecord u = normalized(start);
    indexcheck::IndexAccumulators acc(cfg.N);
    Spectrum U;
    Spectrum Y0;
    Spectrum Ut;

    for (std::size_t n = 0; n < cfg.M; ++n) {
        const SignalRecord y = checked_apply(plant, u, "plant");
        const SignalRecord y0 = checked_apply(nominal, u, "nominal");
        U = spectral::dft(u);
        const Spectrum Y = spectral::dft(y);
        Y0 = spectral::dft(y0);
        Ut = input_update(U, Y, Y0, cfg.update_guard);

        if (n < cfg.N_acc) {
            indexcheck::accumulate(acc, U, Y, Y0);
        }
        if (n == cfg.N_acc) {
            result.index_result = indexcheck::check_index(acc, cfg.epsilon0, cfg.tol_f);
            if (stop_at_index_check) {
                return result;
            }
            if (!result.index_result->in_C) {
                result.trace.push_back(1.0);
                result.estimate = 1.0;
                result.status = Status::IndexFailed;
                attach_diagnostics(result, U, Ut, Y0, cfg.update_guard);
                return result;
            }
        }

        const SignalRecord ut = spectral::idft(Ut);
        const double norm = ut.norm();
        result.trace.push_back(norm);
        if (norm < kDeadUpdateNorm) {
            for (std::size_t k = 0; k < Y.size(); ++k) {
                if (std::abs(Y.bins[k] - Y0.bins[k]) > cfg.update_guard) {
                    throw Error(ErrorCode::DegenerateUpdate,
                                "update vanished although plant and nominal outputs differ");
                }
            }
            if (stop_at_index_check) {
                // Keep probing with the same input until the accumulators are full.
                continue;
            }
            // Indistinguishable responses: the gap is zero and iterating further is meaningless.
            result.estimate = norm;
            result.status = Status::Converged;
            attach_diagnostics(result, U, Ut, Y0, cfg.update_guard);
            return result;
        }
        std::vector<double> next(ut.samples().begin(), ut.samples().end());
        for (double& v : next) {
            v /= norm;
        }
        u = SignalRecord(std::move(next), u.sample_time());
    }

    result.estimate = result.trace.back();
    const std::size_t m = result.trace.size();
    if (m >= kConvergenceWindow) {
        const auto first = result.trace.end() - static_cast<std::ptrdiff_t>(kConvergenceWindow);
        const auto [lo, hi] = std::minmax_element(first, result.trace.end());
        result.status = (*hi - *lo) < kConvergenceSpread ? Status::Converged : Status::MaxIterations;
    }
    attach_diagnostics(result, U, Ut, Y0, cfg.update_guard);
    return result;
}

}  // namespace

std::string_view to_string(SimulationMode mode) noexcept {
    return mode == SimulationMode::Circular ? "circular" : "transient";
}

SimulationMode parse_mode(std::string_view text) {
    if (text == "transient") {
        return SimulationMode::Transient;
    }
    if (text == "circular") {
        return SimulationMode::Circular;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown simulation mode '" + std::string(text) + "'");
}

std::string_view to_string(Status status) noexcept {
    switch (status) {
        case Status::Converged: return "Converged";
        case Status::MaxIterations: return "MaxIterations";
        case Status::IndexFailed: return "IndexFailed";
    }
    return "Unknown";
}

void EstimationConfig::validate() const {
    if (N < 8) {
        throw Error(ErrorCode::InvalidArgument, "N must be at least 8");
    }
    if (!(N_acc > 0 && N_acc < M)) {
        throw Error(ErrorCode::InvalidArgument, "require 0 < N_acc < M");
    }
    if (!(epsilon0 > 0.0) || !(tol_f.value > 0.0) || !(update_guard > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "epsilon0, tol_f and the update guard must be positive");
    }
    if (!(noise_variance >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "noise variance must be nonnegative");
    }
    if (!(sample_time > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "sample time must be positive");
    }
}

SimulatedExperiment::SimulatedExperiment(lti::TransferFunction tf, SimulationMode mode, lti::NoiseSpec noise,
                                         std::uint64_t noise_seed)
    : tf_(std::move(tf)), mode_(mode), noise_(noise), rng_(noise_seed) {}

SignalRecord SimulatedExperiment::apply(const SignalRecord& input) {
    if (mode_ == SimulationMode::Transient) {
        return lti::simulate_transient(tf_, input, noise_, rng_);
    }
    if (grid_cache_.size() != input.size()) {
        grid_cache_ = lti::grid_response(tf_, input.size());
    }
    Spectrum spec = spectral::dft(input);
    for (std::size_t k = 0; k < spec.size(); ++k) {
        spec.bins[k] *= grid_cache_[k];
    }
    SignalRecord y = spectral::idft(spec);
    if (!noise_.enabled || noise_.variance <= 0.0) {
        return y;
    }
    std::vector<double> v(y.samples().begin(), y.samples().end());
    std::normal_distribution<double> gauss(0.0, std::sqrt(noise_.variance));
    for (double& e : v) {
        e += gauss(rng_);
    }
    return SignalRecord(std::move(v), y.sample_time());
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(seed ^ mix(index));
}

SimulatedPair make_simulated_pair(const lti::TransferFunction& plant, const lti::TransferFunction& nominal,
                                  const EstimationConfig& cfg) {
    const lti::NoiseSpec noise = lti::NoiseSpec::gaussian(cfg.noise_variance);
    return {SimulatedExperiment(plant, cfg.mode, noise, derive_seed(cfg.seed, 1)),
            SimulatedExperiment(nominal, cfg.mode, noise, derive_seed(cfg.seed, 2))};
}

SignalRecord initial_input(const EstimationConfig& cfg) {
    std::mt19937_64 rng(derive_seed(cfg.seed, 0));
    std::normal_distribution<double> gauss;
    std::vector<double> u(cfg.N);
    for (double& v : u) {
        v = gauss(rng);
    }
    return normalized(SignalRecord(std::move(u), cfg.sample_time));
}

Spectrum input_update(const Spectrum& U, const Spectrum& Y, const Spectrum& Y0, double guard) {
    const std::size_t n = U.size();
    if (Y.size() != n || Y0.size() != n) {
        throw Error(ErrorCode::LengthMismatch, "update spectra differ in length");
    }
    const double floor = guard * guard;
    Spectrum out{std::vector<Complex>(n), U.sample_time};
    for (std::size_t k = 0; k < n; ++k) {
        const double u2 = std::norm(U.bins[k]);
        const double y2 = std::norm(Y.bins[k]);
        const double y02 = std::norm(Y0.bins[k]);
        if (u2 < floor && y2 < floor && y02 < floor) {
            continue;
        }
        const double den = std::sqrt(std::max(u2 + y2, floor)) * std::sqrt(std::max(u2 + y02, floor));
        out.bins[k] = u2 * (Y.bins[k] - Y0.bins[k]) / den;
    }
    return out;
}

PeakDiagnostics peak_diagnostics(const Spectrum& U_last, const Spectrum& Utilde_last, const Spectrum& Y0_last,
                                 double guard) {
    const std::size_t n = U_last.size();
    if (Utilde_last.size() != n || Y0_last.size() != n || n == 0) {
        throw Error(ErrorCode::LengthMismatch, "diagnostic spectra differ in length");
    }
    std::size_t best = 0;
    double best_mag = std::abs(Utilde_last.bins[0]);
    for (std::size_t k = 1; k <= n / 2; ++k) {
        const double m = std::abs(Utilde_last.bins[k]);
        if (m > best_mag) {
            best_mag = m;
            best = k;
        }
    }
    if (!(std::abs(U_last.bins[best]) > guard)) {
        throw Error(ErrorCode::DeadPeakBin, "input has no energy at the dominant bin " + std::to_string(best));
    }
    return {spectral::bin_frequency(best, n), Y0_last.bins[best] / U_last.bins[best], best};
}

EstimationResult run_estimation(Experiment& plant, Experiment& nominal, const EstimationConfig& cfg) {
    return iterate(plant, nominal, cfg, initial_input(cfg), false);
}

EstimationResult run_estimation(Experiment& plant, Experiment& nominal, const EstimationConfig& cfg,
                                const SignalRecord& start) {
    return iterate(plant, nominal, cfg, start, false);
}

indexcheck::IndexCheckResult run_index_check(Experiment& plant, Experiment& nominal, const EstimationConfig& cfg) {
    EstimationResult r = iterate(plant, nominal, cfg, initial_input(cfg), true);
    if (!r.index_result) {
        throw Error(ErrorCode::InvalidArgument, "index check did not run");
    }
    return *r.index_result;
}

}  // namespace nugap::estimator
