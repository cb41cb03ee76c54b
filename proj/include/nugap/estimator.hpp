#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "nugap/indexcheck.hpp"
#include "nugap/lti.hpp"
#include "nugap/signal.hpp"
#include "nugap/spectral.hpp"

/// Data-driven nu-gap estimation by power iteration with frequency-domain
/// input redesign. Each iteration applies the current unit-norm input to both
/// the plant and the nominal model, forms the chordal-distance-weighted update
/// spectrum, and feeds its normalized inverse transform back as the next input.
/// The first N_acc experiments are accumulated for the index check; a failed
/// check stops the run with estimate 1.
namespace nugap::estimator {

using Complex = std::complex<double>;
using spectral::Spectrum;

enum class SimulationMode { Transient, Circular };

[[nodiscard]] std::string_view to_string(SimulationMode mode) noexcept;
[[nodiscard]] SimulationMode parse_mode(std::string_view text);

struct EstimationConfig {
    std::size_t N = 9000;
    std::size_t M = 150;
    std::size_t N_acc = 10;
    double epsilon0 = 1e-12;
    indexcheck::Tolerance tol_f{};
    double update_guard = 1e-12;
    double noise_variance = 0.01;
    double sample_time = 0.05;
    std::uint64_t seed = 42;
    SimulationMode mode = SimulationMode::Transient;

    /// Throws InvalidArgument unless 0 < N_acc < M, N >= 8, epsilon0 > 0, tol_f > 0.
    void validate() const;
};

enum class Status { Converged, MaxIterations, IndexFailed };

[[nodiscard]] std::string_view to_string(Status status) noexcept;

struct EstimationResult {
    double estimate = 0.0;
    Status status = Status::MaxIterations;
    std::vector<double> trace;
    std::optional<indexcheck::IndexCheckResult> index_result;
    double omega_peak = 0.0;
    Complex p0{};
    bool diagnostics_valid = false;
};

/// Black-box experiment: maps a length-N input record to a length-N output record.
class Experiment {
public:
    virtual ~Experiment() = default;
    [[nodiscard]] virtual SignalRecord apply(const SignalRecord& input) = 0;
};

/// Experiment backed by a known transfer function and its own noise stream.
class SimulatedExperiment final : public Experiment {
public:
    SimulatedExperiment(lti::TransferFunction tf, SimulationMode mode, lti::NoiseSpec noise,
                        std::uint64_t noise_seed);

    [[nodiscard]] SignalRecord apply(const SignalRecord& input) override;

    [[nodiscard]] const lti::TransferFunction& transfer_function() const noexcept { return tf_; }

private:
    lti::TransferFunction tf_;
    SimulationMode mode_;
    lti::NoiseSpec noise_;
    std::mt19937_64 rng_;
    std::vector<Complex> grid_cache_;
};

/// splitmix64-style mixing of (seed, index) into an independent stream seed.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// Plant and nominal experiments for cfg, with noise streams derived from cfg.seed.
struct SimulatedPair {
    SimulatedExperiment plant;
    SimulatedExperiment nominal;
};
[[nodiscard]] SimulatedPair make_simulated_pair(const lti::TransferFunction& plant,
                                                const lti::TransferFunction& nominal,
                                                const EstimationConfig& cfg);

/// I.i.d. standard Gaussian vector of length cfg.N drawn from cfg.seed, scaled to unit 2-norm.
[[nodiscard]] SignalRecord initial_input(const EstimationConfig& cfg);

/// Per bin: |U|^2 (Y - Y0) / (sqrt(|U|^2 + |Y|^2) sqrt(|U|^2 + |Y0|^2)).
/// Each root argument is floored at guard^2; bins where |U|, |Y| and |Y0|
/// are all below guard map to zero.
[[nodiscard]] Spectrum input_update(const Spectrum& U, const Spectrum& Y, const Spectrum& Y0, double guard);

struct PeakDiagnostics {
    double omega_peak = 0.0;
    Complex p0{};
    std::size_t bin = 0;
};

/// Dominant bin of the update spectrum over [0, pi] and the nominal local
/// gain Y0/U there. Throws DeadPeakBin if |U| at that bin is not above guard.
[[nodiscard]] PeakDiagnostics peak_diagnostics(const Spectrum& U_last, const Spectrum& Utilde_last,
                                               const Spectrum& Y0_last, double guard = 1e-12);

[[nodiscard]] EstimationResult run_estimation(Experiment& plant, Experiment& nominal, const EstimationConfig& cfg);

/// As above with a caller-supplied starting input; it is normalized to unit 2-norm first.
[[nodiscard]] EstimationResult run_estimation(Experiment& plant, Experiment& nominal, const EstimationConfig& cfg,
                                              const SignalRecord& start);

/// Runs only the first N_acc experiments and the index check.
[[nodiscard]] indexcheck::IndexCheckResult run_index_check(Experiment& plant, Experiment& nominal,
                                                           const EstimationConfig& cfg);

}  // namespace nugap::estimator
