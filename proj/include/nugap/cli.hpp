#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nugap/estimator.hpp"
#include "nugap/lti.hpp"

/// Command-line front end: configuration files, subcommands, the Monte Carlo
/// harness, and CSV/JSON output.
namespace nugap::cli {

/// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitIndexFailed = 2;
inline constexpr int kExitNotInC = 3;

struct PlantSpec {
    std::string label;
    lti::TransferFunction tf;
};

/// Everything one `estimate`, `mc` or `index-check` invocation needs.
/// plant_a is the nominal model G0, plant_b the plant G under test.
struct RunConfig {
    PlantSpec plant_a;
    PlantSpec plant_b;
    std::optional<PlantSpec> controller;
    estimator::EstimationConfig estimation;
    std::size_t mc_runs = 1;
    /// When set, every Monte Carlo run reuses estimation.seed instead of a derived stream.
    bool mc_fixed_seed = false;
    std::filesystem::path output_dir = "out";
    bool emit_csv = true;
    bool emit_json = true;
};

/// Plant specification: a built-in name, a path to a plant file, or an inline
/// JSON object. Relative paths resolve against base_dir.
[[nodiscard]] PlantSpec parse_plant_text(std::string_view text, const std::filesystem::path& base_dir = ".");
[[nodiscard]] PlantSpec load_plant(std::string_view name_or_path, const std::filesystem::path& base_dir = ".");

[[nodiscard]] RunConfig parse_run_config(std::string_view json_text, const std::filesystem::path& base_dir = ".");
[[nodiscard]] RunConfig load_run_config(const std::filesystem::path& path);

struct TraceRow {
    std::size_t run = 0;
    std::size_t iteration = 0;
    double estimate = 0.0;
    std::string status_flag;
};

struct MeanRow {
    std::size_t iteration = 0;
    double mean = 0.0;
    double stddev = 0.0;
};

/// Shortest round-trip decimal representation, independent of the C++ locale.
[[nodiscard]] std::string format_double(double v);

/// Header `run,iter,estimate`.
void write_trace_csv(const std::filesystem::path& path, std::span<const TraceRow> rows);
[[nodiscard]] std::vector<TraceRow> read_trace_csv(const std::filesystem::path& path);

/// Header `iter,mean_estimate,std_estimate`.
void write_mean_csv(const std::filesystem::path& path, std::span<const MeanRow> rows);
[[nodiscard]] std::vector<MeanRow> read_mean_csv(const std::filesystem::path& path);

/// Per-iteration mean and sample standard deviation over runs; a run that
/// stopped early holds its last value for the remaining iterations.
[[nodiscard]] std::vector<MeanRow> mc_mean(std::span<const std::vector<double>> traces, std::size_t iterations);

/// Runs `runs` independent estimations, possibly concurrently. Results are
/// indexed by run and do not depend on scheduling.
[[nodiscard]] std::vector<estimator::EstimationResult> run_monte_carlo(const RunConfig& cfg, std::size_t runs);

int cmd_estimate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_mc(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_oracle(const PlantSpec& nominal, const PlantSpec& plant, const std::optional<PlantSpec>& controller,
               std::ostream& out);
int cmd_index_check(const RunConfig& cfg, std::ostream& out);
int cmd_plant_list(std::ostream& out);

/// Parses argv and dispatches; never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nugap::cli
