#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "nugap/cli.hpp"
#include "nugap/error.hpp"
#include "nugap/oracle.hpp"
#include "nugap/plants.hpp"

namespace nugap::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::ConfigError, "cannot write " + path.string());
    }
    return out;
}

double parse_double(std::string_view s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw Error(ErrorCode::ConfigError, "malformed number '" + std::string(s) + "' in CSV");
    }
    return v;
}

std::size_t parse_index(std::string_view s) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw Error(ErrorCode::ConfigError, "malformed integer '" + std::string(s) + "' in CSV");
    }
    return v;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path, std::string_view header) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::ConfigError, "cannot open " + path.string());
    }
    std::string line;
    if (!std::getline(in, line) || line != header) {
        throw Error(ErrorCode::ConfigError, path.string() + ": expected header '" + std::string(header) + "'");
    }
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) {
            fields.push_back(f);
        }
        if (fields.size() != 3) {
            throw Error(ErrorCode::ConfigError, path.string() + ": expected 3 fields per row");
        }
        rows.push_back(std::move(fields));
    }
    return rows;
}

json index_json(const indexcheck::IndexCheckResult& r) {
    return {{"m1", r.m1},
            {"m2", r.m2},
            {"wno_f1", r.wno_f1},
            {"wno_f2", r.wno_f2},
            {"in_C", r.in_C},
            {"theta1", r.theta1},
            {"theta2", r.theta2},
            {"max_phase_step", r.max_phase_step},
            {"tol_f", r.tol_f},
            {"coarse_grid", r.coarse_grid}};
}

json config_json(const RunConfig& cfg) {
    const auto& e = cfg.estimation;
    return {{"plant_a", cfg.plant_a.label},
            {"plant_b", cfg.plant_b.label},
            {"N", e.N},
            {"M", e.M},
            {"N_acc", e.N_acc},
            {"epsilon0", e.epsilon0},
            {"tol_f", e.tol_f.value},
            {"tol_f_mode", e.tol_f.mode == indexcheck::Tolerance::Mode::Relative ? "relative" : "absolute"},
            {"noise_variance", e.noise_variance},
            {"sample_time", e.sample_time},
            {"seed", e.seed},
            {"mode", std::string(estimator::to_string(e.mode))},
            {"mc_runs", cfg.mc_runs}};
}

// Oracle reference for the summary; null if the plants are outside its domain.
json oracle_json(const RunConfig& cfg) {
    try {
        const oracle::OracleResult o = oracle::nu_gap(cfg.plant_a.tf, cfg.plant_b.tf);
        json j = {{"chordal_sup", o.chordal_sup}, {"omega_star", o.omega_star}, {"in_C", o.in_C},
                  {"wno_f1", o.wno_f1},           {"wno_f2", o.wno_f2},         {"nu_gap", o.nu_gap},
                  {"abs_g0_at_omega_star", std::abs(lti::freq_response(cfg.plant_a.tf, o.omega_star))}};
        if (cfg.controller) {
            j["stability_margin"] = oracle::stability_margin(cfg.plant_a.tf, cfg.controller->tf);
        }
        return j;
    } catch (const Error&) {
        return nullptr;
    }
}

json result_json(const estimator::EstimationResult& r) {
    json j = {{"estimate", r.estimate},
              {"nu_gap", r.estimate},
              {"status", std::string(estimator::to_string(r.status))},
              {"iterations", r.trace.size()},
              {"diagnostics_valid", r.diagnostics_valid},
              {"omega_peak", r.omega_peak},
              {"abs_p0", std::abs(r.p0)},
              {"p0", {r.p0.real(), r.p0.imag()}}};
    j["index"] = r.index_result ? index_json(*r.index_result) : json(nullptr);
    return j;
}

void write_json(const fs::path& path, const json& j) {
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

std::vector<TraceRow> trace_rows(std::size_t run, const estimator::EstimationResult& r) {
    std::vector<TraceRow> rows;
    rows.reserve(r.trace.size());
    for (std::size_t i = 0; i < r.trace.size(); ++i) {
        rows.push_back({run, i, r.trace[i], std::string(estimator::to_string(r.status))});
    }
    return rows;
}

estimator::EstimationResult run_single(const RunConfig& cfg, const estimator::EstimationConfig& est) {
    auto pair = estimator::make_simulated_pair(cfg.plant_b.tf, cfg.plant_a.tf, est);
    return estimator::run_estimation(pair.plant, pair.nominal, est);
}

void print_index(std::ostream& out, const indexcheck::IndexCheckResult& r) {
    out << "m1=" << r.m1 << " m2=" << r.m2 << " tol_f=" << r.tol_f << '\n'
        << "wno_f1=" << r.wno_f1 << " wno_f2=" << r.wno_f2 << " max_phase_step=" << r.max_phase_step
        << (r.coarse_grid ? " (coarse grid)" : "") << '\n'
        << "in_C=" << (r.in_C ? "true" : "false") << '\n';
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

void write_trace_csv(const fs::path& path, std::span<const TraceRow> rows) {
    auto out = open_out(path);
    out << "run,iter,estimate\n";
    for (const TraceRow& r : rows) {
        out << r.run << ',' << r.iteration << ',' << format_double(r.estimate) << '\n';
    }
}

std::vector<TraceRow> read_trace_csv(const fs::path& path) {
    std::vector<TraceRow> rows;
    for (const auto& f : read_csv(path, "run,iter,estimate")) {
        rows.push_back({parse_index(f[0]), parse_index(f[1]), parse_double(f[2]), {}});
    }
    return rows;
}

void write_mean_csv(const fs::path& path, std::span<const MeanRow> rows) {
    auto out = open_out(path);
    out << "iter,mean_estimate,std_estimate\n";
    for (const MeanRow& r : rows) {
        out << r.iteration << ',' << format_double(r.mean) << ',' << format_double(r.stddev) << '\n';
    }
}

std::vector<MeanRow> read_mean_csv(const fs::path& path) {
    std::vector<MeanRow> rows;
    for (const auto& f : read_csv(path, "iter,mean_estimate,std_estimate")) {
        rows.push_back({parse_index(f[0]), parse_double(f[1]), parse_double(f[2])});
    }
    return rows;
}

std::vector<MeanRow> mc_mean(std::span<const std::vector<double>> traces, std::size_t iterations) {
    std::vector<MeanRow> rows(iterations);
    const auto runs = static_cast<double>(traces.size());
    for (std::size_t i = 0; i < iterations; ++i) {
        double sum = 0.0;
        double sum_sq = 0.0;
        for (const auto& t : traces) {
            const double v = t.empty() ? 0.0 : t[std::min(i, t.size() - 1)];
            sum += v;
            sum_sq += v * v;
        }
        const double mean = runs > 0 ? sum / runs : 0.0;
        const double var = runs > 1 ? std::max(0.0, (sum_sq - runs * mean * mean) / (runs - 1.0)) : 0.0;
        rows[i] = {i, mean, std::sqrt(var)};
    }
    return rows;
}

std::vector<estimator::EstimationResult> run_monte_carlo(const RunConfig& cfg, std::size_t runs) {
    std::vector<estimator::EstimationResult> results(runs);
    std::vector<std::exception_ptr> errors(runs);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < runs; i = next++) {
            estimator::EstimationConfig est = cfg.estimation;
            if (!cfg.mc_fixed_seed) {
                est.seed = estimator::derive_seed(cfg.estimation.seed, i);
            }
            try {
                results[i] = run_single(cfg, est);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t threads = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(runs, 1));
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < threads; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    pool.clear();
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return results;
}

int cmd_estimate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        const estimator::EstimationResult r = run_single(cfg, cfg.estimation);
        fs::create_directories(cfg.output_dir);
        if (cfg.emit_csv) {
            write_trace_csv(cfg.output_dir / "trace.csv", trace_rows(0, r));
        }
        if (cfg.emit_json) {
            json summary = result_json(r);
            summary["oracle"] = oracle_json(cfg);
            summary["config"] = config_json(cfg);
            write_json(cfg.output_dir / "summary.json", summary);
        }
        out << "estimate=" << format_double(r.estimate) << " status=" << estimator::to_string(r.status)
            << " iterations=" << r.trace.size() << " omega_peak=" << r.omega_peak << " |p0|=" << std::abs(r.p0)
            << '\n';
        return r.status == estimator::Status::IndexFailed ? kExitIndexFailed : kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
}

int cmd_mc(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        const auto results = run_monte_carlo(cfg, cfg.mc_runs);
        std::vector<std::vector<double>> traces;
        std::vector<TraceRow> rows;
        std::size_t failed = 0;
        for (std::size_t i = 0; i < results.size(); ++i) {
            traces.push_back(results[i].trace);
            auto r = trace_rows(i, results[i]);
            rows.insert(rows.end(), r.begin(), r.end());
            failed += results[i].status == estimator::Status::IndexFailed ? 1 : 0;
        }
        const auto means = mc_mean(traces, cfg.estimation.M);
        fs::create_directories(cfg.output_dir);
        if (cfg.emit_csv) {
            write_trace_csv(cfg.output_dir / "trace.csv", rows);
            write_mean_csv(cfg.output_dir / "mc_mean.csv", means);
        }
        if (cfg.emit_json) {
            json runs = json::array();
            for (const auto& r : results) {
                runs.push_back(result_json(r));
            }
            json summary = {{"mc_runs", cfg.mc_runs},
                            {"index_failed_runs", failed},
                            {"mean_final_estimate", means.back().mean},
                            {"std_final_estimate", means.back().stddev},
                            {"runs", runs}};
            summary["oracle"] = oracle_json(cfg);
            summary["config"] = config_json(cfg);
            write_json(cfg.output_dir / "summary.json", summary);
        }
        out << "runs=" << cfg.mc_runs << " mean_final_estimate=" << format_double(means.back().mean)
            << " std=" << format_double(means.back().stddev) << " index_failed=" << failed << '\n';
        return failed > 0 ? kExitIndexFailed : kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
}

int cmd_oracle(const PlantSpec& nominal, const PlantSpec& plant, const std::optional<PlantSpec>& controller,
               std::ostream& out) {
    const oracle::OracleResult o = oracle::nu_gap(nominal.tf, plant.tf);
    out << "nominal=" << nominal.label << " plant=" << plant.label << '\n'
        << "chordal_sup=" << format_double(o.chordal_sup) << '\n'
        << "omega_star=" << format_double(o.omega_star) << '\n'
        << "wno_f1=" << o.wno_f1 << " wno_f2=" << o.wno_f2 << '\n'
        << "in_C=" << (o.in_C ? "true" : "false") << '\n'
        << "nu_gap=" << format_double(o.nu_gap) << '\n';
    if (controller) {
        const double b = oracle::stability_margin(nominal.tf, controller->tf);
        out << "stability_margin=" << format_double(b) << '\n';
        if (b > o.nu_gap) {
            out << "b_{G0,C} > nu_gap: the controller stabilizes every plant within this gap, including the plant\n";
        } else {
            out << "b_{G0,C} <= nu_gap: no robustness guarantee for the plant\n";
        }
    }
    return kExitOk;
}

int cmd_index_check(const RunConfig& cfg, std::ostream& out) {
    auto pair = estimator::make_simulated_pair(cfg.plant_b.tf, cfg.plant_a.tf, cfg.estimation);
    const indexcheck::IndexCheckResult r = estimator::run_index_check(pair.plant, pair.nominal, cfg.estimation);
    print_index(out, r);
    return r.in_C ? kExitOk : kExitNotInC;
}

int cmd_plant_list(std::ostream& out) {
    for (const auto& p : plants::builtin_plants()) {
        out << p.name << "  " << p.description << '\n';
    }
    return kExitOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Data-driven nu-gap estimation between discrete-time SISO plants"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    std::string mode;
    auto add_run_flags = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "Run configuration (JSON)")->required();
        sub->add_option("--seed", seed, "Override the RNG seed");
        sub->add_option("--out", out_dir, "Override the output directory");
        sub->add_option("--mode", mode, "Simulation mode")->check(CLI::IsMember({"transient", "circular"}));
    };
    CLI::App* estimate = app.add_subcommand("estimate", "Run one estimation");
    add_run_flags(estimate);
    CLI::App* mc = app.add_subcommand("mc", "Run the Monte Carlo harness");
    add_run_flags(mc);
    CLI::App* index = app.add_subcommand("index-check", "Run the data-driven index check only");
    add_run_flags(index);

    CLI::App* oracle_cmd = app.add_subcommand("oracle", "Exact reference values from known plants");
    std::string oracle_config;
    std::string plant_a;
    std::string plant_b;
    std::string controller;
    oracle_cmd->add_option("--config", oracle_config, "Run configuration (JSON)");
    oracle_cmd->add_option("--plant-a", plant_a, "Nominal plant: built-in name or plant file");
    oracle_cmd->add_option("--plant-b", plant_b, "Plant under test: built-in name or plant file");
    oracle_cmd->add_option("--controller", controller, "Controller for the stability margin");

    CLI::App* plant = app.add_subcommand("plant", "Plant utilities");
    plant->require_subcommand(1);
    CLI::App* plant_list = plant->add_subcommand("list", "List built-in plants");

    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) {
        args.emplace_back(argv[i]);
    }
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o;
        std::ostringstream eo;
        const int code = app.exit(e, o, eo);
        out << o.str();
        err << eo.str();
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        auto load = [&] {
            RunConfig cfg = load_run_config(config_path);
            if (seed) {
                cfg.estimation.seed = *seed;
            }
            if (!out_dir.empty()) {
                cfg.output_dir = out_dir;
            }
            if (!mode.empty()) {
                cfg.estimation.mode = estimator::parse_mode(mode);
            }
            return cfg;
        };
        if (*estimate) {
            return cmd_estimate(load(), out, err);
        }
        if (*mc) {
            return cmd_mc(load(), out, err);
        }
        if (*index) {
            return cmd_index_check(load(), out);
        }
        if (*oracle_cmd) {
            std::optional<PlantSpec> ctrl;
            if (!oracle_config.empty()) {
                RunConfig cfg = load_run_config(oracle_config);
                if (!controller.empty()) {
                    cfg.controller = load_plant(controller);
                }
                return cmd_oracle(cfg.plant_a, cfg.plant_b, cfg.controller, out);
            }
            if (plant_a.empty() || plant_b.empty()) {
                err << "error: oracle needs --config or both --plant-a and --plant-b\n";
                return kExitError;
            }
            if (!controller.empty()) {
                ctrl = load_plant(controller);
            }
            return cmd_oracle(load_plant(plant_a), load_plant(plant_b), ctrl, out);
        }
        if (*plant_list) {
            return cmd_plant_list(out);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}

}  // namespace nugap::cli
