// Acceptance runner: one PASS/FAIL line per primary criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "nugap/cli.hpp"
#include "nugap/estimator.hpp"
#include "nugap/indexcheck.hpp"
#include "nugap/lti.hpp"
#include "nugap/oracle.hpp"
#include "nugap/plants.hpp"
#include "nugap/spectral.hpp"
#include "support.hpp"

using namespace nugap;
using estimator::EstimationConfig;
using estimator::SimulationMode;
using estimator::Status;
using lti::Complex;
using lti::TransferFunction;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& body) {
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str());
    std::fflush(stdout);
}

template <typename... Args>
std::string fmt(const char* f, Args... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

estimator::EstimationResult estimate(const TransferFunction& plant, const TransferFunction& nominal,
                                     const EstimationConfig& cfg) {
    auto pair = estimator::make_simulated_pair(plant, nominal, cfg);
    return estimator::run_estimation(pair.plant, pair.nominal, cfg);
}

const std::vector<testing::GatedPair>& random_pairs() {
    static const auto pairs = testing::gated_pairs(20);
    return pairs;
}

EstimationConfig agreement_config(std::size_t i) {
    EstimationConfig cfg;
    cfg.N = 4096;
    cfg.M = 60;
    cfg.N_acc = 10;
    cfg.sample_time = 1.0;
    cfg.noise_variance = 0.0;
    cfg.mode = SimulationMode::Circular;
    cfg.seed = i + 1;
    return cfg;
}

const std::vector<estimator::EstimationResult>& agreement_runs() {
    static const auto runs = [] {
        std::vector<estimator::EstimationResult> out;
        for (std::size_t i = 0; i < random_pairs().size(); ++i) {
            out.push_back(estimate(random_pairs()[i].plant, random_pairs()[i].nominal, agreement_config(i)));
        }
        return out;
    }();
    return runs;
}

Outcome textbook_oracle() {
    const auto t0 = Clock::now();
    const auto g1 = *plants::builtin("textbook_g1");
    const auto g2 = *plants::builtin("textbook_g2");
    std::ostringstream out;
    cli::cmd_oracle({"textbook_g1", g1}, {"textbook_g2", g2}, std::nullopt, out);
    const auto o = oracle::nu_gap(g1, g2);
    const double dt = seconds_since(t0);
    const bool ok = std::abs(o.chordal_sup - 0.9308) <= 5e-3 && std::abs(o.omega_star - std::numbers::pi) <= 1e-4 &&
                    dt < 5.0;
    return {ok, fmt("chordal_sup=%.6f omega_star=%.8f runtime=%.2fs", o.chordal_sup, o.omega_star, dt)};
}

Outcome textbook_index_failure() {
    const auto t0 = Clock::now();
    cli::RunConfig cfg;
    cfg.plant_a = {"textbook_g1", *plants::builtin("textbook_g1")};
    cfg.plant_b = {"textbook_g2", *plants::builtin("textbook_g2")};
    cfg.estimation.N = 1000;
    cfg.estimation.N_acc = 10;
    cfg.estimation.sample_time = 1.0;
    cfg.estimation.noise_variance = 0.01;
    cfg.mc_runs = 100;
    const auto runs = cli::run_monte_carlo(cfg, cfg.mc_runs);

    int flagged = 0;
    int hard_stops = 0;
    int wrong_f1 = 0;
    for (const auto& r : runs) {
        const bool detected = r.index_result && r.index_result->wno_f1 == 0 && r.index_result->wno_f2 != 0;
        flagged += detected ? 1 : 0;
        wrong_f1 += r.index_result && r.index_result->wno_f1 != 0 ? 1 : 0;
        if (detected && r.status == Status::IndexFailed && r.estimate == 1.0 &&
            r.trace.size() == cfg.estimation.N_acc + 1 && r.trace.back() == 1.0) {
            ++hard_stops;
        }
    }

    // Exit-code contract on one seeded run through the CLI entry point.
    const auto dir = std::filesystem::temp_directory_path() / "nugap_acceptance_c2";
    cfg.output_dir = dir;
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::cmd_estimate(cfg, out, err);
    std::filesystem::remove_all(dir);

    const double dt = seconds_since(t0);
    const bool ok = flagged >= 95 && hard_stops == flagged && code == cli::kExitIndexFailed && dt < 30.0;
    return {ok, fmt("wno_f1=0 and wno_f2!=0 in %d/100 runs (wno_f1!=0 in %d), %d hard stops at N_acc with "
                    "estimate 1, exit code %d, runtime=%.2fs",
                    flagged, wrong_f1, hard_stops, code, dt)};
}

Outcome self_gap() {
    std::mt19937_64 rng(303);
    double worst = 0.0;
    int ok_runs = 0;
    for (int i = 0; i < 10; ++i) {
        const auto g = plants::random_stable_plant(rng, 6);
        EstimationConfig cfg;
        cfg.sample_time = 1.0;
        cfg.noise_variance = 0.0;
        cfg.seed = 1000 + static_cast<std::uint64_t>(i);
        const auto r = estimate(g, g, cfg);
        const double first = r.trace.empty() ? 1.0 : r.trace.front();
        worst = std::max(worst, first);
        ok_runs += first <= 1e-12 && r.status != Status::IndexFailed ? 1 : 0;
    }
    return {ok_runs == 10, fmt("%d/10 plants with trace[0] <= 1e-12, worst trace[0]=%.3g", ok_runs, worst)};
}

Outcome oracle_agreement() {
    const auto t0 = Clock::now();
    const auto& runs = agreement_runs();
    int good = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const double ref = random_pairs()[i].reference.chordal_sup;
        const double rel = std::abs(runs[i].estimate - ref) / ref;
        worst = std::max(worst, rel);
        good += rel <= 0.02 ? 1 : 0;
    }
    const double dt = seconds_since(t0);
    return {good >= 18 && dt < 120.0,
            fmt("%d/20 within 2%% of the oracle, worst relative error %.4f, runtime=%.2fs", good, worst, dt)};
}

Outcome noise_robustness() {
    const auto t0 = Clock::now();
    bool all_ok = true;
    std::string detail;
    for (std::size_t i = 0; i < 3; ++i) {
        const auto& pair = random_pairs()[i];
        cli::RunConfig cfg;
        cfg.plant_a = {"nominal", pair.nominal};
        cfg.plant_b = {"plant", pair.plant};
        cfg.estimation.N = 4096;
        cfg.estimation.M = 60;
        cfg.estimation.N_acc = 10;
        cfg.estimation.sample_time = 1.0;
        cfg.estimation.noise_variance = 0.01;
        cfg.estimation.mode = SimulationMode::Transient;
        cfg.estimation.seed = 500 + i;
        const auto runs = cli::run_monte_carlo(cfg, 100);
        std::vector<std::vector<double>> traces;
        int failed = 0;
        for (const auto& r : runs) {
            traces.push_back(r.trace);
            failed += r.status == Status::IndexFailed ? 1 : 0;
        }
        const auto means = cli::mc_mean(traces, cfg.estimation.M);
        const double ref = pair.reference.chordal_sup;
        const double final_mean = means.back().mean;
        double lo = final_mean;
        double hi = final_mean;
        for (std::size_t k = means.size() - 20; k < means.size(); ++k) {
            lo = std::min(lo, means[k].mean);
            hi = std::max(hi, means[k].mean);
        }
        const double rel = std::abs(final_mean - ref) / ref;
        const bool ok = rel <= 0.05 && hi - lo < 1e-2;
        all_ok = all_ok && ok;
        detail += fmt("%spair %zu oracle=%.4f mc_mean=%.4f rel=%.3f spread=%.2g index_failed=%d/100",
                      i ? "; " : "", i, ref, final_mean, rel, hi - lo, failed);
    }
    const double dt = seconds_since(t0);
    all_ok = all_ok && dt < 600.0;
    return {all_ok, detail + fmt("; runtime=%.2fs", dt)};
}

Outcome index_consistency() {
    const auto& runs = agreement_runs();
    int match = 0;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto& ref = random_pairs()[i].reference;
        const auto exact = oracle::exact_index_check(random_pairs()[i].nominal, random_pairs()[i].plant);
        if (runs[i].index_result && runs[i].index_result->wno_f1 == exact.wno_f1 &&
            runs[i].index_result->wno_f2 == exact.wno_f2 && exact.wno_f1 == ref.wno_f1) {
            ++match;
        }
    }
    return {match == 20, fmt("data-driven (wno_f1, wno_f2) equals the exact check on %d/20 pairs", match)};
}

Outcome toeplitz_norm() {
    const auto g1 = *plants::builtin("textbook_g1");
    const double a = oracle::induced_norm_toeplitz(g1, 64);
    const double b = oracle::induced_norm_toeplitz(g1, 256);
    const double c = oracle::induced_norm_toeplitz(g1, 1024);
    const double target = 2.0 / 1.8;
    const bool ok = a <= b && b <= c && std::abs(c - target) <= 0.01 * target;
    return {ok, fmt("N=64: %.9f, N=256: %.9f, N=1024: %.9f, sup=%.9f", a, b, c, target)};
}

Outcome margin_and_robustness() {
    std::mt19937_64 rng(808);
    int closed_form_ok = 0;
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        const auto g = plants::random_stable_plant(rng, 4);
        // Independent reference: dense scan of |G0| without the shared peak search.
        const std::size_t grid = std::size_t{1} << 18;
        double sup = 0.0;
        for (std::size_t k = 0; k <= grid; ++k) {
            sup = std::max(sup, std::abs(lti::freq_response(g, std::numbers::pi * static_cast<double>(k) / grid)));
        }
        const double expected = 1.0 / std::sqrt(1.0 + sup * sup);
        const double b = oracle::stability_margin(g, TransferFunction::gain(0.0));
        worst = std::max(worst, std::abs(b - expected));
        closed_form_ok += std::abs(b - expected) <= 1e-9 ? 1 : 0;
    }

    // G0 = 2 z^-1 / (1 - 0.9 z^-1) under C = 0.3, versus a perturbed plant.
    const TransferFunction g0({0.0, 2.0}, {1.0, -0.9});
    const TransferFunction g({0.0, 2.2}, {1.0, -0.88});
    const TransferFunction c = TransferFunction::gain(0.3);
    const double b = oracle::stability_margin(g0, c);
    const double gap = oracle::nu_gap(g0, g).nu_gap;
    const auto loop = lti::feedback(g, c);
    const auto y = lti::impulse_response(loop, 10000);
    double peak = 0.0;
    double tail = 0.0;
    for (std::size_t k = 0; k < y.size(); ++k) {
        peak = std::max(peak, std::abs(y[k]));
        if (k >= y.size() - 1000) {
            tail = std::max(tail, std::abs(y[k]));
        }
    }
    const bool bounded = std::isfinite(peak) && tail <= 1e-9 * std::max(peak, 1.0) && lti::is_stable(loop);
    const bool ok = closed_form_ok == 10 && b > gap && bounded;
    return {ok, fmt("closed form matched on %d/10 plants (worst %.2g); triple: b=%.4f > nu_gap=%.4f, closed-loop "
                    "impulse peak=%.4f, tail max=%.2g over 1e4 steps",
                    closed_form_ok, worst, b, gap, peak, tail)};
}

Outcome hdgt_pipeline() {
    const std::filesystem::path root = NUGAP_SOURCE_DIR;
    const std::pair<const char*, const char*> slots[] = {{"nominal_model", "nominal_true"}, {"frame9f", "frame6f"}};
    bool all_ok = true;
    std::string detail;
    for (const auto& [a, b] : slots) {
        const auto nominal = cli::load_plant((root / "configs" / "plants" / (std::string(a) + ".json")).string());
        const auto plant = cli::load_plant((root / "configs" / "plants" / (std::string(b) + ".json")).string());
        EstimationConfig cfg;
        cfg.N = 9000;
        cfg.sample_time = 0.05;
        cfg.N_acc = 10;
        cfg.noise_variance = 0.0;
        cfg.mode = SimulationMode::Circular;
        const auto r = estimate(plant.tf, nominal.tf, cfg);
        const auto o = oracle::nu_gap(nominal.tf, plant.tf);
        const double gain_ref = std::abs(lti::freq_response(nominal.tf, o.omega_star));
        const double rel = std::abs(r.estimate - o.chordal_sup) / o.chordal_sup;
        const double dw = std::abs(r.omega_peak - o.omega_star);
        const double rel_p0 = std::abs(std::abs(r.p0) - gain_ref) / gain_ref;
        const bool ok = o.in_C && rel <= 0.02 && dw <= 1e-2 && rel_p0 <= 0.02;
        all_ok = all_ok && ok;
        detail += fmt("%s%s/%s%s: estimate=%.4f oracle=%.4f (rel %.4f), omega_peak=%.4f omega*=%.4f (diff %.4f), "
                      "|p0|=%.4f |G0(omega*)|=%.4f (rel %.4f)",
                      detail.empty() ? "" : "; ", a, b, ok ? "" : " [miss]", r.estimate, o.chordal_sup, rel,
                      r.omega_peak, o.omega_star, dw, std::abs(r.p0), gain_ref, rel_p0);
    }
    return {all_ok, detail + " (placeholder Rowen parameters)"};
}

Outcome property_suites() {
    std::mt19937_64 rng(1234);
    int violations = 0;

    for (std::size_t n : {7u, 256u, 1000u, 9000u}) {
        const auto x = testing::gaussian_vector(rng, n);
        const auto s = spectral::dft(SignalRecord(x));
        double et = 0.0;
        double ef = 0.0;
        for (double v : x) {
            et += v * v;
        }
        for (const Complex& v : s.bins) {
            ef += std::norm(v);
        }
        violations += std::abs(ef - static_cast<double>(n) * et) <= 1e-10 * ef ? 0 : 1;
        const auto back = spectral::idft(s);
        for (std::size_t i = 0; i < n; ++i) {
            violations += std::abs(back[i] - x[i]) <= 1e-10 * std::max(1.0, std::abs(x[i])) ? 0 : 1;
        }
    }

    for (int turns = -3; turns <= 3; ++turns) {
        const std::size_t n = 200;
        std::vector<Complex> p(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / n;
            p[k] = std::polar(1.0 + 0.2 * std::sin(2.0 * t), turns * t);
        }
        std::vector<Complex> scaled(p);
        std::vector<Complex> conj(p);
        std::vector<Complex> rev(p.rbegin(), p.rend());
        for (std::size_t k = 0; k < n; ++k) {
            scaled[k] *= Complex(-0.3, 2.0);
            conj[k] = std::conj(p[k]);
        }
        const int w = indexcheck::winding_number(p).wno;
        violations += w == turns ? 0 : 1;
        violations += indexcheck::winding_number(scaled).wno == w ? 0 : 1;
        violations += indexcheck::winding_number(conj).wno == -w ? 0 : 1;
        violations += indexcheck::winding_number(rev).wno == -w ? 0 : 1;
    }

    for (int i = 0; i < 15; ++i) {
        const auto a = plants::random_stable_plant(rng, 3);
        const auto b = plants::random_stable_plant(rng, 3);
        const auto ab = oracle::nu_gap(a, b);
        violations += oracle::nu_gap(a, a).nu_gap <= 1e-12 ? 0 : 1;
        violations += ab.nu_gap >= 0.0 && ab.nu_gap <= 1.0 ? 0 : 1;
        violations += (!ab.in_C && ab.nu_gap == 1.0) || (ab.in_C && ab.nu_gap == ab.chordal_sup) ? 0 : 1;
        if (ab.in_C) {
            violations += std::abs(ab.nu_gap - oracle::nu_gap(b, a).nu_gap) <= 1e-9 ? 0 : 1;
        }
    }

    const auto& pair = random_pairs().front();
    EstimationConfig cfg;
    cfg.N = 1024;
    cfg.M = 30;
    cfg.sample_time = 1.0;
    cfg.noise_variance = 0.01;
    violations += estimate(pair.plant, pair.nominal, cfg).trace == estimate(pair.plant, pair.nominal, cfg).trace ? 0 : 1;

    return {violations == 0, fmt("%d violations across Parseval/round-trip, winding invariances, metric axioms "
                                 "and seed determinism",
                                 violations)};
}

}  // namespace

int main() {
    const auto t0 = Clock::now();
    report(1, "textbook oracle", textbook_oracle);
    report(2, "textbook index failure", textbook_index_failure);
    report(3, "self-gap", self_gap);
    report(4, "estimator-oracle agreement", oracle_agreement);
    report(5, "noise robustness", noise_robustness);
    report(6, "index-check consistency", index_consistency);
    report(7, "finite-N Toeplitz norm", toeplitz_norm);
    report(8, "stability margin and robustness", margin_and_robustness);
    report(9, "HDGT pipeline on placeholder parameters", hdgt_pipeline);
    report(10, "property suites", property_suites);
    std::printf("%d of 10 criteria failed, total runtime %.1fs\n", failures, seconds_since(t0));
    return failures == 0 ? 0 : 1;
}
