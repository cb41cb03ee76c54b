#include "nugap/plants.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "nugap/error.hpp"
#include "nugap/peak_search.hpp"
#include "nugap/polynomial.hpp"

namespace nugap::plants {
namespace {

struct Slot {
    std::string_view name;
    RowenParameters params;
};

// Placeholder parameter sets. They only give the four slots distinct,
// plausible dynamics; replace them with identified values for real studies.
const std::array<Slot, 4>& slots() {
    static const std::array<Slot, 4> table{{
        {"nominal_true", {0.40, 0.00, 0.10, 0.20, -0.23, 1.30, 0.50, 0.05}},
        {"nominal_model", {0.55, 0.10, 0.15, 0.35, -0.25, 1.20, 0.50, 0.05}},
        {"frame9f", {0.35, 0.00, 0.05, 0.15, -0.20, 1.45, 0.50, 0.05}},
        {"frame6f", {0.60, 0.05, 0.10, 0.30, -0.25, 1.15, 0.50, 0.05}},
    }};
    return table;
}

std::complex<double> random_in_disk(std::mt19937_64& rng, double radius) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double r = radius * std::sqrt(unit(rng));
    const double theta = std::numbers::pi * unit(rng);  // upper half; conjugate supplied by caller
    return std::polar(r, theta);
}

// Real roots uniform on (-radius, radius) mixed with conjugate pairs from the disk.
std::vector<std::complex<double>> random_roots(std::mt19937_64& rng, int count, double radius) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::complex<double>> out;
    int left = count;
    while (left > 0) {
        if (left >= 2 && unit(rng) < 0.5) {
            const auto z = random_in_disk(rng, radius);
            out.push_back(z);
            out.push_back(std::conj(z));
            left -= 2;
        } else {
            out.emplace_back(radius * (2.0 * unit(rng) - 1.0), 0.0);
            left -= 1;
        }
    }
    return out;
}

}  // namespace

void RowenParameters::validate() const {
    const double all[] = {T_f, K_F, T_CR, T_cd, A, B, C_torque, sample_time};
    for (double v : all) {
        if (!std::isfinite(v)) {
            throw Error(ErrorCode::InvalidParameters, "Rowen parameters must be finite");
        }
    }
    if (!(T_f > 0.0) || !(T_cd > 0.0) || !(sample_time > 0.0)) {
        throw Error(ErrorCode::InvalidParameters, "T_f, T_cd and the sample time must be positive");
    }
    if (T_CR < 0.0) {
        throw Error(ErrorCode::InvalidParameters, "T_CR must be nonnegative");
    }
    if (!(1.0 + K_F > 0.0)) {
        throw Error(ErrorCode::InvalidParameters, "1 + K_F must be positive");
    }
}

TransferFunction rowen_gcv_to_power(const RowenParameters& p) {
    p.validate();
    const double ts = p.sample_time;
    const auto delay = static_cast<std::size_t>(std::llround(p.T_CR / ts));
    // 1 / (T_f s + 1 + K_F) = (1 / (1 + K_F)) / ((T_f / (1 + K_F)) s + 1)
    const double fuel_gain = p.B / (1.0 + p.K_F);
    const TransferFunction fuel = lti::discretize_first_order_lag(fuel_gain, p.T_f / (1.0 + p.K_F), ts);
    const TransferFunction discharge = lti::discretize_first_order_lag(1.0, p.T_cd, ts);
    return lti::series(lti::series(TransferFunction::delay(delay, ts), fuel), discharge);
}

PlantPair textbook_pair() {
    TransferFunction g1({1.0, -1.0}, {1.0, -0.8}, 0, 1.0);
    TransferFunction g2 = lti::series(lti::series(TransferFunction::gain(1.8, 1.0), TransferFunction::delay(1, 1.0)), g1);
    return {std::move(g1), std::move(g2)};
}

TransferFunction random_stable_plant(std::mt19937_64& rng, int max_order) {
    if (max_order < 1 || max_order > 6) {
        throw Error(ErrorCode::InvalidArgument, "max_order must lie in [1, 6]");
    }
    std::uniform_int_distribution<int> order_dist(1, max_order);
    const int order = order_dist(rng);
    const auto poles = random_roots(rng, order, 0.95);
    const auto zeros = random_roots(rng, order, 1.2);
    std::vector<double> den = poly::from_roots(poles);
    std::vector<double> num = poly::from_roots(zeros);

    const TransferFunction shape(num, den, 0, 1.0);
    const Peak peak = maximize_on_interval(
        [&](double w) { return std::abs(lti::freq_response(shape, w)); }, 0.0, std::numbers::pi, 4096, 1e-10);
    std::uniform_real_distribution<double> target_dist(0.5, 2.0);
    const double scale = target_dist(rng) / peak.value;
    for (double& c : num) {
        c *= scale;
    }
    return {std::move(num), std::move(den), 0, 1.0};
}

std::optional<RowenParameters> rowen_slot(std::string_view name) {
    for (const Slot& s : slots()) {
        if (s.name == name) {
            return s.params;
        }
    }
    return std::nullopt;
}

std::vector<std::string> rowen_slot_names() {
    std::vector<std::string> out;
    for (const Slot& s : slots()) {
        out.emplace_back(s.name);
    }
    return out;
}

std::vector<BuiltinPlant> builtin_plants() {
    std::vector<BuiltinPlant> out{
        {"textbook_g1", "(1 - z^-1) / (1 - 0.8 z^-1), Ts = 1 s"},
        {"textbook_g2", "1.8 z^-1 textbook_g1, Ts = 1 s"},
    };
    for (const Slot& s : slots()) {
        out.push_back({"rowen_" + std::string(s.name), "Rowen GCV-to-power plant, placeholder parameters, Ts = 0.05 s"});
    }
    return out;
}

std::optional<TransferFunction> builtin(std::string_view name) {
    if (name == "textbook_g1") {
        return textbook_pair().first;
    }
    if (name == "textbook_g2") {
        return textbook_pair().second;
    }
    constexpr std::string_view prefix = "rowen_";
    if (name.starts_with(prefix)) {
        if (auto p = rowen_slot(name.substr(prefix.size()))) {
            return rowen_gcv_to_power(*p);
        }
    }
    return std::nullopt;
}

}  // namespace nugap::plants
