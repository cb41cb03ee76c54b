#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "nugap/cli.hpp"
#include "nugap/error.hpp"
#include "nugap/plants.hpp"

namespace nugap::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::ConfigError, msg); }

void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
    for (const auto& [key, _] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            config_error("unknown key '" + key + "' in " + where);
        }
    }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
    if (!obj.contains(key)) {
        return fallback;
    }
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        config_error(std::string("bad value for '") + key + "': " + e.what());
    }
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        config_error("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json parse_json(std::string_view text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        config_error("invalid JSON in " + origin + ": " + e.what());
    }
}

plants::RowenParameters parse_rowen(const json& obj) {
    reject_unknown_keys(obj, {"T_f", "K_F", "T_CR", "T_cd", "A", "B", "C", "sample_time"}, "rowen parameters");
    plants::RowenParameters p;
    auto need = [&](const char* key) {
        if (!obj.contains(key)) {
            config_error(std::string("rowen parameters lack '") + key + "'");
        }
        return get_or<double>(obj, key, 0.0);
    };
    p.T_f = need("T_f");
    p.K_F = get_or<double>(obj, "K_F", 0.0);
    p.T_CR = get_or<double>(obj, "T_CR", 0.0);
    p.T_cd = need("T_cd");
    p.A = get_or<double>(obj, "A", 0.0);
    p.B = need("B");
    p.C_torque = get_or<double>(obj, "C", 0.0);
    p.sample_time = get_or<double>(obj, "sample_time", 0.05);
    return p;
}

PlantSpec parse_plant_json(const json& node, const fs::path& base_dir, int depth);

PlantSpec load_plant_file(const fs::path& path, int depth) {
    if (depth > 8) {
        config_error("plant file references nest too deeply");
    }
    PlantSpec spec = parse_plant_json(parse_json(read_file(path), path.string()), path.parent_path(), depth + 1);
    if (spec.label.empty()) {
        spec.label = path.stem().string();
    }
    return spec;
}

PlantSpec parse_plant_json(const json& node, const fs::path& base_dir, int depth) {
    if (node.is_string()) {
        const auto name = node.get<std::string>();
        if (auto tf = plants::builtin(name)) {
            return {name, *tf};
        }
        const fs::path p = fs::path(name).is_absolute() ? fs::path(name) : base_dir / name;
        if (fs::exists(p)) {
            return load_plant_file(p, depth);
        }
        config_error("unknown plant '" + name + "' (not a built-in and no such file)");
    }
    if (!node.is_object()) {
        config_error("plant must be a name, a path, or an object");
    }
    if (node.contains("file")) {
        reject_unknown_keys(node, {"file", "name"}, "plant");
        const auto file = get_or<std::string>(node, "file", "");
        PlantSpec spec = load_plant_file(fs::path(file).is_absolute() ? fs::path(file) : base_dir / file, depth);
        spec.label = get_or<std::string>(node, "name", spec.label);
        return spec;
    }
    if (node.contains("rowen")) {
        reject_unknown_keys(node, {"rowen", "name"}, "plant");
        PlantSpec spec{get_or<std::string>(node, "name", "rowen"), lti::TransferFunction()};
        try {
            spec.tf = plants::rowen_gcv_to_power(parse_rowen(node.at("rowen")));
        } catch (const Error& e) {
            config_error(std::string("rowen plant: ") + e.what());
        }
        return spec;
    }
    if (node.contains("rowen_slot")) {
        reject_unknown_keys(node, {"rowen_slot", "name"}, "plant");
        const auto slot = get_or<std::string>(node, "rowen_slot", "");
        auto params = plants::rowen_slot(slot);
        if (!params) {
            config_error("unknown rowen slot '" + slot + "'");
        }
        return {get_or<std::string>(node, "name", "rowen_" + slot), plants::rowen_gcv_to_power(*params)};
    }
    reject_unknown_keys(node, {"name", "numerator", "denominator", "delay_samples", "sample_time", "stable_expected"},
                        "plant");
    if (!node.contains("numerator") || !node.contains("denominator")) {
        config_error("coefficient plant needs 'numerator' and 'denominator'");
    }
    PlantSpec spec{get_or<std::string>(node, "name", "plant"), lti::TransferFunction()};
    try {
        spec.tf = lti::TransferFunction(get_or<std::vector<double>>(node, "numerator", {}),
                                        get_or<std::vector<double>>(node, "denominator", {}),
                                        get_or<std::size_t>(node, "delay_samples", 0),
                                        get_or<double>(node, "sample_time", 1.0));
    } catch (const Error& e) {
        config_error("plant '" + spec.label + "': " + e.what());
    }
    if (get_or<bool>(node, "stable_expected", false) && !lti::is_stable(spec.tf)) {
        config_error("plant '" + spec.label + "' is flagged stable_expected but has a pole on or outside the unit circle");
    }
    return spec;
}

estimator::EstimationConfig parse_estimation(const json& node, double plant_sample_time) {
    estimator::EstimationConfig cfg;
    cfg.sample_time = plant_sample_time;
    if (node.is_null()) {
        return cfg;
    }
    if (!node.is_object()) {
        config_error("'estimation' must be an object");
    }
    reject_unknown_keys(node,
                        {"N", "M", "N_acc", "epsilon0", "tol_f", "tol_f_mode", "update_guard", "noise_variance",
                         "sample_time", "seed", "mode"},
                        "estimation");
    cfg.N = get_or<std::size_t>(node, "N", cfg.N);
    cfg.M = get_or<std::size_t>(node, "M", cfg.M);
    cfg.N_acc = get_or<std::size_t>(node, "N_acc", cfg.N_acc);
    cfg.epsilon0 = get_or<double>(node, "epsilon0", cfg.epsilon0);
    cfg.tol_f.value = get_or<double>(node, "tol_f", cfg.tol_f.value);
    const auto tol_mode = get_or<std::string>(node, "tol_f_mode", "relative");
    if (tol_mode == "relative") {
        cfg.tol_f.mode = indexcheck::Tolerance::Mode::Relative;
    } else if (tol_mode == "absolute") {
        cfg.tol_f.mode = indexcheck::Tolerance::Mode::Absolute;
    } else {
        config_error("tol_f_mode must be 'relative' or 'absolute'");
    }
    cfg.update_guard = get_or<double>(node, "update_guard", cfg.update_guard);
    cfg.noise_variance = get_or<double>(node, "noise_variance", cfg.noise_variance);
    cfg.sample_time = get_or<double>(node, "sample_time", cfg.sample_time);
    cfg.seed = get_or<std::uint64_t>(node, "seed", cfg.seed);
    try {
        cfg.mode = estimator::parse_mode(get_or<std::string>(node, "mode", "transient"));
    } catch (const Error& e) {
        config_error(e.what());
    }
    return cfg;
}

bool same_time(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(a, b); }

}  // namespace

PlantSpec parse_plant_text(std::string_view text, const fs::path& base_dir) {
    return parse_plant_json(parse_json(text, "plant specification"), base_dir, 0);
}

PlantSpec load_plant(std::string_view name_or_path, const fs::path& base_dir) {
    return parse_plant_json(json(std::string(name_or_path)), base_dir, 0);
}

RunConfig parse_run_config(std::string_view json_text, const fs::path& base_dir) {
    const json root = parse_json(json_text, "run configuration");
    if (!root.is_object()) {
        config_error("run configuration must be a JSON object");
    }
    reject_unknown_keys(root,
                        {"plant_a", "plant_b", "controller", "estimation", "mc_runs", "mc_fixed_seed", "output_dir",
                         "emit"},
                        "run configuration");
    if (!root.contains("plant_a") || !root.contains("plant_b")) {
        config_error("run configuration needs 'plant_a' and 'plant_b'");
    }
    RunConfig cfg;
    cfg.plant_a = parse_plant_json(root.at("plant_a"), base_dir, 0);
    cfg.plant_b = parse_plant_json(root.at("plant_b"), base_dir, 0);
    if (root.contains("controller")) {
        cfg.controller = parse_plant_json(root.at("controller"), base_dir, 0);
    }
    const double ts = cfg.plant_a.tf.sample_time();
    if (!same_time(ts, cfg.plant_b.tf.sample_time()) ||
        (cfg.controller && !same_time(ts, cfg.controller->tf.sample_time()))) {
        config_error("plant sample times differ");
    }
    cfg.estimation = parse_estimation(root.value("estimation", json()), ts);
    if (!same_time(cfg.estimation.sample_time, ts)) {
        config_error("estimation.sample_time does not match the plants' sample time");
    }
    try {
        cfg.estimation.validate();
    } catch (const Error& e) {
        config_error(std::string("estimation: ") + e.what());
    }
    const auto runs = get_or<long long>(root, "mc_runs", 1);
    if (runs < 1) {
        config_error("mc_runs must be at least 1");
    }
    cfg.mc_runs = static_cast<std::size_t>(runs);
    cfg.mc_fixed_seed = get_or<bool>(root, "mc_fixed_seed", false);
    cfg.output_dir = get_or<std::string>(root, "output_dir", "out");
    if (root.contains("emit")) {
        const auto emit = get_or<std::vector<std::string>>(root, "emit", {});
        cfg.emit_csv = std::find(emit.begin(), emit.end(), "csv") != emit.end();
        cfg.emit_json = std::find(emit.begin(), emit.end(), "json") != emit.end();
        for (const auto& e : emit) {
            if (e != "csv" && e != "json") {
                config_error("emit entries must be 'csv' or 'json'");
            }
        }
    }
    return cfg;
}

RunConfig load_run_config(const fs::path& path) {
    return parse_run_config(read_file(path), path.parent_path().empty() ? fs::path(".") : path.parent_path());
}

}  // namespace nugap::cli
