#pragma once

#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "nugap/lti.hpp"

namespace nugap::plants {

using lti::TransferFunction;

/// Rowen heavy-duty gas-turbine parameters for the incremental map from GCV
/// position to generated power,
///
///     G(s) = B e^{-s T_CR} / ((T_f s + 1 + K_F)(T_cd s + 1)).
///
/// The affine torque terms A and C(1 - S) drop out of the incremental model
/// (S ~ 1); they are carried only so that full parameter sets round-trip.
struct RowenParameters {
    double T_f = 0.0;       ///< fuel-system time constant [s]
    double K_F = 0.0;       ///< fuel-system feedback gain
    double T_CR = 0.0;      ///< combustion reaction delay [s]
    double T_cd = 0.0;      ///< compressor-discharge time constant [s]
    double A = 0.0;         ///< torque-block offset [pu]
    double B = 0.0;         ///< torque-block fuel gain [pu]
    double C_torque = 0.0;  ///< torque-block speed coefficient [pu]
    double sample_time = 0.05;

    /// Throws InvalidParameters on T_f, T_cd, sample_time <= 0, T_CR < 0,
    /// 1 + K_F <= 0, or non-finite values.
    void validate() const;
};

/// series(delay(round(T_CR/Ts)), ZOH(B/(1+K_F), T_f/(1+K_F)), ZOH(1, T_cd)).
[[nodiscard]] TransferFunction rowen_gcv_to_power(const RowenParameters& p);

struct PlantPair {
    TransferFunction first;
    TransferFunction second;
};

/// G1 = (1 - z^-1)/(1 - 0.8 z^-1) and G2 = 1.8 z^-1 G1 at Ts = 1 s.
[[nodiscard]] PlantPair textbook_pair();

/// Random stable proper plant of order in [1, max_order]: poles uniform in the
/// disk of radius 0.95, zeros in the disk of radius 1.2 (conjugate pairs for
/// complex roots), gain scaled so that sup |G| is uniform in [0.5, 2].
[[nodiscard]] TransferFunction random_stable_plant(std::mt19937_64& rng, int max_order);

/// Named Rowen configuration slots (nominal_true, nominal_model, frame9f,
/// frame6f). The shipped values are illustrative placeholders, not data for
/// any particular machine; real studies load parameters from config files.
[[nodiscard]] std::optional<RowenParameters> rowen_slot(std::string_view name);
[[nodiscard]] std::vector<std::string> rowen_slot_names();

struct BuiltinPlant {
    std::string name;
    std::string description;
};

[[nodiscard]] std::vector<BuiltinPlant> builtin_plants();
/// Resolves a built-in name (textbook_g1, textbook_g2, rowen_<slot>).
[[nodiscard]] std::optional<TransferFunction> builtin(std::string_view name);

}  // namespace nugap::plants
