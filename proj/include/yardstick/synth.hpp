#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "yardstick/market_data.hpp"
#include "yardstick/sentiment.hpp"

namespace yardstick {

enum class NoiseModel { gaussian, student_t };

/// Generative parameters for a one-factor market with injected sentiment.
struct SynthSpec {
    std::size_t n_stocks = 0;
    std::size_t horizon = 0;
    double factor_vol = 0.0;
    std::vector<double> idio_vols;
    std::vector<double> true_alphas;
    /// Empty means every loading is 1.
    std::vector<double> betas;
    std::uint64_t seed = 0;

    // Not part of the config file; set from command-line flags.
    NoiseModel noise = NoiseModel::gaussian;
    int t_dof = 5;

    /// Throws SpecError on any violated invariant.
    void validate() const;
    double beta(std::size_t i) const { return betas.empty() ? 1.0 : betas[i]; }
    /// sqrt(beta_i^2 * factor_vol^2 + idio_vol_i^2).
    double model_vol(std::size_t i) const;

    /// Reads exactly the config-file fields; unknown or missing keys are SpecErrors.
    static SynthSpec from_json(const nlohmann::json& j);
    nlohmann::ordered_json to_json() const;
};

struct ShockEvent {
    std::size_t stock = 0;
    std::size_t day = 0;
    double jump = 0.0;
};

struct GroundTruth {
    SynthSpec spec;
    std::vector<double> model_vols;
    /// mu_i = true_alpha_i * model_vol_i.
    std::vector<double> drifts;
    std::optional<ShockEvent> event;

    nlohmann::ordered_json to_json() const;
};

struct SyntheticMarket {
    ReturnPanel panel;
    GroundTruth truth;
};

/// s_i(t) = mu_i + beta_i f(t) + e_i(t), f ~ N(0, factor_vol^2),
/// e_i ~ N(0, idio_vol_i^2) (or unit-variance Student-t scaled alike).
/// Draw order per day: f, then e_1..e_N. Dates are weekdays from 2000-01-04.
SyntheticMarket generate_market(const SynthSpec& spec);

/// generate_market plus an additive one-day return `jump` to `stock` on
/// row `event_day`. Throws SpecError unless 0 < event_day < horizon.
SyntheticMarket event_scenario(const SynthSpec& spec, std::size_t stock, std::size_t event_day, double jump);

/// Compounds simple returns from a base price of 100 on the day before the
/// first return date.
PricePanel synthetic_prices(const ReturnPanel& panel, double base = 100.0);

struct StockRecovery {
    std::string ticker;
    double true_alpha = 0.0;
    /// Mean over eligible dates of mu_i/sigma(s_i) - mean(mu_{-i})/sigma(R_{-i}),
    /// using the same sigma estimates as the sentiment itself.
    double expected_alpha = 0.0;
    double mean_alpha = 0.0;
    double std_error = 0.0;
    double z = 0.0;
    std::size_t n = 0;
};

struct RecoveryReport {
    std::vector<StockRecovery> stocks;
    double max_abs_z = 0.0;
    bool pass = false;
    /// Least-squares slope (through the origin) of mean_alpha on true_alpha;
    /// absent when every true alpha is zero.
    std::optional<double> attenuation;
    /// Every pair with true_i > true_j has mean_i > mean_j.
    bool rank_order_ok = true;

    nlohmann::ordered_json to_json() const;
};

/// Compares the mean estimated sentiment of each stock with the value the
/// injected drifts imply for it. z = (mean - expected) / std_error, std_error
/// the standard error of the per-date residuals. Overlapping rolling
/// windows correlate residuals up to window - 1 dates apart, so the standard
/// error sums those autocovariances. pass iff max |z| < 3.
///
/// The expected value differs from the injected alpha: the peer term
/// subtracts the other stocks' drifts in units of sigma(R_{-i}), and the
/// sigmas are estimates. `attenuation` reports the net effect.
///
/// Throws InsufficientDataError when the panel is shorter than window + 1.
RecoveryReport recover_bias(const ReturnPanel& panel, const GroundTruth& truth, const VolatilityConfig& cfg);

}  // namespace yardstick
