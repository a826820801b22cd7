#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "yardstick/market_data.hpp"
#include "yardstick/sentiment.hpp"

namespace yardstick {

/// Composition of the market return R used for CAPM betas.
struct IndexSpec {
    /// Empty means equal weights. Otherwise N nonnegative weights summing to 1.
    std::vector<double> weights;
    /// When false, stock i is removed from R (weights renormalized) for its own beta.
    bool include_self = true;

    /// Throws DimensionError on a length mismatch, ValueError on negative
    /// weights or a sum differing from 1 by more than 1e-12.
    void validate(std::size_t n_stocks) const;
};

struct CapmStats {
    std::string ticker;
    WindowMode window_mode = WindowMode::full_sample;
    double risk_free = 0.0;
    /// Set in full-sample mode only.
    std::optional<double> beta;
    /// Dates with a defined beta, the beta in force on each, and R(t).
    std::vector<Date> dates;
    std::vector<double> betas;
    std::vector<double> market;
};

/// R(t) = sum_j w_j s_j(t).
std::vector<double> index_return(const ReturnPanel& panel, const IndexSpec& spec);

/// The market series used for stock i's beta (honours include_self).
std::vector<double> market_return_for(const ReturnPanel& panel, const IndexSpec& spec, std::size_t i);

/// beta_i = Cov(s_i, R) / sigma^2(R) with population moments. The risk-free
/// rate is a constant, so it does not change the moments.
/// Throws ZeroVarianceError when sigma^2(R) is zero over every window.
CapmStats beta(const ReturnPanel& panel, std::size_t i, const IndexSpec& spec, const VolatilityConfig& cfg,
               double risk_free = 0.0);

/// One point per (ticker, date with a beta): x = R_f + beta_i*(R(t) - R_f), y = s_i(t).
std::vector<ScatterPoint> capm_points(const ReturnPanel& panel, const IndexSpec& spec, const VolatilityConfig& cfg,
                                      double risk_free = 0.0);

struct FitSummary {
    /// Least-squares slope of y on x through the origin.
    double slope = 0.0;
    double slope_deviation = 0.0;
    /// Mean signed perpendicular distance from y = x; positive above the diagonal.
    double symmetry = 0.0;
    std::size_t n_points = 0;
};

enum class Hypothesis { yardstick, capm };

struct ComparisonReport {
    FitSummary yardstick;
    FitSummary capm;
    Hypothesis closer_slope = Hypothesis::yardstick;
    Hypothesis closer_symmetry = Hypothesis::yardstick;
};

/// Order-independent fit summary of one point cloud. Throws EmptyResultError
/// on an empty set and ZeroVarianceError when every x is zero.
FitSummary summarize_fit(std::span<const ScatterPoint> points);

ComparisonReport compare_fits(std::span<const ScatterPoint> yardstick, std::span<const ScatterPoint> capm);

nlohmann::ordered_json to_json(const ComparisonReport& report);

}  // namespace yardstick
