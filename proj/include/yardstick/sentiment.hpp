#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "yardstick/market_data.hpp"

namespace yardstick {

enum class WindowMode { rolling, full_sample };

/// How sigma(X) is estimated. Always the population estimator
/// sqrt(E[X^2] - E[X]^2); rolling windows cover [t - window + 1, t].
struct VolatilityConfig {
    WindowMode mode = WindowMode::rolling;
    std::size_t window = 20;

    static VolatilityConfig rolling(std::size_t window) { return {WindowMode::rolling, window}; }
    static VolatilityConfig full_sample() { return {WindowMode::full_sample, 0}; }

    /// Throws ValueError when a rolling window is shorter than 2.
    void validate() const;
    /// Number of leading dates without a defined sigma.
    std::size_t warmup() const { return mode == WindowMode::rolling ? window - 1 : 0; }
};

/// A date dropped from a sentiment series, with the reason.
struct Exclusion {
    Date date;
    std::string reason;
};

struct SentimentSeries {
    std::string ticker;
    std::vector<Date> dates;
    std::vector<double> alpha;
    std::vector<double> cumulative;
    std::vector<Exclusion> excluded;
};

/// One scatter point: x is the model prediction, y the realized return.
struct ScatterPoint {
    Date date;
    std::string ticker;
    double x = 0.0;
    double y = 0.0;
};

using YardstickPoint = ScatterPoint;

/// Equal-weighted mean return of every stock except i on date t.
double leave_one_out_return(const ReturnPanel& panel, std::size_t i, std::size_t t);

/// leave_one_out_return for every date.
std::vector<double> leave_one_out_series(const ReturnPanel& panel, std::size_t i);

/// sigma of `series` at index t. Rolling mode throws WindowNotReadyError
/// when fewer than `window` observations end at t.
double windowed_std(std::span<const double> series, const VolatilityConfig& cfg, std::size_t t);

/// windowed_std at every index, computed incrementally; warm-up indices are
/// nullopt. A window whose values are all identical yields exactly 0.
std::vector<std::optional<double>> windowed_std_series(std::span<const double> series,
                                                       const VolatilityConfig& cfg);

/// Per-stock inputs shared by sentiment, predicted_return and yardstick_points.
struct VolatilityProfile {
    std::size_t stock = 0;
    std::vector<double> peers;  // R_{-i}(t)
    std::vector<std::optional<double>> sigma_stock;
    std::vector<std::optional<double>> sigma_peers;

    /// True when both sigmas at t exist and are nonzero.
    bool eligible(std::size_t t) const;
};

VolatilityProfile volatility_profile(const ReturnPanel& panel, std::size_t i, const VolatilityConfig& cfg);

/// alpha_i(t) = s_i(t)/sigma(s_i) - R_{-i}(t)/sigma(R_{-i}), with the
/// cumulative sum filled in. Dates with a zero sigma are listed in
/// `excluded` with reason "ZeroVolatility".
///
/// Throws InsufficientDataError when the panel is shorter than the window
/// and EmptyResultError when every date is excluded.
SentimentSeries sentiment(const ReturnPanel& panel, std::size_t i, const VolatilityConfig& cfg);

/// sentiment() for every ticker, computed concurrently.
std::vector<SentimentSeries> sentiment_all(const ReturnPanel& panel, const VolatilityConfig& cfg);

/// sigma(s_i)*alpha + (sigma(s_i)/sigma(R_{-i}))*R_{-i}(t). With alpha equal
/// to the sentiment at t this reproduces s_i(t).
double predicted_return(const ReturnPanel& panel, std::size_t i, std::size_t t, double alpha,
                        const VolatilityConfig& cfg);
double predicted_return(const VolatilityProfile& profile, std::size_t t, double alpha);

/// One point per (ticker, eligible date): x = (R_{-i}/sigma(R_{-i}))*sigma(s_i),
/// y = s_i(t). Ordered by ticker, then date.
std::vector<YardstickPoint> yardstick_points(const ReturnPanel& panel, const VolatilityConfig& cfg);

/// Recomputes `cumulative` as prefix sums of `alpha`.
SentimentSeries cumulative_sentiment(SentimentSeries series);

/// CSV `date,alpha,cumulative`.
void write_sentiment_csv(std::ostream& out, const SentimentSeries& series);
/// CSV `date,ticker,x,y`.
void write_points_csv(std::ostream& out, std::span<const ScatterPoint> points);

}  // namespace yardstick
