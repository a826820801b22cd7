#include "yardstick/sentiment.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "yardstick/errors.hpp"
#include "yardstick/numeric.hpp"
#include "yardstick/parallel.hpp"

namespace yardstick {

void VolatilityConfig::validate() const {
    if (mode == WindowMode::rolling && window < 2) {
        throw ValueError("rolling volatility window must be >= 2, got " + std::to_string(window));
    }
}

double leave_one_out_return(const ReturnPanel& panel, std::size_t i, std::size_t t) {
    const std::size_t n = panel.n_tickers();
    if (n < 2) throw InsufficientDataError("leave-one-out return needs at least 2 stocks");
    if (i >= n || t >= panel.n_dates()) throw DimensionError("leave_one_out_return: index out of range");
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (j != i) sum += panel(t, j);
    }
    return sum / static_cast<double>(n - 1);
}

std::vector<double> leave_one_out_series(const ReturnPanel& panel, std::size_t i) {
    std::vector<double> out(panel.n_dates());
    for (std::size_t t = 0; t < out.size(); ++t) out[t] = leave_one_out_return(panel, i, t);
    return out;
}

double windowed_std(std::span<const double> series, const VolatilityConfig& cfg, std::size_t t) {
    cfg.validate();
    if (t >= series.size()) throw DimensionError("windowed_std: index out of range");
    if (cfg.mode == WindowMode::full_sample) return population_std(series);
    if (t + 1 < cfg.window) {
        throw WindowNotReadyError("window of " + std::to_string(cfg.window) + " needs " +
                                  std::to_string(cfg.window) + " observations, index " + std::to_string(t) +
                                  " has " + std::to_string(t + 1));
    }
    return population_std(series.subspan(t + 1 - cfg.window, cfg.window));
}

std::vector<std::optional<double>> windowed_std_series(std::span<const double> series,
                                                       const VolatilityConfig& cfg) {
    cfg.validate();
    std::vector<std::optional<double>> out(series.size());
    if (series.empty()) return out;
    if (cfg.mode == WindowMode::full_sample) {
        std::fill(out.begin(), out.end(), population_std(series));
        return out;
    }

    // Shifted running sums S1 = sum(x - K), S2 = sum((x - K)^2), re-anchored
    // from scratch once per window length so rounding drift stays bounded.
    const std::size_t w = cfg.window;
    const double inv_w = 1.0 / static_cast<double>(w);
    double anchor = 0.0;
    double s1 = 0.0;
    double s2 = 0.0;
    std::size_t equal_run = 0;
    for (std::size_t t = 0; t < series.size(); ++t) {
        equal_run = (t > 0 && series[t] == series[t - 1]) ? equal_run + 1 : 1;
        if (t + 1 < w) continue;
        const std::size_t start = t + 1 - w;
        if (start % w == 0) {
            anchor = series[start];
            s1 = 0.0;
            s2 = 0.0;
            for (std::size_t k = start; k <= t; ++k) {
                const double d = series[k] - anchor;
                s1 += d;
                s2 += d * d;
            }
        } else {
            const double added = series[t] - anchor;
            const double removed = series[start - 1] - anchor;
            s1 += added - removed;
            s2 += added * added - removed * removed;
        }
        if (equal_run >= w) {
            out[t] = 0.0;
            continue;
        }
        const double m = s1 * inv_w;
        out[t] = std::sqrt(std::max(0.0, s2 * inv_w - m * m));
    }
    return out;
}

bool VolatilityProfile::eligible(std::size_t t) const {
    return t < peers.size() && sigma_stock[t] && sigma_peers[t] && *sigma_stock[t] > 0.0 && *sigma_peers[t] > 0.0;
}

VolatilityProfile volatility_profile(const ReturnPanel& panel, std::size_t i, const VolatilityConfig& cfg) {
    cfg.validate();
    if (i >= panel.n_tickers()) throw DimensionError("stock index out of range");
    VolatilityProfile p;
    p.stock = i;
    p.peers = leave_one_out_series(panel, i);
    p.sigma_stock = windowed_std_series(panel.series(i), cfg);
    p.sigma_peers = windowed_std_series(p.peers, cfg);
    return p;
}

SentimentSeries sentiment(const ReturnPanel& panel, std::size_t i, const VolatilityConfig& cfg) {
    cfg.validate();
    if (cfg.mode == WindowMode::rolling && panel.n_dates() < cfg.window) {
        throw InsufficientDataError("panel has " + std::to_string(panel.n_dates()) +
                                    " dates, volatility window needs " + std::to_string(cfg.window));
    }
    const VolatilityProfile p = volatility_profile(panel, i, cfg);
    const auto s = panel.series(i);

    SentimentSeries out;
    out.ticker = panel.tickers()[i];
    for (std::size_t t = cfg.warmup(); t < panel.n_dates(); ++t) {
        if (!p.eligible(t)) {
            out.excluded.push_back({panel.dates()[t], "ZeroVolatility"});
            continue;
        }
        out.dates.push_back(panel.dates()[t]);
        out.alpha.push_back(s[t] / *p.sigma_stock[t] - p.peers[t] / *p.sigma_peers[t]);
    }
    if (out.alpha.empty()) {
        throw EmptyResultError("no date with nonzero volatility for " + out.ticker);
    }
    return cumulative_sentiment(std::move(out));
}

std::vector<SentimentSeries> sentiment_all(const ReturnPanel& panel, const VolatilityConfig& cfg) {
    std::vector<SentimentSeries> out(panel.n_tickers());
    parallel_for(out.size(), [&](std::size_t i) { out[i] = sentiment(panel, i, cfg); });
    return out;
}

double predicted_return(const VolatilityProfile& profile, std::size_t t, double alpha) {
    if (t >= profile.peers.size()) throw DimensionError("predicted_return: date index out of range");
    if (!profile.sigma_stock[t] || !profile.sigma_peers[t]) {
        throw WindowNotReadyError("volatility window not filled at index " + std::to_string(t));
    }
    if (!profile.eligible(t)) throw ZeroVarianceError("zero volatility at index " + std::to_string(t));
    const double sigma = *profile.sigma_stock[t];
    return sigma * alpha + (sigma / *profile.sigma_peers[t]) * profile.peers[t];
}

double predicted_return(const ReturnPanel& panel, std::size_t i, std::size_t t, double alpha,
                        const VolatilityConfig& cfg) {
    return predicted_return(volatility_profile(panel, i, cfg), t, alpha);
}

std::vector<YardstickPoint> yardstick_points(const ReturnPanel& panel, const VolatilityConfig& cfg) {
    cfg.validate();
    std::vector<std::vector<YardstickPoint>> per_stock(panel.n_tickers());
    parallel_for(per_stock.size(), [&](std::size_t i) {
        const VolatilityProfile p = volatility_profile(panel, i, cfg);
        const auto s = panel.series(i);
        for (std::size_t t = 0; t < panel.n_dates(); ++t) {
            if (!p.eligible(t)) continue;
            const double x = (p.peers[t] / *p.sigma_peers[t]) * *p.sigma_stock[t];
            per_stock[i].push_back({panel.dates()[t], panel.tickers()[i], x, s[t]});
        }
    });
    std::vector<YardstickPoint> out;
    for (auto& v : per_stock) out.insert(out.end(), v.begin(), v.end());
    if (out.empty()) throw EmptyResultError("no yardstick point has a defined, nonzero volatility");
    return out;
}

SentimentSeries cumulative_sentiment(SentimentSeries series) {
    if (series.alpha.empty()) throw EmptyResultError("cumulative sentiment of an empty alpha series");
    series.cumulative.resize(series.alpha.size());
    double running = 0.0;
    for (std::size_t k = 0; k < series.alpha.size(); ++k) {
        running += series.alpha[k];
        series.cumulative[k] = running;
    }
    return series;
}

void write_sentiment_csv(std::ostream& out, const SentimentSeries& series) {
    out << "date,alpha,cumulative\n";
    for (std::size_t k = 0; k < series.alpha.size(); ++k) {
        out << format_iso_date(series.dates[k]) << ',' << format_shortest(series.alpha[k]) << ','
            << format_shortest(series.cumulative[k]) << '\n';
    }
}

void write_points_csv(std::ostream& out, std::span<const ScatterPoint> points) {
    out << "date,ticker,x,y\n";
    for (const auto& p : points) {
        out << format_iso_date(p.date) << ',' << p.ticker << ',' << format_shortest(p.x) << ','
            << format_shortest(p.y) << '\n';
    }
}

}  // namespace yardstick
