#include "yardstick/capm.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "yardstick/errors.hpp"
#include "yardstick/numeric.hpp"
#include "yardstick/parallel.hpp"

namespace yardstick {
namespace {

bool is_constant(std::span<const double> xs) {
    return std::adjacent_find(xs.begin(), xs.end(), std::not_equal_to<>()) == xs.end();
}

std::vector<double> resolved_weights(const IndexSpec& spec, std::size_t n) {
    if (spec.weights.empty()) return std::vector<double>(n, 1.0 / static_cast<double>(n));
    return spec.weights;
}

std::string_view name(Hypothesis h) { return h == Hypothesis::yardstick ? "yardstick" : "capm"; }

}  // namespace

void IndexSpec::validate(std::size_t n_stocks) const {
    if (weights.empty()) return;
    if (weights.size() != n_stocks) {
        throw DimensionError("index weights have length " + std::to_string(weights.size()) + ", panel has " +
                             std::to_string(n_stocks) + " stocks");
    }
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw ValueError("index weights must be finite and nonnegative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw ValueError("index weights must sum to 1, got " + format_shortest(sum));
    }
}

std::vector<double> index_return(const ReturnPanel& panel, const IndexSpec& spec) {
    spec.validate(panel.n_tickers());
    const auto w = resolved_weights(spec, panel.n_tickers());
    std::vector<double> r(panel.n_dates(), 0.0);
    for (std::size_t t = 0; t < r.size(); ++t) {
        double acc = 0.0;
        for (std::size_t j = 0; j < w.size(); ++j) acc += w[j] * panel(t, j);
        r[t] = acc;
    }
    return r;
}

std::vector<double> market_return_for(const ReturnPanel& panel, const IndexSpec& spec, std::size_t i) {
    if (i >= panel.n_tickers()) throw DimensionError("stock index out of range");
    if (spec.include_self) return index_return(panel, spec);
    spec.validate(panel.n_tickers());
    auto w = resolved_weights(spec, panel.n_tickers());
    const double rest = 1.0 - w[i];
    if (!(rest > 0.0)) throw ValueError("excluding " + panel.tickers()[i] + " leaves an index with zero weight");
    w[i] = 0.0;
    std::vector<double> r(panel.n_dates(), 0.0);
    for (std::size_t t = 0; t < r.size(); ++t) {
        double acc = 0.0;
        for (std::size_t j = 0; j < w.size(); ++j) acc += w[j] * panel(t, j);
        r[t] = acc / rest;
    }
    return r;
}

CapmStats beta(const ReturnPanel& panel, std::size_t i, const IndexSpec& spec, const VolatilityConfig& cfg,
               double risk_free) {
    cfg.validate();
    const auto market = market_return_for(panel, spec, i);
    const auto stock = panel.series(i);

    CapmStats out;
    out.ticker = panel.tickers()[i];
    out.window_mode = cfg.mode;
    out.risk_free = risk_free;

    if (cfg.mode == WindowMode::full_sample) {
        if (is_constant(market)) throw ZeroVarianceError("market return has zero variance");
        const double b = population_covariance(stock, market) / population_covariance(market, market);
        out.beta = b;
        out.dates = panel.dates();
        out.betas.assign(panel.n_dates(), b);
        out.market = market;
        return out;
    }

    const std::size_t w = cfg.window;
    const std::span<const double> m(market);
    for (std::size_t t = cfg.warmup(); t < panel.n_dates(); ++t) {
        const auto mw = m.subspan(t + 1 - w, w);
        if (is_constant(mw)) continue;
        const auto sw = stock.subspan(t + 1 - w, w);
        out.dates.push_back(panel.dates()[t]);
        out.betas.push_back(population_covariance(sw, mw) / population_covariance(mw, mw));
        out.market.push_back(market[t]);
    }
    if (out.betas.empty()) {
        throw ZeroVarianceError("market return has zero variance in every window for " + out.ticker);
    }
    return out;
}

std::vector<ScatterPoint> capm_points(const ReturnPanel& panel, const IndexSpec& spec, const VolatilityConfig& cfg,
                                      double risk_free) {
    std::vector<std::vector<ScatterPoint>> per_stock(panel.n_tickers());
    parallel_for(per_stock.size(), [&](std::size_t i) {
        const CapmStats stats = beta(panel, i, spec, cfg, risk_free);
        const auto stock = panel.series(i);
        std::size_t t = 0;
        for (std::size_t k = 0; k < stats.dates.size(); ++k) {
            while (panel.dates()[t] != stats.dates[k]) ++t;
            const double x = risk_free + stats.betas[k] * (stats.market[k] - risk_free);
            per_stock[i].push_back({stats.dates[k], stats.ticker, x, stock[t]});
        }
    });
    std::vector<ScatterPoint> out;
    for (auto& v : per_stock) out.insert(out.end(), v.begin(), v.end());
    return out;
}

FitSummary summarize_fit(std::span<const ScatterPoint> points) {
    if (points.empty()) throw EmptyResultError("cannot fit an empty point set");
    std::vector<double> xy, xx, gap;
    xy.reserve(points.size());
    xx.reserve(points.size());
    gap.reserve(points.size());
    for (const auto& p : points) {
        xy.push_back(p.x * p.y);
        xx.push_back(p.x * p.x);
        gap.push_back(p.y - p.x);
    }
    const double sxx = order_independent_sum(std::move(xx));
    if (!(sxx > 0.0)) throw ZeroVarianceError("all predicted values are zero; slope undefined");
    FitSummary s;
    s.n_points = points.size();
    s.slope = order_independent_sum(std::move(xy)) / sxx;
    s.slope_deviation = std::abs(s.slope - 1.0);
    s.symmetry = order_independent_sum(std::move(gap)) / static_cast<double>(points.size()) / std::sqrt(2.0);
    return s;
}

ComparisonReport compare_fits(std::span<const ScatterPoint> yardstick, std::span<const ScatterPoint> capm) {
    ComparisonReport r;
    r.yardstick = summarize_fit(yardstick);
    r.capm = summarize_fit(capm);
    r.closer_slope =
        r.yardstick.slope_deviation <= r.capm.slope_deviation ? Hypothesis::yardstick : Hypothesis::capm;
    r.closer_symmetry = std::abs(r.yardstick.symmetry) <= std::abs(r.capm.symmetry) ? Hypothesis::yardstick
                                                                                    : Hypothesis::capm;
    return r;
}

nlohmann::ordered_json to_json(const ComparisonReport& report) {
    nlohmann::ordered_json j;
    j["slope_yardstick"] = report.yardstick.slope;
    j["slope_capm"] = report.capm.slope;
    j["symmetry_yardstick"] = report.yardstick.symmetry;
    j["symmetry_capm"] = report.capm.symmetry;
    j["n_points"] = report.yardstick.n_points;
    j["n_points_capm"] = report.capm.n_points;
    j["closer_slope"] = name(report.closer_slope);
    j["closer_symmetry"] = name(report.closer_symmetry);
    return j;
}

}  // namespace yardstick
