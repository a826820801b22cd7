// Acceptance gate: one PASS/FAIL line per criterion, each within its time
// budget. Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "golden.hpp"
#include "oracles.hpp"
#include "yardstick/capm.hpp"
#include "yardstick/config.hpp"
#include "yardstick/distributions.hpp"
#include "yardstick/random.hpp"
#include "yardstick/sentiment.hpp"
#include "yardstick/synth.hpp"

using namespace yardstick;

namespace {

struct Outcome {
    bool ok = false;
    std::string detail;
};

SynthSpec bundled(const char* name) {
    return SynthSpec::from_json(load_config_file(std::string(YARDSTICK_TEST_DATA "/../../configs/") + name));
}

std::string fmt(double v) {
    std::ostringstream s;
    s << v;
    return s.str();
}

Outcome leave_one_out_identity() {
    std::mt19937_64 gen(20240101);
    std::normal_distribution<double> r(0.0, 0.02);
    double worst = 0.0;
    for (int panel = 0; panel < 1000; ++panel) {
        const std::size_t n = 2 + gen() % 29;
        std::vector<std::vector<double>> rows(2 + gen() % 60, std::vector<double>(n));
        for (auto& row : rows) {
            for (auto& v : row) v = r(gen);
        }
        const auto p = oracle::panel_from_rows(rows);
        for (std::size_t t = 0; t < p.n_dates(); ++t) {
            long double all = 0;
            for (std::size_t j = 0; j < n; ++j) all += p(t, j);
            for (std::size_t i = 0; i < n; ++i) {
                const double lhs = (static_cast<double>(n) - 1.0) * leave_one_out_return(p, i, t) + p(t, i);
                worst = std::max(worst, std::abs(lhs - static_cast<double>(all)));
            }
        }
    }
    return {worst <= 1e-12, "1000 panels, max |error| " + fmt(worst)};
}

Outcome inversion() {
    const std::vector<std::pair<std::string, ReturnPanel>> fixtures{
        {"fixture_prices", oracle::fixture_returns()},
        {"golden synth", compute_returns(load_price_csv(YARDSTICK_TEST_DATA "/golden/synth/prices.csv"))},
    };
    double worst = 0.0;
    std::size_t checked = 0;
    for (const auto& [name, p] : fixtures) {
        for (const auto& cfg : {VolatilityConfig::rolling(20), VolatilityConfig::full_sample()}) {
            for (std::size_t i = 0; i < p.n_tickers(); ++i) {
                const auto s = sentiment(p, i, cfg);
                std::size_t k = 0;
                for (std::size_t t = 0; t < p.n_dates() && k < s.dates.size(); ++t) {
                    if (p.dates()[t] != s.dates[k]) continue;
                    worst = std::max(worst, std::abs(predicted_return(p, i, t, s.alpha[k], cfg) - p(t, i)));
                    ++k;
                    ++checked;
                }
            }
        }
    }
    return {worst <= 1e-12 && checked > 0, std::to_string(checked) + " points, max |error| " + fmt(worst)};
}

Outcome rolling_oracle() {
    std::mt19937_64 gen(77);
    double worst = 0.0;
    std::size_t checked = 0;
    for (std::size_t window : {2, 5, 20, 60, 250}) {
        for (int trial = 0; trial < 4; ++trial) {
            std::normal_distribution<double> r(0.001 * trial, 0.005 + 0.01 * trial);
            std::vector<double> xs(3000);
            for (auto& v : xs) v = r(gen);
            std::fill(xs.begin() + 1000, xs.begin() + 1000 + static_cast<long>(window) + 5, 0.0125);
            const auto series = windowed_std_series(xs, VolatilityConfig::rolling(window));
            for (std::size_t t = window - 1; t < xs.size(); ++t) {
                const double ref = oracle::window_std(xs, t + 1 - window, t + 1);
                worst = std::max(worst, series[t] ? std::abs(*series[t] - ref) : INFINITY);
                ++checked;
            }
        }
    }
    return {worst <= 1e-12, std::to_string(checked) + " windows, max |error| " + fmt(worst)};
}

Outcome bias_recovery() {
    auto spec = bundled("biased.toml");
    std::size_t good = 0;
    double attenuation = 0.0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        spec.seed = seed;
        const auto m = generate_market(spec);
        const auto r = recover_bias(m.panel, m.truth, VolatilityConfig::rolling(20));
        good += (r.pass && r.rank_order_ok) ? 1 : 0;
        attenuation += *r.attenuation / 50.0;
    }
    return {static_cast<double>(good) >= 0.95 * 50.0,
            std::to_string(good) + "/50 seeds with all |z| < 3 and correct ranking; mean attenuation " +
                fmt(attenuation)};
}

Outcome fig1_contrast() {
    auto spec = bundled("neutral.toml");
    const auto cfg = VolatilityConfig::rolling(20);
    double ys = 0.0, cs = 0.0;
    std::size_t closer = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        spec.seed = seed;
        const auto m = generate_market(spec);
        const auto r = compare_fits(yardstick_points(m.panel, cfg), capm_points(m.panel, {}, cfg));
        ys += r.yardstick.slope / 50.0;
        cs += r.capm.slope / 50.0;
        closer += std::abs(r.yardstick.slope - 1.0) <= std::abs(r.capm.slope - 1.0) ? 1 : 0;
    }
    const bool in_band = ys >= 0.95 && ys <= 1.05;
    const bool closer_than_capm = std::abs(ys - 1.0) <= std::abs(cs - 1.0);
    return {in_band && closer_than_capm, "50 seeds: mean yardstick slope " + fmt(ys) + (in_band ? " (in band)" : " (OUT of band)") +
                                             ", mean CAPM slope " + fmt(cs) + "; yardstick closer to 1 in " +
                                             std::to_string(closer) + "/50 seeds"};
}

Outcome conditional_peaks() {
    auto spec = bundled("neutral.toml");
    std::size_t good = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        spec.seed = seed;
        const auto m = generate_market(spec);
        const auto pts = yardstick_points(m.panel, VolatilityConfig::rolling(20));
        const double tol = default_tolerance(pts);
        bool all = true;
        for (double xt : default_x_targets(pts)) all = all && std::abs(conditional_pdf(pts, xt, tol).peak_offset_bins()) <= 1;
        good += all ? 1 : 0;
    }
    return {static_cast<double>(good) >= 0.95 * 20.0,
            std::to_string(good) + "/20 seeds with all 5 peaks within 1 bin of the target"};
}

Outcome sentiment_distribution() {
    auto spec = bundled("neutral.toml");
    std::size_t good = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        spec.seed = seed;
        const auto m = generate_market(spec);
        std::vector<double> pooled;
        for (const auto& s : sentiment_all(m.panel, VolatilityConfig::rolling(20))) {
            pooled.insert(pooled.end(), s.alpha.begin(), s.alpha.end());
        }
        good += symmetry_test(pooled).p_value > 0.01 ? 1 : 0;
    }
    Rng rng(3);
    std::vector<double> sample(100000);
    for (auto& v : sample) v = rng.laplace(0.3);
    const double scale = fit_laplace(sample).scale_pooled;
    const bool sign_ok = static_cast<double>(good) >= 0.98 * 100.0;
    const bool scale_ok = std::abs(scale - 0.3) <= 0.01;
    return {sign_ok && scale_ok,
            std::to_string(good) + "/100 seeds pass the sign test; Laplace(0, 0.3) fitted scale " + fmt(scale)};
}

Outcome golden_files() {
    std::size_t diffs = 0;
    std::string first;
    for (const auto& r : golden::runs()) {
        const auto d = golden::check(r, std::filesystem::temp_directory_path() / ("yardstick_accept_" + r.name));
        if (!d.empty() && first.empty()) first = "; first: " + d.front().file + " " + d.front().reason;
        diffs += d.size();
    }
    return {diffs == 0, "4 subcommands, " + std::to_string(diffs) + " differing outputs" + first};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double budget_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "leave-one-out identity", 10, leave_one_out_identity},
        {2, "pricing inversion", 1, inversion},
        {3, "rolling statistics oracle", 5, rolling_oracle},
        {4, "bias recovery", 60, bias_recovery},
        {5, "yardstick vs CAPM contrast", 30, fig1_contrast},
        {6, "conditional PDF peaks", 60, conditional_peaks},
        {7, "sentiment distribution", 60, sentiment_distribution},
        {8, "golden-file regression", 5, golden_files},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs < c.budget_s;
        const bool pass = o.ok && in_time;
        failures += pass ? 0 : 1;
        char timing[64];
        std::snprintf(timing, sizeof timing, "%.2f s of %.0f s", secs, c.budget_s);
        std::cout << (pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.name << " -- " << o.detail
                  << " (" << timing << (in_time ? "" : ", over budget") << ")\n";
    }
    return failures == 0 ? 0 : 1;
}
