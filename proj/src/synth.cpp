#include "yardstick/synth.hpp"

#include <chrono>
#include <cmath>
#include <set>

#include "yardstick/errors.hpp"
#include "yardstick/random.hpp"

namespace yardstick {
namespace {

std::vector<Date> weekdays_from(Date first, std::size_t count) {
    using namespace std::chrono;
    std::vector<Date> out;
    out.reserve(count);
    sys_days day{first};
    while (out.size() < count) {
        const weekday wd{day};
        if (wd != Saturday && wd != Sunday) out.emplace_back(day);
        day += days{1};
    }
    return out;
}

std::string ticker_name(std::size_t i) {
    std::string name = std::to_string(i + 1);
    if (name.size() < 2) name.insert(0, "0");
    return "S" + name;
}

const Date kBaseDate{std::chrono::year{2000}, std::chrono::January, std::chrono::day{3}};

}  // namespace

void SynthSpec::validate() const {
    if (n_stocks < 2) throw SpecError("n_stocks must be >= 2, got " + std::to_string(n_stocks));
    if (horizon < 2) throw SpecError("horizon must be >= 2, got " + std::to_string(horizon));
    if (!(factor_vol >= 0.0) || !std::isfinite(factor_vol)) throw SpecError("factor_vol must be finite and >= 0");
    if (idio_vols.size() != n_stocks) throw SpecError("idio_vols must have n_stocks entries");
    if (true_alphas.size() != n_stocks) throw SpecError("true_alphas must have n_stocks entries");
    if (!betas.empty() && betas.size() != n_stocks) throw SpecError("betas must be empty or have n_stocks entries");
    for (double v : idio_vols) {
        if (!(v > 0.0) || !std::isfinite(v)) throw SpecError("idio_vols must be finite and > 0");
    }
    for (double a : true_alphas) {
        if (!std::isfinite(a)) throw SpecError("true_alphas must be finite");
    }
    for (double b : betas) {
        if (!std::isfinite(b)) throw SpecError("betas must be finite");
    }
    if (noise == NoiseModel::student_t && t_dof <= 2) throw SpecError("student-t noise needs dof > 2");
}

double SynthSpec::model_vol(std::size_t i) const {
    const double b = beta(i);
    return std::sqrt(b * b * factor_vol * factor_vol + idio_vols[i] * idio_vols[i]);
}

SynthSpec SynthSpec::from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw SpecError("synthetic market spec must be a table of fields");
    static const std::set<std::string> known{"n_stocks", "horizon", "factor_vol", "idio_vols",
                                             "true_alphas", "betas", "seed"};
    for (const auto& [key, _] : j.items()) {
        if (!known.count(key)) throw SpecError("unknown field '" + key + "' in synthetic market spec");
    }
    auto required = [&](const char* key) -> const nlohmann::json& {
        if (!j.contains(key)) throw SpecError(std::string("missing field '") + key + "' in synthetic market spec");
        return j.at(key);
    };
    auto number_list = [&](const nlohmann::json& v, const char* key) {
        if (!v.is_array()) throw SpecError(std::string("field '") + key + "' must be an array of numbers");
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number()) throw SpecError(std::string("field '") + key + "' must be an array of numbers");
            out.push_back(e.get<double>());
        }
        return out;
    };
    auto count = [&](const char* key) {
        const auto& v = required(key);
        if (!v.is_number_integer() || v.get<long long>() < 0) {
            throw SpecError(std::string("field '") + key + "' must be a nonnegative integer");
        }
        return static_cast<std::size_t>(v.get<long long>());
    };

    SynthSpec spec;
    spec.n_stocks = count("n_stocks");
    spec.horizon = count("horizon");
    const auto& fv = required("factor_vol");
    if (!fv.is_number()) throw SpecError("field 'factor_vol' must be a number");
    spec.factor_vol = fv.get<double>();
    spec.idio_vols = number_list(required("idio_vols"), "idio_vols");
    spec.true_alphas = number_list(required("true_alphas"), "true_alphas");
    if (j.contains("betas")) spec.betas = number_list(j.at("betas"), "betas");
    const auto& seed = required("seed");
    if (seed.is_number_unsigned()) {
        spec.seed = seed.get<std::uint64_t>();
    } else if (seed.is_number_integer() && seed.get<long long>() >= 0) {
        spec.seed = static_cast<std::uint64_t>(seed.get<long long>());
    } else {
        throw SpecError("field 'seed' must be a nonnegative integer");
    }
    spec.validate();
    return spec;
}

nlohmann::ordered_json SynthSpec::to_json() const {
    nlohmann::ordered_json j;
    j["n_stocks"] = n_stocks;
    j["horizon"] = horizon;
    j["factor_vol"] = factor_vol;
    j["idio_vols"] = idio_vols;
    j["true_alphas"] = true_alphas;
    std::vector<double> b(n_stocks);
    for (std::size_t i = 0; i < n_stocks; ++i) b[i] = beta(i);
    j["betas"] = b;
    j["seed"] = seed;
    return j;
}

nlohmann::ordered_json GroundTruth::to_json() const {
    nlohmann::ordered_json j;
    j["spec"] = spec.to_json();
    j["noise"] = spec.noise == NoiseModel::gaussian ? "gaussian" : "student-t";
    if (spec.noise == NoiseModel::student_t) j["t_dof"] = spec.t_dof;
    j["generator"] = "xoshiro256** (splitmix64 seeding), Marsaglia polar normals";
    j["model_vols"] = model_vols;
    j["drifts"] = drifts;
    if (event) {
        j["event"] = {{"stock", event->stock}, {"day", event->day}, {"jump", event->jump}};
    } else {
        j["event"] = nullptr;
    }
    return j;
}

SyntheticMarket generate_market(const SynthSpec& spec) {
    spec.validate();
    const std::size_t n = spec.n_stocks;
    GroundTruth truth{spec, {}, {}, std::nullopt};
    for (std::size_t i = 0; i < n; ++i) {
        truth.model_vols.push_back(spec.model_vol(i));
        truth.drifts.push_back(spec.true_alphas[i] * truth.model_vols.back());
    }

    Rng rng(spec.seed);
    auto shock = [&] { return spec.noise == NoiseModel::gaussian ? rng.normal() : rng.student_t_unit(spec.t_dof); };

    Matrix returns(spec.horizon, n);
    for (std::size_t t = 0; t < spec.horizon; ++t) {
        const double f = spec.factor_vol * shock();
        for (std::size_t i = 0; i < n; ++i) {
            returns(t, i) = truth.drifts[i] + spec.beta(i) * f + spec.idio_vols[i] * shock();
        }
    }

    std::vector<std::string> tickers;
    for (std::size_t i = 0; i < n; ++i) tickers.push_back(ticker_name(i));
    auto dates = weekdays_from(kBaseDate, spec.horizon + 1);
    dates.erase(dates.begin());
    try {
        return {ReturnPanel(std::move(dates), std::move(tickers), std::move(returns), ReturnMode::simple),
                std::move(truth)};
    } catch (const ValueError& e) {
        throw SpecError(std::string("generated panel is invalid (volatility too large?): ") + e.what());
    }
}

SyntheticMarket event_scenario(const SynthSpec& spec, std::size_t stock, std::size_t event_day, double jump) {
    spec.validate();
    if (event_day == 0 || event_day >= spec.horizon) {
        throw SpecError("event_day must satisfy 0 < event_day < horizon, got " + std::to_string(event_day));
    }
    if (stock >= spec.n_stocks) throw SpecError("event stock index out of range");
    SyntheticMarket base = generate_market(spec);
    Matrix returns = base.panel.returns();
    returns(event_day, stock) += jump;
    base.truth.event = ShockEvent{stock, event_day, jump};
    try {
        return {ReturnPanel(base.panel.dates(), base.panel.tickers(), std::move(returns), ReturnMode::simple),
                std::move(base.truth)};
    } catch (const ValueError& e) {
        throw SpecError(std::string("shocked panel is invalid: ") + e.what());
    }
}

PricePanel synthetic_prices(const ReturnPanel& panel, double base) {
    using namespace std::chrono;
    PricePanel out;
    out.tickers = panel.tickers();
    // The day before the first return date, stepping back over a weekend.
    sys_days day{panel.dates().front()};
    do {
        day -= days{1};
    } while (weekday{day} == Saturday || weekday{day} == Sunday);
    out.dates.emplace_back(day);
    out.dates.insert(out.dates.end(), panel.dates().begin(), panel.dates().end());
    out.prices = Matrix(panel.n_dates() + 1, panel.n_tickers());
    for (std::size_t i = 0; i < panel.n_tickers(); ++i) {
        double p = base;
        out.prices(0, i) = p;
        for (std::size_t t = 0; t < panel.n_dates(); ++t) {
            p *= panel.mode() == ReturnMode::simple ? 1.0 + panel(t, i) : std::exp(panel(t, i));
            out.prices(t + 1, i) = p;
        }
    }
    return out;
}

namespace {

/// Long-run variance of a demeaned series whose autocorrelation vanishes
/// beyond `lag`: autocovariances summed with unit weights (truncated kernel).
/// Falls back to the plain variance if the sum is not positive.
double long_run_variance(const std::vector<double>& e, std::size_t lag) {
    const std::size_t n = e.size();
    auto autocov = [&](std::size_t l) {
        double acc = 0.0;
        for (std::size_t t = l; t < n; ++t) acc += e[t] * e[t - l];
        return acc / static_cast<double>(n);
    };
    const double v0 = autocov(0);
    double v = v0;
    for (std::size_t l = 1; l <= std::min(lag, n - 1); ++l) v += 2.0 * autocov(l);
    return v > 0.0 ? v : v0;
}

}  // namespace

RecoveryReport recover_bias(const ReturnPanel& panel, const GroundTruth& truth, const VolatilityConfig& cfg) {
    cfg.validate();
    const std::size_t n = panel.n_tickers();
    if (truth.drifts.size() != n || truth.spec.true_alphas.size() != n) {
        throw DimensionError("ground truth does not match the panel's stock count");
    }
    const std::size_t need = cfg.mode == WindowMode::rolling ? cfg.window + 1 : 2;
    if (panel.n_dates() < need) {
        throw InsufficientDataError("panel has " + std::to_string(panel.n_dates()) + " dates, recovery needs " +
                                    std::to_string(need));
    }

    double drift_total = 0.0;
    for (double mu : truth.drifts) drift_total += mu;
    // Overlapping rolling windows make consecutive alphas correlated.
    const std::size_t lag = cfg.mode == WindowMode::rolling ? cfg.window - 1 : 0;

    RecoveryReport report;
    for (std::size_t i = 0; i < n; ++i) {
        const VolatilityProfile p = volatility_profile(panel, i, cfg);
        const auto s = panel.series(i);
        const double peer_drift = (drift_total - truth.drifts[i]) / static_cast<double>(n - 1);

        std::vector<double> residual;
        double sum_alpha = 0.0;
        double sum_expected = 0.0;
        for (std::size_t t = 0; t < panel.n_dates(); ++t) {
            if (!p.eligible(t)) continue;
            const double alpha = s[t] / *p.sigma_stock[t] - p.peers[t] / *p.sigma_peers[t];
            const double expected = truth.drifts[i] / *p.sigma_stock[t] - peer_drift / *p.sigma_peers[t];
            sum_alpha += alpha;
            sum_expected += expected;
            residual.push_back(alpha - expected);
        }
        if (residual.size() < 2) {
            throw InsufficientDataError("fewer than 2 eligible dates for " + panel.tickers()[i]);
        }
        StockRecovery r;
        r.ticker = panel.tickers()[i];
        r.true_alpha = truth.spec.true_alphas[i];
        r.n = residual.size();
        const double count = static_cast<double>(r.n);
        r.mean_alpha = sum_alpha / count;
        r.expected_alpha = sum_expected / count;
        double rm = 0.0;
        for (double e : residual) rm += e;
        rm /= count;
        for (double& e : residual) e -= rm;
        r.std_error = std::sqrt(long_run_variance(residual, lag) * count / (count - 1.0) / count);
        const double diff = r.mean_alpha - r.expected_alpha;
        r.z = r.std_error > 0.0 ? diff / r.std_error : (diff == 0.0 ? 0.0 : INFINITY);
        report.max_abs_z = std::max(report.max_abs_z, std::abs(r.z));
        report.stocks.push_back(std::move(r));
    }
    report.pass = report.max_abs_z < 3.0;

    double num = 0.0, den = 0.0;
    for (const auto& r : report.stocks) {
        num += r.mean_alpha * r.true_alpha;
        den += r.true_alpha * r.true_alpha;
    }
    if (den > 0.0) report.attenuation = num / den;

    for (const auto& a : report.stocks) {
        for (const auto& b : report.stocks) {
            if (a.true_alpha > b.true_alpha && !(a.mean_alpha > b.mean_alpha)) report.rank_order_ok = false;
        }
    }
    return report;
}

nlohmann::ordered_json RecoveryReport::to_json() const {
    nlohmann::ordered_json j;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& r : stocks) {
        rows.push_back({{"ticker", r.ticker},
                        {"true_alpha", r.true_alpha},
                        {"expected_alpha", r.expected_alpha},
                        {"mean_alpha", r.mean_alpha},
                        {"stderr", r.std_error},
                        {"z", r.z},
                        {"n", r.n}});
    }
    j["stocks"] = rows;
    j["max_abs_z"] = max_abs_z;
    j["pass"] = pass;
    j["attenuation"] = attenuation ? nlohmann::ordered_json(*attenuation) : nlohmann::ordered_json(nullptr);
    j["rank_order_ok"] = rank_order_ok;
    return j;
}

}  // namespace yardstick
