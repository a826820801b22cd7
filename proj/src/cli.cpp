#include "yardstick/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "yardstick/capm.hpp"
#include "yardstick/config.hpp"
#include "yardstick/distributions.hpp"
#include "yardstick/errors.hpp"
#include "yardstick/market_data.hpp"
#include "yardstick/numeric.hpp"
#include "yardstick/sentiment.hpp"
#include "yardstick/synth.hpp"

namespace yardstick {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

/// Every setting a run can take, after merging the config file and flags.
struct RunConfig {
    std::string input;
    std::string out = ".";
    ReturnMode returns = ReturnMode::simple;
    AlignmentPolicy align = AlignmentPolicy::strict();
    VolatilityConfig vol;
    IndexSpec index;
    double risk_free = 0.0;
    std::size_t bins = 0;
    std::optional<double> tolerance;
    std::size_t min_side = 10;
    std::string spec;
    std::optional<std::uint64_t> seed;
    NoiseModel noise = NoiseModel::gaussian;
    int dof = 5;
    std::optional<std::size_t> event_day;
    std::size_t event_stock = 0;
    double jump = 0.0;
};

const std::set<std::string> kConfigKeys{"input",     "out",         "window",    "returns",  "align",
                                        "max_fill_gap", "seed",     "bins",      "tolerance", "risk_free",
                                        "include_self", "weights",  "spec",      "noise",    "dof",
                                        "min_side",  "event_day",   "event_stock", "jump"};

std::string text_of(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

std::uint64_t as_u64(const json& v, const std::string& key) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<long long>() >= 0) return static_cast<std::uint64_t>(v.get<long long>());
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        std::uint64_t out = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        if (ec == std::errc{} && p == s.data() + s.size() && !s.empty()) return out;
    }
    throw ConfigError("'" + key + "' must be a nonnegative integer, got " + text_of(v));
}

double as_double(const json& v, const std::string& key) {
    if (v.is_number()) return v.get<double>();
    double out = 0.0;
    if (v.is_string() && parse_decimal(v.get<std::string>(), out)) return out;
    throw ConfigError("'" + key + "' must be a number, got " + text_of(v));
}

bool as_bool(const json& v, const std::string& key) {
    if (v.is_boolean()) return v.get<bool>();
    if (v.is_string() && v.get<std::string>() == "true") return true;
    if (v.is_string() && v.get<std::string>() == "false") return false;
    throw ConfigError("'" + key + "' must be true or false, got " + text_of(v));
}

std::string as_string(const json& v, const std::string& key) {
    if (!v.is_string()) throw ConfigError("'" + key + "' must be a string");
    return v.get<std::string>();
}

RunConfig resolve_config(const json& merged) {
    RunConfig c;
    for (const auto& [key, value] : merged.items()) {
        if (!kConfigKeys.count(key)) throw ConfigError("unknown config key '" + key + "'");
        (void)value;
    }
    auto has = [&](const char* k) { return merged.contains(k) && !merged.at(k).is_null(); };
    if (has("input")) c.input = as_string(merged["input"], "input");
    if (has("out")) c.out = as_string(merged["out"], "out");
    if (has("returns")) c.returns = parse_return_mode(as_string(merged["returns"], "returns"));
    if (has("window")) {
        const auto& w = merged["window"];
        if (w.is_string() && w.get<std::string>() == "full") {
            c.vol = VolatilityConfig::full_sample();
        } else {
            c.vol = VolatilityConfig::rolling(as_u64(w, "window"));
        }
    }
    c.vol.validate();
    int max_gap = 1;
    if (has("max_fill_gap")) max_gap = static_cast<int>(as_u64(merged["max_fill_gap"], "max_fill_gap"));
    if (has("align")) {
        const auto a = as_string(merged["align"], "align");
        if (a == "strict") {
            c.align = AlignmentPolicy::strict();
        } else if (a == "ffill") {
            c.align = AlignmentPolicy::forward_fill(max_gap);
        } else {
            throw ConfigError("'align' must be strict or ffill, got " + a);
        }
    }
    if (has("seed")) c.seed = as_u64(merged["seed"], "seed");
    if (has("bins")) c.bins = as_u64(merged["bins"], "bins");
    if (has("tolerance")) c.tolerance = as_double(merged["tolerance"], "tolerance");
    if (has("risk_free")) c.risk_free = as_double(merged["risk_free"], "risk_free");
    if (has("include_self")) c.index.include_self = as_bool(merged["include_self"], "include_self");
    if (has("weights")) {
        const auto& w = merged["weights"];
        if (w.is_array()) {
            for (const auto& e : w) c.index.weights.push_back(as_double(e, "weights"));
        } else {
            std::stringstream ss(as_string(w, "weights"));
            std::string item;
            while (std::getline(ss, item, ',')) c.index.weights.push_back(as_double(json(item), "weights"));
        }
    }
    if (has("spec")) c.spec = as_string(merged["spec"], "spec");
    if (has("noise")) {
        const auto n = as_string(merged["noise"], "noise");
        if (n == "gaussian") {
            c.noise = NoiseModel::gaussian;
        } else if (n == "student-t") {
            c.noise = NoiseModel::student_t;
        } else {
            throw ConfigError("'noise' must be gaussian or student-t, got " + n);
        }
    }
    if (has("dof")) c.dof = static_cast<int>(as_u64(merged["dof"], "dof"));
    if (has("min_side")) c.min_side = as_u64(merged["min_side"], "min_side");
    if (has("event_day")) c.event_day = as_u64(merged["event_day"], "event_day");
    if (has("event_stock")) c.event_stock = as_u64(merged["event_stock"], "event_stock");
    if (has("jump")) c.jump = as_double(merged["jump"], "jump");
    return c;
}

// Paths inside a config file are relative to that file.
void rebase_paths(json& file_cfg, const fs::path& base) {
    for (const char* key : {"input", "out", "spec"}) {
        if (file_cfg.contains(key) && file_cfg[key].is_string()) {
            const fs::path p = file_cfg[key].get<std::string>();
            if (p.is_relative()) file_cfg[key] = (base / p).lexically_normal().string();
        }
    }
}

class OutputDir {
public:
    explicit OutputDir(const std::string& dir) : dir_(dir) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec || !fs::is_directory(dir_)) throw IoError("cannot create output directory: " + dir);
    }

    void write(const std::string& name, const std::function<void(std::ostream&)>& body) const {
        const fs::path path = dir_ / name;
        std::ostringstream buf;
        body(buf);
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        f << buf.str();
        f.close();
        if (!f) throw IoError("cannot write output file: " + path.string());
    }

    void write_json(const std::string& name, const nlohmann::ordered_json& j) const {
        write(name, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
    }

private:
    fs::path dir_;
};

ReturnPanel load_returns(const RunConfig& c) {
    if (c.input.empty()) throw ConfigError("no input file given (use --input)");
    const PricePanel raw = load_price_csv(c.input);
    return compute_returns(align_calendar(raw, c.align), c.returns);
}

void note_exclusions(const std::vector<SentimentSeries>& all, std::ostream& err) {
    for (const auto& s : all) {
        if (!s.excluded.empty()) {
            err << "note: " << s.ticker << ": " << s.excluded.size() << " date(s) excluded (ZeroVolatility)\n";
        }
    }
}

int cmd_sentiment(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const ReturnPanel panel = load_returns(c);
    const auto all = sentiment_all(panel, c.vol);
    note_exclusions(all, err);
    const OutputDir dir(c.out);
    for (const auto& s : all) {
        dir.write("sentiment_" + s.ticker + ".csv", [&](std::ostream& o) { write_sentiment_csv(o, s); });
    }
    dir.write("alpha_pool.csv", [&](std::ostream& o) {
        o << "date,ticker,alpha\n";
        for (const auto& s : all) {
            for (std::size_t k = 0; k < s.alpha.size(); ++k) {
                o << format_iso_date(s.dates[k]) << ',' << s.ticker << ',' << format_shortest(s.alpha[k]) << '\n';
            }
        }
    });
    out << "wrote " << all.size() << " sentiment series to " << c.out << '\n';
    return 0;
}

int cmd_compare(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const ReturnPanel panel = load_returns(c);
    const auto ys = yardstick_points(panel, c.vol);
    const auto cp = capm_points(panel, c.index, c.vol, c.risk_free);
    const ComparisonReport report = compare_fits(ys, cp);

    const double tol = c.tolerance ? *c.tolerance : default_tolerance(ys);
    std::vector<ConditionalPdf> pdfs;
    for (double target : default_x_targets(ys)) {
        try {
            pdfs.push_back(conditional_pdf(ys, target, tol, c.bins));
            if (pdfs.back().sample_too_small) {
                err << "warning: SampleTooSmall: only " << pdfs.back().n << " points near x = "
                    << format_shortest(target) << '\n';
            }
        } catch (const EmptySlabError& e) {
            err << "warning: EmptySlabError: " << e.what() << '\n';
        }
    }

    const OutputDir dir(c.out);
    dir.write("yardstick_points.csv", [&](std::ostream& o) { write_points_csv(o, ys); });
    dir.write("capm_points.csv", [&](std::ostream& o) { write_points_csv(o, cp); });
    dir.write_json("comparison.json", to_json(report));
    dir.write("conditional_pdfs.csv", [&](std::ostream& o) { write_conditional_pdfs_csv(o, pdfs); });
    out << "yardstick slope " << format_shortest(report.yardstick.slope) << ", capm slope "
        << format_shortest(report.capm.slope) << '\n';
    return 0;
}

bool is_alpha_pool(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open input file: " + path);
    std::string header;
    std::getline(in, header);
    while (!header.empty() && (header.back() == '\r' || header.back() == ' ')) header.pop_back();
    return header == "date,ticker,alpha";
}

std::vector<double> load_alpha_pool(const std::string& path) {
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    std::vector<double> alphas;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.rfind(',');
        double a = 0.0;
        if (comma == std::string::npos || !parse_decimal(std::string_view(line).substr(comma + 1), a) ||
            !std::isfinite(a)) {
            throw ValueError(path + ": line " + std::to_string(line_no) + ": invalid alpha");
        }
        alphas.push_back(a);
    }
    return alphas;
}

int cmd_dist(const RunConfig& c, std::ostream& out, std::ostream& err) {
    if (c.input.empty()) throw ConfigError("no input file given (use --input)");
    std::vector<double> alphas;
    if (is_alpha_pool(c.input)) {
        alphas = load_alpha_pool(c.input);
    } else {
        const auto all = sentiment_all(load_returns(c), c.vol);
        note_exclusions(all, err);
        for (const auto& s : all) alphas.insert(alphas.end(), s.alpha.begin(), s.alpha.end());
    }
    const Histogram hist = sentiment_histogram(alphas, c.bins);
    const SymmetryReport sym = symmetry_test(alphas);
    const LaplaceFit fit = fit_laplace(alphas, c.min_side);

    const OutputDir dir(c.out);
    dir.write("alpha_hist.csv", [&](std::ostream& o) { write_histogram_csv(o, hist); });
    dir.write_json("laplace_fit.json", to_json(fit));
    dir.write_json("symmetry.json", to_json(sym));
    out << "pooled " << alphas.size() << " alphas; Laplace scale " << format_shortest(fit.scale_pooled)
        << ", sign-test p " << format_shortest(sym.p_value) << '\n';
    return 0;
}

int cmd_synth(const RunConfig& c, std::ostream& out, std::ostream&) {
    if (c.spec.empty()) throw ConfigError("no synthetic market spec given (use --spec)");
    SynthSpec spec = SynthSpec::from_json(load_config_file(c.spec));
    if (c.seed) spec.seed = *c.seed;
    spec.noise = c.noise;
    spec.t_dof = c.dof;
    const SyntheticMarket market =
        c.event_day ? event_scenario(spec, c.event_stock, *c.event_day, c.jump) : generate_market(spec);
    const RecoveryReport report = recover_bias(market.panel, market.truth, c.vol);

    const OutputDir dir(c.out);
    dir.write("returns.csv", [&](std::ostream& o) { write_return_csv(o, market.panel); });
    dir.write("prices.csv", [&](std::ostream& o) { write_price_csv(o, synthetic_prices(market.panel)); });
    dir.write_json("truth.json", market.truth.to_json());
    dir.write_json("recovery.json", report.to_json());
    out << "recovery " << (report.pass ? "pass" : "FAIL") << ", max |z| " << format_shortest(report.max_abs_z)
        << '\n';
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Relative-sentiment (yardstick) analytics for stock return panels", "yardstick"};
    app.require_subcommand(1);

    std::map<std::string, std::string> flags;
    std::string config_path;

    auto add_shared = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "Declarative run config (.toml or .json); flags win");
        for (const auto& [name, help] : std::vector<std::pair<std::string, std::string>>{
                 {"input", "Input CSV path"},
                 {"out", "Output directory"},
                 {"window", "Volatility window: trading days, or 'full'"},
                 {"returns", "simple|log"},
                 {"align", "strict|ffill"},
                 {"max-fill-gap", "Longest missing run forward-fill may bridge"},
                 {"seed", "Random seed (u64)"}}) {
            sub->add_option_function<std::string>(
                "--" + name, [&flags, name](const std::string& v) { flags[name] = v; }, help);
        }
    };
    auto add_flag = [&](CLI::App* sub, const std::string& name, const std::string& help) {
        sub->add_option_function<std::string>(
            "--" + name, [&flags, name](const std::string& v) { flags[name] = v; }, help);
    };

    CLI::App* sentiment_cmd = app.add_subcommand("sentiment", "Per-stock sentiment and cumulative sentiment");
    CLI::App* compare_cmd = app.add_subcommand("compare", "Yardstick vs CAPM scatter, fits and conditional PDFs");
    CLI::App* dist_cmd = app.add_subcommand("dist", "Sentiment histogram, Laplace fit and sign test");
    CLI::App* synth_cmd = app.add_subcommand("synth", "Generate a synthetic market and check bias recovery");
    for (CLI::App* sub : {sentiment_cmd, compare_cmd, dist_cmd, synth_cmd}) add_shared(sub);
    add_flag(compare_cmd, "bins", "Conditional PDF bins (0 = automatic)");
    add_flag(compare_cmd, "tolerance", "Conditioning half-width (default 0.1 * std of x)");
    add_flag(compare_cmd, "risk-free", "Daily risk-free rate for CAPM");
    add_flag(compare_cmd, "weights", "Comma-separated index weights (default equal)");
    add_flag(compare_cmd, "include-self", "true|false: keep stock i in its own market return");
    add_flag(dist_cmd, "bins", "Histogram bins (0 = Freedman-Diaconis)");
    add_flag(dist_cmd, "min-side", "Minimum values per sign for the Laplace fit");
    add_flag(synth_cmd, "spec", "Synthetic market spec (.toml or .json)");
    add_flag(synth_cmd, "noise", "gaussian|student-t");
    add_flag(synth_cmd, "dof", "Student-t degrees of freedom");
    add_flag(synth_cmd, "event-day", "Row index of a one-day shock");
    add_flag(synth_cmd, "event-stock", "Stock index receiving the shock");
    add_flag(synth_cmd, "jump", "Size of the one-day additive return shock");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "ERROR:UsageError: " << e.what() << '\n';
        return 2;
    }

    try {
        json merged = json::object();
        if (!config_path.empty()) {
            merged = load_config_file(config_path);
            if (!merged.is_object()) throw ConfigError(config_path + ": config must be a table of keys");
            rebase_paths(merged, fs::path(config_path).parent_path());
        }
        for (const auto& [name, value] : flags) {
            std::string key = name;
            std::replace(key.begin(), key.end(), '-', '_');
            merged[key] = value;
        }
        const RunConfig cfg = resolve_config(merged);

        if (sentiment_cmd->parsed()) return cmd_sentiment(cfg, out, err);
        if (compare_cmd->parsed()) return cmd_compare(cfg, out, err);
        if (dist_cmd->parsed()) return cmd_dist(cfg, out, err);
        return cmd_synth(cfg, out, err);
    } catch (const Error& e) {
        err << "ERROR:" << e.code() << ": " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "ERROR:InternalError: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace yardstick
