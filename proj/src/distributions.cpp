#include "yardstick/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include <boost/math/distributions/binomial.hpp>

#include "yardstick/errors.hpp"
#include "yardstick/numeric.hpp"

namespace yardstick {
namespace {

constexpr std::size_t kMaxBins = 10000;
constexpr std::size_t kMinSlabPoints = 30;

double fd_width(std::vector<double> sample) {
    if (sample.size() < 2) return 0.0;
    std::sort(sample.begin(), sample.end());
    const double iqr = quantile_sorted(sample, 0.75) - quantile_sorted(sample, 0.25);
    return 2.0 * iqr / std::cbrt(static_cast<double>(sample.size()));
}

std::size_t argmax(const std::vector<double>& v) {
    return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

std::size_t Histogram::sample_size() const { return std::accumulate(counts.begin(), counts.end(), std::size_t{0}); }

std::optional<std::size_t> Histogram::bin_of(double value) const {
    if (edges.size() < 2 || value < edges.front() || value > edges.back()) return std::nullopt;
    if (value == edges.back()) return counts.size() - 1;
    const auto it = std::upper_bound(edges.begin(), edges.end(), value);
    return static_cast<std::size_t>(it - edges.begin()) - 1;
}

Histogram make_histogram(std::span<const double> sample, std::vector<double> edges) {
    if (edges.size() < 2) throw ValueError("a histogram needs at least one bin");
    for (std::size_t k = 1; k < edges.size(); ++k) {
        if (!(edges[k] > edges[k - 1])) throw ValueError("histogram edges must be strictly increasing");
    }
    Histogram h;
    h.edges = std::move(edges);
    h.counts.assign(h.edges.size() - 1, 0);
    for (double v : sample) {
        const auto bin = h.bin_of(v);
        if (!bin) throw ValueError("value " + format_shortest(v) + " lies outside the histogram range");
        ++h.counts[*bin];
    }
    h.density.resize(h.counts.size());
    const double n = static_cast<double>(sample.size());
    for (std::size_t k = 0; k < h.counts.size(); ++k) {
        h.density[k] = n > 0 ? static_cast<double>(h.counts[k]) / (n * (h.edges[k + 1] - h.edges[k])) : 0.0;
    }
    return h;
}

std::size_t freedman_diaconis_bins(std::span<const double> sample, double lo, double hi, std::size_t min_bins) {
    const double width = fd_width(std::vector<double>(sample.begin(), sample.end()));
    if (!(width > 0.0) || !(hi > lo)) return min_bins;
    const double bins = std::ceil((hi - lo) / width);
    return std::clamp(static_cast<std::size_t>(bins), min_bins, std::max(min_bins, kMaxBins));
}

ConditionalPdf conditional_pdf(std::span<const ScatterPoint> points, double x_target, double tolerance,
                               std::size_t bins) {
    if (!(tolerance >= 0.0)) throw ValueError("conditioning tolerance must be nonnegative");
    std::vector<double> ys;
    for (const auto& p : points) {
        if (std::abs(p.x - x_target) <= tolerance) ys.push_back(p.y);
    }
    if (ys.empty()) {
        throw EmptySlabError("no point with x within " + format_shortest(tolerance) + " of " +
                             format_shortest(x_target));
    }
    const auto [lo_it, hi_it] = std::minmax_element(ys.begin(), ys.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    const double reach = std::max(std::abs(lo - x_target), std::abs(hi - x_target));

    ConditionalPdf out;
    out.x_target = x_target;
    out.tolerance = tolerance;
    out.n = ys.size();
    out.sample_too_small = ys.size() < kMinSlabPoints;

    std::vector<double> edges;
    if (bins > 0) {
        const double half = reach > 0.0 ? reach : std::max(tolerance, 0.5);
        const double width = 2.0 * half / static_cast<double>(bins);
        for (std::size_t k = 0; k <= bins; ++k) edges.push_back(x_target - half + static_cast<double>(k) * width);
        edges.back() = x_target + half;
        out.histogram = make_histogram(ys, std::move(edges));
        out.target_bin = static_cast<long>(*out.histogram.bin_of(x_target));
    } else {
        double width = std::max(fd_width(ys), 2.0 * tolerance);
        if (!(width > 0.0)) width = reach > 0.0 ? 2.0 * reach : 1.0;
        // Bin k covers [x_target + (k - 1/2) w, x_target + (k + 1/2) w).
        auto edge = [&](long k) { return x_target + (static_cast<double>(k) - 0.5) * width; };
        long k_lo = static_cast<long>(std::floor((lo - x_target) / width + 0.5));
        long k_hi = static_cast<long>(std::floor((hi - x_target) / width + 0.5));
        while (edge(k_lo) > lo) --k_lo;
        while (edge(k_hi + 1) < hi) ++k_hi;
        if (static_cast<std::size_t>(k_hi - k_lo + 1) > kMaxBins) {
            throw ValueError("conditional histogram would need more than " + std::to_string(kMaxBins) + " bins");
        }
        for (long k = k_lo; k <= k_hi + 1; ++k) edges.push_back(edge(k));
        out.histogram = make_histogram(ys, std::move(edges));
        out.target_bin = -k_lo;
    }
    out.peak_bin = argmax(out.histogram.density);
    out.peak = out.histogram.bin_mid(out.peak_bin);
    return out;
}

std::vector<double> default_x_targets(std::span<const ScatterPoint> points) {
    if (points.empty()) throw EmptyResultError("no points to choose conditioning targets from");
    std::vector<double> xs;
    xs.reserve(points.size());
    for (const auto& p : points) xs.push_back(p.x);
    std::sort(xs.begin(), xs.end());
    std::vector<double> targets;
    for (double q : {0.1, 0.3, 0.5, 0.7, 0.9}) targets.push_back(quantile_sorted(xs, q));
    return targets;
}

double default_tolerance(std::span<const ScatterPoint> points) {
    if (points.empty()) throw EmptyResultError("no points to size the conditioning slab from");
    std::vector<double> xs;
    xs.reserve(points.size());
    for (const auto& p : points) xs.push_back(p.x);
    std::sort(xs.begin(), xs.end());
    return 0.1 * population_std(xs);
}

Histogram sentiment_histogram(std::span<const double> alphas, std::size_t bins) {
    if (alphas.empty()) throw EmptyResultError("sentiment histogram of an empty sample");
    double m = 0.0;
    for (double a : alphas) m = std::max(m, std::abs(a));
    if (m == 0.0) m = 1.0;
    if (bins == 0) bins = freedman_diaconis_bins(alphas, -m, m);
    std::vector<double> edges(bins + 1);
    const double width = 2.0 * m / static_cast<double>(bins);
    for (std::size_t k = 0; k <= bins; ++k) edges[k] = -m + static_cast<double>(k) * width;
    edges.back() = m;
    return make_histogram(alphas, std::move(edges));
}

LaplaceFit fit_laplace(std::span<const double> alphas, std::size_t min_per_side) {
    if (alphas.empty()) throw EmptyResultError("Laplace fit of an empty sample");
    LaplaceFit fit;
    double sum_pos = 0.0;
    double sum_neg = 0.0;
    double sum_abs = 0.0;
    for (double a : alphas) {
        sum_abs += std::abs(a);
        if (a > 0.0) {
            sum_pos += a;
            ++fit.n_positive;
        } else if (a < 0.0) {
            sum_neg += -a;
            ++fit.n_negative;
        }
    }
    const std::size_t need = std::max<std::size_t>(min_per_side, 1);
    if (fit.n_positive < need) throw OneSidedFitError(Side::positive, fit.n_positive, need);
    if (fit.n_negative < need) throw OneSidedFitError(Side::negative, fit.n_negative, need);
    fit.scale_pos = sum_pos / static_cast<double>(fit.n_positive);
    fit.scale_neg = sum_neg / static_cast<double>(fit.n_negative);
    fit.scale_pooled = sum_abs / static_cast<double>(alphas.size());
    fit.asymmetry = std::abs(fit.scale_pos - fit.scale_neg) / fit.scale_pooled;
    return fit;
}

double sign_test_p_value(std::size_t n_positive, std::size_t n_negative) {
    const std::size_t n = n_positive + n_negative;
    if (n == 0) return 1.0;
    const std::size_t k = std::min(n_positive, n_negative);
    const boost::math::binomial_distribution<double> dist(static_cast<double>(n), 0.5);
    return std::min(1.0, 2.0 * boost::math::cdf(dist, static_cast<double>(k)));
}

SymmetryReport symmetry_test(std::span<const double> alphas) {
    if (alphas.empty()) throw EmptyResultError("symmetry test of an empty sample");
    SymmetryReport r;
    r.n = alphas.size();
    r.mean = mean(alphas);
    for (double a : alphas) {
        if (a > 0.0) {
            ++r.n_positive;
        } else if (a < 0.0) {
            ++r.n_negative;
        } else {
            ++r.n_zero;
        }
    }
    r.p_value = sign_test_p_value(r.n_positive, r.n_negative);
    if (r.n_positive > 0 && r.n_negative > 0) r.asymmetry = fit_laplace(alphas, 1).asymmetry;
    return r;
}

void write_histogram_csv(std::ostream& out, const Histogram& h) {
    out << "bin_left,bin_right,count,density\n";
    for (std::size_t k = 0; k < h.bins(); ++k) {
        out << format_shortest(h.edges[k]) << ',' << format_shortest(h.edges[k + 1]) << ',' << h.counts[k] << ','
            << format_shortest(h.density[k]) << '\n';
    }
}

void write_conditional_pdfs_csv(std::ostream& out, std::span<const ConditionalPdf> pdfs) {
    out << "x_target,tolerance,n,peak,bin_left,bin_right,count,density\n";
    for (const auto& pdf : pdfs) {
        const auto& h = pdf.histogram;
        for (std::size_t k = 0; k < h.bins(); ++k) {
            out << format_shortest(pdf.x_target) << ',' << format_shortest(pdf.tolerance) << ',' << pdf.n << ','
                << format_shortest(pdf.peak) << ',' << format_shortest(h.edges[k]) << ','
                << format_shortest(h.edges[k + 1]) << ',' << h.counts[k] << ',' << format_shortest(h.density[k])
                << '\n';
        }
    }
}

nlohmann::ordered_json to_json(const LaplaceFit& fit) {
    nlohmann::ordered_json j;
    j["location"] = fit.location;
    j["scale_pos"] = fit.scale_pos;
    j["scale_neg"] = fit.scale_neg;
    j["scale_pooled"] = fit.scale_pooled;
    j["asymmetry"] = fit.asymmetry;
    j["n_positive"] = fit.n_positive;
    j["n_negative"] = fit.n_negative;
    return j;
}

nlohmann::ordered_json to_json(const SymmetryReport& report) {
    nlohmann::ordered_json j;
    j["n"] = report.n;
    j["mean"] = report.mean;
    j["n_positive"] = report.n_positive;
    j["n_negative"] = report.n_negative;
    j["n_zero"] = report.n_zero;
    j["p_value"] = report.p_value;
    j["asymmetry"] = report.asymmetry ? nlohmann::ordered_json(*report.asymmetry) : nlohmann::ordered_json(nullptr);
    return j;
}

}  // namespace yardstick
