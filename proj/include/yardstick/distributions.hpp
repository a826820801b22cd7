#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "yardstick/sentiment.hpp"

namespace yardstick {

struct Histogram {
    std::vector<double> edges;
    std::vector<std::size_t> counts;
    /// counts / (n * width), so sum(density * width) == 1.
    std::vector<double> density;

    std::size_t bins() const noexcept { return counts.size(); }
    std::size_t sample_size() const;
    double bin_mid(std::size_t k) const { return 0.5 * (edges[k] + edges[k + 1]); }
    /// Bin holding `value` (bins are [left, right), the last one closed), or nullopt.
    std::optional<std::size_t> bin_of(double value) const;
};

/// Histogram over explicit, strictly increasing edges. Every sample value
/// must lie within [edges.front(), edges.back()].
Histogram make_histogram(std::span<const double> sample, std::vector<double> edges);

/// Freedman-Diaconis bin count for covering [lo, hi]; never below `min_bins`.
std::size_t freedman_diaconis_bins(std::span<const double> sample, double lo, double hi,
                                   std::size_t min_bins = 10);

struct ConditionalPdf {
    double x_target = 0.0;
    double tolerance = 0.0;
    Histogram histogram;
    /// Midpoint of the bin with maximal density (first one on ties).
    double peak = 0.0;
    std::size_t n = 0;
    /// Fewer than 30 points in the slab.
    bool sample_too_small = false;
    std::size_t peak_bin = 0;
    /// Grid index of the bin centred on x_target (may fall outside the histogram).
    long target_bin = 0;

    /// Signed distance in bins between the peak bin and the x_target bin.
    long peak_offset_bins() const { return static_cast<long>(peak_bin) - target_bin; }
};

/// Distribution of y over points with |x - x_target| <= tolerance.
///
/// The bin grid is aligned so x_target sits at the middle of a bin. With
/// `bins == 0` the bin width is the Freedman-Diaconis width of the slab
/// sample, floored at the slab width 2*tolerance: the slab smears y by up to
/// +-tolerance, so narrower bins cannot locate the conditional peak. With
/// `bins > 0` that many bins cover the slab sample.
///
/// Throws EmptySlabError when no point lies inside the slab.
ConditionalPdf conditional_pdf(std::span<const ScatterPoint> points, double x_target, double tolerance,
                               std::size_t bins = 0);

/// x values at the 10/30/50/70/90th percentiles.
std::vector<double> default_x_targets(std::span<const ScatterPoint> points);
/// 0.1 * population std of x.
double default_tolerance(std::span<const ScatterPoint> points);

/// Density histogram over [-max|a|, +max|a|]; `bins == 0` selects
/// Freedman-Diaconis (at least 10). Throws EmptyResultError on an empty sample.
Histogram sentiment_histogram(std::span<const double> alphas, std::size_t bins = 0);

/// Zero-location two-sided exponential fit. Each scale is the MLE, the mean
/// absolute value of its subsample.
struct LaplaceFit {
    double location = 0.0;
    double scale_pos = 0.0;
    double scale_neg = 0.0;
    double scale_pooled = 0.0;
    double asymmetry = 0.0;
    std::size_t n_positive = 0;
    std::size_t n_negative = 0;
};

/// Throws OneSidedFitError naming the deficient side when either side has
/// fewer than `min_per_side` values, EmptyResultError on an empty sample.
LaplaceFit fit_laplace(std::span<const double> alphas, std::size_t min_per_side = 10);

struct SymmetryReport {
    std::size_t n = 0;
    double mean = 0.0;
    std::size_t n_positive = 0;
    std::size_t n_negative = 0;
    std::size_t n_zero = 0;
    /// Two-sided binomial sign test (p = 0.5), zeros discarded.
    double p_value = 1.0;
    /// LaplaceFit asymmetry; absent when one side is empty.
    std::optional<double> asymmetry;
};

SymmetryReport symmetry_test(std::span<const double> alphas);

/// min(1, 2 * P[X <= k]) for X ~ Binomial(n, 1/2).
double sign_test_p_value(std::size_t n_positive, std::size_t n_negative);

void write_histogram_csv(std::ostream& out, const Histogram& h);
/// CSV `x_target,tolerance,n,peak,bin_left,bin_right,count,density`, one row per bin.
void write_conditional_pdfs_csv(std::ostream& out, std::span<const ConditionalPdf> pdfs);

nlohmann::ordered_json to_json(const LaplaceFit& fit);
nlohmann::ordered_json to_json(const SymmetryReport& report);

}  // namespace yardstick
