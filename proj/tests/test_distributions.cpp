#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "yardstick/distributions.hpp"
#include "yardstick/errors.hpp"
#include "yardstick/sentiment.hpp"
#include "yardstick/synth.hpp"

using namespace yardstick;

namespace {

double integral(const Histogram& h) {
    double acc = 0.0;
    for (std::size_t k = 0; k < h.bins(); ++k) acc += h.density[k] * (h.edges[k + 1] - h.edges[k]);
    return acc;
}

std::vector<double> laplace_sample(std::uint64_t seed, double b, std::size_t n) {
    std::mt19937_64 gen(seed);
    std::exponential_distribution<double> e(1.0 / b);
    std::bernoulli_distribution sign(0.5);
    std::vector<double> out(n);
    for (auto& v : out) v = sign(gen) ? e(gen) : -e(gen);
    return out;
}

SynthSpec neutral_spec(std::uint64_t seed) {
    SynthSpec spec;
    spec.n_stocks = 10;
    spec.horizon = 2000;
    spec.factor_vol = 0.01;
    spec.idio_vols = {0.0016, 0.0018, 0.002, 0.0022, 0.0024, 0.0016, 0.0018, 0.002, 0.0022, 0.0024};
    spec.true_alphas.assign(10, 0.0);
    spec.seed = seed;
    return spec;
}

}  // namespace

TEST_CASE("histogram basics") {
    const std::vector<double> pair{-1.0, 1.0};
    const auto h = sentiment_histogram(pair, 2);
    CHECK(h.edges == std::vector<double>{-1.0, 0.0, 1.0});
    CHECK(h.counts == std::vector<std::size_t>{1, 1});
    CHECK(std::abs(integral(h) - 1.0) <= 1e-9);

    CHECK_THROWS_AS(sentiment_histogram(std::vector<double>{}), EmptyResultError);
    CHECK_THROWS_AS(make_histogram(pair, {0.0, 1.0}), ValueError);
    CHECK_THROWS_AS(make_histogram(pair, {1.0, -1.0}), ValueError);

    const auto zeros = sentiment_histogram(std::vector<double>{0.0, 0.0, 0.0});
    CHECK(zeros.sample_size() == 3);
    CHECK(std::abs(integral(zeros) - 1.0) <= 1e-9);
}

TEST_CASE("histogram normalization and counts") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto sample = laplace_sample(seed, 0.4, 1000 + 137 * seed);
        for (std::size_t bins : {std::size_t{0}, std::size_t{7}, std::size_t{64}}) {
            const auto h = sentiment_histogram(sample, bins);
            CHECK(h.sample_size() == sample.size());
            CHECK(std::abs(integral(h) - 1.0) <= 1e-9);
            CHECK(std::is_sorted(h.edges.begin(), h.edges.end()));
            CHECK(h.edges.front() == -h.edges.back());
            if (bins == 0) CHECK(h.bins() >= 10);
        }
    }
    // Pooled alpha from a neutral synthetic market.
    const auto m = generate_market(neutral_spec(3));
    std::vector<double> pooled;
    for (const auto& s : sentiment_all(m.panel, VolatilityConfig::rolling(20))) {
        pooled.insert(pooled.end(), s.alpha.begin(), s.alpha.end());
    }
    const auto h = sentiment_histogram(pooled);
    CHECK(std::abs(integral(h) - 1.0) <= 1e-9);
    CHECK(h.sample_size() == pooled.size());
}

TEST_CASE("Laplace histogram has a linear log-density tail") {
    const double b = 0.5;
    const auto sample = laplace_sample(99, b, 100000);
    const auto h = sentiment_histogram(sample);
    // Least-squares slope of log density on |mid| over well-populated bins.
    std::vector<double> xs, ys;
    for (std::size_t k = 0; k < h.bins(); ++k) {
        if (h.counts[k] >= 100) {
            xs.push_back(std::abs(h.bin_mid(k)));
            ys.push_back(std::log(h.density[k]));
        }
    }
    REQUIRE(xs.size() >= 10);
    const double slope = oracle::covariance(xs, ys, 0, xs.size()) / oracle::covariance(xs, xs, 0, xs.size());
    CHECK(slope == doctest::Approx(-1.0 / b).epsilon(0.15));
}

TEST_CASE("fit_laplace") {
    const std::vector<double> pair{-1.0, 1.0};
    const auto f = fit_laplace(pair, 1);
    CHECK(f.location == 0.0);
    CHECK(f.scale_pos == 1.0);
    CHECK(f.scale_neg == 1.0);
    CHECK(f.scale_pooled == 1.0);
    CHECK(f.asymmetry == 0.0);

    const auto sample = laplace_sample(1234, 0.3, 100000);
    const auto big = fit_laplace(sample);
    CHECK(std::abs(big.scale_pooled - 0.3) <= 0.01);
    const double fold = std::accumulate(sample.begin(), sample.end(), 0.0,
                                        [](double acc, double v) { return acc + std::abs(v); }) /
                        static_cast<double>(sample.size());
    CHECK(big.scale_pooled == fold);
    CHECK(big.n_positive + big.n_negative == sample.size());

    std::vector<double> positive(20, 0.5);
    try {
        fit_laplace(positive);
        FAIL("expected OneSidedFitError");
    } catch (const OneSidedFitError& e) {
        CHECK(e.side() == Side::negative);
    }
    positive.push_back(-0.1);
    CHECK_THROWS_AS(fit_laplace(positive), OneSidedFitError);
    CHECK_NOTHROW(fit_laplace(positive, 1));
    CHECK_THROWS_AS(fit_laplace(std::vector<double>{}), EmptyResultError);
}

TEST_CASE("symmetry_test") {
    const auto r = symmetry_test(std::vector<double>{-2.0, -1.0, 1.0, 2.0});
    CHECK(r.mean == 0.0);
    CHECK(r.n_positive == 2);
    CHECK(r.n_negative == 2);
    CHECK(r.p_value == doctest::Approx(1.0));
    REQUIRE(r.asymmetry.has_value());
    CHECK(*r.asymmetry == 0.0);

    const auto one_sided = symmetry_test(std::vector<double>(20, 0.3));
    CHECK(one_sided.p_value == doctest::Approx(2.0 * std::pow(0.5, 20)).epsilon(1e-12));
    CHECK_FALSE(one_sided.asymmetry.has_value());

    const auto with_zero = symmetry_test(std::vector<double>{0.0, 1.0, -1.0});
    CHECK(with_zero.n_zero == 1);
    CHECK(with_zero.n == 3);

    // Two-sided binomial tail by direct summation.
    for (std::size_t pos = 0; pos <= 30; ++pos) {
        const std::size_t n = 30;
        const std::size_t k = std::min(pos, n - pos);
        long double tail = 0;
        for (std::size_t j = 0; j <= k; ++j) {
            long double c = 1;
            for (std::size_t m = 0; m < j; ++m) c = c * static_cast<long double>(n - m) / static_cast<long double>(m + 1);
            tail += c;
        }
        const double ref = std::min(1.0, static_cast<double>(2 * tail / std::pow(2.0L, 30)));
        CHECK(sign_test_p_value(pos, n - pos) == doctest::Approx(ref).epsilon(1e-12));
    }
    CHECK_THROWS_AS(symmetry_test(std::vector<double>{}), EmptyResultError);
}

TEST_CASE("neutral synthetic alpha passes the sign test") {
    const auto m = generate_market(neutral_spec(5));
    std::vector<double> pooled;
    for (const auto& s : sentiment_all(m.panel, VolatilityConfig::rolling(20))) {
        pooled.insert(pooled.end(), s.alpha.begin(), s.alpha.end());
    }
    CHECK(symmetry_test(pooled).p_value > 0.01);
}

TEST_CASE("conditional pdf on the diagonal peaks at the target") {
    std::vector<ScatterPoint> pts;
    for (int k = -500; k <= 500; ++k) {
        const double v = 0.0001 * k;
        pts.push_back({Date{}, "A", v, v});
    }
    for (double xt : {-0.04, -0.013, 0.0, 0.0217, 0.049}) {
        const auto pdf = conditional_pdf(pts, xt, 0.002);
        CHECK(pdf.histogram.edges[pdf.peak_bin] <= xt);
        CHECK(xt <= pdf.histogram.edges[pdf.peak_bin + 1]);
        CHECK(pdf.peak_offset_bins() == 0);
        CHECK(pdf.n == pdf.histogram.sample_size());
        CHECK_FALSE(pdf.sample_too_small);

        const auto fixed = conditional_pdf(pts, xt, 0.002, 5);
        CHECK(fixed.histogram.bins() == 5);
        CHECK(fixed.histogram.sample_size() == pdf.n);
    }
    CHECK_THROWS_AS(conditional_pdf(pts, 1.0, 0.01), EmptySlabError);
    CHECK(conditional_pdf(pts, 0.0, 0.0005).sample_too_small);
}

TEST_CASE("conditional pdf only uses points in the slab and ignores order") {
    const auto m = generate_market(neutral_spec(8));
    auto pts = yardstick_points(m.panel, VolatilityConfig::rolling(20));
    const double tol = default_tolerance(pts);
    const auto targets = default_x_targets(pts);
    REQUIRE(targets.size() == 5);
    CHECK(std::is_sorted(targets.begin(), targets.end()));

    std::vector<ConditionalPdf> base;
    for (double xt : targets) base.push_back(conditional_pdf(pts, xt, tol));
    for (std::size_t k = 0; k < targets.size(); ++k) {
        const auto in_slab = std::count_if(pts.begin(), pts.end(),
                                           [&](const ScatterPoint& p) { return std::abs(p.x - targets[k]) <= tol; });
        CHECK(base[k].n == static_cast<std::size_t>(in_slab));
    }
    std::mt19937_64 gen(1);
    std::shuffle(pts.begin(), pts.end(), gen);
    for (std::size_t k = 0; k < targets.size(); ++k) {
        const auto again = conditional_pdf(pts, targets[k], tol);
        CHECK(again.histogram.edges == base[k].histogram.edges);
        CHECK(again.histogram.counts == base[k].histogram.counts);
        CHECK(again.peak == base[k].peak);
    }
}

TEST_CASE("conditional pdf peaks near the target on neutral data") {
    std::size_t ok = 0;
    for (std::uint64_t seed = 101; seed <= 120; ++seed) {
        const auto m = generate_market(neutral_spec(seed));
        const auto pts = yardstick_points(m.panel, VolatilityConfig::rolling(20));
        const double tol = default_tolerance(pts);
        bool all = true;
        for (double xt : default_x_targets(pts)) all = all && std::abs(conditional_pdf(pts, xt, tol).peak_offset_bins()) <= 1;
        ok += all ? 1 : 0;
    }
    CHECK(ok >= 19);
}

TEST_CASE("writers and JSON") {
    const auto h = sentiment_histogram(std::vector<double>{-1.0, 1.0}, 2);
    std::ostringstream out;
    write_histogram_csv(out, h);
    CHECK(out.str() == "bin_left,bin_right,count,density\n-1,0,1,0.5\n0,1,1,0.5\n");

    const auto j = to_json(fit_laplace(std::vector<double>{-1.0, 1.0}, 1));
    CHECK(j["asymmetry"] == 0.0);
    CHECK(j["scale_pooled"] == 1.0);
    const auto s = to_json(symmetry_test(std::vector<double>{-2.0, -1.0, 1.0, 2.0}));
    CHECK(s["p_value"] == 1.0);
}
