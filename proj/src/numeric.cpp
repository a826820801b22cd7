#include "yardstick/numeric.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace yardstick {

std::string format_shortest(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) throw std::runtime_error("format_shortest: to_chars failed");
    return std::string(buf, ptr);
}

bool parse_decimal(std::string_view text, double& out) {
    if (text.empty()) return false;
    if (text.front() == '+') text.remove_prefix(1);
    const char* first = text.data();
    const char* last = first + text.size();
    auto [ptr, ec] = std::from_chars(first, last, out, std::chars_format::general);
    return ec == std::errc{} && ptr == last;
}

double mean(std::span<const double> xs) {
    if (xs.empty()) return std::nan("");
    double sum = 0.0;
    for (double x : xs) sum += x;
    return sum / static_cast<double>(xs.size());
}

double population_std(std::span<const double> xs) {
    if (xs.empty()) return std::nan("");
    if (std::adjacent_find(xs.begin(), xs.end(), std::not_equal_to<>()) == xs.end()) return 0.0;
    const double m = mean(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(xs.size()));
}

double population_covariance(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("population_covariance: size mismatch");
    if (xs.empty()) return std::nan("");
    const double mx = mean(xs);
    const double my = mean(ys);
    double acc = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) acc += (xs[k] - mx) * (ys[k] - my);
    return acc / static_cast<double>(xs.size());
}

double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) return std::nan("");
    p = std::clamp(p, 0.0, 1.0);
    const double h = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double order_independent_sum(std::vector<double> terms) {
    std::sort(terms.begin(), terms.end());
    // Neumaier compensated summation.
    double sum = 0.0;
    double comp = 0.0;
    for (double t : terms) {
        const double next = sum + t;
        if (std::abs(sum) >= std::abs(t)) {
            comp += (sum - next) + t;
        } else {
            comp += (t - next) + sum;
        }
        sum = next;
    }
    return sum + comp;
}

}  // namespace yardstick
