#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace yardstick {

/// Shortest decimal string that parses back to exactly `value`.
std::string format_shortest(double value);

/// Locale-independent strict decimal parse; the whole field must be consumed.
/// Returns false on failure.
bool parse_decimal(std::string_view text, double& out);

double mean(std::span<const double> xs);

/// Population standard deviation sqrt(E[X^2] - E[X]^2), evaluated as a
/// two-pass sum of squared deviations.
double population_std(std::span<const double> xs);

double population_covariance(std::span<const double> xs, std::span<const double> ys);

/// Linear-interpolation quantile (Hyndman-Fan type 7) of an ascending sample.
double quantile_sorted(std::span<const double> sorted, double p);

/// Sum whose result does not depend on the order of `terms`: the terms are
/// sorted before a compensated summation.
double order_independent_sum(std::vector<double> terms);

}  // namespace yardstick
