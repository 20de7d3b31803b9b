/**
 * @file metrics.hpp
 * @brief Error metrics and the persistence (AR(1)) streamflow baseline.
 */
#pragma once

#include <span>
#include <vector>

namespace prmsda {

/// (1/T) * sum sqrt((m - s)^2): the mean absolute error. Headline metric.
double rmse(std::span<const double> measured, std::span<const double> simulated);
/// sqrt((1/T) * sum (m - s)^2).
double rmse_conventional(std::span<const double> measured, std::span<const double> simulated);

/// sim[t] = measured[t-1]; sim[0] = first_value. Needs at least two values.
std::vector<double> ar1_baseline(std::span<const double> measured, double first_value);

/// 100 * (value - reference) / reference; 0 when both are 0.
double percent_change(double value, double reference);

}  // namespace prmsda
