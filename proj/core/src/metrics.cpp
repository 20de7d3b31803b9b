#include "prmsda/metrics.hpp"

#include <cmath>
#include <limits>

#include "prmsda/errors.hpp"

namespace prmsda {

namespace {

void check(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ConfigError("series lengths differ (" + std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
  }
  if (a.empty()) throw ConfigError("series are empty");
}

}  // namespace

double rmse(std::span<const double> measured, std::span<const double> simulated) {
  check(measured, simulated);
  double sum = 0.0;
  for (std::size_t i = 0; i < measured.size(); ++i) {
    const double d = measured[i] - simulated[i];
    sum += std::sqrt(d * d);
  }
  return sum / static_cast<double>(measured.size());
}

double rmse_conventional(std::span<const double> measured, std::span<const double> simulated) {
  check(measured, simulated);
  double sum = 0.0;
  for (std::size_t i = 0; i < measured.size(); ++i) {
    const double d = measured[i] - simulated[i];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(measured.size()));
}

std::vector<double> ar1_baseline(std::span<const double> measured, double first_value) {
  if (measured.size() < 2) throw ConfigError("persistence baseline needs at least two values");
  std::vector<double> out(measured.size());
  out[0] = first_value;
  for (std::size_t t = 1; t < measured.size(); ++t) out[t] = measured[t - 1];
  return out;
}

double percent_change(double value, double reference) {
  if (reference == 0.0) {
    if (value == 0.0) return 0.0;
    return value > 0.0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
  }
  return 100.0 * (value - reference) / reference;
}

}  // namespace prmsda
