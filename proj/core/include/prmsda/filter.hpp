/**
 * @file filter.hpp
 * @brief Ensemble Kalman filter algebra on an [state_dim x N] member matrix.
 *
 * The gain is formed in observation space: only the s x o cross covariance
 * and the o x o innovation covariance are built, never the s x s covariance.
 */
#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "prmsda/rng.hpp"

namespace prmsda {

/// Observations of individual slots (rows of H are unit selectors).
struct ObservationSet {
  std::vector<std::size_t> slots;
  std::vector<double> values;
  std::vector<double> sigmas;  ///< standard deviations, must be > 0

  std::size_t size() const { return slots.size(); }
  void add(std::size_t slot, double value, double sigma) {
    slots.push_back(slot);
    values.push_back(value);
    sigmas.push_back(sigma);
  }
};

/// Weight applied to the covariance between slot `i` and observed slot `j`.
using Localization = std::function<double(std::size_t i, std::size_t j)>;

struct AnalysisOptions {
  Localization localization;      ///< empty: no localization
  double regularization = 1e-10;  ///< diagonal jitter added when the innovation matrix is not positive definite
};

struct AnalysisReport {
  bool regularized = false;
  Eigen::MatrixXd gain;  ///< s x o Kalman gain actually applied
};

/// Row means computed as x0 + mean(x - x0) so identical members give exact zero anomalies.
Eigen::VectorXd ensemble_mean(const Eigen::MatrixXd& x);
Eigen::MatrixXd anomalies(const Eigen::MatrixXd& x);
/// Sample standard deviation (N - 1) of one row.
double row_std(const Eigen::MatrixXd& x, Eigen::Index row);

/**
 * Perturbed-observation EnKF update in place:
 * x_a = x_f + K (y + chi - H x_f), chi ~ N(0, R), K = C H^T (H C H^T + R)^-1.
 * Throws std::invalid_argument on empty observations, bad sigmas or N < 2.
 */
AnalysisReport enkf_analysis(Eigen::MatrixXd& x, const ObservationSet& obs, Rng& rng,
                             const AnalysisOptions& opts = {});

/// x'_infl = (1 - alpha) x'_a + alpha x'_f around the analysis mean.
Eigen::MatrixXd inflate(const Eigen::MatrixXd& analysis, const Eigen::MatrixXd& forecast, double alpha);

/**
 * Rescales the anomalies of `row` to exactly `target` standard deviation
 * about the current mean when the spread is below `target`. A collapsed row
 * is redrawn from `rng` and standardized. Returns true if the row changed.
 */
bool reinflate_row(Eigen::MatrixXd& x, Eigen::Index row, double target, Rng& rng);

}  // namespace prmsda
