#include "prmsda/filter.hpp"

#include <cmath>
#include <stdexcept>

namespace prmsda {

Eigen::VectorXd ensemble_mean(const Eigen::MatrixXd& x) {
  if (x.cols() == 0) return Eigen::VectorXd::Zero(x.rows());
  const Eigen::VectorXd x0 = x.col(0);
  return x0 + (x.colwise() - x0).rowwise().sum() / static_cast<double>(x.cols());
}

Eigen::MatrixXd anomalies(const Eigen::MatrixXd& x) { return x.colwise() - ensemble_mean(x); }

double row_std(const Eigen::MatrixXd& x, Eigen::Index row) {
  const Eigen::Index n = x.cols();
  if (n < 2) return 0.0;
  const double x0 = x(row, 0);
  const double m = x0 + (x.row(row).array() - x0).sum() / static_cast<double>(n);
  return std::sqrt((x.row(row).array() - m).square().sum() / static_cast<double>(n - 1));
}

AnalysisReport enkf_analysis(Eigen::MatrixXd& x, const ObservationSet& obs, Rng& rng, const AnalysisOptions& opts) {
  const Eigen::Index s = x.rows();
  const Eigen::Index n = x.cols();
  const Eigen::Index o = static_cast<Eigen::Index>(obs.size());
  if (o == 0) throw std::invalid_argument("analysis needs at least one observation");
  if (n < 2) throw std::invalid_argument("analysis needs at least two members");
  if (obs.values.size() != obs.slots.size() || obs.sigmas.size() != obs.slots.size()) {
    throw std::invalid_argument("observation arrays differ in length");
  }

  const Eigen::MatrixXd a = anomalies(x);
  Eigen::MatrixXd hx(o, n);
  Eigen::MatrixXd ha(o, n);
  for (Eigen::Index j = 0; j < o; ++j) {
    const auto slot = static_cast<Eigen::Index>(obs.slots[static_cast<std::size_t>(j)]);
    if (slot < 0 || slot >= s) throw std::invalid_argument("observed slot outside the state vector");
    if (!(obs.sigmas[static_cast<std::size_t>(j)] > 0.0)) throw std::invalid_argument("observation sigma must be > 0");
    hx.row(j) = x.row(slot);
    ha.row(j) = a.row(slot);
  }
  const double scale = 1.0 / static_cast<double>(n - 1);
  Eigen::MatrixXd cxh = a * ha.transpose() * scale;   // s x o
  Eigen::MatrixXd chh = ha * ha.transpose() * scale;  // o x o
  if (opts.localization) {
    for (Eigen::Index j = 0; j < o; ++j) {
      const std::size_t sj = obs.slots[static_cast<std::size_t>(j)];
      for (Eigen::Index i = 0; i < s; ++i) cxh(i, j) *= opts.localization(static_cast<std::size_t>(i), sj);
      for (Eigen::Index k = 0; k < o; ++k) chh(k, j) *= opts.localization(obs.slots[static_cast<std::size_t>(k)], sj);
    }
  }
  Eigen::MatrixXd innov_cov = chh;
  for (Eigen::Index j = 0; j < o; ++j) {
    const double sd = obs.sigmas[static_cast<std::size_t>(j)];
    innov_cov(j, j) += sd * sd;
  }

  AnalysisReport report;
  Eigen::LLT<Eigen::MatrixXd> llt(innov_cov);
  if (llt.info() != Eigen::Success) {
    report.regularized = true;
    const double jitter = std::max(opts.regularization, opts.regularization * innov_cov.diagonal().cwiseAbs().maxCoeff());
    innov_cov.diagonal().array() += jitter;
    llt.compute(innov_cov);
    if (llt.info() != Eigen::Success) throw std::runtime_error("innovation covariance is not positive definite");
  }

  // Perturbed observations, drawn member by member.
  Eigen::MatrixXd innovation(o, n);
  for (Eigen::Index m = 0; m < n; ++m) {
    for (Eigen::Index j = 0; j < o; ++j) {
      const auto jj = static_cast<std::size_t>(j);
      innovation(j, m) = obs.values[jj] + obs.sigmas[jj] * rng.normal() - hx(j, m);
    }
  }
  report.gain = llt.solve(cxh.transpose()).transpose();  // s x o
  x.noalias() += report.gain * innovation;
  return report;
}

Eigen::MatrixXd inflate(const Eigen::MatrixXd& analysis, const Eigen::MatrixXd& forecast, double alpha) {
  const Eigen::VectorXd mean = ensemble_mean(analysis);
  const Eigen::MatrixXd blended = (1.0 - alpha) * anomalies(analysis) + alpha * anomalies(forecast);
  return blended.colwise() + mean;
}

bool reinflate_row(Eigen::MatrixXd& x, Eigen::Index row, double target, Rng& rng) {
  const Eigen::Index n = x.cols();
  if (n < 2 || !(target > 0.0)) return false;
  const double sd = row_std(x, row);
  if (sd >= target) return false;
  const double x0 = x(row, 0);
  const double mean = x0 + (x.row(row).array() - x0).sum() / static_cast<double>(n);
  Eigen::ArrayXd dev = x.row(row).transpose().array() - mean;
  double dev_sd = sd;
  if (!(sd > 1e-14 * std::max(1.0, std::abs(mean)))) {
    for (Eigen::Index i = 0; i < n; ++i) dev[i] = rng.normal();
    dev -= dev.mean();
    dev_sd = std::sqrt(dev.square().sum() / static_cast<double>(n - 1));
  }
  x.row(row) = (mean + dev * (target / dev_sd)).transpose().matrix();
  return true;
}

}  // namespace prmsda
