#ifndef FFF_TARGETS_HPP
#define FFF_TARGETS_HPP

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Core>

namespace fff {

/// Differentiable potential U (negative log density up to a constant) with
/// analytic gradient. value_and_gradient computes both in one pass and is the
/// call that gradient accounting counts; potential alone is a value-only
/// evaluation. Immutable after construction, safe for concurrent reads.
struct Target {
  int dim = 0;
  std::string name;
  std::function<double(const Eigen::VectorXd&)> potential;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
  std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>
      value_and_gradient;
};

/// Fills in value_and_gradient from the two separate evaluators if unset.
inline Target make_target(
    int dim, std::string name,
    std::function<double(const Eigen::VectorXd&)> potential,
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient,
    std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)> both = {}) {
  Target t;
  t.dim = dim;
  t.name = std::move(name);
  t.potential = std::move(potential);
  t.gradient = std::move(gradient);
  if (both) {
    t.value_and_gradient = std::move(both);
  } else {
    t.value_and_gradient = [pot = t.potential, grad = t.gradient](
                               const Eigen::VectorXd& q, Eigen::VectorXd& g) {
      g = grad(q);
      return pot(q);
    };
  }
  return t;
}

/// Isotropic Gaussian: U(q) = ||q||^2 / 2, grad U = q.
inline Target gaussian_target(int d) {
  if (d < 1) throw std::invalid_argument("gaussian_target: dim must be >= 1");
  return make_target(
      d, "gaussian",
      [](const Eigen::VectorXd& q) { return 0.5 * q.squaredNorm(); },
      [](const Eigen::VectorXd& q) { return q; },
      [](const Eigen::VectorXd& q, Eigen::VectorXd& g) {
        g = q;
        return 0.5 * q.squaredNorm();
      });
}

/// Rosenbrock banana: U(q1, q2) = (100 (q2 - q1^2)^2 + (q1 - 1)^2) / 10.
inline Target banana_target() {
  auto value = [](const Eigen::VectorXd& q) {
    const double a = q[1] - q[0] * q[0];
    const double b = q[0] - 1.0;
    return (100.0 * a * a + b * b) / 10.0;
  };
  auto grad = [](const Eigen::VectorXd& q) {
    const double a = q[1] - q[0] * q[0];
    Eigen::VectorXd g(2);
    g[0] = (-400.0 * q[0] * a + 2.0 * (q[0] - 1.0)) / 10.0;
    g[1] = 20.0 * a;
    return g;
  };
  return make_target(2, "banana", value, grad,
                     [value, grad](const Eigen::VectorXd& q,
                                   Eigen::VectorXd& g) {
                       g = grad(q);
                       return value(q);
                     });
}

/// Design matrix (standardized covariates behind a leading intercept column),
/// 0/1 labels, and the Gaussian prior variance of the regression weights.
struct LogisticData {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  double prior_variance = 100.0;
};

struct DataFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Reads the numeric German-credit layout: 1000 whitespace-separated rows of
/// 24 integer covariates plus a {1,2} label. Labels map 1->0, 2->1; covariate
/// columns are standardized (population sd); an unstandardized intercept
/// column of ones is prepended, so the result has 25 columns.
inline LogisticData load_german_credit(const std::string& path) {
  constexpr int kRows = 1000;
  constexpr int kCovariates = 24;

  std::ifstream in(path);
  if (!in) throw DataFormatError("cannot open data file: " + path);

  Eigen::MatrixXd raw(kRows, kCovariates);
  Eigen::VectorXd y(kRows);
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    if (row >= kRows)
      throw DataFormatError("expected " + std::to_string(kRows) +
                            " rows, found more (row " + std::to_string(row) +
                            ")");
    std::istringstream ss(line);
    for (int j = 0; j < kCovariates; ++j) {
      if (!(ss >> raw(row, j)))
        throw DataFormatError("row " + std::to_string(row) +
                              ": expected 25 values, column " +
                              std::to_string(j) + " missing");
    }
    double label;
    if (!(ss >> label))
      throw DataFormatError("row " + std::to_string(row) + ": label missing");
    double extra;
    if (ss >> extra)
      throw DataFormatError("row " + std::to_string(row) +
                            ": more than 25 values");
    if (label != 1.0 && label != 2.0)
      throw DataFormatError("row " + std::to_string(row) +
                            ": label must be 1 or 2, got " +
                            std::to_string(label));
    y[row] = label - 1.0;
    ++row;
  }
  if (row != kRows)
    throw DataFormatError("expected " + std::to_string(kRows) +
                          " rows, found " + std::to_string(row));

  LogisticData data;
  data.X.resize(kRows, kCovariates + 1);
  data.X.col(0).setOnes();
  for (int j = 0; j < kCovariates; ++j) {
    const double mean = raw.col(j).mean();
    const double sd =
        std::sqrt((raw.col(j).array() - mean).square().sum() / kRows);
    if (sd <= 0.0)
      throw DataFormatError("column " + std::to_string(j) +
                            " is constant; cannot standardize");
    data.X.col(j + 1) = (raw.col(j).array() - mean) / sd;
  }
  data.y = y;
  return data;
}

inline double log1p_exp(double z) {
  // log(1 + e^z) = max(z, 0) + log1p(e^{-|z|})
  return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

inline double logistic_sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

/// Bayesian logistic regression posterior potential
///   U(b) = -sum_i [ y_i <X_i, b> - log(1 + e^{<X_i, b>}) ] + ||b||^2/(2 s^2)
/// with grad U(b) = -X^T (y - sigmoid(X b)) + b / s^2.
inline Target logistic_target(LogisticData data) {
  const int d = static_cast<int>(data.X.cols());
  auto shared = std::make_shared<LogisticData>(std::move(data));

  auto check_dim = [shared, d](const Eigen::VectorXd& beta) {
    if (beta.size() != d)
      throw std::invalid_argument(
          "logistic_target: beta has dimension " +
          std::to_string(beta.size()) + ", data has " + std::to_string(d));
  };
  auto value = [shared, check_dim](const Eigen::VectorXd& beta) {
    check_dim(beta);
    const Eigen::VectorXd z = shared->X * beta;
    double u = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i)
      u -= shared->y[i] * z[i] - log1p_exp(z[i]);
    return u + 0.5 * beta.squaredNorm() / shared->prior_variance;
  };
  auto both = [shared, check_dim](const Eigen::VectorXd& beta,
                                  Eigen::VectorXd& g) {
    check_dim(beta);
    const Eigen::VectorXd z = shared->X * beta;
    Eigen::VectorXd resid(z.size());
    double u = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      u -= shared->y[i] * z[i] - log1p_exp(z[i]);
      resid[i] = shared->y[i] - logistic_sigmoid(z[i]);
    }
    g = -(shared->X.transpose() * resid) + beta / shared->prior_variance;
    return u + 0.5 * beta.squaredNorm() / shared->prior_variance;
  };
  auto grad = [both](const Eigen::VectorXd& beta) {
    Eigen::VectorXd g;
    both(beta, g);
    return g;
  };
  return make_target(d, "logistic", value, grad, both);
}

}  // namespace fff

#endif  // FFF_TARGETS_HPP
