#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "tailflow/rng.hpp"
#include "tailflow/special.hpp"
#include "tailflow/types.hpp"

namespace tailflow {

enum class BaseKind { Gaussian, StudentT, Laplace };

inline const char* to_string(BaseKind k) {
  switch (k) {
    case BaseKind::Gaussian: return "gaussian";
    case BaseKind::StudentT: return "student_t";
    case BaseKind::Laplace: return "laplace";
  }
  return "?";
}

/// Latent (base) distribution of a flow. Location is fixed at 0 and scale at
/// the identity; flow layers absorb location/scale. The Laplace case is a
/// product of independent unit-scale Laplace components. The Student-t case
/// is the multivariate t with Sigma = I, whose log-density couples all
/// dimensions through ||x||^2:
///
///   ln p(x) = lnG((nu+D)/2) - lnG(nu/2) - (D/2) ln(pi nu)
///             - ((nu+D)/2) ln(1 + ||x||^2 / nu)
struct BaseDistribution {
  BaseKind kind = BaseKind::Gaussian;
  int dim = 1;
  double nu = 0.0;  // degrees of freedom; meaningful for StudentT only

  static BaseDistribution gaussian(int d) {
    check_dim(d);
    return {BaseKind::Gaussian, d, 0.0};
  }
  static BaseDistribution student_t(int d, double nu) {
    check_dim(d);
    if (!(nu > 0.0)) throw std::domain_error("student_t: nu must be > 0");
    return {BaseKind::StudentT, d, nu};
  }
  static BaseDistribution laplace(int d) {
    check_dim(d);
    return {BaseKind::Laplace, d, 0.0};
  }

 private:
  static void check_dim(int d) {
    if (d < 1) throw std::domain_error("base distribution: dim must be >= 1");
  }
};

namespace detail {

inline void check_len(const BaseDistribution& dist, Eigen::Index n,
                      const char* op) {
  if (n != dist.dim)
    throw std::invalid_argument(std::string(op) + ": x has length " +
                                std::to_string(n) + ", expected " +
                                std::to_string(dist.dim));
}

/// Additive constant of the Student-t log-density for given (nu, D).
inline double student_t_log_const(double nu, int d) {
  return log_gamma(0.5 * (nu + d)) - log_gamma(0.5 * nu) -
         0.5 * d * std::log(3.141592653589793238462643383279502884 * nu);
}

constexpr double kLogTwoPi = 1.8378770664093454835606594728112353;
constexpr double kLogTwo = 0.6931471805599453094172321214581766;

}  // namespace detail

inline double log_prob(const BaseDistribution& dist, ConstVecRef x) {
  detail::check_len(dist, x.size(), "log_prob");
  switch (dist.kind) {
    case BaseKind::Gaussian:
      return -0.5 * dist.dim * detail::kLogTwoPi - 0.5 * x.squaredNorm();
    case BaseKind::StudentT:
      return detail::student_t_log_const(dist.nu, dist.dim) -
             0.5 * (dist.nu + dist.dim) * std::log1p(x.squaredNorm() / dist.nu);
    case BaseKind::Laplace:
      return -dist.dim * detail::kLogTwo - x.lpNorm<1>();
  }
  return 0.0;
}

/// Per-row log-density of a batch. One evaluation of the Student-t constant
/// is shared across the whole batch.
inline Vec log_prob_rows(const BaseDistribution& dist, ConstMatRef X) {
  detail::check_len(dist, X.cols(), "log_prob_rows");
  const Eigen::Index n = X.rows();
  Vec out(n);
  switch (dist.kind) {
    case BaseKind::Gaussian: {
      out = -0.5 * X.rowwise().squaredNorm().array() -
            0.5 * dist.dim * detail::kLogTwoPi;
      break;
    }
    case BaseKind::StudentT: {
      const double c = detail::student_t_log_const(dist.nu, dist.dim);
      const double half = 0.5 * (dist.nu + dist.dim);
      for (Eigen::Index i = 0; i < n; ++i)
        out[i] = c - half * std::log1p(X.row(i).squaredNorm() / dist.nu);
      break;
    }
    case BaseKind::Laplace: {
      out = -X.array().abs().rowwise().sum() - dist.dim * detail::kLogTwo;
      break;
    }
  }
  return out;
}

/// Gradient of log_prob with respect to x. The Laplace case returns the
/// subgradient 0 for components that are exactly zero.
inline Vec grad_log_prob(const BaseDistribution& dist, ConstVecRef x) {
  detail::check_len(dist, x.size(), "grad_log_prob");
  switch (dist.kind) {
    case BaseKind::Gaussian:
      return -x;
    case BaseKind::StudentT:
      return (-(dist.nu + dist.dim) / (dist.nu + x.squaredNorm())) * x;
    case BaseKind::Laplace: {
      Vec g(x.size());
      for (Eigen::Index i = 0; i < x.size(); ++i)
        g[i] = x[i] > 0.0 ? -1.0 : (x[i] < 0.0 ? 1.0 : 0.0);
      return g;
    }
  }
  return Vec();
}

/// Row-wise gradients for a batch, written into `out` (resized to X's shape).
inline void grad_log_prob_rows(const BaseDistribution& dist, ConstMatRef X,
                               Mat& out) {
  detail::check_len(dist, X.cols(), "grad_log_prob_rows");
  out.resize(X.rows(), X.cols());
  switch (dist.kind) {
    case BaseKind::Gaussian:
      out = -X;
      break;
    case BaseKind::StudentT:
      for (Eigen::Index i = 0; i < X.rows(); ++i)
        out.row(i) = (-(dist.nu + dist.dim) /
                      (dist.nu + X.row(i).squaredNorm())) *
                     X.row(i);
      break;
    case BaseKind::Laplace:
      for (Eigen::Index i = 0; i < X.rows(); ++i)
        for (Eigen::Index j = 0; j < X.cols(); ++j) {
          const double v = X(i, j);
          out(i, j) = v > 0.0 ? -1.0 : (v < 0.0 ? 1.0 : 0.0);
        }
      break;
  }
}

/// n i.i.d. chi-square(nu) draws.
inline Vec sample_chi_square(double nu, int n, RngState& rng) {
  if (!(nu > 0.0)) throw std::domain_error("sample_chi_square: nu must be > 0");
  Vec w(n);
  for (int i = 0; i < n; ++i) w[i] = rng.chi_square(nu);
  return w;
}

/// n samples from the base distribution, one per row. Student-t rows share a
/// single chi-square draw across all D components: x = z / sqrt(w / nu),
/// z ~ N(0, I), w ~ chi^2_nu.
inline Mat sample(const BaseDistribution& dist, int n, RngState& rng) {
  if (n < 1) throw std::invalid_argument("sample: n must be >= 1");
  Mat X(n, dist.dim);
  switch (dist.kind) {
    case BaseKind::Gaussian:
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < dist.dim; ++j) X(i, j) = rng.normal();
      break;
    case BaseKind::StudentT:
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < dist.dim; ++j) X(i, j) = rng.normal();
        const double w = rng.chi_square(dist.nu);
        X.row(i) /= std::sqrt(w / dist.nu);
      }
      break;
    case BaseKind::Laplace:
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < dist.dim; ++j) X(i, j) = rng.laplace();
      break;
  }
  return X;
}

}  // namespace tailflow
