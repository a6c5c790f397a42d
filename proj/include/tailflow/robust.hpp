#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tailflow/base_dist.hpp"
#include "tailflow/special.hpp"

namespace tailflow {

/// Scale multiplier that standardizes the unit-scale family to variance 1:
/// Student-t uses sqrt((nu-2)/nu) (defined for nu > 2), Laplace 1/sqrt(2),
/// Gaussian is already standard.
inline double standardized_scale(BaseKind kind, double nu) {
  switch (kind) {
    case BaseKind::Gaussian:
      return 1.0;
    case BaseKind::StudentT:
      if (!(nu > 2.0))
        throw std::domain_error(
            "standardized_scale: Student-t variance undefined for nu <= 2");
      return std::sqrt((nu - 2.0) / nu);
    case BaseKind::Laplace:
      return 1.0 / std::sqrt(2.0);
  }
  return 1.0;
}

/// 1-D density of the (optionally variance-standardized) family.
inline double density_1d(BaseKind kind, double nu, double eps,
                         bool standardized = false) {
  const double s = standardized ? standardized_scale(kind, nu) : 1.0;
  const double y = eps / s;
  double lp = 0.0;
  switch (kind) {
    case BaseKind::Gaussian:
      lp = -0.5 * detail::kLogTwoPi - 0.5 * y * y;
      break;
    case BaseKind::StudentT:
      lp = detail::student_t_log_const(nu, 1) -
           0.5 * (nu + 1.0) * std::log1p(y * y / nu);
      break;
    case BaseKind::Laplace:
      lp = -detail::kLogTwo - std::abs(y);
      break;
  }
  return std::exp(lp) / s;
}

/// Penalty rho(eps) = -ln p(eps) + ln p(0); exactly 0 at eps = 0.
inline double penalty(BaseKind kind, double nu, double eps,
                      bool standardized = false) {
  const double s = standardized ? standardized_scale(kind, nu) : 1.0;
  const double y = eps / s;
  switch (kind) {
    case BaseKind::Gaussian:
      return 0.5 * y * y;
    case BaseKind::StudentT:
      if (!(nu > 0.0)) throw std::domain_error("penalty: nu must be > 0");
      return 0.5 * (nu + 1.0) * std::log1p(y * y / nu);
    case BaseKind::Laplace:
      return std::abs(y);
  }
  return 0.0;
}

/// Influence psi(eps) = d rho / d eps. Linear for the Gaussian, a step for
/// the Laplace (0 at the origin by convention), and redescending for the
/// Student-t: psi(eps) = (nu+1) eps / (nu + eps^2) at unit scale.
inline double influence(BaseKind kind, double nu, double eps,
                        bool standardized = false) {
  const double s = standardized ? standardized_scale(kind, nu) : 1.0;
  const double y = eps / s;
  switch (kind) {
    case BaseKind::Gaussian:
      return y / s;
    case BaseKind::StudentT:
      if (!(nu > 0.0)) throw std::domain_error("influence: nu must be > 0");
      return (nu + 1.0) * y / (nu + y * y) / s;
    case BaseKind::Laplace:
      return (y > 0.0 ? 1.0 : (y < 0.0 ? -1.0 : 0.0)) / s;
  }
  return 0.0;
}

/// sup |psi| over the unit-scale family; empty optional marks an unbounded
/// influence (the Gaussian). The Student-t bound (nu+1)/(2 sqrt(nu)) is
/// attained at eps = sqrt(nu).
inline std::optional<double> influence_bound(BaseKind kind, double nu = 0.0) {
  switch (kind) {
    case BaseKind::Gaussian:
      return std::nullopt;
    case BaseKind::StudentT:
      if (!(nu > 0.0))
        throw std::domain_error("influence_bound: nu must be > 0");
      return (nu + 1.0) / (2.0 * std::sqrt(nu));
    case BaseKind::Laplace:
      return 1.0;
  }
  return std::nullopt;
}

/// Density/penalty/influence of one family tabulated on a symmetric grid.
struct PenaltyCurve {
  BaseKind kind;
  double nu = 0.0;
  bool standardized = false;
  std::vector<double> grid;
  std::vector<double> density;
  std::vector<double> rho;
  std::vector<double> psi;
};

struct CurveGridSpec {
  double half_range = 30.0;  // grid spans [-half_range, half_range]
  int points = 12001;        // odd keeps 0 on the grid
};

inline PenaltyCurve tabulate_curve(BaseKind kind, double nu,
                                   const CurveGridSpec& spec,
                                   bool standardized) {
  if (spec.points < 3 || !(spec.half_range > 0.0))
    throw std::invalid_argument("tabulate_curve: bad grid spec");
  PenaltyCurve c;
  c.kind = kind;
  c.nu = nu;
  c.standardized = standardized;
  c.grid.resize(spec.points);
  c.density.resize(spec.points);
  c.rho.resize(spec.points);
  c.psi.resize(spec.points);
  const double h = 2.0 * spec.half_range / (spec.points - 1);
  for (int i = 0; i < spec.points; ++i) {
    // evaluate the midpoint index exactly at 0 so rho(0) == 0 holds exactly
    const double e = (i == (spec.points - 1) / 2 && spec.points % 2 == 1)
                         ? 0.0
                         : -spec.half_range + h * i;
    c.grid[i] = e;
    c.density[i] = density_1d(kind, nu, e, standardized);
    c.rho[i] = penalty(kind, nu, e, standardized);
    c.psi[i] = influence(kind, nu, e, standardized);
  }
  return c;
}

}  // namespace tailflow
