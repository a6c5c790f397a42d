#pragma once

#include <cmath>
#include <stdexcept>

namespace tailflow {

/// ln Gamma(a) for a > 0, via the Lanczos approximation with Godfrey's
/// g = 607/128, 15-term coefficient set. Relative error is near machine
/// precision over the library's working range (checked against the
/// platform lgamma to <= 1e-10 on [0.5, 1000] in the test suite).
inline double log_gamma(double a) {
  if (!(a > 0.0)) throw std::domain_error("log_gamma: argument must be > 0");

  static constexpr double kG = 607.0 / 128.0;
  static constexpr double kCoef[15] = {
      0.99999999999999709182,     57.156235665862923517,
      -59.597960355475491248,     14.136097974741747174,
      -0.49191381609762019978,    0.33994649984811888699e-4,
      0.46523628927048575665e-4,  -0.98374475304879564677e-4,
      0.15808870322491248884e-3,  -0.21026444172410488319e-3,
      0.21743961811521264320e-3,  -0.16431810653676389022e-3,
      0.84418223983852743293e-4,  -0.26190838401581408670e-4,
      0.36899182659531622704e-5};
  static const double kHalfLogTwoPi = 0.5 * std::log(2.0 * 3.141592653589793238462643383279502884);

  const double z = a - 1.0;
  double series = kCoef[0];
  for (int k = 1; k < 15; ++k) series += kCoef[k] / (z + k);
  const double t = z + kG + 0.5;
  return kHalfLogTwoPi + (z + 0.5) * std::log(t) - t + std::log(series);
}

}  // namespace tailflow
