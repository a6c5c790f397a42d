#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tailflow {

enum class SchedKind { Constant, Cosine, Noam };

/// Learning-rate schedule.
///
/// Constant: lr(step) = lr.
/// Cosine:   lr(step) = lr_end + (lr_start - lr_end)/2 * (1 + cos(pi step/T))
///           for step in [0, T]; lr_end beyond T.
/// Noam:     lr(step) = max(floor,
///               peak * sqrt(warmup) * min(step^-1/2, step * warmup^-3/2)),
///           which warms up linearly to `peak` at step == warmup and decays
///           as step^-1/2 after; lr(0) = floor.
struct LrSchedule {
  SchedKind kind = SchedKind::Constant;
  double lr = 1e-3;                       // Constant
  double lr_start = 4e-4, lr_end = 1e-4;  // Cosine
  long total_steps = 1;                   // Cosine
  double peak = 1e-3, floor = 1e-4;       // Noam
  long warmup = 4000;                     // Noam

  static LrSchedule constant(double lr) {
    if (!(lr > 0)) throw std::invalid_argument("schedule: lr must be > 0");
    LrSchedule s;
    s.kind = SchedKind::Constant;
    s.lr = lr;
    return s;
  }
  static LrSchedule cosine(double lr_start, double lr_end, long total_steps) {
    if (!(lr_start > 0) || !(lr_end > 0) || total_steps < 1)
      throw std::invalid_argument("schedule: bad cosine parameters");
    LrSchedule s;
    s.kind = SchedKind::Cosine;
    s.lr_start = lr_start;
    s.lr_end = lr_end;
    s.total_steps = total_steps;
    return s;
  }
  static LrSchedule noam(double peak, double floor, long warmup) {
    if (!(peak > 0) || !(floor > 0) || warmup < 1)
      throw std::invalid_argument("schedule: bad noam parameters");
    LrSchedule s;
    s.kind = SchedKind::Noam;
    s.peak = peak;
    s.floor = floor;
    s.warmup = warmup;
    return s;
  }
};

inline double lr_at(const LrSchedule& s, long step) {
  if (step < 0) throw std::invalid_argument("lr_at: step must be >= 0");
  switch (s.kind) {
    case SchedKind::Constant:
      return s.lr;
    case SchedKind::Cosine: {
      if (step >= s.total_steps) return s.lr_end;
      const double frac = static_cast<double>(step) / s.total_steps;
      return s.lr_end +
             0.5 * (s.lr_start - s.lr_end) * (1.0 + std::cos(M_PI * frac));
    }
    case SchedKind::Noam: {
      if (step == 0) return s.floor;
      const double st = static_cast<double>(step);
      const double w = static_cast<double>(s.warmup);
      const double factor =
          std::min(1.0 / std::sqrt(st), st / (w * std::sqrt(w)));
      return std::max(s.floor, s.peak * std::sqrt(w) * factor);
    }
  }
  return s.lr;
}

}  // namespace tailflow
