#pragma once

#include <stdexcept>

#include "tailflow/types.hpp"

namespace tailflow {

enum class ClipKind { None, Norm, Element, Both };

struct ClipMode {
  ClipKind kind = ClipKind::None;
  double norm_threshold = 100.0;
  double element_threshold = 100.0;

  static ClipMode none() { return {ClipKind::None, 0, 0}; }
  static ClipMode norm(double t) {
    check(t);
    return {ClipKind::Norm, t, 0};
  }
  static ClipMode element(double t) {
    check(t);
    return {ClipKind::Element, 0, t};
  }
  static ClipMode both(double norm_t, double elem_t) {
    check(norm_t);
    check(elem_t);
    return {ClipKind::Both, norm_t, elem_t};
  }

 private:
  static void check(double t) {
    if (!(t > 0)) throw std::invalid_argument("clip threshold must be > 0");
  }
};

/// In-place clipping. Element clamps componentwise to [-t, t]; Norm rescales
/// the whole vector when its l2 norm exceeds the threshold; Both applies the
/// element clamp first, then the norm rescale.
inline void clip_gradients_inplace(Vec& g, const ClipMode& mode) {
  if (mode.kind == ClipKind::Element || mode.kind == ClipKind::Both)
    g = g.array().min(mode.element_threshold).max(-mode.element_threshold);
  if (mode.kind == ClipKind::Norm || mode.kind == ClipKind::Both) {
    const double n = g.norm();
    if (n > mode.norm_threshold) g *= mode.norm_threshold / n;
  }
}

inline Vec clip_gradients(Vec g, const ClipMode& mode) {
  clip_gradients_inplace(g, mode);
  return g;
}

}  // namespace tailflow
