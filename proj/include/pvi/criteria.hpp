#pragma once

// Pointwise interface stability checks: magnetic non-collinearity, the
// sharp stability functional for the tangential-field configuration, the
// joint field lower bound, and the informational Taylor-type indicator.

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "pvi/state.hpp"

namespace pvi {

inline double cross_norm(const vec<3>& H, const vec<3>& h) {
  return H.cross(h).norm();
}

// H2 h3 - H3 h2: the tangential cross product seen by the front.
inline double tangential_cross(const vec<3>& H, const vec<3>& h) {
  return H(1) * h(2) - H(2) * h(1);
}

struct rt_assessment {
  double value = 0.0;
  double zeta = 0.0;
  bool stable = false;
};

// value = |zeta| |(H2,H3,h2,h3)| |N| / (|H2 h3 - H3 h2| (1 - eps|v|)),
// zeta = e1 + eps v2 h3 - eps v3 h2; stable when value < 1/2.
inline rt_assessment rt_stability(const vec<3>& v, const vec<3>& H,
                                  const vec<3>& h, double e1, const vec<3>& N,
                                  double eps) {
  rt_assessment out;
  out.zeta = e1 + eps * (v(1) * h(2) - v(2) * h(1));
  const double tang =
      std::sqrt(H(1) * H(1) + H(2) * H(2) + h(1) * h(1) + h(2) * h(2));
  const double denom =
      std::abs(tangential_cross(H, h)) * (1.0 - eps * v.norm());
  if (denom <= 0.0) {
    out.value = std::numeric_limits<double>::infinity();
    out.stable = false;
    return out;
  }
  out.value = std::abs(out.zeta) * tang * N.norm() / denom;
  out.stable = out.value < 0.5;
  return out;
}

// |H| + |h| >= delta0: rules out simultaneous degeneracy of both fields.
template <int D>
bool joint_field_bound(const vec<D>& H, const vec<D>& h, double delta0) {
  return H.norm() + h.norm() >= delta0;
}

// Negative normal derivative of the effective pressure difference across
// the front; positive values indicate the classical well-posed sign.
// Informational only.
inline double taylor_indicator(double dn_q_minus_half_h2) {
  return -dn_q_minus_half_h2;
}

}  // namespace pvi
