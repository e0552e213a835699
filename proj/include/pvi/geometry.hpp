#pragma once

// Fixed-domain geometry: the compactly supported lift cutoff chi, the
// weight sigma used by the anisotropic derivatives, and the half-space
// straightening maps Phi+- built from a front value and its slopes.

#include <Eigen/Dense>
#include <cmath>

#include "pvi/error.hpp"
#include "pvi/state.hpp"

namespace pvi {

// chi == 1 on [-1,1], 0 outside [-3,3], quintic smoothstep in between.
inline double chi_cutoff(double x) {
  const double a = std::abs(x);
  if (a <= 1.0) return 1.0;
  if (a >= 3.0) return 0.0;
  const double t = 0.5 * (a - 1.0);
  return 1.0 - t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

inline double chi_cutoff_prime(double x) {
  const double a = std::abs(x);
  if (a <= 1.0 || a >= 3.0) return 0.0;
  const double t = 0.5 * (a - 1.0);
  const double ds = 30.0 * t * t * (1.0 - t) * (1.0 - t);
  return (x > 0.0 ? -1.0 : 1.0) * 0.5 * ds;
}

inline constexpr double chi_prime_max = 15.0 / 16.0;

// sigma(x) = x on [0,1], 2 for x >= 4, monotone quintic in between
// (derivative (1-t)^3 (5t+3) / 3 with t = (x-1)/3).
inline double sigma_weight(double x) {
  if (x <= 1.0) return x;
  if (x >= 4.0) return 2.0;
  const double t = (x - 1.0) / 3.0;
  return 1.0 + t * (3.0 + t * (-2.0 + t * (-2.0 + t * (3.0 - t))));
}

inline double sigma_weight_prime(double x) {
  if (x <= 1.0) return 1.0;
  if (x >= 4.0) return 0.0;
  const double t = (x - 1.0) / 3.0;
  const double omt = 1.0 - t;
  return omt * omt * omt * (5.0 * t + 3.0) / 3.0;
}

// Front data at one boundary point: value and first derivatives of phi.
template <int D>
struct front_point {
  double phi = 0.0;
  double dt = 0.0;
  vec<D - 1> grad = vec<D - 1>::Zero();  // tangential slopes d2, (d3)

  // N = (1, -d2 phi, (-d3 phi))
  vec<D> normal() const {
    vec<D> N;
    N(0) = 1.0;
    for (int j = 0; j < D - 1; ++j) N(j + 1) = -grad(j);
    return N;
  }
};

// Straightening map at interior depth x1 >= 0; sign +1 gives the plasma map
// x1 + chi phi, sign -1 the vacuum map -x1 + chi phi.
template <int D>
struct lifted_point {
  double value;
  double d1;
  double dt;
  vec<D - 1> grad;
};

template <int D>
lifted_point<D> lift_front(double x1, const front_point<D>& f, int sign) {
  const double c = chi_cutoff(x1), cp = chi_cutoff_prime(x1);
  lifted_point<D> L;
  L.value = sign * x1 + c * f.phi;
  L.d1 = sign + cp * f.phi;
  L.dt = c * f.dt;
  L.grad = c * f.grad;
  if (sign > 0 ? !(L.d1 >= 0.5) : !(L.d1 <= -0.5))
    throw front_too_large("lift_front: |chi' phi| exceeds 1/2");
  return L;
}

inline void check_front_amplitude(double sup_abs_phi) {
  if (!(chi_prime_max * sup_abs_phi <= 0.5))
    throw front_too_large("front amplitude too large for straightening");
}

}  // namespace pvi
