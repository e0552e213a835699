#pragma once

// Reference backgrounds. The 2D ring is a static state on the half-plane
// with a flat front: graded profiles X0 + Xa * x1 exp(-x1) vanish with zero
// normal velocity at the interface, the vacuum fields are constant, and
// every profile has closed-form x1 derivatives. The 3D variant extends the
// plasma side for pointwise linearization checks.

#include <Eigen/Dense>
#include <cmath>

#include "pvi/boundary.hpp"
#include "pvi/eos.hpp"
#include "pvi/error.hpp"
#include "pvi/geometry.hpp"
#include "pvi/linearize.hpp"
#include "pvi/state.hpp"

namespace pvi {

inline double graded_shape(double x1) { return x1 * std::exp(-x1); }
inline double graded_shape_d1(double x1) { return std::exp(-x1) * (1.0 - x1); }
inline double graded_shape_d2(double x1) { return std::exp(-x1) * (x1 - 2.0); }

struct ring2d {
  eos gas;
  double eps = 1.0;
  double q0 = 0.5, qa = 0.3;   // total pressure profile
  double va = 0.2, vb = 0.1;   // velocity slopes
  double vb0 = 0.0;            // constant tangential drift
  double hb = 1.0;             // vacuum tangential field
  double e0 = 0.0;             // vacuum electric field
  double S0 = 0.0;

  plasma_state<2> plasma(double x1) const {
    const double g = graded_shape(x1);
    plasma_state<2> U;
    U.eps = eps;
    U.q = q0 + qa * g;
    U.v << va * g, vb0 + vb * g;
    U.S = S0;
    return U;
  }

  Eigen::Matrix<double, 6, 1> plasma_d1(double x1) const {
    const double gp = graded_shape_d1(x1);
    Eigen::Matrix<double, 6, 1> d;
    d << qa * gp, va * gp, vb * gp, 0.0, 0.0, 0.0;
    return d;
  }

  Eigen::Matrix<double, 6, 1> plasma_d2(double x1) const {
    const double gpp = graded_shape_d2(x1);
    Eigen::Matrix<double, 6, 1> d;
    d << qa * gpp, va * gpp, vb * gpp, 0.0, 0.0, 0.0;
    return d;
  }

  vacuum_state<2> vacuum() const {
    vacuum_state<2> u;
    u.h << 0.0, hb;
    u.e << e0;
    return u;
  }

  front_point<2> front() const { return {}; }

  // divergence-transport speed: cutoff times the interface velocity trace
  vec<2> nu(double x1) const {
    vec<2> n;
    n << 0.0, chi_cutoff(x1) * vb0;
    return n;
  }

  vec<2> nu_d1(double x1) const {
    vec<2> n;
    n << 0.0, chi_cutoff_prime(x1) * vb0;
    return n;
  }

  interface_background<2> trace() const {
    return {plasma(0.0), vacuum(), front()};
  }

  interface_background_d1<2> trace_d1() const {
    return {plasma_d1(0.0), Eigen::Matrix<double, 3, 1>::Zero()};
  }

  // psi coefficients of the boundary conditions
  double b1() const { return jump_psi_coefficient<2>(trace(), trace_d1())(0); }
  double b2() const { return jump_psi_coefficient<2>(trace(), trace_d1())(1); }
  double b4() const {
    const auto b = jump_psi_coefficient<2>(trace(), trace_d1());
    return b(2) - eps * vb0 * trace_d1().du(0);  // d1(h).N vanishes here
  }
  double b5() const { return eps * hb * b1() - b4(); }

  double kappa0() const { return std::abs(hb); }  // H vanishes on the ring

  // Solver admissibility: static flat front compatible with the jump
  // conditions, subluminal, pressures inside the closure window.
  void validate() const {
    if (std::abs(e0) > 0.0 ||
        std::abs(q0 - 0.5 * (hb * hb - e0 * e0)) > 1e-12)
      throw incompatible_state("ring2d: trace violates the jump conditions");
    if (kappa0() < 1e-8)
      throw incompatible_state("ring2d: both tangential fields vanish");
    for (double x1 = 0.0; x1 <= 8.0; x1 += 0.05) {
      const plasma_state<2> U = plasma(x1);
      (void)state_thermo(U, gas);
      (void)U.gamma_lorentz();
    }
  }
};

// Plasma-only 3D background with the same grading, for pointwise checks.
struct ring3d {
  eos gas;
  double eps = 1.0;
  double q0 = 0.5, qa = 0.3;
  double va = 0.2, vb = 0.1, vc = 0.15;
  double vb0 = 0.0;
  double Ha = 0.4, Hb = 0.25;  // tangential magnetic slopes
  double S0 = 0.0;

  plasma_state<3> plasma(double x1) const {
    const double g = graded_shape(x1);
    plasma_state<3> U;
    U.eps = eps;
    U.v << va * g, vb0 + vb * g, vc * g;
    U.H << 0.0, Ha * g, Hb * g;
    U.S = S0;
    U.q = total_pressure<3>(q0 + qa * g, U.v, U.H, eps);
    return U;
  }

  Eigen::Matrix<double, 8, 1> plasma_d1(double x1) const {
    const double gp = graded_shape_d1(x1);
    const plasma_state<3> U = plasma(x1);
    vec<3> dv, dH;
    dv << va * gp, vb * gp, vc * gp;
    dH << 0.0, Ha * gp, Hb * gp;
    const double e2 = eps * eps;
    const double dginv2 = -2.0 * e2 * U.v.dot(dv);  // d/dx1 of Gamma^{-2}
    const double ginv2 = 1.0 - e2 * U.v.squaredNorm();
    const double vH = U.v.dot(U.H);
    const double dq = qa * gp + U.H.dot(dH) * ginv2 +
                      0.5 * U.H.squaredNorm() * dginv2 +
                      e2 * vH * (dv.dot(U.H) + U.v.dot(dH));
    Eigen::Matrix<double, 8, 1> d;
    d << dq, dv, dH, 0.0;
    return d;
  }

  Eigen::Matrix<double, 8, 1> plasma_d2(double x1) const {
    const double gp = graded_shape_d1(x1), gpp = graded_shape_d2(x1);
    const plasma_state<3> U = plasma(x1);
    vec<3> dv, dH, ddv, ddH;
    dv << va * gp, vb * gp, vc * gp;
    dH << 0.0, Ha * gp, Hb * gp;
    ddv << va * gpp, vb * gpp, vc * gpp;
    ddH << 0.0, Ha * gpp, Hb * gpp;
    const double e2 = eps * eps;
    const double ginv2 = 1.0 - e2 * U.v.squaredNorm();
    const double dginv2 = -2.0 * e2 * U.v.dot(dv);
    const double ddginv2 = -2.0 * e2 * (dv.squaredNorm() + U.v.dot(ddv));
    const double vH = U.v.dot(U.H);
    const double dvH = dv.dot(U.H) + U.v.dot(dH);
    const double ddvH = ddv.dot(U.H) + 2.0 * dv.dot(dH) + U.v.dot(ddH);
    const double ddq = qa * gpp +
                       (dH.squaredNorm() + U.H.dot(ddH)) * ginv2 +
                       2.0 * U.H.dot(dH) * dginv2 +
                       0.5 * U.H.squaredNorm() * ddginv2 +
                       e2 * (dvH * dvH + vH * ddvH);
    Eigen::Matrix<double, 8, 1> d;
    d << ddq, ddv, ddH, 0.0;
    return d;
  }
};

}  // namespace pvi
