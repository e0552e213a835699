#pragma once

// Linearization around a background: good unknowns, the linearized jump
// conditions in both the plain and the effective (good-unknown) form, the
// frozen-coefficient interior operators, and the zeroth-order term that
// the good-unknown substitution generates in the plasma region.

#include <Eigen/Dense>
#include <cmath>

#include "pvi/boundary.hpp"
#include "pvi/geometry.hpp"
#include "pvi/plasma_system.hpp"
#include "pvi/state.hpp"
#include "pvi/vacuum_system.hpp"

namespace pvi {

// delta - (Psi / d1 Phi) d1(background), componentwise
template <typename V>
V good_unknown(const V& delta, double Psi, double d1Phi, const V& d1_bg) {
  return delta - (Psi / d1Phi) * d1_bg;
}

template <int D>
struct interface_background {
  plasma_state<D> U;
  vacuum_state<D> u;
  front_point<D> f;
};

// One-sided x1 derivatives of the background at the interface.
template <int D>
struct interface_background_d1 {
  Eigen::Matrix<double, 2 * D + 2, 1> dU;
  Eigen::Matrix<double, 3 * D - 3, 1> du;
};

// Directional derivative of the jump conditions; the front perturbation
// rides in a front_point (value psi, dt, tangential slopes).
template <int D>
Eigen::Matrix<double, D + 1, 1> jump_linearized(
    const interface_background<D>& bg,
    const Eigen::Matrix<double, 2 * D + 2, 1>& dU,
    const Eigen::Matrix<double, 3 * D - 3, 1>& du, const front_point<D>& psi) {
  const double eps = bg.U.eps;
  const auto U = plasma_state<D>::from_vector(dU, eps);
  const auto u = vacuum_state<D>::from_vector(du);
  Eigen::Matrix<double, D + 1, 1> r;
  r(0) = psi.dt - U.v.dot(bg.f.normal());
  for (int j = 0; j < D - 1; ++j) r(0) += bg.U.v(j + 1) * psi.grad(j);
  r(1) = U.q - bg.u.h.dot(u.h) + bg.u.e.dot(u.e);
  if constexpr (D == 3) {
    r(2) = u.e(1) + bg.f.grad(0) * u.e(0) - eps * bg.f.dt * u.h(2) +
           bg.u.e(0) * psi.grad(0) - eps * bg.u.h(2) * psi.dt;
    r(3) = u.e(2) + bg.f.grad(1) * u.e(0) + eps * bg.f.dt * u.h(1) +
           bg.u.e(0) * psi.grad(1) + eps * bg.u.h(1) * psi.dt;
  } else {
    r(2) = u.e(0) + eps * bg.f.dt * u.h(1) + eps * bg.u.h(1) * psi.dt;
  }
  return r;
}

// Forcing-like coefficient multiplying psi in the effective form; built
// from the x1-trace derivatives of the background.  The two sides are
// lifted with opposite orientation, so the vacuum terms enter negated
// relative to the plasma ones.
template <int D>
Eigen::Matrix<double, D + 1, 1> jump_psi_coefficient(
    const interface_background<D>& bg, const interface_background_d1<D>& d1) {
  const double eps = bg.U.eps;
  const auto dU = plasma_state<D>::from_vector(d1.dU, eps);
  const auto du = vacuum_state<D>::from_vector(d1.du);
  Eigen::Matrix<double, D + 1, 1> b;
  b(0) = -dU.v.dot(bg.f.normal());
  b(1) = dU.q + bg.u.h.dot(du.h) - bg.u.e.dot(du.e);
  if constexpr (D == 3) {
    b(2) = -(du.e(1) + bg.f.grad(0) * du.e(0) - eps * bg.f.dt * du.h(2));
    b(3) = -(du.e(2) + bg.f.grad(1) * du.e(0) + eps * bg.f.dt * du.h(1));
  } else {
    b(2) = -(du.e(0) + eps * bg.f.dt * du.h(1));
  }
  return b;
}

// Effective linearized jump conditions acting on good unknowns.
template <int D>
Eigen::Matrix<double, D + 1, 1> jump_linearized_effective(
    const interface_background<D>& bg, const interface_background_d1<D>& d1,
    const Eigen::Matrix<double, 2 * D + 2, 1>& dU_good,
    const Eigen::Matrix<double, 3 * D - 3, 1>& du_good,
    const front_point<D>& psi) {
  return jump_linearized<D>(bg, dU_good, du_good, psi) +
         psi.phi * jump_psi_coefficient<D>(bg, d1);
}

// (-dt(Phi) I + A1 - sum_j dj(Phi) Aj) / d1(Phi)
template <int D>
pmat<D> plasma_a1_straightened(const plasma_state<D>& U, const eos& e,
                               const lifted_point<D>& L) {
  pmat<D> A = -L.dt * pmat<D>::Identity() + flux_jacobian(U, e, 0);
  for (int j = 0; j < D - 1; ++j) A -= L.grad(j) * flux_jacobian(U, e, j + 1);
  return A / L.d1;
}

template <int D>
vmat<D> vacuum_a1_straightened(const vec<D>& nu, double eps,
                               const lifted_point<D>& L) {
  vmat<D> A = -eps * L.dt * vmat<D>::Identity() + vacuum_aj<D>(0, nu, eps);
  for (int j = 0; j < D - 1; ++j) A -= L.grad(j) * vacuum_aj<D>(j + 1, nu, eps);
  return A / L.d1;
}

// Pointwise quasilinear residual dt U + A1~ d1 U + sum_j Aj dj U; column k
// of dU holds the derivative along t, x1, ..., xD.
template <int D>
Eigen::Matrix<double, 2 * D + 2, 1> plasma_residual(
    const plasma_state<D>& U,
    const Eigen::Matrix<double, 2 * D + 2, D + 1>& dU, const eos& e,
    const lifted_point<D>& L) {
  Eigen::Matrix<double, 2 * D + 2, 1> r = dU.col(0);
  r += plasma_a1_straightened(U, e, L) * dU.col(1);
  for (int j = 1; j < D; ++j) r += flux_jacobian(U, e, j) * dU.col(j + 1);
  return r;
}

template <int D>
Eigen::Matrix<double, 3 * D - 3, 1> vacuum_residual(
    const Eigen::Matrix<double, 3 * D - 3, D + 1>& du, const vec<D>& nu,
    double eps, const lifted_point<D>& L) {
  Eigen::Matrix<double, 3 * D - 3, 1> r = eps * du.col(0);
  r += vacuum_a1_straightened<D>(nu, eps, L) * du.col(1);
  for (int j = 1; j < D; ++j) r += vacuum_aj<D>(j, nu, eps) * du.col(j + 1);
  return r;
}

// d(A1~)/dU_k and d(Aj)/dU_k by central differences in state space.
template <int D>
pmat<D> plasma_a1_straightened_derivative(const plasma_state<D>& U,
                                          const eos& e,
                                          const lifted_point<D>& L, int k) {
  auto Uv = U.as_vector();
  const double step = std::cbrt(2.2e-16) * std::max(1.0, std::abs(Uv(k)));
  auto up = Uv, dn = Uv;
  up(k) += step;
  dn(k) -= step;
  return (plasma_a1_straightened(plasma_state<D>::from_vector(up, U.eps), e,
                                 L) -
          plasma_a1_straightened(plasma_state<D>::from_vector(dn, U.eps), e,
                                 L)) /
         (2.0 * step);
}

template <int D>
pmat<D> flux_jacobian_derivative(const plasma_state<D>& U, const eos& e,
                                 int j, int k) {
  auto Uv = U.as_vector();
  const double step = std::cbrt(2.2e-16) * std::max(1.0, std::abs(Uv(k)));
  auto up = Uv, dn = Uv;
  up(k) += step;
  dn(k) -= step;
  return (flux_jacobian(plasma_state<D>::from_vector(up, U.eps), e, j) -
          flux_jacobian(plasma_state<D>::from_vector(dn, U.eps), e, j)) /
         (2.0 * step);
}

// Boundary traces of the symmetrized first coefficient matrices.  Both are
// constant: the plasma one couples the total-pressure and normal-velocity
// rows, the vacuum one the rotated tangential components.
template <int D>
pmat<D> bold_b1_plasma(double eps) {
  pmat<D> B = pmat<D>::Zero();
  B(0, 1) = B(1, 0) = eps;
  return B;
}

template <int D>
vmat<D> bold_b1_vacuum() {
  vmat<D> B = vmat<D>::Zero();
  if constexpr (D == 2) {
    B(1, 2) = B(2, 1) = 1.0;
  } else {
    B(1, 5) = B(5, 1) = 1.0;
    B(2, 4) = B(4, 2) = -1.0;
  }
  return B;
}

// Zeroth-order matrix of the good-unknown interior operator: column k is
// dA1~/dU_k d1(U) + sum_{j>=2} dAj/dU_k dj(U) evaluated on the background.
template <int D>
pmat<D> plasma_zeroth_order(const plasma_state<D>& U,
                            const Eigen::Matrix<double, 2 * D + 2, D>& dU_x,
                            const eos& e, const lifted_point<D>& L) {
  pmat<D> C;
  for (int k = 0; k < 2 * D + 2; ++k) {
    Eigen::Matrix<double, 2 * D + 2, 1> col =
        plasma_a1_straightened_derivative(U, e, L, k) * dU_x.col(0);
    for (int j = 1; j < D; ++j)
      col += flux_jacobian_derivative(U, e, j, k) * dU_x.col(j);
    C.col(k) = col;
  }
  return C;
}

}  // namespace pvi
