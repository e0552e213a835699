#pragma once

// Linear changes of unknowns used near the interface. J1 turns the plasma
// perturbation into (q, N.v, v', N.H, H', S); J2 turns the vacuum fields
// into their normal/tangential boundary combinations; J3 absorbs the
// divergence-transport coupling so the normal vacuum flux becomes constant.
// Each map is given as the matrix sending the transformed vector back to
// the original one, together with its explicit inverse where it is sparse.

#include <Eigen/Dense>

#include "pvi/error.hpp"
#include "pvi/state.hpp"

namespace pvi {

// U = J1 W, W = (q, N.v, v', N.H, H', S); slopes are the lifted
// tangential derivatives of Phi+.
template <int D>
Eigen::Matrix<double, 2 * D + 2, 2 * D + 2> j1_plasma_inv(
    const vec<D - 1>& slopes) {
  Eigen::Matrix<double, 2 * D + 2, 2 * D + 2> J;
  J.setIdentity();
  for (int j = 0; j < D - 1; ++j) {
    J(1, 2 + j) = -slopes(j);
    J(1 + D, 2 + D + j) = -slopes(j);
  }
  return J;
}

template <int D>
Eigen::Matrix<double, 2 * D + 2, 2 * D + 2> j1_plasma(
    const vec<D - 1>& slopes) {
  Eigen::Matrix<double, 2 * D + 2, 2 * D + 2> J;
  J.setIdentity();
  for (int j = 0; j < D - 1; ++j) {
    J(1, 2 + j) = slopes(j);
    J(1 + D, 2 + D + j) = slopes(j);
  }
  return J;
}

// mu = J2^{-1} u; slopes and dt are the lifted derivatives of Phi-.
template <int D>
vmat<D> j2_vacuum_inv(const vec<D - 1>& slopes, double dt, double eps) {
  vmat<D> J = vmat<D>::Identity();
  if constexpr (D == 2) {
    J(0, 1) = -slopes(0);
    J(1, 0) = slopes(0);
    J(1, 2) = eps * dt;
    J(2, 1) = eps * dt;
  } else {
    J(0, 1) = -slopes(0);
    J(0, 2) = -slopes(1);
    J(1, 0) = slopes(0);
    J(1, 5) = eps * dt;
    J(2, 0) = slopes(1);
    J(2, 4) = -eps * dt;
    J(3, 4) = -slopes(0);
    J(3, 5) = -slopes(1);
    J(4, 3) = slopes(0);
    J(4, 2) = -eps * dt;
    J(5, 3) = slopes(1);
    J(5, 1) = eps * dt;
  }
  return J;
}

template <int D>
vmat<D> j2_vacuum(const vec<D - 1>& slopes, double dt, double eps) {
  const vmat<D> Jinv = j2_vacuum_inv<D>(slopes, dt, eps);
  Eigen::FullPivLU<vmat<D>> lu(Jinv);
  if (!lu.isInvertible())
    throw singular_transform("j2_vacuum: boundary combination degenerate");
  return lu.inverse();
}

// mu = J3 w; both directions are sparse and exact.
template <int D>
vmat<D> j3_vacuum(const vec<D>& nu, double eps) {
  vmat<D> J = vmat<D>::Identity();
  if constexpr (D == 2) {
    J(2, 0) = eps * nu(1);
  } else {
    J(1, 3) = eps * nu(2);
    J(2, 3) = -eps * nu(1);
    J(4, 0) = -eps * nu(2);
    J(5, 0) = eps * nu(1);
  }
  return J;
}

template <int D>
vmat<D> j3_vacuum_inv(const vec<D>& nu, double eps) {
  vmat<D> J = vmat<D>::Identity();
  if constexpr (D == 2) {
    J(2, 0) = -eps * nu(1);
  } else {
    J(1, 3) = -eps * nu(2);
    J(2, 3) = eps * nu(1);
    J(4, 0) = eps * nu(2);
    J(5, 0) = -eps * nu(1);
  }
  return J;
}

}  // namespace pvi
