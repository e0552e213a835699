#pragma once

// Constant-coefficient Maxwell symbols in the vacuum region, the reformed
// symbols carrying the divergence transport term with speed nu, and the
// secondary symmetrizer S-(nu) that keeps the reformed system Friedrichs
// symmetrizable for eps |nu| < 1.

#include <Eigen/Dense>

#include "pvi/error.hpp"
#include "pvi/state.hpp"

namespace pvi {

template <int D>
using vmat = Eigen::Matrix<double, 3 * D - 3, 3 * D - 3>;

template <int D>
vmat<D> vacuum_bj(int j) {
  vmat<D> B = vmat<D>::Zero();
  if constexpr (D == 3) {
    auto curl = [](int ax) {
      Eigen::Matrix3d C = Eigen::Matrix3d::Zero();
      // C w = e_ax x w
      const int a = (ax + 1) % 3, b = (ax + 2) % 3;
      C(a, b) = -1.0;
      C(b, a) = 1.0;
      return C;
    };
    B.template block<3, 3>(0, 3) = curl(j);
    B.template block<3, 3>(3, 0) = -curl(j);
  } else {
    static_assert(D == 2);
    if (j == 0) {
      B(1, 2) = -1.0;
      B(2, 1) = -1.0;
    } else {
      B(0, 2) = 1.0;
      B(2, 0) = 1.0;
    }
  }
  return B;
}

template <int D>
vmat<D> vacuum_aj(int j, const vec<D>& nu, double eps) {
  vmat<D> A = vacuum_bj<D>(j);
  A.template block<D, 1>(0, j) += eps * nu;
  if constexpr (D == 3) A.template block<3, 1>(3, 3 + j) += eps * nu;
  return A;
}

template <int D>
vmat<D> vacuum_symmetrizer(const vec<D>& nu, double eps) {
  if (!(eps * nu.norm() < 1.0))
    throw physical_condition_violated("vacuum_symmetrizer: eps*|nu| >= 1");
  vmat<D> S = vmat<D>::Identity();
  if constexpr (D == 3) {
    Eigen::Matrix3d X = Eigen::Matrix3d::Zero();
    // X w = eps nu x w
    X(0, 1) = -eps * nu(2);
    X(0, 2) = eps * nu(1);
    X(1, 0) = eps * nu(2);
    X(1, 2) = -eps * nu(0);
    X(2, 0) = -eps * nu(1);
    X(2, 1) = eps * nu(0);
    S.template block<3, 3>(0, 3) = -X;
    S.template block<3, 3>(3, 0) = X;
  } else {
    S(0, 2) = -eps * nu(1);
    S(2, 0) = -eps * nu(1);
    S(1, 2) = eps * nu(0);
    S(2, 1) = eps * nu(0);
  }
  return S;
}

// Closed-form spectrum of S-(nu): in 3D the eigenvalues are 1 (twice) and
// 1 +- eps|nu| (twice each); in 2D they are 1, 1 + eps|nu|, 1 - eps|nu|.
template <int D>
Eigen::Matrix<double, 3 * D - 3, 1> vacuum_symmetrizer_spectrum(
    const vec<D>& nu, double eps) {
  const double s = eps * nu.norm();
  Eigen::Matrix<double, 3 * D - 3, 1> ev;
  if constexpr (D == 3)
    ev << 1.0 - s, 1.0 - s, 1.0, 1.0, 1.0 + s, 1.0 + s;
  else
    ev << 1.0 - s, 1.0, 1.0 + s;
  return ev;
}

}  // namespace pvi
