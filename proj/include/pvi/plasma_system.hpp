#pragma once

// Quasilinear symbols of the relativistic MHD system. The system is written
// in the variables V = (p, Gamma v, H, S), where it takes the symmetric form
// B0(V) dt V + Bj(V) dj V = 0; conjugating with J = dV/dU turns this into
// dt U + Aj(U) dj U = 0 with Friedrichs symmetrizer S+ = J^T B0 J.

#include <Eigen/Dense>

#include "pvi/eos.hpp"
#include "pvi/error.hpp"
#include "pvi/state.hpp"

namespace pvi {

template <int D>
using pmat = Eigen::Matrix<double, 2 * D + 2, 2 * D + 2>;

namespace detail {

template <int D>
struct sym_coeffs {
  double rho, a2, f;   // density, sound speed squared, enthalpy index
  double G;            // Lorentz factor
  double b2;           // |H|^2/G^2 + eps^2 (v.H)^2
  double vH;
  vec<D> v, H;
  double eps;
  Eigen::Matrix<double, D, D> P;  // I - eps^2 v v^T
  double coef;                    // rho f G + eps^2 |H|^2 / G

  explicit sym_coeffs(const plasma_state<D>& st, const eos& e) {
    const thermo th = state_thermo(st, e);
    rho = th.rho;
    a2 = th.a2;
    f = th.f_index;
    G = st.gamma_lorentz();
    b2 = st.b2();
    vH = st.v.dot(st.H);
    v = st.v;
    H = st.H;
    eps = st.eps;
    P = Eigen::Matrix<double, D, D>::Identity() - eps * eps * v * v.transpose();
    coef = rho * f * G + eps * eps * H.squaredNorm() / G;
  }

  Eigen::Matrix<double, D, D> m0() const {
    return (Eigen::Matrix<double, D, D>::Identity() +
            eps * eps * G * G * v * v.transpose()) /
           G;
  }

  Eigen::Matrix<double, D, D> a0() const {
    const double e2 = eps * eps;
    return coef * P -
           e2 / G * (b2 * v * v.transpose() + H * H.transpose()) +
           e2 * e2 / G * vH *
               (H * v.transpose() + v * H.transpose());
  }

  Eigen::Matrix<double, D, D> nj(int j) const {
    const vec<D> lead = H / (G * G) + eps * eps * vH * v;
    vec<D> ej = vec<D>::Zero();
    ej(j) = 1.0;
    return lead * (ej - eps * eps * v(j) * v).transpose() -
           H(j) / (G * G) * Eigen::Matrix<double, D, D>::Identity();
  }

  Eigen::Matrix<double, D, D> aj(int j) const {
    const double e2 = eps * eps;
    vec<D> ej = vec<D>::Zero();
    ej(j) = 1.0;
    const vec<D> r = e2 * vH * H - b2 * v;
    return v(j) * (coef * P + e2 / G * (b2 * v * v.transpose() -
                                        H * H.transpose())) +
           e2 / G * H(j) *
               ((H * v.transpose() + v * H.transpose()) / (G * G) -
                2.0 * vH * P) +
           (r * ej.transpose() + ej * r.transpose()) / G;
  }
};

}  // namespace detail

template <int D>
pmat<D> sym_b0(const plasma_state<D>& st, const eos& e) {
  detail::sym_coeffs<D> c(st, e);
  pmat<D> B = pmat<D>::Zero();
  B(0, 0) = c.G / (c.rho * c.a2);
  B.template block<1, D>(0, 1) = c.eps * c.eps * c.v.transpose();
  B.template block<D, 1>(1, 0) = c.eps * c.eps * c.v;
  B.template block<D, D>(1, 1) = c.a0();
  B.template block<D, D>(1 + D, 1 + D) = c.m0();
  B(2 * D + 1, 2 * D + 1) = 1.0;
  return B;
}

template <int D>
pmat<D> sym_bj(const plasma_state<D>& st, const eos& e, int j) {
  detail::sym_coeffs<D> c(st, e);
  vec<D> ej = vec<D>::Zero();
  ej(j) = 1.0;
  pmat<D> B = pmat<D>::Zero();
  B(0, 0) = c.G * c.v(j) / (c.rho * c.a2);
  B.template block<1, D>(0, 1) = ej.transpose();
  B.template block<D, 1>(1, 0) = ej;
  B.template block<D, D>(1, 1) = c.aj(j);
  B.template block<D, D>(1, 1 + D) = c.nj(j).transpose();
  B.template block<D, D>(1 + D, 1) = c.nj(j);
  B.template block<D, D>(1 + D, 1 + D) = c.v(j) * c.m0();
  B(2 * D + 1, 2 * D + 1) = c.v(j);
  return B;
}

// J = dV/dU for V = (p, Gamma v, H, S), U = (q, v, H, S).
template <int D>
pmat<D> state_jacobian(const plasma_state<D>& st, const eos& e) {
  detail::sym_coeffs<D> c(st, e);
  const double e2 = c.eps * c.eps;
  const vec<D> a = e2 * c.H.squaredNorm() * c.v - e2 * c.vH * c.H;
  const vec<D> b = c.H / (c.G * c.G) + e2 * c.vH * c.v;
  pmat<D> J = pmat<D>::Zero();
  J(0, 0) = 1.0;
  J.template block<1, D>(0, 1) = a.transpose();
  J.template block<1, D>(0, 1 + D) = -b.transpose();
  J.template block<D, D>(1, 1) = c.G * c.G * c.m0();
  J.template block<D, D>(1 + D, 1 + D) =
      Eigen::Matrix<double, D, D>::Identity();
  J(2 * D + 1, 2 * D + 1) = 1.0;
  return J;
}

template <int D>
void check_jacobian_condition(const pmat<D>& J) {
  Eigen::JacobiSVD<pmat<D>> svd(J);
  const double smin = svd.singularValues()(svd.singularValues().size() - 1);
  const double smax = svd.singularValues()(0);
  if (!(smin > 0.0) || smax / smin > 1e8)
    throw degenerate_jacobian("state_jacobian: condition number too large");
}

// A_j(U) in dt U + Aj dj U = 0.
template <int D>
pmat<D> flux_jacobian(const plasma_state<D>& st, const eos& e, int j) {
  const pmat<D> J = state_jacobian(st, e);
  check_jacobian_condition<D>(J);
  const pmat<D> B0 = sym_b0(st, e);
  const pmat<D> Bj = sym_bj(st, e, j);
  return J.partialPivLu().solve(B0.partialPivLu().solve(Bj * J));
}

// Friedrichs symmetrizer S+ = J^T B0 J: symmetric positive definite, and
// S+ A_j = J^T Bj J is symmetric for every j.
template <int D>
pmat<D> plasma_symmetrizer(const plasma_state<D>& st, const eos& e) {
  const pmat<D> J = state_jacobian(st, e);
  check_jacobian_condition<D>(J);
  return J.transpose() * sym_b0(st, e) * J;
}

}  // namespace pvi
