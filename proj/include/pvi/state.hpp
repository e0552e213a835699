#pragma once

// Primitive plasma unknowns (q, v, H, S), vacuum unknowns (h, e), and the
// map to the symmetrizing variables (p, Gamma v, H, S) with its inverse.

#include <Eigen/Dense>
#include <cmath>

#include "pvi/eos.hpp"
#include "pvi/error.hpp"

namespace pvi {

template <int D>
using vec = Eigen::Matrix<double, D, 1>;

inline double lorentz_factor(const Eigen::Ref<const Eigen::VectorXd>& v,
                             double eps) {
  const double ev2 = eps * eps * v.squaredNorm();
  if (!(ev2 < 1.0))
    throw physical_condition_violated("lorentz_factor: eps*|v| >= 1");
  return 1.0 / std::sqrt(1.0 - ev2);
}

template <int D>
struct plasma_state {
  double q = 0.0;
  vec<D> v = vec<D>::Zero();
  vec<D> H = vec<D>::Zero();
  double S = 0.0;
  double eps = 1.0;

  static constexpr int n_comp = 2 * D + 2;

  double gamma_lorentz() const { return lorentz_factor(v, eps); }

  // q - p: magnetic part of the total pressure, independent of p
  double magnetic_pressure() const {
    const double G = gamma_lorentz();
    const double vh = v.dot(H);
    return 0.5 * H.squaredNorm() / (G * G) + 0.5 * eps * eps * vh * vh;
  }

  // |H|^2/Gamma^2 + eps^2 (v.H)^2
  double b2() const { return 2.0 * magnetic_pressure(); }

  Eigen::Matrix<double, n_comp, 1> as_vector() const {
    Eigen::Matrix<double, n_comp, 1> u;
    u(0) = q;
    u.template segment<D>(1) = v;
    u.template segment<D>(1 + D) = H;
    u(n_comp - 1) = S;
    return u;
  }

  static plasma_state from_vector(const Eigen::Matrix<double, n_comp, 1>& u,
                                  double eps) {
    plasma_state st;
    st.q = u(0);
    st.v = u.template segment<D>(1);
    st.H = u.template segment<D>(1 + D);
    st.S = u(n_comp - 1);
    st.eps = eps;
    return st;
  }
};

// 3D vacuum fields are (h, e) with three components each; in 2D the electric
// field is the single out-of-plane component.
template <int D>
struct vacuum_state {
  static constexpr int n_comp = 3 * D - 3;
  vec<D> h = vec<D>::Zero();
  vec<2 * D - 3> e = vec<2 * D - 3>::Zero();

  Eigen::Matrix<double, n_comp, 1> as_vector() const {
    Eigen::Matrix<double, n_comp, 1> u;
    u.template segment<D>(0) = h;
    u.template segment<2 * D - 3>(D) = e;
    return u;
  }

  static vacuum_state from_vector(const Eigen::Matrix<double, n_comp, 1>& u) {
    vacuum_state w;
    w.h = u.template segment<D>(0);
    w.e = u.template segment<2 * D - 3>(D);
    return w;
  }
};

template <int D>
double total_pressure(double p, const vec<D>& v, const vec<D>& H, double eps) {
  const double G = lorentz_factor(v, eps);
  const double vh = v.dot(H);
  return p + 0.5 * H.squaredNorm() / (G * G) + 0.5 * eps * eps * vh * vh;
}

template <int D>
struct sym_state {
  double p = 0.0;
  vec<D> w = vec<D>::Zero();  // Gamma * v
  vec<D> H = vec<D>::Zero();
  double S = 0.0;
  double eps = 1.0;
};

// Recover p from q. The residual is linear in p for the current closure, so
// Newton lands in one step; the bisection safeguard keeps the root inside
// the bracket implied by the density window.
template <int D>
double pressure_from_total(const plasma_state<D>& st, const eos& e) {
  const double mag = st.magnetic_pressure();
  double lo = e.p_of(e.rho_lo, st.S);
  double hi = e.p_of(e.rho_hi, st.S);
  auto f = [&](double p) { return p + mag - st.q; };
  if (f(lo) > 0.0 || f(hi) < 0.0)
    throw no_root("pressure_from_total: no root in density window");
  double p = std::min(std::max(st.q - mag, lo), hi);
  for (int it = 0; it < 100; ++it) {
    const double r = f(p);
    if (std::abs(r) <= 1e-13 * std::max(1.0, std::abs(p))) return p;
    double step = -r;  // f' = 1
    double next = p + step;
    if (next <= lo || next >= hi) next = 0.5 * (lo + hi);
    if (f(next) > 0.0) hi = next; else lo = next;
    p = next;
  }
  throw no_root("pressure_from_total: Newton failed to converge");
}

template <int D>
sym_state<D> u_to_v(const plasma_state<D>& st, const eos& e) {
  sym_state<D> out;
  out.p = pressure_from_total(st, e);
  out.w = st.gamma_lorentz() * st.v;
  out.H = st.H;
  out.S = st.S;
  out.eps = st.eps;
  return out;
}

template <int D>
plasma_state<D> v_to_u(const sym_state<D>& sv, const eos&) {
  plasma_state<D> st;
  st.eps = sv.eps;
  const double G = std::sqrt(1.0 + sv.eps * sv.eps * sv.w.squaredNorm());
  st.v = sv.w / G;
  st.H = sv.H;
  st.S = sv.S;
  st.q = total_pressure<D>(sv.p, st.v, st.H, sv.eps);
  return st;
}

// Thermodynamic closure evaluated at the state's own pressure.
template <int D>
thermo state_thermo(const plasma_state<D>& st, const eos& e) {
  return e.eval(pressure_from_total(st, e), st.S, st.eps);
}

}  // namespace pvi
