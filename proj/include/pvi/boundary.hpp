#pragma once

// Interface coupling: the nonlinear jump conditions across the front, the
// boundary matrices of both regions, their inertia, and the structural
// identity satisfied by the symmetrized plasma boundary matrix at
// compatible states.

#include <Eigen/Dense>

#include "pvi/error.hpp"
#include "pvi/geometry.hpp"
#include "pvi/plasma_system.hpp"
#include "pvi/state.hpp"
#include "pvi/vacuum_system.hpp"

namespace pvi {

template <int D>
Eigen::Matrix<double, D + 1, 1> jump_conditions(const plasma_state<D>& U,
                                                const vacuum_state<D>& u,
                                                const front_point<D>& f) {
  Eigen::Matrix<double, D + 1, 1> B;
  const vec<D> N = f.normal();
  B(0) = f.dt - U.v.dot(N);
  B(1) = U.q - 0.5 * u.h.squaredNorm() + 0.5 * u.e.squaredNorm();
  const double eps = U.eps;
  if constexpr (D == 3) {
    B(2) = u.e(1) + f.grad(0) * u.e(0) - eps * f.dt * u.h(2);
    B(3) = u.e(2) + f.grad(1) * u.e(0) + eps * f.dt * u.h(1);
  } else {
    B(2) = u.e(0) + eps * f.dt * u.h(1);
  }
  return B;
}

template <int D>
double normal_H(const plasma_state<D>& U, const front_point<D>& f) {
  return U.H.dot(f.normal());
}

template <int D>
double normal_h(const vacuum_state<D>& u, const front_point<D>& f) {
  return u.h.dot(f.normal());
}

// dt(phi) I - N_j A_j(U)
template <int D>
pmat<D> plasma_boundary_matrix(const plasma_state<D>& U, const eos& e,
                               const front_point<D>& f) {
  const vec<D> N = f.normal();
  pmat<D> A = f.dt * pmat<D>::Identity();
  for (int j = 0; j < D; ++j) A -= N(j) * flux_jacobian(U, e, j);
  return A;
}

// -eps dt(phi) I + N_j Bj
template <int D>
vmat<D> vacuum_boundary_matrix(const front_point<D>& f, double eps) {
  vmat<D> A = -eps * f.dt * vmat<D>::Identity();
  const vec<D> N = f.normal();
  for (int j = 0; j < D; ++j) A += N(j) * vacuum_bj<D>(j);
  return A;
}

// -eps dt(phi) I + N_j Aj(nu)
template <int D>
vmat<D> vacuum_boundary_matrix_reformed(const front_point<D>& f,
                                        const vec<D>& nu, double eps) {
  vmat<D> A = -eps * f.dt * vmat<D>::Identity();
  const vec<D> N = f.normal();
  for (int j = 0; j < D; ++j) A += N(j) * vacuum_aj<D>(j, nu, eps);
  return A;
}

// Eigenvalues of -eps dt(phi) I + N_j Bj: -eps dt(phi) and
// -eps dt(phi) +- |N|, each pair doubled in 3D.
template <int D>
Eigen::Matrix<double, 3 * D - 3, 1> vacuum_boundary_spectrum(
    const front_point<D>& f, double eps) {
  const double c = -eps * f.dt, n = f.normal().norm();
  Eigen::Matrix<double, 3 * D - 3, 1> ev;
  if constexpr (D == 3)
    ev << c - n, c - n, c, c, c + n, c + n;
  else
    ev << c - n, c, c + n;
  return ev;
}

struct inertia {
  int pos = 0, neg = 0, zero = 0;
};

// Signature of the real spectrum; zero threshold scales with the Frobenius
// norm. Throws if the matrix has a genuinely complex eigenvalue.
template <typename M>
inertia matrix_inertia(const M& A, double rel_tol = 1e-10) {
  Eigen::EigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(A)};
  const double scale = A.norm();
  const double tol = rel_tol * (scale > 0.0 ? scale : 1.0);
  inertia sig;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const auto ev = es.eigenvalues()(i);
    if (std::abs(ev.imag()) > 1e3 * tol)
      throw validation_error("matrix_inertia: complex eigenvalue");
    if (ev.real() > tol)
      ++sig.pos;
    else if (ev.real() < -tol)
      ++sig.neg;
    else
      ++sig.zero;
  }
  return sig;
}

template <typename M>
int matrix_rank(const M& A, double rel_tol = 1e-10) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd{Eigen::MatrixXd(A)};
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > rel_tol * sv(0)) ++r;
  return r;
}

// At a compatible boundary state (v.N = dt phi, H.N = 0) the matrix
// S+ (N_j Aj - dt(phi) I) reduces to the rank-two coupling between the
// total-pressure row and the velocity block: Gamma N in the off-diagonal
// blocks, zero elsewhere. Returns max-norm deviation over Gamma |N|.
template <int D>
double boundary_structure_residual(const plasma_state<D>& U, const eos& e,
                                   const front_point<D>& f) {
  const vec<D> N = f.normal();
  pmat<D> M = -plasma_symmetrizer(U, e) * plasma_boundary_matrix(U, e, f);
  const double G = U.gamma_lorentz();
  pmat<D> E = pmat<D>::Zero();
  E.template block<1, D>(0, 1) = G * N.transpose();
  E.template block<D, 1>(1, 0) = G * N;
  return (M - E).template lpNorm<Eigen::Infinity>() / (G * N.norm());
}

}  // namespace pvi
