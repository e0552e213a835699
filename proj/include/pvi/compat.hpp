#pragma once

// Time-derivative traces of interface initial data, and the compatibility
// residuals that decide whether those data admit a smooth short-time
// solution.
//
// Given (U0, u0, phi0) the evolution equations determine the higher time
// derivatives at t = 0: the front rate phi_(j+1) comes from the kinematic
// boundary row, the field rates U_(j), u_(j) from the straightened interior
// operators.  compat_check() then evaluates the pressure-balance row and the
// electric-field row of the boundary conditions order by order; data are
// compatible to order m when those residuals vanish.

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "pvi/error.hpp"
#include "pvi/fd.hpp"
#include "pvi/geometry.hpp"
#include "pvi/grid.hpp"
#include "pvi/linearize.hpp"

namespace pvi {

// Field and front time derivatives at t = 0.  U[j], u[j] hold the j-th
// derivative for j = 0..order; phi has one extra entry, phi[order + 1],
// because the electric-field compatibility row at order j reads the front
// rate of order j + 1.
struct trace_set2d {
  grid2d g;
  double eps = 1.0;
  std::vector<field2d<6>> U;
  std::vector<field2d<3>> u;
  std::vector<Eigen::VectorXd> phi;

  int order() const { return static_cast<int>(U.size()) - 1; }
};

namespace detail {

inline Eigen::VectorXd d2_periodic(const Eigen::VectorXd& f, double h) {
  const int n = static_cast<int>(f.size());
  Eigen::VectorXd out(n);
  for (int j = 0; j < n; ++j)
    out(j) = (f((j + 1) % n) - f((j + n - 1) % n)) / (2.0 * h);
  return out;
}

inline double binom(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

}  // namespace detail

inline trace_set2d trace_recursion(const field2d<6>& U0, const field2d<3>& u0,
                                   const Eigen::VectorXd& phi0, const eos& gas,
                                   double eps, int m) {
  if (m < 0 || m > 2)
    throw validation_error("trace_recursion: order must be 0, 1 or 2");
  if (!(eps > 0.0)) throw validation_error("trace_recursion: eps must be > 0");
  const grid2d g = U0.g;
  if (u0.g.n1 != g.n1 || u0.g.n2 != g.n2 ||
      phi0.size() != static_cast<long>(g.n2))
    throw shape_mismatch("trace_recursion: field and front shapes disagree");

  trace_set2d tr{g, eps, {U0}, {u0}, {phi0}};
  const Eigen::VectorXd d2phi0 = detail::d2_periodic(phi0, g.dx2());

  auto state_at = [&](const field2d<6>& U, int i, int j) {
    auto st = plasma_state<2>::from_vector(U.col(i, j), eps);
    if (!(eps * st.v.norm() < 1.0))
      throw hyperbolicity_lost("trace_recursion: eps|v| >= 1 at node (" +
                               std::to_string(i) + ", " + std::to_string(j) +
                               ")");
    return st;
  };

  // Kinematic row: phi_(1) = v1 - d2(phi0) v2 on the interface.
  Eigen::VectorXd phi1(g.n2);
  for (int j = 0; j < g.n2; ++j) {
    const auto st = state_at(U0, 0, j);
    phi1(j) = st.v(0) - d2phi0(j) * st.v(1);
  }
  tr.phi.push_back(phi1);
  if (m == 0) return tr;

  const Eigen::VectorXd d2phi1 = detail::d2_periodic(phi1, g.dx2());
  const field2d<6> d1U0 = dx1(U0), d2U0 = dx2(U0);
  const field2d<3> d1u0 = dx1(u0), d2u0 = dx2(u0);
  field2d<6> U1(g);
  field2d<3> u1(g);
  try {
    for (int j = 0; j < g.n2; ++j) {
      const front_point<2> fr{phi0(j), phi1(j), vec<1>(d2phi0(j))};
      const vec<2> vt = U0.col(0, j).segment<2>(1);
      for (int i = 0; i < g.n1; ++i) {
        const double x1 = g.x1(i);
        const auto st = state_at(U0, i, j);
        const auto Lp = lift_front<2>(x1, fr, +1);
        U1.col(i, j) = -(plasma_a1_straightened(st, gas, Lp) * d1U0.col(i, j) +
                         flux_jacobian(st, gas, 1) * d2U0.col(i, j));
        const vec<2> nu = chi_cutoff(x1) * vt;
        const auto Lm = lift_front<2>(x1, fr, -1);
        u1.col(i, j) =
            -(vacuum_a1_straightened<2>(nu, eps, Lm) * d1u0.col(i, j) +
              vacuum_aj<2>(1, nu, eps) * d2u0.col(i, j)) /
            eps;
      }
    }
  } catch (const out_of_window& err) {
    throw hyperbolicity_lost(std::string("trace_recursion: ") + err.what());
  } catch (const no_root& err) {
    throw hyperbolicity_lost(std::string("trace_recursion: ") + err.what());
  } catch (const degenerate_jacobian& err) {
    throw hyperbolicity_lost(std::string("trace_recursion: ") + err.what());
  }
  tr.U.push_back(U1);
  tr.u.push_back(u1);

  Eigen::VectorXd phi2(g.n2);
  for (int j = 0; j < g.n2; ++j)
    phi2(j) = U1.col(0, j)(1) - d2phi1(j) * U0.col(0, j)(2) -
              d2phi0(j) * U1.col(0, j)(2);
  tr.phi.push_back(phi2);
  if (m == 1) return tr;

  const Eigen::VectorXd d2phi2 = detail::d2_periodic(phi2, g.dx2());
  const field2d<6> d1U1 = dx1(U1), d2U1 = dx2(U1);
  const field2d<3> d1u1 = dx1(u1), d2u1 = dx2(u1);
  field2d<6> U2(g);
  field2d<3> u2(g);
  try {
    for (int j = 0; j < g.n2; ++j) {
      const front_point<2> fr{phi0(j), phi1(j), vec<1>(d2phi0(j))};
      const vec<2> vt = U0.col(0, j).segment<2>(1);
      const vec<2> vt_dot = U1.col(0, j).segment<2>(1);
      for (int i = 0; i < g.n1; ++i) {
        const double x1 = g.x1(i);
        const double c = chi_cutoff(x1), cp = chi_cutoff_prime(x1);
        const auto st = state_at(U0, i, j);
        const auto Lp = lift_front<2>(x1, fr, +1);
        const auto Lm = lift_front<2>(x1, fr, -1);

        // Rate of change of the lift: dt -> phi_(2), d1 -> chi' phi_(1),
        // tangential slope -> d2 phi_(1).
        const double ddt = c * phi2(j);
        const double dd1 = cp * phi1(j);
        const double dgr = c * d2phi1(j);

        const pmat<2> A1t = plasma_a1_straightened(st, gas, Lp);
        const pmat<2> A2 = flux_jacobian(st, gas, 1);
        pmat<2> dA1t = pmat<2>::Zero();
        pmat<2> dA2 = pmat<2>::Zero();
        for (int k = 0; k < 6; ++k) {
          const double rk = U1.col(i, j)(k);
          if (rk == 0.0) continue;
          dA1t += rk * plasma_a1_straightened_derivative(st, gas, Lp, k);
          dA2 += rk * flux_jacobian_derivative(st, gas, 1, k);
        }
        dA1t += (-ddt * pmat<2>::Identity() - dgr * A2) / Lp.d1 -
                A1t * (dd1 / Lp.d1);
        U2.col(i, j) = -(dA1t * d1U0.col(i, j) + A1t * d1U1.col(i, j) +
                         dA2 * d2U0.col(i, j) + A2 * d2U1.col(i, j));

        const vec<2> nu = c * vt;
        const vec<2> nu_dot = c * vt_dot;
        const vmat<2> A1tv = vacuum_a1_straightened<2>(nu, eps, Lm);
        const vmat<2> A2v = vacuum_aj<2>(1, nu, eps);
        // The vacuum coefficients are affine in nu, so the state part of the
        // rate is an exact difference; the lift part mirrors the plasma side
        // with the slow clock eps dt.
        vmat<2> dA1tv =
            (vacuum_aj<2>(0, nu_dot, eps) - vacuum_bj<2>(0) -
             Lm.grad(0) * (vacuum_aj<2>(1, nu_dot, eps) - vacuum_bj<2>(1))) /
            Lm.d1;
        dA1tv += (-eps * ddt * vmat<2>::Identity() - dgr * A2v) / Lm.d1 -
                 A1tv * (dd1 / Lm.d1);
        const vmat<2> dA2v = vacuum_aj<2>(1, nu_dot, eps) - vacuum_bj<2>(1);
        u2.col(i, j) = -(dA1tv * d1u0.col(i, j) + A1tv * d1u1.col(i, j) +
                         dA2v * d2u0.col(i, j) + A2v * d2u1.col(i, j)) /
                       eps;
      }
    }
  } catch (const out_of_window& err) {
    throw hyperbolicity_lost(std::string("trace_recursion: ") + err.what());
  } catch (const no_root& err) {
    throw hyperbolicity_lost(std::string("trace_recursion: ") + err.what());
  } catch (const degenerate_jacobian& err) {
    throw hyperbolicity_lost(std::string("trace_recursion: ") + err.what());
  }
  tr.U.push_back(U2);
  tr.u.push_back(u2);

  Eigen::VectorXd phi3(g.n2);
  for (int j = 0; j < g.n2; ++j)
    phi3(j) = U2.col(0, j)(1) - d2phi2(j) * U0.col(0, j)(2) -
              2.0 * d2phi1(j) * U1.col(0, j)(2) - d2phi0(j) * U2.col(0, j)(2);
  tr.phi.push_back(phi3);
  return tr;
}

// Interface compatibility residuals, order by order.  q_row[j] is the j-th
// time derivative of the pressure-balance defect 2q - |h|^2 + e^2 on the
// interface; e_row[j] the defect of the electric-field row.  Both should
// vanish for data that launch a smooth solution.
struct compat_residuals {
  std::vector<Eigen::VectorXd> q_row;
  std::vector<Eigen::VectorXd> e_row;

  double sup() const {
    double s = 0.0;
    for (const auto& r : q_row) s = std::max(s, r.cwiseAbs().maxCoeff());
    for (const auto& r : e_row) s = std::max(s, r.cwiseAbs().maxCoeff());
    return s;
  }
};

inline compat_residuals compat_check(const trace_set2d& tr, int m) {
  if (m < 0 || m > tr.order())
    throw validation_error(
        "compat_check: requested order exceeds the available traces");
  const int n2 = tr.g.n2;
  auto qv = [&](int j, int k) { return tr.U[j].col(0, k)(0); };
  auto h1 = [&](int j, int k) { return tr.u[j].col(0, k)(0); };
  auto h2 = [&](int j, int k) { return tr.u[j].col(0, k)(1); };
  auto ev = [&](int j, int k) { return tr.u[j].col(0, k)(2); };

  compat_residuals out;
  for (int j = 0; j <= m; ++j) {
    Eigen::VectorXd rq(n2), re(n2);
    for (int k = 0; k < n2; ++k) {
      if (j == 0) {
        rq(k) = 2.0 * qv(0, k) - h1(0, k) * h1(0, k) - h2(0, k) * h2(0, k) +
                ev(0, k) * ev(0, k);
      } else {
        double s = 0.0;
        for (int i = 0; i <= j - 1; ++i)
          s += detail::binom(j - 1, i) *
               (h1(i, k) * h1(j - i, k) + h2(i, k) * h2(j - i, k) -
                ev(i, k) * ev(j - i, k));
        rq(k) = qv(j, k) - s;
      }
      double se = 0.0;
      for (int i = 0; i <= j; ++i)
        se += detail::binom(j, i) * tr.phi[i + 1](k) * h2(j - i, k);
      re(k) = ev(j, k) + tr.eps * se;
    }
    out.q_row.push_back(rq);
    out.e_row.push_back(re);
  }
  return out;
}

}  // namespace pvi
