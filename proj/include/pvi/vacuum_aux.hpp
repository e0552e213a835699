#pragma once

// Reduction of an inhomogeneous vacuum half-problem to one with homogeneous
// boundary rows.  Given interior forcing f, the tangential boundary trace g3
// and its time derivative, the normal-trace target g5 is the time integral
// of the first forcing row along the interface.  Subtracting the lifted pair
// u_sharp = chi(x1) (g5, 0, g3) moves both boundary rows into the interior
// forcing, so the remaining field can be solved with the plain reflecting
// condition of solve_vacuum_only; its returned normal trace then measures
// the defect h.N - g5 directly.
//
// The forcing assembled here is the symmetrized right-hand side (boundary
// transform applied), which is exactly what solve_vacuum_only consumes; the
// caller's f must already be smooth at t = 0, so the internal ramp is off.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <vector>

#include "pvi/error.hpp"
#include "pvi/solver2d.hpp"
#include "pvi/transforms.hpp"
#include "pvi/vacuum_system.hpp"

namespace pvi {

struct vacuum_aux2d {
  double eps = 1.0;
  double tau = 0.0;  // ladder spacing of the integrated trace
  Eigen::MatrixXd g5;  // (nt + 1) x n2 samples of the integrated trace
  std::function<vec<3>(double, int, int)> u_sharp;
  vacuum_only_problem2d problem;
};

inline vacuum_aux2d vacuum_aux_reduce(
    const std::function<vec<3>(double, int, int)>& f,
    const std::function<double(double, double)>& g3,
    const std::function<double(double, double)>& g3_dt, const ring2d& ring,
    int n1, int n2, double T, double cfl = 0.4) {
  if (!f || !g3 || !g3_dt)
    throw validation_error("vacuum_aux_reduce: missing data callbacks");
  const grid2d g(n1, n2);
  const double eps = ring.eps;
  const auto prof = assemble_bold_profile2d(ring, g);
  const auto [dt, steps] = pick_time_step(prof.lam1m, prof.lam2m, g, T, cfl);
  (void)dt;
  const int nt = 2 * steps;
  const double tau = T / nt;
  const double h2 = g.dx2();

  // Integrand of the normal-trace target: first forcing row on the
  // interface minus the tangential slope of g3 (the ring front is flat).
  auto rho = [f, g3, eps, g, h2](double t, int j) {
    const double dg3 =
        (g3(t, g.x2(g.jp(j))) - g3(t, g.x2(g.jm(j)))) / (2.0 * h2);
    return (f(t, 0, j)(0) - dg3) / eps;
  };

  Eigen::MatrixXd G5 = Eigen::MatrixXd::Zero(nt + 1, n2);
  {
    Eigen::VectorXd prev(n2), cur(n2);
    for (int j = 0; j < n2; ++j) prev(j) = rho(0.0, j);
    for (int k = 0; k < nt; ++k) {
      const double tk1 = (k + 1) * tau;
      for (int j = 0; j < n2; ++j) cur(j) = rho(tk1, j);
      G5.row(k + 1) = G5.row(k) + 0.5 * tau * (prev + cur).transpose();
      prev.swap(cur);
    }
  }

  auto g5_at = [G5, tau, nt, T](double t, int j) {
    const double s = std::min(std::max(t, 0.0), T) / tau;
    const int k = std::min(static_cast<int>(s), nt - 1);
    const double w = s - k;
    return (1.0 - w) * G5(k, j) + w * G5(k + 1, j);
  };

  std::vector<double> ch(n1), chp(n1);
  std::vector<vmat<2>> a1m(n1), a2m(n1), bold(n1);
  for (int i = 0; i < n1; ++i) {
    const double x1 = g.x1(i);
    ch[i] = chi_cutoff(x1);
    chp[i] = chi_cutoff_prime(x1);
    const vec<2> nu = ring.nu(x1);
    a1m[i] = -vacuum_aj<2>(0, nu, eps);
    a2m[i] = vacuum_aj<2>(1, nu, eps);
    bold[i] = j3_vacuum<2>(nu, eps).transpose() * vacuum_symmetrizer<2>(nu, eps);
  }

  auto u_sharp = [g5_at, g3, ch, g](double t, int i, int j) {
    return vec<3>(ch[i] * g5_at(t, j), 0.0, ch[i] * g3(t, g.x2(j)));
  };

  auto forcing = [f, g3, g3_dt, rho, g5_at, ch, chp, a1m, a2m, bold, eps, g,
                  h2](double t, int i, int j) {
    const double x2 = g.x2(j);
    const double g5v = g5_at(t, j);
    const double g3v = g3(t, x2);
    const vec<3> ut(ch[i] * rho(t, j), 0.0, ch[i] * g3_dt(t, x2));
    const vec<3> u1(chp[i] * g5v, 0.0, chp[i] * g3v);
    const double dg5 = (g5_at(t, g.jp(j)) - g5_at(t, g.jm(j))) / (2.0 * h2);
    const double dg3 =
        (g3(t, g.x2(g.jp(j))) - g3(t, g.x2(g.jm(j)))) / (2.0 * h2);
    const vec<3> u2(ch[i] * dg5, 0.0, ch[i] * dg3);
    const vec<3> ft = f(t, i, j) - eps * ut - a1m[i] * u1 - a2m[i] * u2;
    return vec<3>(bold[i] * ft);
  };

  vacuum_aux2d out;
  out.eps = eps;
  out.tau = tau;
  out.g5 = G5;
  out.u_sharp = u_sharp;
  out.problem.ring = ring;
  out.problem.n1 = n1;
  out.problem.n2 = n2;
  out.problem.T = T;
  out.problem.cfl = cfl;
  out.problem.forcing = forcing;
  out.problem.ramp_forcing = false;
  out.problem.w0 = field2d<3>(g);
  return out;
}

}  // namespace pvi
