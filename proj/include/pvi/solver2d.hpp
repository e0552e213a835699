#pragma once

// Desk-scale finite-difference solver for the coupled plasma/vacuum linear
// problem around a 2D ring background on the straightened half-plane:
// symmetrized interior systems with the zeroth-order coupling terms, the
// two reformulated boundary rows injected strongly at x1 = 0, a sponge
// layer absorbing outgoing waves near x1 = L, the interface transport
// equation for the front, and the Picard loop tying the pieces together.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "pvi/constraint_residuals.hpp"
#include "pvi/error.hpp"
#include "pvi/fd.hpp"
#include "pvi/geometry.hpp"
#include "pvi/grid.hpp"
#include "pvi/linearize.hpp"
#include "pvi/parallel.hpp"
#include "pvi/plasma_system.hpp"
#include "pvi/ring_state.hpp"
#include "pvi/transforms.hpp"
#include "pvi/vacuum_system.hpp"

namespace pvi {

// C2 switch-on profile shared by the forcing ramp and the sponge shape.
inline double quintic_ramp(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

// Symmetrized coefficient matrices frozen on the ring background. They
// depend on x1 only, so one column of nodes describes the whole profile;
// m0 entries hold the inverted time matrices.
struct bold_profile2d {
  std::vector<pmat<2>> a0p, a1p, a2p, a3p, m0p;
  std::vector<vmat<2>> a0m, a1m, a2m, a3m, m0m;
  std::vector<double> sponge_ramp;  // 0 away from x1 = L, 1 at the edge
  double lam1p = 0.0, lam2p = 0.0;  // max generalized wave speeds per side
  double lam1m = 0.0, lam2m = 0.0;
};

inline bold_profile2d assemble_bold_profile2d(const ring2d& ring,
                                              const grid2d& g) {
  bold_profile2d P;
  P.a0p.resize(g.n1);
  P.a1p.resize(g.n1);
  P.a2p.resize(g.n1);
  P.a3p.resize(g.n1);
  P.m0p.resize(g.n1);
  P.a0m.resize(g.n1);
  P.a1m.resize(g.n1);
  P.a2m.resize(g.n1);
  P.a3m.resize(g.n1);
  P.m0m.resize(g.n1);
  P.sponge_ramp.resize(g.n1);
  const front_point<2> flat{};
  for (int i = 0; i < g.n1; ++i) {
    const double x1 = g.x1(i);
    const plasma_state<2> U = ring.plasma(x1);
    const pmat<2> S = plasma_symmetrizer(U, ring.gas);
    const double c = ring.eps / U.gamma_lorentz();
    Eigen::Matrix<double, 6, 2> dUx;
    dUx.col(0) = ring.plasma_d1(x1);
    dUx.col(1).setZero();
    P.a0p[i] = c * S;
    P.a1p[i] = c * S * flux_jacobian(U, ring.gas, 0);
    P.a2p[i] = c * S * flux_jacobian(U, ring.gas, 1);
    P.a3p[i] =
        c * S * plasma_zeroth_order<2>(U, dUx, ring.gas, lift_front(x1, flat, 1));
    P.m0p[i] = P.a0p[i].ldlt().solve(pmat<2>::Identity());

    const vec<2> nu = ring.nu(x1);
    const vmat<2> Sm = vacuum_symmetrizer<2>(nu, ring.eps);
    const vmat<2> J3 = j3_vacuum<2>(nu, ring.eps);
    const vmat<2> dJ3 =
        j3_vacuum<2>(ring.nu_d1(x1), ring.eps) - vmat<2>::Identity();
    const vmat<2> s1 = -Sm * vacuum_aj<2>(0, nu, ring.eps);
    P.a0m[i] = J3.transpose() * (ring.eps * Sm) * J3;
    P.a1m[i] = J3.transpose() * s1 * J3;
    P.a2m[i] = J3.transpose() * (Sm * vacuum_aj<2>(1, nu, ring.eps)) * J3;
    P.a3m[i] = J3.transpose() * s1 * dJ3;
    P.m0m[i] = P.a0m[i].ldlt().solve(vmat<2>::Identity());
    if (!P.m0p[i].allFinite() || !P.m0m[i].allFinite())
      throw hyperbolicity_lost("bold_profile2d: time matrix not invertible");

    P.sponge_ramp[i] = quintic_ramp((x1 - (g.L1 - 2.0)) / 2.0);
  }
  const int opts = Eigen::EigenvaluesOnly | Eigen::Ax_lBx;
  for (int i = 0; i < g.n1; ++i) {
    Eigen::GeneralizedSelfAdjointEigenSolver<pmat<2>> e1(P.a1p[i], P.a0p[i],
                                                         opts);
    Eigen::GeneralizedSelfAdjointEigenSolver<pmat<2>> e2(P.a2p[i], P.a0p[i],
                                                         opts);
    P.lam1p = std::max(P.lam1p, e1.eigenvalues().cwiseAbs().maxCoeff());
    P.lam2p = std::max(P.lam2p, e2.eigenvalues().cwiseAbs().maxCoeff());
    Eigen::GeneralizedSelfAdjointEigenSolver<vmat<2>> f1(P.a1m[i], P.a0m[i],
                                                         opts);
    Eigen::GeneralizedSelfAdjointEigenSolver<vmat<2>> f2(P.a2m[i], P.a0m[i],
                                                         opts);
    P.lam1m = std::max(P.lam1m, f1.eigenvalues().cwiseAbs().maxCoeff());
    P.lam2m = std::max(P.lam2m, f2.eigenvalues().cwiseAbs().maxCoeff());
  }
  return P;
}

inline std::pair<double, int> pick_time_step(double lam1, double lam2,
                                             const grid2d& g, double T,
                                             double cfl) {
  if (!(T > 0.0))
    throw validation_error("solver2d: final time must be positive");
  if (!(cfl > 0.0 && cfl <= 0.9))
    throw cfl_violation("solver2d: cfl outside (0, 0.9]");
  const double rate = lam1 / g.dx1() + lam2 / g.dx2();
  if (!(rate > 0.0)) throw cfl_violation("solver2d: no propagation speed");
  const int steps = std::max(1, static_cast<int>(std::ceil(T * rate / cfl)));
  return {T / steps, steps};
}

// Front samples on a half-step time ladder, so the RK4 stages of the field
// solver can read exact values instead of interpolating.
struct front_history2d {
  double half_dt = 0.0;
  std::vector<Eigen::VectorXd> vals;  // sample k lives at time k * half_dt

  bool empty() const { return vals.empty(); }

  static front_history2d zero(int steps, double dt, int n2) {
    front_history2d f;
    f.half_dt = 0.5 * dt;
    f.vals.assign(2 * steps + 1, Eigen::VectorXd::Zero(n2));
    return f;
  }
};

// Discrete space-time H1 norm on the interface cylinder.
inline double front_h1_norm(const front_history2d& f, double dx2) {
  if (f.empty()) return 0.0;
  const long K = static_cast<long>(f.vals.size());
  const long n2 = f.vals[0].size();
  double s = 0.0;
  for (long k = 0; k < K; ++k) {
    const double wt = (k == 0 || k == K - 1) ? 0.5 : 1.0;
    for (long j = 0; j < n2; ++j) {
      const long jp = (j + 1) % n2, jm = (j + n2 - 1) % n2;
      const double v = f.vals[k](j);
      const double d2 = (f.vals[k](jp) - f.vals[k](jm)) / (2.0 * dx2);
      double dtv = 0.0;
      if (K > 1) {
        if (k == 0)
          dtv = (f.vals[1](j) - f.vals[0](j)) / f.half_dt;
        else if (k == K - 1)
          dtv = (f.vals[K - 1](j) - f.vals[K - 2](j)) / f.half_dt;
        else
          dtv = (f.vals[k + 1](j) - f.vals[k - 1](j)) / (2.0 * f.half_dt);
      }
      s += wt * (v * v + d2 * d2 + dtv * dtv);
    }
  }
  return std::sqrt(s * f.half_dt * dx2);
}

inline double front_h1_distance(const front_history2d& a,
                                const front_history2d& b, double dx2) {
  if (b.empty()) return front_h1_norm(a, dx2);
  if (a.vals.size() != b.vals.size() ||
      (a.vals.size() && a.vals[0].size() != b.vals[0].size()))
    throw shape_mismatch("front_h1_distance: histories differ in shape");
  front_history2d d;
  d.half_dt = a.half_dt;
  d.vals.reserve(a.vals.size());
  for (size_t k = 0; k < a.vals.size(); ++k)
    d.vals.push_back(a.vals[k] - b.vals[k]);
  return front_h1_norm(d, dx2);
}

using plasma_forcing2d = std::function<vec<6>(double t, int i, int j)>;
using vacuum_forcing2d = std::function<vec<3>(double t, int i, int j)>;

// Additive data for the two injected boundary rows, sampled at (t, x2).
struct boundary_data2d {
  std::function<double(double, double)> g1, g2;
};

struct linear_problem2d {
  ring2d ring;
  int n1 = 65;
  int n2 = 64;
  double T = 0.1;
  double cfl = 0.4;
  plasma_forcing2d forcing;  // right-hand side of the symmetrized system
  boundary_data2d bc;
  bool ramp_forcing = true;  // C2 switch-on over the first 5% of [0, T]
  field2d<6> W0;             // optional manufactured start; empty means zero
  field2d<3> w0;
  int threads = 0;

  grid2d grid() const { return grid2d(n1, n2); }
};

// Scalar monitors sampled once per time step; all share the t axis.
struct energy_series2d {
  std::vector<double> t;
  std::vector<double> e0, e_dt, e_sd1, e_d2;  // weighted tangential energies
  std::vector<double> q0, q_dt, q_sd1, q_d2;  // boundary flux forms
  std::vector<double> div_plasma, div_vacuum;  // involution residual sups
};

struct solve_result2d {
  field2d<6> W;
  field2d<3> w;
  front_history2d psi;
  std::vector<Eigen::VectorXd> w2_trace;  // normal-velocity row at x1 = 0
  energy_series2d series;
  std::vector<double> fp_increments, fp_ratios;
  int fp_iterations = 0;
  bool fp_converged = false;
  double dt = 0.0;
  int steps = 0;
};

inline solve_result2d solve_hyperbolic_bvp(
    const linear_problem2d& pb, const front_history2d& psi = front_history2d{}) {
  pb.ring.validate();
  const grid2d g = pb.grid();
  const ring2d& ring = pb.ring;
  const bold_profile2d prof = assemble_bold_profile2d(ring, g);
  const double lam1 = std::max(prof.lam1p, prof.lam1m);
  const double lam2 = std::max(prof.lam2p, prof.lam2m);
  const auto [dt, steps] = pick_time_step(lam1, lam2, g, pb.T, pb.cfl);
  const int nthreads = resolve_threads(pb.threads);

  const bool has_psi = !psi.empty();
  if (has_psi) {
    if (std::abs(2.0 * psi.half_dt - dt) > 1e-12 * dt ||
        static_cast<long>(psi.vals.size()) < 2L * steps + 1 ||
        psi.vals[0].size() != g.n2)
      throw shape_mismatch("solve_hyperbolic_bvp: front history off the grid");
  }

  field2d<6> W(g);
  field2d<3> w(g);
  if (W.a.cols() != w.a.cols())
    throw shape_mismatch("solve_hyperbolic_bvp: field layout mismatch");
  if (pb.W0.a.size()) {
    if (pb.W0.g.n1 != g.n1 || pb.W0.g.n2 != g.n2)
      throw shape_mismatch("solve_hyperbolic_bvp: initial plasma data shape");
    W.a = pb.W0.a;
  }
  if (pb.w0.a.size()) {
    if (pb.w0.g.n1 != g.n1 || pb.w0.g.n2 != g.n2)
      throw shape_mismatch("solve_hyperbolic_bvp: initial vacuum data shape");
    w.a = pb.w0.a;
  }

  const double eps = ring.eps;
  const double hb = ring.hb;
  const double b2 = ring.b2();
  const double b5 = ring.b5();
  const double ramp_span = 0.05 * pb.T;

  auto ramp = [&](double t) {
    return pb.ramp_forcing ? quintic_ramp(t / ramp_span) : 1.0;
  };

  // data scale for the blow-up guard: initial fields, forcing and boundary
  // samples at a handful of times, and the frozen front
  double scale0 = 0.0;
  if (W.a.size()) scale0 = std::max(scale0, W.a.cwiseAbs().maxCoeff());
  if (w.a.size()) scale0 = std::max(scale0, w.a.cwiseAbs().maxCoeff());
  for (int s = 0; s <= 4; ++s) {
    const double ts = pb.T * s / 4.0;
    if (pb.forcing)
      for (int j = 0; j < g.n2; ++j)
        for (int i = 0; i < g.n1; ++i)
          scale0 =
              std::max(scale0, pb.forcing(ts, i, j).cwiseAbs().maxCoeff());
    for (int j = 0; j < g.n2; ++j) {
      if (pb.bc.g1) scale0 = std::max(scale0, std::abs(pb.bc.g1(ts, g.x2(j))));
      if (pb.bc.g2) scale0 = std::max(scale0, std::abs(pb.bc.g2(ts, g.x2(j))));
    }
  }
  if (has_psi)
    for (const auto& v : psi.vals)
      scale0 = std::max(scale0, v.cwiseAbs().maxCoeff());
  const double blow_at = 1e6 * scale0;

  auto apply_bc = [&](field2d<6>& A, field2d<3>& B, double t, long pk) {
    for (int j = 0; j < g.n2; ++j) {
      const double ps = has_psi ? psi.vals[pk](j) : 0.0;
      const double d1 = pb.bc.g1 ? pb.bc.g1(t, g.x2(j)) : 0.0;
      const double d2 = pb.bc.g2 ? pb.bc.g2(t, g.x2(j)) : 0.0;
      A.col(0, j)(0) = hb * B.col(0, j)(1) - b2 * ps + d1;
      B.col(0, j)(2) = -eps * hb * A.col(0, j)(1) + b5 * ps + d2;
    }
  };

  const double h1 = g.dx1(), h2 = g.dx2();
  auto rhs = [&](const field2d<6>& A, const field2d<3>& B, double t,
                 field2d<6>& KA, field2d<3>& KB) {
    const double r = pb.forcing ? ramp(t) : 0.0;
    const bool has_f = static_cast<bool>(pb.forcing);
    parallel_for(g.n2, nthreads, [&](long lj) {
      const int j = static_cast<int>(lj);
      const int jp = g.jp(j), jm = g.jm(j);
      for (int i = 0; i < g.n1; ++i) {
        vec<6> d1W, d2W;
        vec<3> d1w, d2w;
        if (i == 0) {
          d1W = (-3.0 * A.col(0, j) + 4.0 * A.col(1, j) - A.col(2, j)) /
                (2.0 * h1);
          d1w = (-3.0 * B.col(0, j) + 4.0 * B.col(1, j) - B.col(2, j)) /
                (2.0 * h1);
        } else if (i == g.n1 - 1) {
          d1W = (3.0 * A.col(i, j) - 4.0 * A.col(i - 1, j) + A.col(i - 2, j)) /
                (2.0 * h1);
          d1w = (3.0 * B.col(i, j) - 4.0 * B.col(i - 1, j) + B.col(i - 2, j)) /
                (2.0 * h1);
        } else {
          d1W = (A.col(i + 1, j) - A.col(i - 1, j)) / (2.0 * h1);
          d1w = (B.col(i + 1, j) - B.col(i - 1, j)) / (2.0 * h1);
        }
        d2W = (A.col(i, jp) - A.col(i, jm)) / (2.0 * h2);
        d2w = (B.col(i, jp) - B.col(i, jm)) / (2.0 * h2);
        vec<6> resW = -(prof.a1p[i] * d1W) - prof.a2p[i] * d2W -
                      prof.a3p[i] * A.col(i, j);
        vec<3> resw = -(prof.a1m[i] * d1w) - prof.a2m[i] * d2w -
                      prof.a3m[i] * B.col(i, j);
        if (has_f) resW += r * pb.forcing(t, i, j);
        const double sp = prof.lam1p * prof.sponge_ramp[i];
        const double sm = prof.lam1m * prof.sponge_ramp[i];
        KA.col(i, j) = prof.m0p[i] * resW - sp * A.col(i, j);
        KB.col(i, j) = prof.m0m[i] * resw - sm * B.col(i, j);
      }
    });
  };

  auto weighted_energy = [&](const field2d<6>& A, const field2d<3>& B,
                             bool sigma_scaled) {
    double s = 0.0;
    for (int j = 0; j < g.n2; ++j)
      for (int i = 0; i < g.n1; ++i) {
        const double wt = (i == 0 || i == g.n1 - 1) ? 0.5 : 1.0;
        const double sc = sigma_scaled ? sigma_weight(g.x1(i)) : 1.0;
        const auto Ac = A.col(i, j);
        const auto Bc = B.col(i, j);
        s += wt * sc * sc *
             (Ac.dot(prof.a0p[i] * Ac) + Bc.dot(prof.a0m[i] * Bc));
      }
    return s * h1 * h2;
  };
  auto boundary_flux = [&](const field2d<6>& A, const field2d<3>& B) {
    double s = 0.0;
    for (int j = 0; j < g.n2; ++j) {
      const auto Ac = A.col(0, j);
      const auto Bc = B.col(0, j);
      s += 2.0 * eps * Ac(0) * Ac(1) + 2.0 * Bc(1) * Bc(2);
    }
    return s * h2;
  };

  solve_result2d out;
  out.dt = dt;
  out.steps = steps;
  out.psi = has_psi ? psi : front_history2d::zero(steps, dt, g.n2);
  auto& se = out.series;
  se.t.reserve(steps + 1);
  out.w2_trace.reserve(steps + 1);

  field2d<6> Y6(g), K16(g), K26(g), K36(g), K46(g), prevW(g), s6(g);
  field2d<3> Y3(g), K13(g), K23(g), K33(g), K43(g), prevw(g), s3(g);

  auto record = [&](int n) {
    const double t = n * dt;
    se.t.push_back(t);
    Eigen::VectorXd tr(g.n2);
    for (int j = 0; j < g.n2; ++j) tr(j) = W.col(0, j)(1);
    out.w2_trace.push_back(std::move(tr));

    se.e0.push_back(weighted_energy(W, w, false));
    se.q0.push_back(boundary_flux(W, w));
    dx2(W, s6);
    dx2(w, s3);
    se.e_d2.push_back(weighted_energy(s6, s3, false));
    se.q_d2.push_back(boundary_flux(s6, s3));
    dx1(W, s6);
    dx1(w, s3);
    se.e_sd1.push_back(weighted_energy(s6, s3, true));
    se.q_sd1.push_back(0.0);  // the x1 weight vanishes on the interface
    if (n == 0) {
      se.e_dt.push_back(0.0);
      se.q_dt.push_back(0.0);
    } else {
      s6.a = (W.a - prevW.a) / dt;
      s3.a = (w.a - prevw.a) / dt;
      se.e_dt.push_back(weighted_energy(s6, s3, false));
      se.q_dt.push_back(boundary_flux(s6, s3));
    }
    prevW.a = W.a;
    prevw.a = w.a;

    const auto rp = interior_divergence_residual(extract_component(W, 3),
                                                 extract_component(W, 4), 1.0);
    const auto rv = interior_divergence_residual(extract_component(w, 0),
                                                 extract_component(w, 1), -1.0);
    se.div_plasma.push_back(rp.a.cwiseAbs().maxCoeff());
    se.div_vacuum.push_back(rv.a.cwiseAbs().maxCoeff());

    double sup = 0.0;
    if (W.a.size()) sup = std::max(sup, W.a.cwiseAbs().maxCoeff());
    if (w.a.size()) sup = std::max(sup, w.a.cwiseAbs().maxCoeff());
    if (sup > blow_at)
      throw unstable_blowup("solve_hyperbolic_bvp: blow-up at step " +
                            std::to_string(n));
  };

  apply_bc(W, w, 0.0, 0);
  record(0);
  for (int n = 0; n < steps; ++n) {
    const double t = n * dt;
    rhs(W, w, t, K16, K13);
    Y6.a = W.a + 0.5 * dt * K16.a;
    Y3.a = w.a + 0.5 * dt * K13.a;
    apply_bc(Y6, Y3, t + 0.5 * dt, 2L * n + 1);
    rhs(Y6, Y3, t + 0.5 * dt, K26, K23);
    Y6.a = W.a + 0.5 * dt * K26.a;
    Y3.a = w.a + 0.5 * dt * K23.a;
    apply_bc(Y6, Y3, t + 0.5 * dt, 2L * n + 1);
    rhs(Y6, Y3, t + 0.5 * dt, K36, K33);
    Y6.a = W.a + dt * K36.a;
    Y3.a = w.a + dt * K33.a;
    apply_bc(Y6, Y3, t + dt, 2L * n + 2);
    rhs(Y6, Y3, t + dt, K46, K43);
    W.a += (dt / 6.0) * (K16.a + 2.0 * K26.a + 2.0 * K36.a + K46.a);
    w.a += (dt / 6.0) * (K13.a + 2.0 * K23.a + 2.0 * K33.a + K43.a);
    apply_bc(W, w, t + dt, 2L * n + 2);
    record(n + 1);
  }

  out.W = std::move(W);
  out.w = std::move(w);
  return out;
}

// Interface transport with the interface-trace coefficients of the ring:
// Heun steps on the half-dt ladder, centered differences in x2 (the
// advective step fraction is far below one here, and the converged front
// has to satisfy the boundary rows at second order), linear interpolation
// of the forcing trace between field-solver samples.
inline front_history2d transport_front(const std::vector<Eigen::VectorXd>& w2,
                                       const ring2d& ring, double dt,
                                       const grid2d& g) {
  if (w2.size() < 2)
    throw validation_error("transport_front: need at least two time samples");
  for (const auto& v : w2)
    if (v.size() != g.n2)
      throw shape_mismatch("transport_front: trace width off the grid");
  const int steps = static_cast<int>(w2.size()) - 1;
  const double b1 = ring.b1();
  const double v2 = ring.trace().U.v(1);
  const double h = 0.5 * dt, hx = g.dx2();

  auto w2_at = [&](double t) -> Eigen::VectorXd {
    const double s = t / dt;
    int k = static_cast<int>(std::floor(s + 1e-9));
    if (k >= steps) return w2[steps];
    const double fr = s - k;
    if (fr <= 1e-9) return w2[k];
    return (1.0 - fr) * w2[k] + fr * w2[k + 1];
  };
  auto rate = [&](const Eigen::VectorXd& p, double t) {
    Eigen::VectorXd r = w2_at(t) - b1 * p;
    for (int j = 0; j < g.n2; ++j)
      r(j) -= v2 * (p(g.jp(j)) - p(g.jm(j))) / (2.0 * hx);
    return r;
  };

  front_history2d out;
  out.half_dt = h;
  out.vals.reserve(2 * steps + 1);
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(g.n2);
  out.vals.push_back(phi);
  for (int k = 0; k < 2 * steps; ++k) {
    const double t = k * h;
    const Eigen::VectorXd k1 = rate(phi, t);
    const Eigen::VectorXd k2 = rate(phi + h * k1, t + h);
    phi += 0.5 * h * (k1 + k2);
    out.vals.push_back(phi);
  }
  return out;
}

inline solve_result2d fixed_point_solve(const linear_problem2d& pb) {
  const grid2d g = pb.grid();
  front_history2d psi;  // empty history: the first sweep freezes the front
  solve_result2d r;
  std::vector<double> incs, ratios;
  bool converged = false;
  int iters = 0;
  while (iters < 50) {
    r = solve_hyperbolic_bvp(pb, psi);
    ++iters;
    front_history2d phi = transport_front(r.w2_trace, pb.ring, r.dt, g);
    const double inc = front_h1_distance(phi, psi, g.dx2());
    incs.push_back(inc);
    if (incs.size() >= 2)
      ratios.push_back(inc / std::max(incs[incs.size() - 2], 1e-300));
    double tr = 0.0;
    for (const auto& v : r.w2_trace)
      tr = std::max(tr, std::sqrt(v.squaredNorm() * g.dx2()));
    const double scale = std::max({front_h1_norm(phi, g.dx2()), tr, 1e-30});
    psi = std::move(phi);
    if (inc <= 1e-10 * scale) {
      converged = true;
      break;
    }
    if (iters >= 10) {
      bool contracting = false;
      for (double q : ratios) contracting = contracting || q < 1.0;
      if (!contracting)
        throw no_contraction(
            "fixed_point_solve: front iteration not contracting");
    }
  }
  r.psi = std::move(psi);
  r.fp_increments = std::move(incs);
  r.fp_ratios = std::move(ratios);
  r.fp_iterations = iters;
  r.fp_converged = converged;
  return r;
}

// Energy and flux series grouped per tangential derivative weight.
struct monitor_series2d {
  std::vector<double> t;
  std::vector<std::string> labels;
  std::vector<std::vector<double>> energy, flux;
};

inline monitor_series2d energy_monitor(const solve_result2d& r, int m) {
  if (m < 0 || m > 1)
    throw validation_error("energy_monitor: tangential order must be 0 or 1");
  monitor_series2d out;
  out.t = r.series.t;
  out.labels = {"1"};
  out.energy = {r.series.e0};
  out.flux = {r.series.q0};
  if (m == 1) {
    out.labels.insert(out.labels.end(), {"dt", "sigma d1", "d2"});
    out.energy.insert(out.energy.end(),
                      {r.series.e_dt, r.series.e_sd1, r.series.e_d2});
    out.flux.insert(out.flux.end(),
                    {r.series.q_dt, r.series.q_sd1, r.series.q_d2});
  }
  return out;
}

// Least-squares slope of log(max(E, floor)) against t.
inline double fit_exponential_rate(const std::vector<double>& t,
                                   const std::vector<double>& e,
                                   double floor = 1e-300) {
  if (t.size() != e.size())
    throw shape_mismatch("fit_exponential_rate: series lengths differ");
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  long n = 0;
  for (size_t k = 0; k < t.size(); ++k) {
    const double y = std::log(std::max(e[k], floor));
    st += t[k];
    sy += y;
    stt += t[k] * t[k];
    sty += t[k] * y;
    ++n;
  }
  const double den = n * stt - st * st;
  if (!(std::abs(den) > 0.0)) return 0.0;
  return (n * sty - st * sy) / den;
}

// Vacuum-side problem with the homogeneous boundary row, as produced by
// the auxiliary-function reduction of inhomogeneous vacuum data.
struct vacuum_only_problem2d {
  ring2d ring;
  int n1 = 65;
  int n2 = 64;
  double T = 0.1;
  double cfl = 0.4;
  vacuum_forcing2d forcing;
  bool ramp_forcing = true;
  field2d<3> w0;
  int threads = 0;

  grid2d grid() const { return grid2d(n1, n2); }
};

struct vacuum_only_result2d {
  field2d<3> w;
  std::vector<Eigen::VectorXd> w1_trace;  // normal field trace per step
  std::vector<double> t;
  double dt = 0.0;
  int steps = 0;
};

inline vacuum_only_result2d solve_vacuum_only(const vacuum_only_problem2d& pb) {
  pb.ring.validate();
  const grid2d g = pb.grid();
  const bold_profile2d prof = assemble_bold_profile2d(pb.ring, g);
  const auto [dt, steps] = pick_time_step(prof.lam1m, prof.lam2m, g, pb.T,
                                          pb.cfl);
  const int nthreads = resolve_threads(pb.threads);
  const double ramp_span = 0.05 * pb.T;

  field2d<3> w(g);
  if (pb.w0.a.size()) {
    if (pb.w0.g.n1 != g.n1 || pb.w0.g.n2 != g.n2)
      throw shape_mismatch("solve_vacuum_only: initial data shape");
    w.a = pb.w0.a;
  }

  double scale0 = w.a.size() ? w.a.cwiseAbs().maxCoeff() : 0.0;
  if (pb.forcing)
    for (int s = 0; s <= 4; ++s)
      for (int j = 0; j < g.n2; ++j)
        for (int i = 0; i < g.n1; ++i)
          scale0 = std::max(
              scale0, pb.forcing(pb.T * s / 4.0, i, j).cwiseAbs().maxCoeff());
  const double blow_at = 1e6 * scale0;

  auto apply_bc = [&](field2d<3>& B) {
    for (int j = 0; j < g.n2; ++j) B.col(0, j)(2) = 0.0;
  };
  const double h1 = g.dx1(), h2 = g.dx2();
  auto rhs = [&](const field2d<3>& B, double t, field2d<3>& KB) {
    const double r =
        pb.forcing ? (pb.ramp_forcing ? quintic_ramp(t / ramp_span) : 1.0)
                   : 0.0;
    const bool has_f = static_cast<bool>(pb.forcing);
    parallel_for(g.n2, nthreads, [&](long lj) {
      const int j = static_cast<int>(lj);
      const int jp = g.jp(j), jm = g.jm(j);
      for (int i = 0; i < g.n1; ++i) {
        vec<3> d1w;
        if (i == 0)
          d1w = (-3.0 * B.col(0, j) + 4.0 * B.col(1, j) - B.col(2, j)) /
                (2.0 * h1);
        else if (i == g.n1 - 1)
          d1w = (3.0 * B.col(i, j) - 4.0 * B.col(i - 1, j) + B.col(i - 2, j)) /
                (2.0 * h1);
        else
          d1w = (B.col(i + 1, j) - B.col(i - 1, j)) / (2.0 * h1);
        const vec<3> d2w = (B.col(i, jp) - B.col(i, jm)) / (2.0 * h2);
        vec<3> res = -(prof.a1m[i] * d1w) - prof.a2m[i] * d2w -
                     prof.a3m[i] * B.col(i, j);
        if (has_f) res += r * pb.forcing(t, i, j);
        KB.col(i, j) = prof.m0m[i] * res -
                       prof.lam1m * prof.sponge_ramp[i] * B.col(i, j);
      }
    });
  };

  vacuum_only_result2d out;
  out.dt = dt;
  out.steps = steps;
  field2d<3> Y(g), K1(g), K2(g), K3(g), K4(g);
  auto record = [&](int n) {
    out.t.push_back(n * dt);
    Eigen::VectorXd tr(g.n2);
    for (int j = 0; j < g.n2; ++j) tr(j) = w.col(0, j)(0);
    out.w1_trace.push_back(std::move(tr));
    const double sup = w.a.size() ? w.a.cwiseAbs().maxCoeff() : 0.0;
    if (sup > blow_at)
      throw unstable_blowup("solve_vacuum_only: blow-up at step " +
                            std::to_string(n));
  };

  apply_bc(w);
  record(0);
  for (int n = 0; n < steps; ++n) {
    const double t = n * dt;
    rhs(w, t, K1);
    Y.a = w.a + 0.5 * dt * K1.a;
    apply_bc(Y);
    rhs(Y, t + 0.5 * dt, K2);
    Y.a = w.a + 0.5 * dt * K2.a;
    apply_bc(Y);
    rhs(Y, t + 0.5 * dt, K3);
    Y.a = w.a + dt * K3.a;
    apply_bc(Y);
    rhs(Y, t + dt, K4);
    w.a += (dt / 6.0) * (K1.a + 2.0 * K2.a + 2.0 * K3.a + K4.a);
    apply_bc(w);
    record(n + 1);
  }
  out.w = std::move(w);
  return out;
}

}  // namespace pvi
