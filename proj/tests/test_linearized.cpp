#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "pvi/boundary.hpp"
#include "pvi/constraint_residuals.hpp"
#include "pvi/linearize.hpp"
#include "pvi/random_states.hpp"
#include "pvi/ring_state.hpp"
#include "pvi/rng.hpp"
#include "pvi/transforms.hpp"

using namespace pvi;

namespace {

// least-squares slope of log(err) against log(delta)
double loglog_slope(const std::vector<double>& deltas,
                    const std::vector<double>& errs) {
  const int n = static_cast<int>(deltas.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double x = std::log(deltas[i]), y = std::log(errs[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

template <int D>
interface_background<D> random_background(rng& r, const eos& gas) {
  interface_background<D> bg;
  bg.U = random_plasma_state<D>(r);
  bg.u = random_vacuum_state<D>(r);
  bg.f = random_front<D>(r);
  make_compatible<D>(bg.U, bg.u, bg.f, gas);
  return bg;
}

template <int D>
interface_background_d1<D> random_trace_d1(rng& r) {
  interface_background_d1<D> d1;
  for (int k = 0; k < 2 * D + 2; ++k) d1.dU(k) = r.uniform(-1.0, 1.0);
  for (int k = 0; k < 3 * D - 3; ++k) d1.du(k) = r.uniform(-1.0, 1.0);
  return d1;
}

template <int D>
front_point<D> random_front_dir(rng& r) {
  front_point<D> psi;
  psi.phi = r.uniform(-1.0, 1.0);
  psi.dt = r.uniform(-1.0, 1.0);
  for (int j = 0; j < D - 1; ++j) psi.grad(j) = r.uniform(-1.0, 1.0);
  return psi;
}

template <int D>
front_point<D> front_add(const front_point<D>& f, const front_point<D>& g,
                         double s) {
  front_point<D> out;
  out.phi = f.phi + s * g.phi;
  out.dt = f.dt + s * g.dt;
  out.grad = f.grad + s * g.grad;
  return out;
}

}  // namespace

TEMPLATE_TEST_CASE_SIG("variable transforms invert and reduce to identity",
                       "", ((int D), D), 2, 3) {
  rng r(4501 + D);
  for (int trial = 0; trial < 50; ++trial) {
    vec<D - 1> slopes;
    for (int j = 0; j < D - 1; ++j) slopes(j) = r.uniform(-0.4, 0.4);
    const double dt = r.uniform(-0.4, 0.4);
    const double eps = 1.0;
    vec<D> nu;
    for (int j = 0; j < D; ++j) nu(j) = r.uniform(-0.4, 0.4);

    const auto I_p = j1_plasma<D>(slopes) * j1_plasma_inv<D>(slopes);
    REQUIRE((I_p - decltype(I_p)::Identity()).norm() < 1e-14);
    const auto I_v = j2_vacuum<D>(slopes, dt, eps) *
                     j2_vacuum_inv<D>(slopes, dt, eps);
    REQUIRE((I_v - vmat<D>::Identity()).norm() < 1e-12);
    const auto I_w = j3_vacuum<D>(nu, eps) * j3_vacuum_inv<D>(nu, eps);
    REQUIRE((I_w - vmat<D>::Identity()).norm() == 0.0);

    // u -> mu -> w -> u round trip
    Eigen::Matrix<double, 3 * D - 3, 1> u;
    for (int k = 0; k < 3 * D - 3; ++k) u(k) = r.uniform(-2.0, 2.0);
    const auto mu = (j2_vacuum_inv<D>(slopes, dt, eps) * u).eval();
    const auto w = (j3_vacuum_inv<D>(nu, eps) * mu).eval();
    const auto back =
        (j2_vacuum<D>(slopes, dt, eps) * (j3_vacuum<D>(nu, eps) * w)).eval();
    REQUIRE((back - u).norm() < 1e-12);
  }

  // flat static interface: every map is the identity
  REQUIRE((j1_plasma<D>(vec<D - 1>::Zero()) -
           Eigen::Matrix<double, 2 * D + 2, 2 * D + 2>::Identity())
              .norm() == 0.0);
  REQUIRE((j2_vacuum_inv<D>(vec<D - 1>::Zero(), 0.0, 1.0) -
           vmat<D>::Identity())
              .norm() == 0.0);
  REQUIRE((j3_vacuum<D>(vec<D>::Zero(), 1.0) - vmat<D>::Identity()).norm() ==
          0.0);
}

TEST_CASE("boundary field combinations against hand values") {
  // d = 2: slope 0.3, dt 0.2, u = (0.7, -0.4, 0.9)
  vec<1> s2;
  s2 << 0.3;
  Eigen::Vector3d u2(0.7, -0.4, 0.9);
  const Eigen::Vector3d mu2 = j2_vacuum_inv<2>(s2, 0.2, 1.0) * u2;
  REQUIRE(mu2(0) == Catch::Approx(0.82).margin(1e-14));   // h.N
  REQUIRE(mu2(1) == Catch::Approx(-0.01).margin(1e-14));  // h2 + s h1 + dt e
  REQUIRE(mu2(2) == Catch::Approx(0.82).margin(1e-14));   // e + dt h2

  // d = 3: slopes (0.3, -0.2), dt 0.1
  vec<2> s3;
  s3 << 0.3, -0.2;
  Eigen::Matrix<double, 6, 1> u3;
  u3 << 0.7, -0.4, 0.9, 0.5, 0.2, -0.6;
  const auto mu3 = (j2_vacuum_inv<3>(s3, 0.1, 1.0) * u3).eval();
  REQUIRE(mu3(0) == Catch::Approx(0.7 - 0.3 * (-0.4) + 0.2 * 0.9)
                        .margin(1e-14));  // h.N
  REQUIRE(mu3(1) == Catch::Approx(-0.4 + 0.3 * 0.7 + 0.1 * (-0.6))
                        .margin(1e-14));  // h2 + s2 h1 + eps dt e3
  REQUIRE(mu3(2) == Catch::Approx(0.9 - 0.2 * 0.7 - 0.1 * 0.2)
                        .margin(1e-14));  // h3 + s3 h1 - eps dt e2
  REQUIRE(mu3(3) == Catch::Approx(0.5 - 0.3 * 0.2 - (-0.2) * (-0.6))
                        .margin(1e-14));  // e.N
  REQUIRE(mu3(4) == Catch::Approx(0.2 + 0.3 * 0.5 - 0.1 * 0.9)
                        .margin(1e-14));  // e2 + s2 e1 - eps dt h3
  REQUIRE(mu3(5) == Catch::Approx(-0.6 - 0.2 * 0.5 + 0.1 * (-0.4))
                        .margin(1e-14));  // e3 + s3 e1 + eps dt h2

  // w combinations, d = 3, nu = (0, 0.3, -0.5)
  vec<3> nu;
  nu << 0.0, 0.3, -0.5;
  const auto w = (j3_vacuum_inv<3>(nu, 1.0) * u3).eval();
  REQUIRE(w(0) == Catch::Approx(0.7).margin(1e-14));
  REQUIRE(w(1) == Catch::Approx(-0.4 - (-0.5) * 0.5).margin(1e-14));
  REQUIRE(w(2) == Catch::Approx(0.9 + 0.3 * 0.5).margin(1e-14));
  REQUIRE(w(3) == Catch::Approx(0.5).margin(1e-14));
  REQUIRE(w(4) == Catch::Approx(0.2 + (-0.5) * 0.7).margin(1e-14));
  REQUIRE(w(5) == Catch::Approx(-0.6 - 0.3 * 0.7).margin(1e-14));
}

TEMPLATE_TEST_CASE_SIG(
    "effective boundary operator on shifted unknowns equals the raw one", "",
    ((int D), D), 2, 3) {
  eos gas;
  rng r(7208 + D);
  for (int trial = 0; trial < 40; ++trial) {
    const auto bg = random_background<D>(r, gas);
    const auto d1 = random_trace_d1<D>(r);

    Eigen::Matrix<double, 2 * D + 2, 1> dU;
    Eigen::Matrix<double, 3 * D - 3, 1> du;
    for (int k = 0; k < 2 * D + 2; ++k) dU(k) = r.uniform(-1.0, 1.0);
    for (int k = 0; k < 3 * D - 3; ++k) du(k) = r.uniform(-1.0, 1.0);
    const auto psi = random_front_dir<D>(r);

    const auto raw = jump_linearized<D>(bg, dU, du, psi);
    const auto dU_good = good_unknown(dU, psi.phi, 1.0, d1.dU);
    const auto du_good = good_unknown(du, psi.phi, -1.0, d1.du);
    const auto eff =
        jump_linearized_effective<D>(bg, d1, dU_good, du_good, psi);
    const double scale = std::max(1.0, raw.template lpNorm<Eigen::Infinity>());
    REQUIRE((eff - raw).template lpNorm<Eigen::Infinity>() < 1e-13 * scale);

    // shift inversion recovers the raw perturbation
    REQUIRE((good_unknown(dU_good, -psi.phi, 1.0, d1.dU) - dU).norm() <
            1e-13);
    REQUIRE((good_unknown(du_good, -psi.phi, -1.0, d1.du) - du).norm() <
            1e-13);
  }
}

TEMPLATE_TEST_CASE_SIG(
    "boundary Taylor remainder against the effective operator is quadratic",
    "", ((int D), D), 2, 3) {
  eos gas;
  rng r(9917 + D);
  const std::vector<double> deltas = {1e-3, 1e-4, 1e-5};
  for (int trial = 0; trial < 25; ++trial) {
    const auto bg = random_background<D>(r, gas);
    const auto d1 = random_trace_d1<D>(r);

    Eigen::Matrix<double, 2 * D + 2, 1> dU;
    Eigen::Matrix<double, 3 * D - 3, 1> du;
    for (int k = 0; k < 2 * D + 2; ++k) dU(k) = r.uniform(-1.0, 1.0);
    for (int k = 0; k < 3 * D - 3; ++k) du(k) = r.uniform(-1.0, 1.0);
    const auto psi = random_front_dir<D>(r);

    const auto dU_good = good_unknown(dU, psi.phi, 1.0, d1.dU);
    const auto du_good = good_unknown(du, psi.phi, -1.0, d1.du);
    const auto claimed =
        jump_linearized_effective<D>(bg, d1, dU_good, du_good, psi);
    const auto base = jump_conditions<D>(bg.U, bg.u, bg.f);

    std::vector<double> errs;
    for (const double d : deltas) {
      plasma_state<D> Ud = bg.U;
      Ud.q += d * dU(0);
      Ud.v += d * dU.template segment<D>(1);
      Ud.H += d * dU.template segment<D>(1 + D);
      Ud.S += d * dU(2 * D + 1);
      vacuum_state<D> ud = bg.u;
      ud.h += d * du.template head<D>();
      ud.e += d * du.template tail<2 * D - 3>();
      const auto fd = front_add<D>(bg.f, psi, d);
      const auto moved = jump_conditions<D>(Ud, ud, fd);
      errs.push_back(
          (moved - base - d * claimed).template lpNorm<Eigen::Infinity>());
    }
    REQUIRE(errs[0] > 1e-10);  // remainder is genuinely quadratic, not zero
    const double slope = loglog_slope(deltas, errs);
    REQUIRE(slope > 1.8);
    REQUIRE(slope < 2.2);
  }
}

TEMPLATE_TEST_CASE_SIG("effective boundary operator is linear", "",
                       ((int D), D), 2, 3) {
  eos gas;
  rng r(3355 + D);
  const auto bg = random_background<D>(r, gas);
  const auto d1 = random_trace_d1<D>(r);
  Eigen::Matrix<double, 2 * D + 2, 1> x1, x2;
  Eigen::Matrix<double, 3 * D - 3, 1> y1, y2;
  for (int k = 0; k < 2 * D + 2; ++k) {
    x1(k) = r.uniform(-1.0, 1.0);
    x2(k) = r.uniform(-1.0, 1.0);
  }
  for (int k = 0; k < 3 * D - 3; ++k) {
    y1(k) = r.uniform(-1.0, 1.0);
    y2(k) = r.uniform(-1.0, 1.0);
  }
  const auto p1 = random_front_dir<D>(r), p2 = random_front_dir<D>(r);
  const double a = 0.7, b = -1.3;

  const auto lhs = jump_linearized_effective<D>(
      bg, d1, (a * x1 + b * x2).eval(), (a * y1 + b * y2).eval(),
      front_add<D>(front_add<D>(front_point<D>{}, p1, a), p2, b));
  const auto rhs = (a * jump_linearized_effective<D>(bg, d1, x1, y1, p1) +
                    b * jump_linearized_effective<D>(bg, d1, x2, y2, p2))
                       .eval();
  REQUIRE((lhs - rhs).template lpNorm<Eigen::Infinity>() < 1e-12);

  // zero perturbation: output reduces to psi times the trace coefficient
  // plus the pure front-derivative part
  const auto only_psi = jump_linearized_effective<D>(
      bg, d1, Eigen::Matrix<double, 2 * D + 2, 1>::Zero().eval(),
      Eigen::Matrix<double, 3 * D - 3, 1>::Zero().eval(), p1);
  const auto split =
      (jump_linearized<D>(bg, Eigen::Matrix<double, 2 * D + 2, 1>::Zero(),
                          Eigen::Matrix<double, 3 * D - 3, 1>::Zero(), p1) +
       p1.phi * jump_psi_coefficient<D>(bg, d1))
          .eval();
  REQUIRE((only_psi - split).template lpNorm<Eigen::Infinity>() < 1e-14);
}

TEST_CASE("psi coefficient agrees with the background field equations") {
  // Straightened traces of a vacuum plane wave: the tangential/time
  // derivatives of the background traces must balance the x1-trace
  // combinations entering the psi coefficient.
  const double eps = 1.0;
  const vec<3> k(0.9, 1.2, -0.7);
  const double omega = k.norm() / eps;
  vec<3> B = k.cross(vec<3>(0.0, 0.3, 1.0));
  B *= 0.8 / B.norm();
  const vec<3> A = k.normalized().cross(B);

  for (const double theta : {0.35, 1.1, 2.9, 4.6}) {
    const double s = std::sin(theta);
    interface_background<3> bg;
    bg.U = plasma_state<3>{};
    bg.U.q = 0.5;  // plasma trace is irrelevant for rows 3 and 4
    bg.u.h = A * std::cos(theta);
    bg.u.e = B * std::cos(theta);
    bg.f = front_point<3>{};

    interface_background_d1<3> d1;
    d1.dU.setZero();
    d1.du << k(0) * A * s, k(0) * B * s;  // d1 of cos(-k1 x1 + ...) at x1=0

    const auto b = jump_psi_coefficient<3>(bg, d1);
    const double dth3 = eps * omega * A(2) * s;   // eps dt(h3)
    const double dth2 = eps * omega * A(1) * s;   // eps dt(h2)
    const double d2e1 = -k(1) * B(0) * s;         // d2(e1)
    const double d3e1 = -k(2) * B(0) * s;         // d3(e1)
    REQUIRE(std::abs(dth3 - d2e1 + b(2)) < 1e-13);
    REQUIRE(std::abs(dth2 + d3e1 - b(3)) < 1e-13);
  }
}

namespace {

// smooth probe field: per-component cosine waves with distinct phases
template <int N>
struct probe {
  Eigen::Matrix<double, N, 1> amp, a1, a2, a3, om, ph;

  static probe seeded(rng& r) {
    probe p;
    for (int i = 0; i < N; ++i) {
      p.amp(i) = r.uniform(0.15, 0.45);
      p.a1(i) = r.uniform(-1.2, 1.2);
      p.a2(i) = r.uniform(-1.2, 1.2);
      p.a3(i) = r.uniform(-1.2, 1.2);
      p.om(i) = r.uniform(-1.0, 1.0);
      p.ph(i) = r.uniform(0.0, 6.28);
    }
    return p;
  }

  // columns: value, dt, d1, d2, d3
  Eigen::Matrix<double, N, 5> eval(double t, double x1, double x2,
                                   double x3) const {
    Eigen::Matrix<double, N, 5> out;
    for (int i = 0; i < N; ++i) {
      const double th =
          a1(i) * x1 + a2(i) * x2 + a3(i) * x3 + om(i) * t + ph(i);
      out(i, 0) = amp(i) * std::cos(th);
      const double d = -amp(i) * std::sin(th);
      out(i, 1) = d * om(i);
      out(i, 2) = d * a1(i);
      out(i, 3) = d * a2(i);
      out(i, 4) = d * a3(i);
    }
    return out;
  }
};

struct front_probe {
  double amp, b2, b3, om, ph;

  static front_probe seeded(rng& r) {
    return {r.uniform(0.05, 0.2), r.uniform(-1.0, 1.0), r.uniform(-1.0, 1.0),
            r.uniform(-1.0, 1.0), r.uniform(0.0, 6.28)};
  }

  template <int D>
  front_point<D> at(double t, double x2, double x3) const {
    const double th = b2 * x2 + b3 * x3 + om * t + ph;
    front_point<D> f;
    f.phi = amp * std::cos(th);
    const double d = -amp * std::sin(th);
    f.dt = d * om;
    f.grad(0) = d * b2;
    if constexpr (D == 3) f.grad(1) = d * b3;
    return f;
  }
};

// FD of the plasma interior operator along (Z, psi) against the claimed
// derivative in shifted unknowns plus the background correction term.
template <int D, typename Ring>
void plasma_interior_check(const Ring& ring, const eos& gas, double x1,
                           rng& r) {
  constexpr int N = 2 * D + 2;
  const auto Z = probe<N>::seeded(r);
  const auto F = front_probe::seeded(r);
  const double t0 = 0.4, x20 = 1.3, x30 = -0.6;

  const auto U0v = ring.plasma(x1).as_vector();
  const auto d1U = ring.plasma_d1(x1);
  const auto d2U = ring.plasma_d2(x1);
  const auto Zp = Z.eval(t0, x1, x20, x30);
  const auto fp = F.template at<D>(t0, x20, x30);
  const double c = chi_cutoff(x1), cp = chi_cutoff_prime(x1);

  lifted_point<D> L0;
  L0.value = x1;
  L0.d1 = 1.0;
  L0.dt = 0.0;
  L0.grad = vec<D - 1>::Zero();

  // claimed derivative
  Eigen::Matrix<double, N, 1> Ud = Zp.col(0) - c * fp.phi * d1U;
  Eigen::Matrix<double, N, D + 1> dUd;
  dUd.col(0) = Zp.col(1) - c * fp.dt * d1U;
  dUd.col(1) = Zp.col(2) - cp * fp.phi * d1U - c * fp.phi * d2U;
  dUd.col(2) = Zp.col(3) - c * fp.grad(0) * d1U;
  if constexpr (D == 3) dUd.col(3) = Zp.col(4) - c * fp.grad(1) * d1U;

  const auto U0 = plasma_state<D>::from_vector(U0v, ring.eps);
  Eigen::Matrix<double, N, 1> claimed =
      plasma_residual<D>(U0, dUd, gas, L0);
  Eigen::Matrix<double, N, D> bg_dx = Eigen::Matrix<double, N, D>::Zero();
  bg_dx.col(0) = d1U;
  claimed += plasma_zeroth_order<D>(U0, bg_dx, gas, L0) * Ud;
  Eigen::Matrix<double, N, 1> d1_interior =
      flux_jacobian(U0, gas, 0) * d2U;
  for (int kk = 0; kk < N; ++kk)
    d1_interior += flux_jacobian_derivative(U0, gas, 0, kk) * d1U(kk) * d1U;
  claimed += c * fp.phi * d1_interior;

  const auto evaluate = [&](double d) {
    const auto Uv = (U0v + d * Zp.col(0)).eval();
    Eigen::Matrix<double, N, D + 1> dU;
    dU.col(0) = d * Zp.col(1);
    dU.col(1) = d1U + d * Zp.col(2);
    dU.col(2) = d * Zp.col(3);
    if constexpr (D == 3) dU.col(3) = d * Zp.col(4);
    front_point<D> f;
    f.phi = d * fp.phi;
    f.dt = d * fp.dt;
    f.grad = d * fp.grad;
    return plasma_residual<D>(plasma_state<D>::from_vector(Uv, ring.eps), dU,
                              gas, lift_front<D>(x1, f, +1));
  };

  // the coefficient derivatives inside the claimed value are themselves
  // finite differences (absolute noise near 5e-11), so the deltas are kept
  // large enough for the quadratic remainder to dominate that floor
  std::vector<double> errs;
  for (const double d : {3e-3, 3e-4}) {
    const auto fd = ((evaluate(d) - evaluate(-d)) / (2.0 * d)).eval();
    errs.push_back((fd - claimed).template lpNorm<Eigen::Infinity>());
  }
  const double scale =
      std::max(1.0, claimed.template lpNorm<Eigen::Infinity>());
  REQUIRE(errs[0] > 1e-11);  // the operator really is nonlinear here
  REQUIRE(errs[0] < 1e-4 * scale);
  const double ratio = errs[0] / errs[1];
  REQUIRE(ratio > 25.0);
  REQUIRE(ratio < 400.0);
}

}  // namespace

TEST_CASE("plasma interior linearization matches the shifted-unknown form") {
  eos gas;
  rng r(6120);
  ring2d r2;
  r2.vb0 = 0.15;
  for (const double x1 : {0.4, 1.7}) {
    plasma_interior_check<2>(r2, gas, x1, r);
  }
  ring3d r3;
  r3.vb0 = 0.1;
  for (const double x1 : {0.4, 1.7}) {
    plasma_interior_check<3>(r3, gas, x1, r);
  }
}

namespace {

// divergence-free quadratic vacuum background on the straightened
// half-plane: h = (x1^2 - x2^2, 2 x1 x2), e constant; solves the static
// system and both transported divergences exactly.
struct quad_vacuum {
  double e0 = 0.4;

  Eigen::Vector3d value(double x1, double x2) const {
    return {x1 * x1 - x2 * x2, 2.0 * x1 * x2, e0};
  }
  Eigen::Vector3d d1(double x1, double x2) const {
    return {2.0 * x1, 2.0 * x2, 0.0};
  }
  Eigen::Vector3d d2(double x1, double x2) const {
    return {-2.0 * x2, 2.0 * x1, 0.0};
  }
};

}  // namespace

TEST_CASE("vacuum interior operator annihilates constrained backgrounds") {
  // the divergence constraint kills every nu-dependent term
  const quad_vacuum bg;
  rng r(8844);
  for (int trial = 0; trial < 30; ++trial) {
    const double x1 = r.uniform(0.0, 3.0), x2 = r.uniform(-2.0, 2.0);
    vec<2> nu;
    nu << r.uniform(-0.6, 0.6), r.uniform(-0.6, 0.6);
    lifted_point<2> L;
    L.value = -x1;
    L.d1 = -1.0;
    L.dt = 0.0;
    L.grad = vec<1>::Zero();
    Eigen::Matrix<double, 3, 3> du;  // columns: dt, d1, d2
    du.col(0).setZero();
    du.col(1) = bg.d1(x1, x2);
    du.col(2) = bg.d2(x1, x2);
    const auto res = vacuum_residual<2>(du, nu, 1.0, L);
    REQUIRE(res.template lpNorm<Eigen::Infinity>() < 1e-13);
  }
}

TEST_CASE("vacuum interior linearization is exact for quadratic data") {
  const quad_vacuum bg;
  const double eps = 1.0;
  rng r(5150);
  const auto W = probe<3>::seeded(r);
  const auto F = front_probe::seeded(r);
  vec<2> nu0, nud;
  nu0 << 0.0, 0.25;
  nud << 0.3, -0.2;

  const auto check = [&](double x1, double t0, double x20, bool kill_grad,
                         bool expect_exact) {
    auto Fv = F;
    if (kill_grad) Fv.b2 = 0.0;  // front slope off: keeps the path quadratic
    const auto Wp = W.eval(t0, x1, x20, 0.0);
    const auto fp = Fv.at<2>(t0, x20, 0.0);
    const double c = chi_cutoff(x1), cp = chi_cutoff_prime(x1);
    const auto d1u = bg.d1(x1, x20);
    const auto d2u = bg.d2(x1, x20);

    lifted_point<2> L0;
    L0.value = -x1;
    L0.d1 = -1.0;
    L0.dt = 0.0;
    L0.grad = vec<1>::Zero();

    // claimed derivative: the frozen operator on the shifted unknown; the
    // background solves its own system, so no correction term appears
    Eigen::Matrix<double, 3, 3> dud;
    dud.col(0) = Wp.col(1) + c * fp.dt * d1u;
    dud.col(1) = Wp.col(2) + cp * fp.phi * d1u +
                 c * fp.phi * Eigen::Vector3d(2.0, 0.0, 0.0);
    dud.col(2) = Wp.col(3) + c * fp.grad(0) * d1u +
                 c * fp.phi * Eigen::Vector3d(0.0, 2.0, 0.0);
    const auto claimed = vacuum_residual<2>(dud, nu0, eps, L0);

    const auto evaluate = [&](double d) {
      Eigen::Matrix<double, 3, 3> du;
      du.col(0) = d * Wp.col(1);
      du.col(1) = d1u + d * Wp.col(2);
      du.col(2) = d2u + d * Wp.col(3);
      front_point<2> f;
      f.phi = d * fp.phi;
      f.dt = d * fp.dt;
      f.grad = d * fp.grad;
      const vec<2> nu = nu0 + d * nud;
      return vacuum_residual<2>(du, nu, eps, lift_front<2>(x1, f, -1));
    };

    if (expect_exact) {
      const double d = 1e-4;
      const auto fd = ((evaluate(d) - evaluate(-d)) / (2.0 * d)).eval();
      REQUIRE((fd - claimed).template lpNorm<Eigen::Infinity>() < 1e-9);
    } else {
      std::vector<double> errs;
      for (const double d : {1e-3, 1e-4}) {
        const auto fd = ((evaluate(d) - evaluate(-d)) / (2.0 * d)).eval();
        errs.push_back((fd - claimed).template lpNorm<Eigen::Infinity>());
      }
      REQUIRE(errs[0] > 1e-11);
      const double ratio = errs[0] / errs[1];
      REQUIRE(ratio > 50.0);
      REQUIRE(ratio < 200.0);
    }
  };

  check(0.6, 0.3, 0.9, true, true);    // cutoff plateau: exact derivative
  check(1.7, -0.2, 1.4, false, false);  // generic point: quadratic remainder
}

TEST_CASE("cancellation residual refines at second order") {
  const double eps = 1.0;
  const vec<3> k(0.9, 1.0, 2.0);
  const double omega = k.norm() / eps;
  vec<3> B = k.cross(vec<3>(0.0, 0.0, 1.0));
  B *= 0.8 / B.norm();
  const vec<3> A = k.normalized().cross(B);
  const double T = 0.5;

  const auto build = [&](int n2, int n3, int nt, bool exact) {
    std::vector<Eigen::MatrixXd> w4(nt), m2(nt), m3(nt);
    const double dt = T / (nt - 1);
    const double dx2 = 2.0 * M_PI / n2, dx3 = 2.0 * M_PI / n3;
    for (int kt = 0; kt < nt; ++kt) {
      w4[kt].resize(n2, n3);
      m2[kt].resize(n2, n3);
      m3[kt].resize(n2, n3);
      for (int i = 0; i < n2; ++i)
        for (int j = 0; j < n3; ++j) {
          const double x2 = i * dx2, x3 = j * dx3, t = kt * dt;
          if (exact) {
            const double cth = std::cos(k(1) * x2 + k(2) * x3 - omega * t);
            w4[kt](i, j) = B(0) * cth;
            m2[kt](i, j) = A(1) * cth;
            m3[kt](i, j) = A(2) * cth;
          } else {
            w4[kt](i, j) = std::sin(x2) * std::cos(2.0 * x3) +
                           0.3 * std::cos(1.3 * t);
            m2[kt](i, j) = std::cos(x2 + 0.4 * t);
            m3[kt](i, j) = std::sin(x3) * (1.0 + 0.5 * t);
          }
        }
    }
    return sup_norm(cancellation_residual(w4, m2, m3, dt, dx2, dx3, eps));
  };

  double prev = build(16, 16, 17, true);
  for (int level = 1; level <= 3; ++level) {
    const double cur = build(16 << level, 16 << level, (16 << level) + 1, true);
    const double ratio = prev / cur;
    REQUIRE(ratio > 3.4);
    REQUIRE(ratio < 4.6);
    prev = cur;
  }

  // zero traces give an exactly zero residual
  std::vector<Eigen::MatrixXd> z(5, Eigen::MatrixXd::Zero(6, 6));
  REQUIRE(sup_norm(cancellation_residual(z, z, z, 0.1, 0.3, 0.3, eps)) ==
          0.0);

  // non-solution traces do not refine away
  REQUIRE(build(16, 16, 17, false) > 0.05);
  REQUIRE(build(32, 32, 33, false) > 0.05);

  REQUIRE_THROWS_AS(
      cancellation_residual({Eigen::MatrixXd::Zero(4, 4)},
                            {Eigen::MatrixXd::Zero(4, 4)},
                            {Eigen::MatrixXd::Zero(4, 4)}, 0.1, 0.1, 0.1,
                            eps),
      validation_error);
}

TEST_CASE("normal trace and transported divergence residuals") {
  const int n2 = 64;
  const double dx2 = 2.0 * M_PI / n2;

  // zero input
  REQUIRE(normal_trace_residual(Eigen::VectorXd::Zero(n2),
                                Eigen::VectorXd::Zero(n2), dx2, 1.0, 0.3)
              .lpNorm<Eigen::Infinity>() == 0.0);

  // X1 manufactured from the continuum identity: only the d2 truncation
  // error survives, which refines at second order
  const double hb = 1.2, d1n = 0.4;
  const auto trace_sup = [&](int n) {
    const double h = 2.0 * M_PI / n;
    Eigen::VectorXd X1(n), psi(n);
    for (int j = 0; j < n; ++j) {
      const double x2 = j * h;
      psi(j) = std::cos(x2);
      X1(j) = hb * (-std::sin(x2)) - d1n * psi(j);
    }
    return normal_trace_residual(X1, psi, h, hb, d1n)
        .lpNorm<Eigen::Infinity>();
  };
  const double rt = trace_sup(n2) / trace_sup(2 * n2);
  REQUIRE(rt > 3.4);
  REQUIRE(rt < 4.6);

  // transported divergence on both orientations of the flat front; both
  // directions refine together so the full truncation error drops by four
  const auto div_sup = [&](int n1, int n2g, double d1phi) {
    const grid2d g(n1, n2g, 4.0);
    field2d<1> X1(g), X2(g);
    for (int j = 0; j < g.n2; ++j)
      for (int i = 0; i < g.n1; ++i) {
        const double x1 = g.x1(i), x2 = g.x2(j);
        X1.col(i, j)(0) = std::cos(x2) * std::sin(0.7 * x1 + 0.3);
        X2.col(i, j)(0) =
            -d1phi * std::sin(x2) * 0.7 * std::cos(0.7 * x1 + 0.3);
      }
    const auto res = interior_divergence_residual(X1, X2, d1phi);
    return res.a.cwiseAbs().maxCoeff();
  };
  for (const double d1phi : {1.0, -1.0}) {
    const double r0 = div_sup(33, 48, d1phi), r1 = div_sup(65, 96, d1phi);
    REQUIRE(r0 / r1 > 3.4);
    REQUIRE(r0 / r1 < 4.6);
  }
}
