#include <catch2/catch_amalgamated.hpp>

#include "pvi/boundary.hpp"
#include "pvi/random_states.hpp"
#include "pvi/rng.hpp"

using namespace pvi;

TEST_CASE("jump conditions against hand-evaluated rows") {
  plasma_state<2> U2;
  U2.q = 1.0;
  U2.v << 0.1, 0.3;
  vacuum_state<2> u2;
  u2.h << 0.3, 0.4;
  u2.e << 0.7;
  front_point<2> f2;
  f2.dt = 0.2;
  f2.grad << 0.5;
  const auto B2 = jump_conditions<2>(U2, u2, f2);
  REQUIRE(B2(0) == Catch::Approx(0.25).margin(1e-14));
  REQUIRE(B2(1) == Catch::Approx(1.12).margin(1e-14));
  REQUIRE(B2(2) == Catch::Approx(0.78).margin(1e-14));

  plasma_state<3> U3;
  U3.q = 2.0;
  U3.v << 0.5, 0.2, 0.1;
  vacuum_state<3> u3;
  u3.h << 0.7, 0.8, 0.9;
  u3.e << 0.4, 0.5, 0.6;
  front_point<3> f3;
  f3.dt = 0.1;
  f3.grad << 0.2, -0.3;
  const auto B3 = jump_conditions<3>(U3, u3, f3);
  REQUIRE(B3(0) == Catch::Approx(-0.39).margin(1e-14));
  REQUIRE(B3(1) == Catch::Approx(1.415).margin(1e-14));
  REQUIRE(B3(2) == Catch::Approx(0.49).margin(1e-14));
  REQUIRE(B3(3) == Catch::Approx(0.56).margin(1e-14));

  // a quiescent interface satisfies every jump row
  plasma_state<3> Uq;
  vacuum_state<3> uq;
  uq.h << 0.0, 1.0, 0.0;
  uq.e << 0.6, 0.0, 0.0;
  Uq.q = 0.5 * (uq.h.squaredNorm() - uq.e.squaredNorm());
  front_point<3> fq;
  REQUIRE(jump_conditions<3>(Uq, uq, fq).norm() == 0.0);
}

TEMPLATE_TEST_CASE_SIG("compatibility projection", "", ((int D), D), 2, 3) {
  eos e;
  rng r(11 + D);
  for (int k = 0; k < 20; ++k) {
    plasma_state<D> U = random_plasma_state<D>(r);
    vacuum_state<D> u = random_vacuum_state<D>(r);
    front_point<D> f = random_front<D>(r);
    const double p_before = pressure_from_total(U, e);
    make_compatible<D>(U, u, f, e);
    REQUIRE(std::abs(normal_H(U, f)) < 1e-14);
    REQUIRE(std::abs(normal_h(u, f)) < 1e-14);
    REQUIRE(f.dt == U.v.dot(f.normal()));
    REQUIRE(pressure_from_total(U, e) ==
            Catch::Approx(p_before).margin(1e-12));
  }
}

TEMPLATE_TEST_CASE_SIG("plasma boundary matrix inertia at compatible states",
                       "", ((int D), D), 2, 3) {
  eos e;
  rng r(23 + D);
  for (int k = 0; k < 30; ++k) {
    plasma_state<D> U = random_plasma_state<D>(r, 1.0, 0.7);
    vacuum_state<D> u = random_vacuum_state<D>(r);
    front_point<D> f = random_front<D>(r);
    make_compatible<D>(U, u, f, e);
    const inertia sig = matrix_inertia(plasma_boundary_matrix(U, e, f));
    REQUIRE(sig.pos == 1);
    REQUIRE(sig.neg == 1);
    REQUIRE(sig.zero == 2 * D);
  }
}

TEMPLATE_TEST_CASE_SIG("vacuum boundary spectrum closed form", "",
                       ((int D), D), 2, 3) {
  rng r(37 + D);
  for (int k = 0; k < 30; ++k) {
    const front_point<D> f = random_front<D>(r);
    Eigen::EigenSolver<Eigen::MatrixXd> es{
        Eigen::MatrixXd(vacuum_boundary_matrix<D>(f, 1.0))};
    Eigen::VectorXd ev = es.eigenvalues().real();
    REQUIRE(es.eigenvalues().imag().norm() < 1e-10);
    std::sort(ev.data(), ev.data() + ev.size());
    Eigen::Matrix<double, 3 * D - 3, 1> closed =
        vacuum_boundary_spectrum<D>(f, 1.0);
    std::sort(closed.data(), closed.data() + closed.size());
    REQUIRE((ev - closed).norm() < 1e-10);
  }
}

TEMPLATE_TEST_CASE_SIG("reformed interface matrix has constant signature",
                       "", ((int D), D), 2, 3) {
  eos e;
  rng r(41 + D);
  for (int k = 0; k < 30; ++k) {
    plasma_state<D> U = random_plasma_state<D>(r, 1.0, 0.7);
    vacuum_state<D> u = random_vacuum_state<D>(r);
    front_point<D> f = random_front<D>(r);
    make_compatible<D>(U, u, f, e);
    const inertia sp = matrix_inertia(plasma_boundary_matrix(U, e, f));
    const inertia sv =
        matrix_inertia(vacuum_boundary_matrix_reformed<D>(f, U.v, 1.0));
    REQUIRE(sp.pos + sv.pos == D);
    REQUIRE(sp.neg + sv.neg == D);
    REQUIRE(sp.zero + sv.zero == 3 * D - 1);
  }
}

TEMPLATE_TEST_CASE_SIG("rank of the vacuum boundary matrix jumps unless "
                       "reformed",
                       "", ((int D), D), 2, 3) {
  const int n_samples = 64;
  std::vector<int> ranks_orig, ranks_ref;
  for (int s = 0; s < n_samples; ++s) {
    const double x2 = 2.0 * M_PI * s / n_samples;
    front_point<D> f;
    f.dt = 0.3 * std::sin(x2);
    vec<D> nu = vec<D>::Zero();
    nu(0) = f.dt;  // matches a trace velocity with v1 = dt(phi)
    ranks_orig.push_back(matrix_rank(vacuum_boundary_matrix<D>(f, 1.0)));
    ranks_ref.push_back(
        matrix_rank(vacuum_boundary_matrix_reformed<D>(f, nu, 1.0)));
  }
  const int full = 3 * D - 3, degenerate = 2 * D - 2;
  REQUIRE(std::count(ranks_orig.begin(), ranks_orig.end(), full) > 0);
  REQUIRE(std::count(ranks_orig.begin(), ranks_orig.end(), degenerate) > 0);
  for (int rk : ranks_ref) REQUIRE(rk == degenerate);
}

TEMPLATE_TEST_CASE_SIG("symmetrized boundary matrix keeps the rank-two "
                       "pressure-velocity coupling",
                       "", ((int D), D), 2, 3) {
  eos e;
  rng r(53 + D);
  for (int k = 0; k < 50; ++k) {
    plasma_state<D> U = random_plasma_state<D>(r, 1.0, 0.7);
    vacuum_state<D> u = random_vacuum_state<D>(r);
    front_point<D> f = random_front<D>(r);
    make_compatible<D>(U, u, f, e);
    REQUIRE(boundary_structure_residual(U, e, f) < 1e-9);

    // breaking H.N = 0 must break the identity
    plasma_state<D> bad = U;
    const vec<D> N = f.normal();
    bad.H += 0.1 * N / N.squaredNorm();
    REQUIRE(boundary_structure_residual(bad, e, f) > 1e-3);
  }
}
