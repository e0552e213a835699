#pragma once

// Seeded admissible state sampling for property tests: pressures and
// entropies inside the closure window, subluminal velocities, bounded
// magnetic fields, and boundary tuples satisfying the pointwise
// compatibility constraints v.N = dt(phi), H.N = h.N = 0.

#include <cmath>

#include "pvi/geometry.hpp"
#include "pvi/rng.hpp"
#include "pvi/state.hpp"

namespace pvi {

template <int D>
vec<D> random_direction(rng& r) {
  // rejection-sampled unit vector
  for (;;) {
    vec<D> u;
    for (int i = 0; i < D; ++i) u(i) = r.uniform(-1.0, 1.0);
    const double n = u.norm();
    if (n > 0.1 && n <= 1.0) return u / n;
  }
}

template <int D>
plasma_state<D> random_plasma_state(rng& r, double eps = 1.0,
                                    double vmax_frac = 0.9) {
  plasma_state<D> st;
  st.eps = eps;
  const double p = r.uniform(0.5, 2.0);
  st.S = r.uniform(-0.5, 0.5);
  st.v = random_direction<D>(r) * r.uniform(0.0, vmax_frac / eps);
  st.H = random_direction<D>(r) * r.uniform(0.0, 2.0);
  st.q = total_pressure<D>(p, st.v, st.H, eps);
  return st;
}

template <int D>
vacuum_state<D> random_vacuum_state(rng& r) {
  vacuum_state<D> u;
  u.h = random_direction<D>(r) * r.uniform(0.0, 2.0);
  for (int i = 0; i < 2 * D - 3; ++i) u.e(i) = r.uniform(-2.0, 2.0);
  return u;
}

template <int D>
front_point<D> random_front(rng& r) {
  front_point<D> f;
  f.phi = r.uniform(-0.3, 0.3);
  f.dt = r.uniform(-0.3, 0.3);
  for (int j = 0; j < D - 1; ++j) f.grad(j) = r.uniform(-0.3, 0.3);
  return f;
}

template <int D>
vec<D> project_tangent(const vec<D>& X, const vec<D>& N) {
  return X - (X.dot(N) / N.squaredNorm()) * N;
}

// Enforce v.N = dt(phi), H.N = 0, h.N = 0 in place; q is recomputed so the
// underlying pressure is unchanged.
template <int D>
void make_compatible(plasma_state<D>& U, vacuum_state<D>& u,
                     front_point<D>& f, const eos& e) {
  const vec<D> N = f.normal();
  const double p = pressure_from_total(U, e);
  U.H = project_tangent<D>(U.H, N);
  U.q = total_pressure<D>(p, U.v, U.H, U.eps);
  u.h = project_tangent<D>(u.h, N);
  f.dt = U.v.dot(N);
}

}  // namespace pvi
