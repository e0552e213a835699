#pragma once

// Half-plane grid for the straightened 2D problem: x1 in [0, L1] with the
// interface at node 0, x2 periodic with the given period.

#include <Eigen/Dense>
#include <cmath>

#include "pvi/error.hpp"

namespace pvi {

struct grid2d {
  int n1 = 0;
  int n2 = 0;
  double L1 = 8.0;
  double period = 2.0 * M_PI;

  grid2d() = default;
  grid2d(int n1_, int n2_, double L1_ = 8.0, double period_ = 2.0 * M_PI)
      : n1(n1_), n2(n2_), L1(L1_), period(period_) {
    if (n1 < 5 || n2 < 4) throw validation_error("grid2d: too few nodes");
  }

  double dx1() const { return L1 / (n1 - 1); }
  double dx2() const { return period / n2; }
  double x1(int i) const { return i * dx1(); }
  double x2(int j) const { return j * dx2(); }
  long nodes() const { return static_cast<long>(n1) * n2; }
  long id(int i, int j) const { return i + static_cast<long>(n1) * j; }
  int jp(int j) const { return j + 1 == n2 ? 0 : j + 1; }
  int jm(int j) const { return j == 0 ? n2 - 1 : j - 1; }
};

// C scalar unknowns per node, stored column-per-node.
template <int C>
struct field2d {
  grid2d g;
  Eigen::Matrix<double, C, Eigen::Dynamic> a;

  field2d() = default;
  explicit field2d(const grid2d& g_) : g(g_), a(C, g_.nodes()) { a.setZero(); }

  auto col(int i, int j) { return a.col(g.id(i, j)); }
  auto col(int i, int j) const { return a.col(g.id(i, j)); }
};

}  // namespace pvi
