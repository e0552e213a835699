#pragma once

// Second-order finite differences on grid2d: centered interior stencils,
// one-sided at the x1 ends, wrap-around in x2.

#include "pvi/grid.hpp"

namespace pvi {

template <int C>
void dx1(const field2d<C>& u, field2d<C>& out) {
  const grid2d& g = u.g;
  const double h = g.dx1();
  for (int j = 0; j < g.n2; ++j) {
    out.col(0, j) =
        (-3.0 * u.col(0, j) + 4.0 * u.col(1, j) - u.col(2, j)) / (2.0 * h);
    for (int i = 1; i < g.n1 - 1; ++i)
      out.col(i, j) = (u.col(i + 1, j) - u.col(i - 1, j)) / (2.0 * h);
    out.col(g.n1 - 1, j) = (3.0 * u.col(g.n1 - 1, j) -
                            4.0 * u.col(g.n1 - 2, j) + u.col(g.n1 - 3, j)) /
                           (2.0 * h);
  }
}

template <int C>
void dx2(const field2d<C>& u, field2d<C>& out) {
  const grid2d& g = u.g;
  const double h = g.dx2();
  for (int j = 0; j < g.n2; ++j)
    for (int i = 0; i < g.n1; ++i)
      out.col(i, j) = (u.col(i, g.jp(j)) - u.col(i, g.jm(j))) / (2.0 * h);
}

template <int C>
field2d<C> dx1(const field2d<C>& u) {
  field2d<C> out(u.g);
  dx1(u, out);
  return out;
}

template <int C>
field2d<C> dx2(const field2d<C>& u) {
  field2d<C> out(u.g);
  dx2(u, out);
  return out;
}

}  // namespace pvi
