#pragma once

// Discrete residual evaluators for the quantities the evolution is supposed
// to preserve: the interface rows tying the normal field perturbations to
// the front, the transported-divergence rows in the interior, and the
// boundary cancellation combination pairing the normal electric trace with
// the tangential magnetic ones. All evaluators are second order and assume
// a flat-front background.

#include <Eigen/Dense>
#include <vector>

#include "pvi/error.hpp"
#include "pvi/fd.hpp"
#include "pvi/grid.hpp"

namespace pvi {

// eps*dt(w4) + d3(mu2) - d2(mu3) on the interface. Traces are time-indexed
// (n2 x n3) samples, periodic in both tangential directions; the output
// drops the first and last time levels (centered differences throughout).
inline std::vector<Eigen::MatrixXd> cancellation_residual(
    const std::vector<Eigen::MatrixXd>& w4,
    const std::vector<Eigen::MatrixXd>& mu2,
    const std::vector<Eigen::MatrixXd>& mu3, double dt, double dx2,
    double dx3, double eps) {
  const long nt = static_cast<long>(w4.size());
  if (nt < 3 || mu2.size() != w4.size() || mu3.size() != w4.size())
    throw validation_error("cancellation_residual: bad trace history");
  const long n2 = w4[0].rows(), n3 = w4[0].cols();
  std::vector<Eigen::MatrixXd> res;
  res.reserve(nt - 2);
  for (long k = 1; k + 1 < nt; ++k) {
    Eigen::MatrixXd r = eps * (w4[k + 1] - w4[k - 1]) / (2.0 * dt);
    for (long i = 0; i < n2; ++i) {
      const long ip = (i + 1) % n2, im = (i + n2 - 1) % n2;
      for (long j = 0; j < n3; ++j) {
        const long jp = (j + 1) % n3, jm = (j + n3 - 1) % n3;
        r(i, j) += (mu2[k](i, jp) - mu2[k](i, jm)) / (2.0 * dx3) -
                   (mu3[k](ip, j) - mu3[k](im, j)) / (2.0 * dx2);
      }
    }
    res.push_back(std::move(r));
  }
  return res;
}

inline double sup_norm(const std::vector<Eigen::MatrixXd>& f) {
  double m = 0.0;
  for (const auto& a : f) m = std::max(m, a.cwiseAbs().maxCoeff());
  return m;
}

// X.N - bg_tangential * d2(psi) + bg_d1_normal * psi on the interface
// column of a flat-front background; X1 and psi are periodic x2-samples.
inline Eigen::VectorXd normal_trace_residual(const Eigen::VectorXd& X1,
                                             const Eigen::VectorXd& psi,
                                             double dx2, double bg_tangential,
                                             double bg_d1_normal) {
  const long n = X1.size();
  if (psi.size() != n)
    throw validation_error("normal_trace_residual: size mismatch");
  Eigen::VectorXd r(n);
  for (long j = 0; j < n; ++j) {
    const long jp = (j + 1) % n, jm = (j + n - 1) % n;
    r(j) = X1(j) - bg_tangential * (psi(jp) - psi(jm)) / (2.0 * dx2) +
           bg_d1_normal * psi(j);
  }
  return r;
}

// d1(X.N) + d1Phi * d2(X_tangential) over the half-plane grid; d1Phi is
// +1 on the plasma side and -1 on the vacuum side of a flat front.
inline field2d<1> interior_divergence_residual(const field2d<1>& X1,
                                               const field2d<1>& X2,
                                               double d1phi) {
  field2d<1> r = dx1(X1);
  const field2d<1> t = dx2(X2);
  r.a += d1phi * t.a;
  return r;
}

template <int C>
field2d<1> extract_component(const field2d<C>& f, int c) {
  field2d<1> out(f.g);
  out.a = f.a.row(c);
  return out;
}

}  // namespace pvi
