#pragma once

// Frequency-cutoff smoothing family on a periodic time x tangential grid.
//
// apply() projects onto the Fourier modes inside radius theta (sharp
// Euclidean cutoff), which makes the family exactly idempotent and exactly
// commuting with tangential derivatives.  apply_causal() is the one-sided
// alternative: a linear-in-time kernel convolution with zero left extension,
// so data that vanish up to some time keep vanishing there.  Sobolev norms
// are evaluated from the same spectrum so the smoothing estimates can be
// measured without a separate discretization.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "pvi/error.hpp"

namespace pvi {

struct smoother_grid {
  int nt = 0;
  int n2 = 0;
  double t_period = 2.0 * M_PI;
  double x_period = 2.0 * M_PI;

  smoother_grid(int nt_, int n2_, double t_period_ = 2.0 * M_PI,
                double x_period_ = 2.0 * M_PI)
      : nt(nt_), n2(n2_), t_period(t_period_), x_period(x_period_) {
    if (nt < 4 || n2 < 4)
      throw validation_error("smoother_grid: too few samples");
    if (!(t_period > 0.0) || !(x_period > 0.0))
      throw validation_error("smoother_grid: periods must be positive");
  }

  // Signed integer mode -> physical frequency.
  double freq_t(int a) const {
    const int m = a <= nt / 2 ? a : a - nt;
    return 2.0 * M_PI * m / t_period;
  }
  double freq_x(int b) const {
    const int m = b <= n2 / 2 ? b : b - n2;
    return 2.0 * M_PI * m / x_period;
  }
};

class smoother_family {
 public:
  explicit smoother_family(const smoother_grid& dom) : dom_(dom) {
    Ft_ = dft_matrix(dom.nt);
    Fx_ = dft_matrix(dom.n2);
  }

  const smoother_grid& domain() const { return dom_; }

  // Sharp projection onto modes with |xi| <= theta.
  Eigen::MatrixXd apply(const Eigen::MatrixXd& u, double theta) const {
    check_shape(u, "smoother_family::apply");
    if (!(theta > 0.0))
      throw validation_error("smoother_family: theta must be positive");
    Eigen::MatrixXcd spec = forward(u);
    for (int a = 0; a < dom_.nt; ++a)
      for (int b = 0; b < dom_.n2; ++b)
        if (std::hypot(dom_.freq_t(a), dom_.freq_x(b)) > theta)
          spec(a, b) = 0.0;
    return inverse(spec);
  }

  // One-sided mollification in time only: out(t) = sum_{s>=0} k_s u(t - s dt)
  // with u extended by zero into the past.  The kernel has unit mass and
  // width ~1/theta, so a function that vanishes for t <= t0 stays zero there.
  Eigen::MatrixXd apply_causal(const Eigen::MatrixXd& u, double theta) const {
    check_shape(u, "smoother_family::apply_causal");
    if (!(theta > 0.0))
      throw validation_error("smoother_family: theta must be positive");
    const double ht = dom_.t_period / dom_.nt;
    int w = static_cast<int>(std::ceil(1.0 / (theta * ht)));
    w = std::min(std::max(w, 1), dom_.nt);
    Eigen::VectorXd k(w);
    for (int s = 0; s < w; ++s) {
      const double r = (s + 0.5) / w;
      k(s) = std::exp(-1.0 / std::max(1.0 - r * r, 1e-14));
    }
    k /= k.sum();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dom_.nt, dom_.n2);
    for (int t = 0; t < dom_.nt; ++t)
      for (int s = 0; s < w && s <= t; ++s) out.row(t) += k(s) * u.row(t - s);
    return out;
  }

  // Spectral Sobolev norm of smoothness index s (any real, negative allowed).
  double sobolev_norm(const Eigen::MatrixXd& u, double s) const {
    check_shape(u, "smoother_family::sobolev_norm");
    const Eigen::MatrixXcd spec = forward(u);
    double acc = 0.0;
    for (int a = 0; a < dom_.nt; ++a)
      for (int b = 0; b < dom_.n2; ++b) {
        const double ft = dom_.freq_t(a), fx = dom_.freq_x(b);
        acc += std::pow(1.0 + ft * ft + fx * fx, s) * std::norm(spec(a, b));
      }
    return std::sqrt(acc / (static_cast<double>(dom_.nt) * dom_.n2));
  }

  Eigen::MatrixXcd forward(const Eigen::MatrixXd& u) const {
    return Ft_ * u * Fx_.transpose();
  }

  Eigen::MatrixXd inverse(const Eigen::MatrixXcd& spec) const {
    const double scale = 1.0 / (static_cast<double>(dom_.nt) * dom_.n2);
    Eigen::MatrixXcd back =
        Ft_.adjoint() * spec * Fx_.adjoint().transpose() * scale;
    return back.real();
  }

 private:
  static Eigen::MatrixXcd dft_matrix(int n) {
    Eigen::MatrixXcd F(n, n);
    const std::complex<double> iu(0.0, 1.0);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        F(j, k) = std::exp(-2.0 * M_PI * iu * (double(j) * k / n));
    return F;
  }

  void check_shape(const Eigen::MatrixXd& u, const char* who) const {
    if (u.rows() != dom_.nt || u.cols() != dom_.n2)
      throw shape_mismatch(std::string(who) + ": field is " +
                           std::to_string(u.rows()) + "x" +
                           std::to_string(u.cols()) + ", domain wants " +
                           std::to_string(dom_.nt) + "x" +
                           std::to_string(dom_.n2));
  }

  smoother_grid dom_;
  Eigen::MatrixXcd Ft_, Fx_;
};

}  // namespace pvi
