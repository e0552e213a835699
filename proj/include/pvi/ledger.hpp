#pragma once

// Source-term bookkeeping for the iterative correction scheme.  Each round
// solves with interior sources f_n (plasma and vacuum slots) and a boundary
// source g_n, and produces error fields e_n.  The next sources are chosen so
// that the running sums satisfy, with E_n = sum_{k<n} e_k and S the cutoff
// smoother at theta_n,
//
//   sum_{k<=n} f_k^+ + S E_n^+ = S f^a,
//   sum_{k<=n} f_k^- + S E_n^- = 0,
//   sum_{k<=n} g_k   + S E_n^b = 0,
//
// so the accumulated data converge to the target as theta_n grows.  The
// identities hold by construction; identity_residuals() measures the
// round-off actually accumulated.

#include <Eigen/Dense>
#include <vector>

#include "pvi/error.hpp"
#include "pvi/smoothing.hpp"

namespace pvi {

struct iteration_ledger {
  smoother_family S;
  double theta0 = 2.0;
  Eigen::MatrixXd fa;
  std::vector<Eigen::MatrixXd> fp, fm, gb;  // chosen sources, index 0..n
  std::vector<Eigen::MatrixXd> ep, em, eb;  // recorded errors, index 0..n-1

  double theta(int n) const { return std::sqrt(theta0 * theta0 + n); }
  int level() const { return static_cast<int>(fp.size()) - 1; }
};

inline iteration_ledger make_ledger(const smoother_grid& dom,
                                    const Eigen::MatrixXd& fa, double theta0) {
  if (!(theta0 >= 1.0))
    throw validation_error("make_ledger: theta0 must be >= 1");
  if (fa.rows() != dom.nt || fa.cols() != dom.n2)
    throw shape_mismatch("make_ledger: target source does not fit the grid");
  iteration_ledger L{smoother_family(dom), theta0, fa, {}, {}, {},
                     {},                   {},     {}};
  L.fp.push_back(L.S.apply(fa, theta0));
  L.fm.push_back(Eigen::MatrixXd::Zero(dom.nt, dom.n2));
  L.gb.push_back(Eigen::MatrixXd::Zero(dom.nt, dom.n2));
  return L;
}

// Record the errors of the round just solved and emit the next sources.
inline void ledger_step(iteration_ledger& L, const Eigen::MatrixXd& ep_n,
                        const Eigen::MatrixXd& em_n,
                        const Eigen::MatrixXd& eb_n) {
  const auto& dom = L.S.domain();
  for (const auto* e : {&ep_n, &em_n, &eb_n})
    if (e->rows() != dom.nt || e->cols() != dom.n2)
      throw shape_mismatch("ledger_step: error field does not fit the grid");
  L.ep.push_back(ep_n);
  L.em.push_back(em_n);
  L.eb.push_back(eb_n);

  const int n = static_cast<int>(L.fp.size());
  const double th = L.theta(n);
  Eigen::MatrixXd Ep = Eigen::MatrixXd::Zero(dom.nt, dom.n2);
  Eigen::MatrixXd Em = Ep, Eb = Ep;
  for (const auto& e : L.ep) Ep += e;
  for (const auto& e : L.em) Em += e;
  for (const auto& e : L.eb) Eb += e;

  Eigen::MatrixXd fp_n = L.S.apply(L.fa, th) - L.S.apply(Ep, th);
  Eigen::MatrixXd fm_n = -L.S.apply(Em, th);
  Eigen::MatrixXd gb_n = -L.S.apply(Eb, th);
  for (const auto& f : L.fp) fp_n -= f;
  for (const auto& f : L.fm) fm_n -= f;
  for (const auto& g : L.gb) gb_n -= g;
  L.fp.push_back(fp_n);
  L.fm.push_back(fm_n);
  L.gb.push_back(gb_n);
}

struct ledger_residuals {
  double plasma = 0.0;
  double vacuum = 0.0;
  double boundary = 0.0;
  double max() const { return std::max({plasma, vacuum, boundary}); }
};

// Relative round-off in the three running identities at the current level.
inline ledger_residuals identity_residuals(const iteration_ledger& L) {
  const auto& dom = L.S.domain();
  const int n = L.level();
  const double th = L.theta(n);
  Eigen::MatrixXd Fp = Eigen::MatrixXd::Zero(dom.nt, dom.n2);
  Eigen::MatrixXd Fm = Fp, Gb = Fp, Ep = Fp, Em = Fp, Eb = Fp;
  for (const auto& f : L.fp) Fp += f;
  for (const auto& f : L.fm) Fm += f;
  for (const auto& g : L.gb) Gb += g;
  for (const auto& e : L.ep) Ep += e;
  for (const auto& e : L.em) Em += e;
  for (const auto& e : L.eb) Eb += e;

  const Eigen::MatrixXd target = L.S.apply(L.fa, th);
  const double scale =
      std::max({target.norm(), Fp.norm(), Fm.norm(), Gb.norm(), Ep.norm(),
                Em.norm(), Eb.norm(), 1e-300});
  ledger_residuals r;
  r.plasma = (Fp + L.S.apply(Ep, th) - target).norm() / scale;
  r.vacuum = (Fm + L.S.apply(Em, th)).norm() / scale;
  r.boundary = (Gb + L.S.apply(Eb, th)).norm() / scale;
  return r;
}

}  // namespace pvi
