// Subcommand orchestration shared by the command-line tool and the test
// suite.  Each runner consumes a validated scenario, writes its artifacts
// under an output directory (report.json plus CSV / PVIGRID1 files), and
// returns exit code 0 iff every configured check passed.  Runs are
// single-threaded at the orchestration level and deterministic for a fixed
// scenario text and seed.
#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pvi/boundary.hpp"
#include "pvi/compat.hpp"
#include "pvi/criteria.hpp"
#include "pvi/random_states.hpp"
#include "pvi/report.hpp"
#include "pvi/scenario.hpp"
#include "pvi/smoothing.hpp"
#include "pvi/solver2d.hpp"

namespace pvi {

namespace detail {

template <typename M>
std::vector<double> sorted_real_spectrum(const M& A, const char* what) {
  const Eigen::MatrixXd dense(A);
  Eigen::EigenSolver<Eigen::MatrixXd> es(dense);
  const double scale = std::max(1.0, A.norm());
  std::vector<double> ev;
  for (int k = 0; k < es.eigenvalues().size(); ++k) {
    if (std::abs(es.eigenvalues()(k).imag()) > 1e-9 * scale)
      throw validation_error(std::string(what) + ": complex spectrum");
    ev.push_back(es.eigenvalues()(k).real());
  }
  std::sort(ev.begin(), ev.end());
  return ev;
}

inline nlohmann::json inertia_json(const inertia& s) {
  return {{"pos", s.pos}, {"neg", s.neg}, {"zero", s.zero}};
}

template <int D>
void analyze_into(const scenario& sc, nlohmann::json& j) {
  eos gas(sc.gamma);
  plasma_state<D> U;
  vacuum_state<D> u;
  front_point<D> f;
  vec<D> nu;
  if constexpr (D == 2) {
    U = sc.ring.plasma(0.0);
    u = sc.ring.vacuum();
    f = sc.ring.front();
    nu = sc.ring.nu(0.0);
    gas = sc.ring.gas;
  } else {
    if (!sc.seed)
      throw validation_error("ring.seed: required when d = 3 states are drawn");
    rng r(*sc.seed);
    U = random_plasma_state<D>(r, sc.eps);
    u = random_vacuum_state<D>(r);
    f = random_front<D>(r);
    make_compatible<D>(U, u, f, gas);
    nu = U.v;
  }

  const pmat<D> Ap = plasma_boundary_matrix<D>(U, gas, f);
  const vmat<D> Av = vacuum_boundary_matrix<D>(f, sc.eps);
  const vmat<D> Ar = vacuum_boundary_matrix_reformed<D>(f, nu, sc.eps);

  const inertia ip = matrix_inertia(Ap);
  const inertia ir = matrix_inertia(Ar);

  const std::vector<double> evp = sorted_real_spectrum(Ap, "plasma boundary");
  const std::vector<double> evv = sorted_real_spectrum(Av, "vacuum boundary");
  std::vector<double> closed;
  {
    const auto cf = vacuum_boundary_spectrum<D>(f, sc.eps);
    for (int k = 0; k < cf.size(); ++k) closed.push_back(cf(k));
    std::sort(closed.begin(), closed.end());
  }
  double mismatch = 0.0;
  for (size_t k = 0; k < closed.size(); ++k)
    mismatch = std::max(mismatch, std::abs(closed[k] - evv[k]));

  j["plasma_boundary"] = {{"eigenvalues", evp}, {"inertia", inertia_json(ip)}};
  j["vacuum_boundary"] = {{"eigenvalues", evv},
                          {"closed_form", closed},
                          {"max_mismatch", mismatch}};
  j["reformed_vacuum_boundary"] = {
      {"eigenvalues", sorted_real_spectrum(Ar, "reformed vacuum boundary")},
      {"inertia", inertia_json(ir)}};
  j["reformed_full"] = {{"inertia", inertia_json(inertia{
                            ip.pos + ir.pos, ip.neg + ir.neg,
                            ip.zero + ir.zero})}};

  j["checks"]["plasma_signature"] =
      ip.pos == 1 && ip.neg == 1 && ip.zero == 2 * D;
  j["checks"]["reformed_full_signature"] =
      ip.pos + ir.pos == D && ip.neg + ir.neg == D &&
      ip.zero + ir.zero == 3 * D - 1;
  j["checks"]["vacuum_closed_form"] = mismatch < 1e-10;
}

inline Eigen::MatrixXd shaped_sample(const smoother_family& S,
                                     const smoother_grid& dom, rng& r,
                                     double p) {
  Eigen::MatrixXd u(dom.nt, dom.n2);
  for (int a = 0; a < dom.nt; ++a)
    for (int b = 0; b < dom.n2; ++b) u(a, b) = r.uniform(-1.0, 1.0);
  Eigen::MatrixXcd spec = S.forward(u);
  for (int a = 0; a < dom.nt; ++a)
    for (int b = 0; b < dom.n2; ++b) {
      const double ft = dom.freq_t(a), fx = dom.freq_x(b);
      spec(a, b) *= std::pow(1.0 + ft * ft + fx * fx, -0.5 * p);
    }
  return S.inverse(spec);
}

}  // namespace detail

inline nlohmann::json run_analyze(const scenario& sc) {
  nlohmann::json j = report_base(sc);
  if (sc.d == 2)
    detail::analyze_into<2>(sc, j);
  else
    detail::analyze_into<3>(sc, j);
  return j;
}

inline nlohmann::json run_stability(const scenario& sc) {
  nlohmann::json j = report_base(sc);
  const rt_assessment a = rt_stability(sc.stab.v, sc.stab.H, sc.stab.h,
                                       sc.stab.e1, sc.stab.N, sc.eps);
  const bool jb = joint_field_bound<3>(sc.stab.H, sc.stab.h, sc.delta0);
  j["zeta"] = a.zeta;
  if (std::isfinite(a.value))
    j["value"] = a.value;
  else
    j["value"] = "infinite";
  j["verdict"] = a.stable ? "pass" : "fail";
  j["checks"]["stable"] = a.stable;
  j["checks"]["joint_field_bound"] = jb;
  return j;
}

inline nlohmann::json run_solve2d(const scenario& sc,
                                  const std::filesystem::path& out,
                                  int threads) {
  if (sc.d != 2) throw validation_error("d: solve2d requires d = 2");
  linear_problem2d pb;
  pb.ring = sc.ring;
  pb.n1 = sc.n1;
  pb.n2 = sc.n2;
  pb.T = sc.T;
  pb.cfl = sc.cfl;
  pb.threads = threads;
  if (sc.forcing_recipe == "bump_drive") {
    const grid2d g = pb.grid();
    const double amp = sc.forcing_amp;
    pb.forcing = [g, amp](double, int i, int jj) {
      const double x1 = g.x1(i), x2 = g.x2(jj);
      const double shape =
          std::exp(-2.0 * x1 * x1) * (1.0 + 0.4 * std::sin(x2));
      vec<6> dir;
      dir << 0.3, 0.8, -0.2, 0.25, -0.15, 0.1;
      return vec<6>(amp * shape * dir);
    };
  }

  const solve_result2d res = fixed_point_solve(pb);

  {
    std::vector<std::vector<double>> rows;
    const auto& s = res.series;
    for (size_t k = 0; k < s.t.size(); ++k)
      rows.push_back({s.t[k], s.e0[k], s.e_dt[k], s.e_sd1[k], s.e_d2[k],
                      s.q0[k], s.q_dt[k], s.q_sd1[k], s.q_d2[k],
                      s.div_plasma[k], s.div_vacuum[k]});
    write_text_file(out / "series.csv",
                    csv_string({"t", "e0", "e_dt", "e_sd1", "e_d2", "q0",
                                "q_dt", "q_sd1", "q_d2", "div_plasma",
                                "div_vacuum"},
                               rows));
  }
  {
    const grid2d g = pb.grid();
    const Eigen::VectorXd psi = res.psi.vals.back();
    std::vector<std::vector<double>> rows;
    for (int jj = 0; jj < g.n2; ++jj) rows.push_back({g.x2(jj), psi(jj)});
    write_text_file(out / "psi.csv", csv_string({"x2", "psi"}, rows));
  }
  write_text_file(out / "plasma.pvigrid",
                  pvigrid_string(res.W, {"q", "v1", "v2", "H1", "H2", "S"}));
  write_text_file(out / "vacuum.pvigrid",
                  pvigrid_string(res.w, {"h1", "h2", "e"}));

  nlohmann::json j = report_base(sc);
  j["dt"] = res.dt;
  j["steps"] = res.steps;
  j["fixed_point"] = {{"iterations", res.fp_iterations},
                      {"converged", res.fp_converged},
                      {"increments", res.fp_increments},
                      {"ratios", res.fp_ratios}};
  j["final"] = {{"div_plasma", res.series.div_plasma.back()},
                {"div_vacuum", res.series.div_vacuum.back()}};
  j["checks"]["fixed_point_converged"] = res.fp_converged;
  return j;
}

inline nlohmann::json run_compat(const scenario& sc,
                                 const std::filesystem::path& out) {
  if (sc.d != 2) throw validation_error("d: compat requires d = 2");
  const grid2d g(sc.n1, sc.n2);
  field2d<6> U0(g);
  field2d<3> u0(g);
  for (int i = 0; i < g.n1; ++i) {
    const plasma_state<2> st = sc.ring.plasma(g.x1(i));
    const vacuum_state<2> va = sc.ring.vacuum();
    for (int jj = 0; jj < g.n2; ++jj) {
      auto col = U0.col(i, jj);
      col(0) = st.q;
      col(1) = st.v(0);
      col(2) = st.v(1);
      col(3) = st.H(0);
      col(4) = st.H(1);
      col(5) = st.S;
      auto vc = u0.col(i, jj);
      vc(0) = va.h(0);
      vc(1) = va.h(1);
      vc(2) = va.e(0);
    }
  }
  const Eigen::VectorXd phi0 = Eigen::VectorXd::Zero(sc.n2);

  const trace_set2d tr =
      trace_recursion(U0, u0, phi0, sc.ring.gas, sc.eps, sc.m);
  const compat_residuals res = compat_check(tr, sc.m);

  std::vector<std::vector<double>> rows;
  nlohmann::json orders = nlohmann::json::array();
  bool ok = true;
  for (int k = 0; k <= sc.m; ++k) {
    const double qs = res.q_row[k].cwiseAbs().maxCoeff();
    const double es = res.e_row[k].cwiseAbs().maxCoeff();
    rows.push_back({static_cast<double>(k), qs, es});
    orders.push_back({{"order", k}, {"q_row_sup", qs}, {"e_row_sup", es}});
    ok = ok && qs < sc.delta && es < sc.delta;
  }
  write_text_file(out / "residuals.csv",
                  csv_string({"order", "q_row_sup", "e_row_sup"}, rows));

  nlohmann::json j = report_base(sc);
  j["orders"] = orders;
  j["delta"] = sc.delta;
  j["checks"]["residuals_within_delta"] = ok;
  return j;
}

inline nlohmann::json run_smooth_test(const scenario& sc,
                                      const std::filesystem::path& out) {
  if (!sc.seed)
    throw validation_error("ring.seed: required for smooth-test sampling");
  const smoother_grid dom(sc.n2, sc.n2);
  const smoother_family S(dom);
  rng r(*sc.seed);
  const Eigen::MatrixXd u1 = detail::shaped_sample(S, dom, r, 1.0);
  const Eigen::MatrixXd u2 = detail::shaped_sample(S, dom, r, 2.0);
  const Eigen::MatrixXd u3 = detail::shaped_sample(S, dom, r, 3.0);

  const std::vector<double> thetas = {2.0, 4.0, 8.0, 16.0};
  std::vector<std::vector<double>> rows;
  std::vector<double> gain, approx, lift;
  double idem = 0.0;
  for (double th : thetas) {
    const Eigen::MatrixXd s2 = S.apply(u2, th);
    gain.push_back(S.sobolev_norm(s2, 2.0) / (th * S.sobolev_norm(u2, 1.0)));
    approx.push_back(S.sobolev_norm(u3 - S.apply(u3, th), 0.0) * th * th /
                     S.sobolev_norm(u3, 2.0));
    lift.push_back(S.sobolev_norm(S.apply(u1, th), 1.0) /
                   (th * S.sobolev_norm(u1, 0.0)));
    idem = std::max(idem, (S.apply(s2, th) - s2).cwiseAbs().maxCoeff());
    rows.push_back({th, gain.back(), approx.back(), lift.back()});
  }
  write_text_file(out / "constants.csv",
                  csv_string({"theta", "gain", "approximation", "lift"}, rows));

  auto spread = [](const std::vector<double>& c) {
    const auto [lo, hi] = std::minmax_element(c.begin(), c.end());
    return *hi / *lo;
  };
  nlohmann::json j = report_base(sc);
  j["constants"] = {{"gain", gain}, {"approximation", approx}, {"lift", lift}};
  j["spread"] = {{"gain", spread(gain)},
                 {"approximation", spread(approx)},
                 {"lift", spread(lift)}};
  j["idempotence_sup"] = idem;
  j["checks"]["constants_stable"] =
      spread(gain) < 2.0 && spread(approx) < 2.0 && spread(lift) < 2.0;
  j["checks"]["idempotent"] = idem <= 1e-12 * u2.cwiseAbs().maxCoeff();
  return j;
}

inline bool all_checks_pass(const nlohmann::json& j) {
  if (!j.contains("checks")) return true;
  for (const auto& [name, flag] : j["checks"].items())
    if (!flag.get<bool>()) return false;
  return true;
}

// Runs one subcommand, writes report.json (plus per-command artifacts) under
// out, and returns 0 iff all configured checks passed.
inline int run_subcommand(const std::string& sub, const scenario& sc,
                          const std::filesystem::path& out, int threads = 0) {
  std::filesystem::create_directories(out);
  nlohmann::json j;
  if (sub == "analyze")
    j = run_analyze(sc);
  else if (sub == "stability")
    j = run_stability(sc);
  else if (sub == "solve2d")
    j = run_solve2d(sc, out, threads);
  else if (sub == "compat")
    j = run_compat(sc, out);
  else if (sub == "smooth-test")
    j = run_smooth_test(sc, out);
  else
    throw validation_error("subcommand: unknown '" + sub + "'");

  const bool pass = all_checks_pass(j);
  j["pass"] = pass;
  write_text_file(out / "report.json", j.dump(2) + "\n");
  return pass ? 0 : 1;
}

// Full guarded pipeline used by the executable: parse, optionally override
// the seed, run, and map thrown errors to an error.json plus exit code 2.
inline int run_cli(const std::string& sub, const std::string& scenario_text,
                   const std::filesystem::path& out, int threads = 0,
                   std::optional<uint64_t> seed_override = std::nullopt) {
  std::filesystem::create_directories(out);
  try {
    scenario sc = parse_scenario(scenario_text);
    if (seed_override) sc.seed = *seed_override;
    return run_subcommand(sub, sc, out, threads);
  } catch (const error& e) {
    nlohmann::json j;
    j["version"] = version_string;
    j["error"] = e.what();
    write_text_file(out / "error.json", j.dump(2) + "\n");
    return 2;
  }
}

}  // namespace pvi
