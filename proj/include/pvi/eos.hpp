#pragma once

// Polytropic closure rho(p,S) = (p e^{-S})^{1/gamma}. The internal energy
// p/((gamma-1) rho) satisfies the Gibbs relation with temperature equal to
// the internal energy itself, which keeps every derived quantity closed-form.

#include <cmath>

#include "pvi/error.hpp"

namespace pvi {

struct thermo {
  double rho;     // mass density
  double e_int;   // specific internal energy
  double f_index; // relativistic enthalpy-like index
  double a2;      // dp/drho at fixed entropy
  double cs2;     // sound speed squared, a2 / f_index
  double theta;   // absolute temperature
};

struct eos {
  double gamma = 5.0 / 3.0;
  double rho_lo = 0.01;
  double rho_hi = 100.0;

  double rho_of(double p, double S) const {
    return std::pow(p * std::exp(-S), 1.0 / gamma);
  }

  double p_of(double rho, double S) const {
    return std::pow(rho, gamma) * std::exp(S);
  }

  thermo eval(double p, double S, double eps) const {
    if (!(p > 0.0) || !std::isfinite(p) || !std::isfinite(S))
      throw out_of_window("eos: p must be positive and finite");
    thermo t;
    t.rho = rho_of(p, S);
    if (!(t.rho > rho_lo && t.rho < rho_hi))
      throw out_of_window("eos: density outside admissible window");
    t.e_int = p / ((gamma - 1.0) * t.rho);
    t.theta = t.e_int;
    t.f_index = 1.0 + eps * eps * (t.e_int + p / t.rho);
    t.a2 = gamma * p / t.rho;
    t.cs2 = t.a2 / t.f_index;
    if (!(t.cs2 > 0.0) || !(t.cs2 * eps * eps < 1.0) || !std::isfinite(t.cs2))
      throw hyperbolicity_lost("eos: sound speed outside (0, 1/eps)");
    return t;
  }
};

}  // namespace pvi
