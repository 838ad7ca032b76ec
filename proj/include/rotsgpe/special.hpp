#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/zeta.hpp>

namespace rotsgpe {

/// Incomplete Bose-Einstein function
///   g_nu(z, y) = sum_{l>=1} z^l l^{-nu} Gamma(nu, y l) / Gamma(nu)
///              = (1/Gamma(nu)) int_y^inf x^{nu-1} z e^{-x} / (1 - z e^{-x}) dx.
///
/// Converges for z e^{-y} < 1, so z > 1 is allowed when y > 0 (a cutoff above
/// the chemical potential). z e^{-y} == 1 is accepted only for y = 0, nu > 1.
inline double incomplete_bose(double nu, double z, double y) {
  if (!(nu > 0.0)) throw std::domain_error("incomplete_bose: nu must be positive");
  if (!(y >= 0.0)) throw std::domain_error("incomplete_bose: y must be >= 0");
  if (!(z >= 0.0)) throw std::domain_error("incomplete_bose: fugacity must be >= 0");
  if (z == 0.0) return 0.0;
  const double log_x0 = std::log(z) - y;  // log of z e^{-y}
  if (log_x0 > 0.0 || (log_x0 == 0.0 && (y > 0.0 || nu <= 1.0)))
    throw std::domain_error("incomplete_bose: series diverges (need z e^{-y} < 1; got z=" + std::to_string(z) +
                            ", y=" + std::to_string(y) + ")");
  if (log_x0 == 0.0) return boost::math::zeta(nu);

  if (z <= 1.0 && log_x0 <= std::log(0.9)) {
    // Direct series. Term magnitude is bounded by x0^l, so the tail after L is
    // below x0^{L+1}/(1-x0) relative to the first term.
    const double x0 = std::exp(log_x0);
    double sum = 0.0;
    for (int l = 1; l < 100000; ++l) {
      const double q = (y == 0.0) ? 1.0 : boost::math::gamma_q(nu, y * l);
      const double term = std::exp(l * std::log(z) - nu * std::log(static_cast<double>(l))) * q;
      sum += term;
      const double bound = std::exp((l + 1) * log_x0) / (1.0 - x0);
      if (bound < 1e-17 * sum || term == 0.0) break;
    }
    return sum;
  }

  // Integral form in u = x - y; the near-singular factor 1/(1 - x0 e^{-u})
  // is evaluated through expm1.
  auto f = [&](double u) {
    const double denom = -std::expm1(log_x0 - u);
    const double num = std::exp(log_x0 - u);
    if (num == 0.0) return 0.0;
    const double x = y + u;
    const double pw = (nu == 1.0) ? 1.0 : std::pow(x, nu - 1.0);
    return pw * num / denom;
  };
  boost::math::quadrature::exp_sinh<double> integrator;
  double err = 0.0;
  const double val = integrator.integrate(f, 1e-15, &err);
  return val / std::tgamma(nu);
}

/// Ordinary Bose-Einstein function g_nu(z) = g_nu(z, 0).
inline double bose_function(double nu, double z) { return incomplete_bose(nu, z, 0.0); }

/// Lerch transcendent Phi(z, 1, a) = sum_{k>=0} z^k/(a+k) for 0 <= z < 1, a > 0.
inline double lerch_phi1(double z, double a) {
  if (!(z >= 0.0 && z < 1.0)) throw std::domain_error("lerch_phi1: need 0 <= z < 1");
  if (!(a > 0.0)) throw std::domain_error("lerch_phi1: need a > 0");
  if (z <= 0.9) {
    double sum = 0.0, zk = 1.0;
    for (int k = 0; k < 100000; ++k) {
      const double term = zk / (a + k);
      sum += term;
      if (zk * z / ((a + k + 1) * (1.0 - z)) < 1e-17 * sum) break;
      zk *= z;
    }
    return sum;
  }
  // int_0^1 t^{a-1}/(1 - z t) dt
  auto f = [&](double t) { return std::pow(t, a - 1.0) / (1.0 - z * t); };
  boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate(f, 0.0, 1.0, 1e-15);
}

/// Phi(z, 1, r+1) for r = 1..R by downward recurrence Phi(a) = 1/a + z Phi(a+1),
/// seeded at the top; stable because |z| < 1 damps the seed error.
inline std::vector<double> lerch_phi1_ladder(double z, int R) {
  std::vector<double> out(static_cast<std::size_t>(R + 1), 0.0);
  if (R < 1) return out;
  out[static_cast<std::size_t>(R)] = lerch_phi1(z, R + 1.0);
  for (int r = R - 1; r >= 1; --r) out[static_cast<std::size_t>(r)] = 1.0 / (r + 1.0) + z * out[static_cast<std::size_t>(r + 1)];
  return out;
}

}  // namespace rotsgpe
