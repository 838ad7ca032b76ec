#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <string>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "special.hpp"
#include "units.hpp"

namespace rotsgpe {

/// Thermal non-condensate band: Bose-Einstein reservoir above the cutoff E_R.
/// All quantities SI.
struct ReservoirSpec {
  double T = 0.0;                  // K
  double mu = 0.0;                 // J
  double E_R = 0.0;                // J
  double scattering_length = 0.0;  // m, only needed for rates
  TrapGeometry trap;

  double beta() const { return 1.0 / (constants::k_B * T); }
  double Omega() const { return trap.Omega; }

  void validate() const {
    trap.validate();
    if (!(T > 0.0)) throw std::invalid_argument("ReservoirSpec: T must be positive");
    if (!(E_R >= 0.0)) throw std::invalid_argument("ReservoirSpec: E_R must be >= 0");
  }
};

struct RateSet {
  double G1_in = 0.0;
  double G2_in = 0.0;
  double gamma = 0.0;
  double G1_out = 0.0;
  double G2_out = 0.0;
  double M_amp = 0.0;   // m^2/s; the kernel is M_amp / ((2 pi)^3 |k|)
  bool divergent = false;

  /// hbar gamma / (k_B T), the damping used by the 2D equation.
  double gamma_dimensionless(double T) const { return constants::hbar * gamma / (constants::k_B * T); }
};

// ---------------------------------------------------------------- thermodynamics

/// Ideal-gas transition temperature including the centrifugal softening of the
/// radial trap.
inline double transition_temperature(double N, const TrapGeometry& trap) {
  if (!(N >= 1.0)) throw std::invalid_argument("transition_temperature: N must be >= 1");
  const double Tc0 = 0.94 * constants::hbar * std::cbrt(trap.omega_r * trap.omega_r * trap.omega_z) *
                     std::cbrt(N) / constants::k_B;
  const double f = trap.Omega / trap.omega_r;
  return Tc0 * std::cbrt(1.0 - f * f);
}

inline double thermal_wavelength(double T, double mass) {
  return std::sqrt(2.0 * constants::pi * constants::hbar * constants::hbar / (mass * constants::k_B * T));
}

/// Semiclassical density of atoms above the cutoff at a point with potential V [J].
inline double noncondensate_density_at(double V, const ReservoirSpec& s) {
  const double b = s.beta();
  const double y = b * std::max(s.E_R - V, 0.0);
  const double lam = thermal_wavelength(s.T, s.trap.mass);
  if (!std::isfinite(V)) return 0.0;
  const double lz = b * (s.mu - V);
  if (lz < -700.0) return 0.0;
  return incomplete_bose(1.5, std::exp(lz), y) / (lam * lam * lam);
}

/// Density at cylindrical position (r, z) [m] in the rotating frame.
inline double noncondensate_density(double r, double z, const ReservoirSpec& s) {
  return noncondensate_density_at(s.trap.V_eff(r, z), s);
}

inline double noncondensate_number(const ReservoirSpec& s) {
  const double b = s.beta();
  const double x = b * constants::hbar * s.trap.omega_bar();
  return incomplete_bose(3.0, std::exp(b * s.mu), b * s.E_R) / (x * x * x);
}

struct AngularMomentumMoments {
  double N_NC = 0.0;
  double Lz_mean = 0.0;      // <L_z>, J s
  double Lz2_mean = 0.0;     // <L_z^2>, (J s)^2
  double Lz_per_N = 0.0;     // <L_z>/(hbar N_NC)
  double sigma_Lz = 0.0;     // sigma(L_z)/hbar
};

inline AngularMomentumMoments angular_momentum_moments(const ReservoirSpec& s) {
  const TrapGeometry& t = s.trap;
  const double b = s.beta();
  const double wp = t.omega_perp();
  const double w4 = std::pow(t.omega_z * wp * wp * wp, 0.25);
  const double w5 = std::pow(t.omega_z * wp * wp * wp * wp, 0.2);
  const double z = std::exp(b * s.mu), y = b * s.E_R;
  const double hb = constants::hbar;
  AngularMomentumMoments m;
  m.N_NC = noncondensate_number(s);
  m.Lz_mean = 2.0 * hb * (t.Omega / wp) * incomplete_bose(4.0, z, y) / std::pow(b * hb * w4, 4);
  m.Lz2_mean = 2.0 * hb * hb * incomplete_bose(5.0, z, y) / std::pow(b * hb * w5, 5) *
               (1.0 + 4.0 * t.Omega * t.Omega / (wp * wp));
  m.Lz_per_N = m.Lz_mean / (hb * m.N_NC);
  const double var = m.Lz2_mean / m.N_NC - std::pow(m.Lz_mean / m.N_NC, 2);
  m.sigma_Lz = std::sqrt(std::max(var, 0.0)) / hb;
  return m;
}

// ---------------------------------------------------------------- growth rates

namespace detail {

// (4m / pi hbar^3)(a k_B T)^2
inline double rate_prefactor(const ReservoirSpec& s) {
  const double akT = s.scattering_length * constants::k_B * s.T;
  const double hb = constants::hbar;
  return 4.0 * s.trap.mass / (constants::pi * hb * hb * hb) * akT * akT;
}

// -ln(1 - e^{-w}) for w > 0.
inline double log_bose_tail(double w) { return -std::log(-std::expm1(-w)); }

}  // namespace detail

/// Inner-region rates (V_eff <= 2E_R/3), where they do not depend on position.
inline std::pair<double, double> growth_rates_inner(const ReservoirSpec& s) {
  const double b = s.beta();
  const double d = b * (s.E_R - s.mu);  // > 0 required
  if (!(d > 0.0)) return {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  const double C = detail::rate_prefactor(s);
  const double l1 = std::log(-std::expm1(-d));
  const double G1 = C * l1 * l1;

  const double z = std::exp(-d);
  const double rho = b * (s.mu - 2.0 * s.E_R);  // per-r exponent, < 0
  // Term r is below e^{r rho} / ((r+1)(1-z))^2; pick R so the tail is negligible.
  const double omz = -std::expm1(-d);
  int R = 1;
  while (R < 10000000) {
    const double tail = std::exp((R + 1) * rho) / (-std::expm1(rho)) / std::pow((R + 2.0) * omz, 2);
    if (tail < 1e-18) break;
    R = R < 16 ? R + 1 : R + R / 4;
  }
  const auto phi = lerch_phi1_ladder(z, R);
  double sum = 0.0;
  for (int r = R; r >= 1; --r) sum += std::exp(r * rho) * phi[static_cast<std::size_t>(r)] * phi[static_cast<std::size_t>(r)];
  const double G2 = C * std::exp(-2.0 * d) * sum;
  return {G1, G2};
}

/// G1 at a point with potential V [J].
///
/// Summing the p,q series under the integral turns both Bose factors into
/// closed forms, leaving
///   G1 = C [ int_b^{u*} n(u) L(c/u) du + L(b) L(u*) ],   u* = max(b, c/b),
/// with n(u) = 1/(e^{u+d}-1), L(w) = -ln(1-e^{-w-d}), d = beta(V-mu),
/// b = beta max(E_R-V, 0), c = (beta V)^2/4. For c <= b^2 the integral vanishes.
inline double growth_rate_G1_at(double V, const ReservoirSpec& s) {
  const double beta = s.beta();
  const double d = beta * (V - s.mu);
  const double b = beta * std::max(s.E_R - V, 0.0);
  const double c = 0.25 * (beta * V) * (beta * V);
  if (!(b + d > 0.0)) return std::numeric_limits<double>::infinity();
  const double C = detail::rate_prefactor(s);
  auto n = [d](double u) { return 1.0 / std::expm1(u + d); };
  auto L = [d](double w) { return detail::log_bose_tail(w + d); };
  auto f = [&](double u) {
    if (u <= 0.0) return 0.0;
    return n(u) * L(c / u);
  };
  if (c <= b * b) return C * L(b) * L(b);
  if (b == 0.0) {
    boost::math::quadrature::exp_sinh<double> es;
    return C * es.integrate(f, 1e-14);
  }
  const double us = c / b;
  const double I = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, b, us, 15, 1e-14);
  return C * (I + L(b) * L(us));
}

/// Edge rates (V_eff = E_R) as Bessel series.
///
/// The exponential integral at the edge is int_0^inf e^{-s - B/s} ds = 2 sqrt(B) K1(2 sqrt(B))
/// with 2 sqrt(B) = beta E_R sqrt(pq), which fixes the Bessel argument.
/// The triple sum for G2 collapses with P = p+r, Q = q+r to a double sum weighted by
/// S(m) = sum_{r=1}^{m-1} e^{-beta mu r}.
inline std::pair<double, double> growth_rates_edge(const ReservoirSpec& s) {
  const double beta = s.beta();
  const double d = beta * (s.E_R - s.mu);
  if (!(d > 0.0)) return {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  const double C = detail::rate_prefactor(s);
  const double x = beta * s.E_R;
  const double bm = beta * s.mu;
  if (x == 0.0) return {0.0, 0.0};
  // Summed in shells max(p,q) = P; shells eventually shrink geometrically,
  // so stop once the extrapolated remainder is negligible.
  std::vector<double> S{0.0, 0.0};
  double g1 = 0.0, g2 = 0.0, prev = 0.0;
  for (int P = 1; P < 1000000; ++P) {
    S.push_back(0.0);
    if (P >= 2) S[static_cast<std::size_t>(P)] = S[static_cast<std::size_t>(P - 1)] + std::exp(-bm * (P - 1));
    double c1 = 0.0, c2 = 0.0;
    for (int q = 1; q <= P; ++q) {
      const double sq = std::sqrt(static_cast<double>(P) * q);
      const double e = std::exp(-d * (P + q));
      if (e == 0.0) continue;
      const double t = e / sq * boost::math::cyl_bessel_k(1, x * sq);
      const double mult = (q == P) ? 1.0 : 2.0;
      c1 += mult * t;
      c2 += mult * t * S[static_cast<std::size_t>(q)];
    }
    g1 += c1;
    g2 += c2;
    const double c = c1 + c2;
    if (P > 4 && prev > 0.0) {
      const double ratio = c / prev;
      if (ratio < 1.0 && c * ratio / (1.0 - ratio) < 1e-16 * (g1 + g2)) break;
    }
    if (c == 0.0 && P > 4) break;
    prev = c;
  }
  return {C * x * g1, C * x * g2};
}

/// Scattering amplitude M = 16 pi a^2 k_B T / hbar * e^X/(e^X-1)^2, X = beta(E_R - mu).
inline double scattering_amplitude(const ReservoirSpec& s) {
  const double X = s.beta() * (s.E_R - s.mu);
  if (!(X > 0.0)) return std::numeric_limits<double>::infinity();
  const double sh = std::sinh(0.5 * X);
  return 16.0 * constants::pi * s.scattering_length * s.scattering_length * constants::k_B * s.T / constants::hbar /
         (4.0 * sh * sh);
}

inline RateSet compute_rates(const ReservoirSpec& s) {
  RateSet r;
  if (!(s.mu < s.E_R)) {
    const double inf = std::numeric_limits<double>::infinity();
    r.G1_in = r.G2_in = r.gamma = r.G1_out = r.G2_out = r.M_amp = inf;
    r.divergent = true;
    return r;
  }
  std::tie(r.G1_in, r.G2_in) = growth_rates_inner(s);
  r.gamma = r.G1_in + r.G2_in;
  std::tie(r.G1_out, r.G2_out) = growth_rates_edge(s);
  r.M_amp = scattering_amplitude(s);
  return r;
}

enum class RateRegion { Inner, Outer, Beyond };

inline const char* to_string(RateRegion r) {
  switch (r) {
    case RateRegion::Inner: return "inner";
    case RateRegion::Outer: return "outer";
    default: return "beyond";
  }
}

struct RateProfilePoint {
  double Q = 0.0;  // m
  double V = 0.0;  // J
  double G1 = 0.0;
  RateRegion region = RateRegion::Inner;
};

/// G1 along a radius of the spherical trap V(Q) = m omega_r^2 Q^2/2.
inline std::vector<RateProfilePoint> growth_rate_profile(const std::vector<double>& Q, const ReservoirSpec& s) {
  std::vector<RateProfilePoint> out;
  out.reserve(Q.size());
  for (double q : Q) {
    RateProfilePoint p;
    p.Q = q;
    p.V = 0.5 * s.trap.mass * s.trap.omega_r * s.trap.omega_r * q * q;
    p.G1 = growth_rate_G1_at(p.V, s);
    p.region = p.V <= 2.0 * s.E_R / 3.0 ? RateRegion::Inner : (p.V <= s.E_R ? RateRegion::Outer : RateRegion::Beyond);
    out.push_back(p);
  }
  return out;
}

}  // namespace rotsgpe
