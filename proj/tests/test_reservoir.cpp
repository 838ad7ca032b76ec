#include <gtest/gtest.h>

#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include <rotsgpe/reservoir.hpp>
#include <rotsgpe/rng.hpp>

using namespace rotsgpe;

namespace {

TrapGeometry paper_trap(double f = 0.979) { return TrapGeometry::from_hz(8.3, 5.3, f, 1.443160648e-25); }

ReservoirSpec spec(double T, double mu, double E_R, double f = 0.979) {
  ReservoirSpec s;
  s.T = T;
  s.mu = mu;
  s.E_R = E_R;
  s.scattering_length = 5.313e-9;
  s.trap = paper_trap(f);
  return s;
}

struct PhaseSpace {
  double N = 0, Lz = 0, Lz2 = 0;
};

// Importance sampling of (2pi)^-3 int d3x d3k A F with F the Bose distribution
// above E_R, proposals from the Boltzmann factor of the rotating-frame energy.
PhaseSpace monte_carlo(const ReservoirSpec& s, std::size_t n, std::uint64_t seed) {
  const auto& t = s.trap;
  const double b = s.beta(), hb = constants::hbar, m = t.mass;
  const double wp = t.omega_perp();
  const double sx = 1.0 / std::sqrt(b * m * wp * wp), sz = 1.0 / std::sqrt(b * m * t.omega_z * t.omega_z);
  const double sk = std::sqrt(m / b) / hb;
  const double Zx = std::pow(2 * constants::pi, 1.5) * sx * sx * sz;
  const double Zk = std::pow(2 * constants::pi, 1.5) * sk * sk * sk;
  const double norm = Zx * Zk / std::pow(2 * constants::pi, 3);
  Philox4x32 g(seed, 0);
  std::normal_distribution<double> nd;
  PhaseSpace r;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = sx * nd(g), y = sx * nd(g), z = sz * nd(g);
    const double kx = sk * nd(g), ky = sk * nd(g), kz = sk * nd(g);
    const double eps = hb * hb * (kx * kx + ky * ky + kz * kz) / (2 * m) + t.V_eff(std::hypot(x, y), z);
    if (eps < s.E_R) continue;
    const double wgt = std::exp(b * s.mu) / (-std::expm1(-b * (eps - s.mu)));
    const double L = hb * (x * ky - y * kx) + m * t.Omega * (x * x + y * y);
    r.N += wgt;
    r.Lz += wgt * L;
    r.Lz2 += wgt * L * L;
  }
  r.N *= norm / n;
  r.Lz *= norm / n;
  r.Lz2 *= norm / n;
  return r;
}

// G1 from the p,q double series, each term a 1D integral over s with the
// t-integral done in closed form.
double G1_series(double V, const ReservoirSpec& s) {
  const double beta = s.beta();
  const double d = beta * (V - s.mu), bb = beta * std::max(s.E_R - V, 0.0), c = 0.25 * beta * V * beta * V;
  const double C = 4.0 * s.trap.mass / (constants::pi * std::pow(constants::hbar, 3)) *
                   std::pow(s.scattering_length * constants::k_B * s.T, 2);
  double total = 0.0;
  const double gap = d + bb;  // every term is below e^{-gap (p+q)}
  const int P = static_cast<int>(std::ceil(42.0 / gap)) + 2;
  for (int p = 1; p < P; ++p)
    for (int q = 1; q + p < P; ++q) {
      const double pre = std::exp(-d * (p + q)) / (p * q);
      // integrand e^{-s} exp(-max(q bb, c p q / s)) on [p bb, inf)
      auto f = [&](double sv) { return std::exp(-sv - std::max(q * bb, c * p * q / sv)); };
      const double lo = p * bb;
      double I;
      if (bb > 0.0) {
        const double sstar = std::max(lo, c * p / bb);
        I = (sstar > lo ? boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, sstar, 6, 1e-13) : 0.0) +
            std::exp(-sstar - q * bb);
      } else {
        I = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, std::numeric_limits<double>::infinity(),
                                                                           6, 1e-13);
      }
      total += pre * I;
    }
  return C * total;
}

}  // namespace

TEST(Thermodynamics, TransitionTemperatureFormula) {
  const auto t0 = paper_trap(0.0);
  const double N = 1.3e5;
  const double Tc0 = 0.94 * constants::hbar * std::cbrt(t0.omega_r * t0.omega_r * t0.omega_z * N) / constants::k_B;
  EXPECT_NEAR(transition_temperature(N, t0), Tc0, 1e-12 * Tc0);
  const auto t = paper_trap(0.979);
  EXPECT_NEAR(transition_temperature(N, t), Tc0 * std::cbrt(1 - 0.979 * 0.979), 1e-12 * Tc0);
}

TEST(Thermodynamics, NoCutoffCountAtTcIsNearN) {
  // 0.94^3 zeta(3) ~ 1
  const auto t = paper_trap(0.5);
  ReservoirSpec s;
  s.trap = t;
  s.T = transition_temperature(1e5, t);
  s.mu = 0;
  s.E_R = 0;
  EXPECT_NEAR(noncondensate_number(s) / 1e5, std::pow(0.94, 3) * boost::math::zeta(3.0), 1e-10);
}

TEST(Thermodynamics, MonteCarloPhaseSpaceAgreesToOnePercent) {
  const auto trap = paper_trap();
  for (auto [T, muq] : {std::pair{11e-9, 3.5}, std::pair{4e-9, 0.5}}) {
    const auto s = spec(T, muq * trap.eps000(), 5.0 * trap.energy_unit());
    const auto mc = monte_carlo(s, 2'000'000, 42);
    const auto m = angular_momentum_moments(s);
    EXPECT_NEAR(mc.N / m.N_NC, 1.0, 0.01) << "T=" << T;
    EXPECT_NEAR(mc.Lz / m.Lz_mean, 1.0, 0.01) << "T=" << T;
    EXPECT_NEAR(mc.Lz2 / m.Lz2_mean, 1.0, 0.01) << "T=" << T;
  }
}

TEST(Thermodynamics, DensityIntegratesToNumber) {
  const auto trap = paper_trap(0.8);
  const auto s = spec(20e-9, 0.0, 3.0 * trap.energy_unit(), 0.8);
  // cylindrical integral with the radial coordinate scaled to the thermal size
  const double Rr = std::sqrt(2.0 / (s.beta() * trap.mass * std::pow(trap.omega_perp(), 2)));
  const double Rz = std::sqrt(2.0 / (s.beta() * trap.mass * std::pow(trap.omega_z, 2)));
  auto inner = [&](double r) {
    auto fz = [&](double z) { return noncondensate_density(r * Rr, z * Rz, s); };
    return 2.0 * boost::math::quadrature::gauss_kronrod<double, 31>::integrate(fz, 0.0, 8.0, 8, 1e-10);
  };
  auto outer = [&](double r) { return 2 * constants::pi * r * inner(r); };
  const double N = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(outer, 0.0, 8.0, 8, 1e-10) * Rr * Rr * Rz;
  EXPECT_NEAR(N / noncondensate_number(s), 1.0, 1e-6);
}

TEST(Rates, OneDimensionalFormMatchesDoubleSeries) {
  const double kT = constants::k_B * 10e-9;
  for (auto [bmu, bER] : {std::pair{1.0, 3.0}, std::pair{0.5, 1.5}, std::pair{-0.5, 2.0}}) {
    auto s = spec(10e-9, bmu * kT, bER * kT);
    for (double frac : {0.2, 0.6, 0.7, 0.8, 0.95, 1.0, 1.2}) {
      const double V = frac * s.E_R;
      const double ref = G1_series(V, s);
      EXPECT_NEAR(growth_rate_G1_at(V, s), ref, 1e-8 * ref) << "mu/kT=" << bmu << " V/E_R=" << frac;
    }
  }
}

TEST(Rates, InnerClosedFormAndEdgeBesselForm) {
  const double kT = constants::k_B * 10e-9;
  const auto s = spec(10e-9, 0.1 * kT, 0.3 * kT);
  const auto [G1in, G2in] = growth_rates_inner(s);
  EXPECT_NEAR(growth_rate_G1_at(0.0, s), G1in, 1e-12 * G1in);
  EXPECT_NEAR(growth_rate_G1_at(0.5 * s.E_R, s), G1in, 1e-12 * G1in);
  const auto [G1out, G2out] = growth_rates_edge(s);
  EXPECT_NEAR(growth_rate_G1_at(s.E_R, s), G1out, 1e-10 * G1out);
  EXPECT_GT(G2in, 0.0);
  EXPECT_GT(G2out, 0.0);
  EXPECT_LT(G1out, G1in);
}

TEST(Rates, G2InnerMatchesTripleSum) {
  const double kT = constants::k_B * 10e-9;
  const auto s = spec(10e-9, 0.1 * kT, 0.3 * kT);
  const double b = s.beta(), z = std::exp(b * (s.mu - s.E_R));
  // direct Lerch sums
  double sum = 0.0;
  for (int r = 1; r < 3000; ++r) {
    double phi = 0.0, zk = 1.0;
    for (int k = 0; k < 6000; ++k, zk *= z) phi += zk / (r + 1.0 + k);
    const double term = std::exp(r * b * (s.mu - 2 * s.E_R)) * phi * phi;
    sum += term;
    if (term < 1e-20 * sum) break;
  }
  const double C = 4.0 * s.trap.mass / (constants::pi * std::pow(constants::hbar, 3)) *
                   std::pow(s.scattering_length * kT, 2);
  const double ref = C * z * z * sum;
  EXPECT_NEAR(growth_rates_inner(s).second, ref, 1e-10 * ref);
}

TEST(Rates, ProfileRegions) {
  const double kT = constants::k_B * 10e-9;
  const auto s = spec(10e-9, 0.1 * kT, 0.3 * kT);
  const double QR = std::sqrt(2.0 * s.E_R / (s.trap.mass * s.trap.omega_r * s.trap.omega_r));
  const auto prof = growth_rate_profile({0.0, 0.5 * QR, 0.9 * QR, QR, 1.1 * QR}, s);
  EXPECT_EQ(prof[0].region, RateRegion::Inner);
  EXPECT_EQ(prof[2].region, RateRegion::Outer);
  EXPECT_EQ(prof[4].region, RateRegion::Beyond);
  EXPECT_NEAR(prof[0].G1, prof[1].G1, 1e-12 * prof[0].G1);
}

TEST(Rates, DivergeWhenChemicalPotentialReachesCutoff) {
  const double kT = constants::k_B * 10e-9;
  const auto s = spec(10e-9, 0.3 * kT, 0.3 * kT);
  const auto r = compute_rates(s);
  EXPECT_TRUE(r.divergent);
}

TEST(Rates, ScatteringAmplitude) {
  const double kT = constants::k_B * 10e-9;
  const auto s = spec(10e-9, 0.1 * kT, 0.3 * kT);
  const double X = 0.2;
  const double ref = 16 * constants::pi * s.scattering_length * s.scattering_length * kT / constants::hbar *
                     std::exp(X) / std::pow(std::expm1(X), 2);
  EXPECT_NEAR(scattering_amplitude(s), ref, 1e-12 * ref);
}
