#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rotsgpe {

namespace constants {
inline constexpr double hbar = 1.054571817e-34;   // J s
inline constexpr double k_B = 1.380649e-23;       // J/K
inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
}  // namespace constants

/// Cylindrically symmetric harmonic trap viewed from a frame rotating at Omega.
///
/// All frequencies are angular [rad/s]. Internally the library works in units
/// hbar = m = omega_r = 1: lengths in r0, energies in hbar*omega_r, times in
/// 1/omega_r. The helpers below are the only place SI quantities enter.
struct TrapGeometry {
  double omega_r = 0.0;
  double omega_z = 0.0;
  double Omega = 0.0;
  double mass = 0.0;

  static TrapGeometry from_hz(double fr_hz, double fz_hz, double Omega_frac, double mass_kg) {
    TrapGeometry t;
    t.omega_r = constants::two_pi * fr_hz;
    t.omega_z = constants::two_pi * fz_hz;
    t.Omega = Omega_frac * t.omega_r;
    t.mass = mass_kg;
    t.validate();
    return t;
  }

  void validate() const {
    if (!(omega_r > 0.0)) throw std::invalid_argument("TrapGeometry: omega_r must be positive");
    if (!(omega_z > 0.0)) throw std::invalid_argument("TrapGeometry: omega_z must be positive");
    if (!(mass > 0.0)) throw std::invalid_argument("TrapGeometry: mass must be positive");
    if (Omega < 0.0 || !(Omega < omega_r))
      throw std::invalid_argument("TrapGeometry: need 0 <= Omega < omega_r for stable rotation");
  }

  double omega_frac() const { return Omega / omega_r; }
  double r0() const { return std::sqrt(constants::hbar / (mass * omega_r)); }
  double lz() const { return std::sqrt(constants::hbar / (mass * omega_z)); }

  /// Radial frequency seen in the rotating frame, sqrt(omega_r^2 - Omega^2).
  double omega_perp() const { return std::sqrt(omega_r * omega_r - Omega * Omega); }

  /// Geometric mean (omega_z omega_perp^2)^(1/3).
  double omega_bar() const { return std::cbrt(omega_z * omega_perp() * omega_perp()); }

  double energy_unit() const { return constants::hbar * omega_r; }
  double period() const { return constants::two_pi / omega_r; }

  /// Lowest 3D oscillator energy, hbar*omega_r + hbar*omega_z/2.
  double eps000() const { return constants::hbar * (omega_r + 0.5 * omega_z); }

  /// Effective potential m(omega_r^2 - Omega^2) r^2/2 + m omega_z^2 z^2/2.
  double V_eff(double r, double z = 0.0) const {
    const double wp2 = omega_r * omega_r - Omega * Omega;
    return 0.5 * mass * (wp2 * r * r + omega_z * omega_z * z * z);
  }
};

/// Temperature in units of hbar*omega_r / k_B.
inline double dimensionless_temperature(double T_kelvin, const TrapGeometry& trap) {
  return constants::k_B * T_kelvin / trap.energy_unit();
}

/// Convention for turning a 3D chemical potential into the 2D equation.
///
/// AxialOffset subtracts the axial zero point hbar*omega_z/2, so that the 2D
/// mode (n,l) with axial ground state has energy hbar*omega_nl measured from the
/// same origin as mu. None uses the 3D value unchanged.
enum class MuConvention { AxialOffset, None };

inline std::string to_string(MuConvention c) {
  return c == MuConvention::AxialOffset ? "axial_offset" : "none";
}

inline MuConvention mu_convention_from_string(const std::string& s) {
  if (s == "axial_offset") return MuConvention::AxialOffset;
  if (s == "none") return MuConvention::None;
  throw std::invalid_argument("unknown mu convention '" + s + "' (expected axial_offset or none)");
}

/// 3D chemical potential [J] -> 2D dimensionless chemical potential [hbar*omega_r].
inline double mu_2d_dimensionless(double mu_joule, const TrapGeometry& trap, MuConvention c) {
  double mu = mu_joule / trap.energy_unit();
  if (c == MuConvention::AxialOffset) mu -= 0.5 * trap.omega_z / trap.omega_r;
  return mu;
}

/// Dimensionless 2D coupling lambda = sqrt(8 pi) a / l_z, obtained from
/// u_2D = 4 pi hbar^2 a / (m L_z) with L_z = sqrt(2 pi hbar / (m omega_z)),
/// divided by hbar*omega_r*r0^2.
inline double lambda_2d(double scattering_length, const TrapGeometry& trap) {
  return std::sqrt(8.0 * constants::pi) * scattering_length / trap.lz();
}

/// u_2D in SI units [J m^2].
inline double u_2d(double scattering_length, const TrapGeometry& trap) {
  const double Lz = std::sqrt(constants::two_pi * constants::hbar / (trap.mass * trap.omega_z));
  return 4.0 * constants::pi * constants::hbar * constants::hbar * scattering_length / (trap.mass * Lz);
}

}  // namespace rotsgpe
