#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "basis.hpp"
#include "field.hpp"
#include "rng.hpp"
#include "units.hpp"

namespace rotsgpe {

/// Grand-canonical ideal-gas ensemble for the initial state, in the
/// dimensionless units of the 2D equation (energies in hbar omega_r).
struct InitialEnsembleSpec {
  double T_tilde = 0.0;
  double mu_tilde = 0.0;
  std::size_t n_samples = 1;
  std::uint64_t seed = 1;

  static InitialEnsembleSpec from_physical(double T0_kelvin, double mu0_joule, const TrapGeometry& trap,
                                           MuConvention conv, std::size_t n, std::uint64_t seed) {
    InitialEnsembleSpec s;
    s.T_tilde = dimensionless_temperature(T0_kelvin, trap);
    s.mu_tilde = mu_2d_dimensionless(mu0_joule, trap, conv);
    s.n_samples = n;
    s.seed = seed;
    return s;
  }

  void validate() const {
    if (!(T_tilde > 0.0)) throw std::invalid_argument("InitialEnsembleSpec: temperature must be positive");
    if (n_samples < 1) throw std::invalid_argument("InitialEnsembleSpec: need at least one sample");
    if (!(mu_tilde < 1.0))
      throw std::invalid_argument("InitialEnsembleSpec: mu0 must lie below the lowest mode energy (1 hbar omega_r)");
  }
};

/// Bose-Einstein occupation 1/(exp((omega - mu)/T) - 1).
inline double thermal_occupation(double omega, double mu_tilde, double T_tilde) {
  if (!(omega > mu_tilde))
    throw std::domain_error("thermal_occupation: mode energy " + std::to_string(omega) +
                            " is not above the chemical potential " + std::to_string(mu_tilde));
  return 1.0 / std::expm1((omega - mu_tilde) / T_tilde);
}

inline double thermal_occupation(ModeIndex idx, double Omega_frac, const InitialEnsembleSpec& s) {
  return thermal_occupation(mode_frequency(idx, Omega_frac), s.mu_tilde, s.T_tilde);
}

inline std::vector<double> thermal_occupations(const ModeTable& table, const InitialEnsembleSpec& s) {
  std::vector<double> N(table.size());
  for (std::size_t k = 0; k < table.size(); ++k) N[k] = thermal_occupation(table.freqs()[k], s.mu_tilde, s.T_tilde);
  return N;
}

/// One Wigner sample: alpha_nl = sqrt(N_nl + 1/2) eta_nl, eta unit complex Gaussian.
template <class URBG>
FieldState sample_wigner(const std::vector<double>& occupations, URBG& rng) {
  ComplexGaussian eta(1.0);
  FieldState f;
  f.coeffs.resize(occupations.size());
  for (std::size_t k = 0; k < occupations.size(); ++k) f.coeffs[k] = std::sqrt(occupations[k] + 0.5) * eta(rng);
  return f;
}

/// Sample `index` of the ensemble defined by `spec`; independent of how many
/// other samples are drawn or in which order.
inline FieldState sample_wigner(const InitialEnsembleSpec& spec, const ModeTable& table, std::uint32_t index) {
  spec.validate();
  auto rng = make_stream(spec.seed, index, StreamPurpose::InitialState);
  return sample_wigner(thermal_occupations(table, spec), rng);
}

inline std::vector<FieldState> sample_ensemble(const InitialEnsembleSpec& spec, const ModeTable& table) {
  spec.validate();
  const auto N = thermal_occupations(table, spec);
  std::vector<FieldState> out;
  out.reserve(spec.n_samples);
  for (std::size_t j = 0; j < spec.n_samples; ++j) {
    auto rng = make_stream(spec.seed, static_cast<std::uint32_t>(j), StreamPurpose::InitialState);
    out.push_back(sample_wigner(N, rng));
  }
  return out;
}

/// rho_ij = <alpha_i alpha_j^*> - delta_ij/2 over the samples.
///
/// This is the transpose of <alpha_i^* alpha_j>; the ordering is chosen so that
/// eigenvectors are the mode coefficients themselves rather than their conjugates.
/// `half_quantum` = false skips the symmetric-ordering subtraction.
inline Eigen::MatrixXcd ensemble_onebody_matrix(const std::vector<FieldState>& samples, bool half_quantum = true) {
  if (samples.empty()) throw std::invalid_argument("ensemble_onebody_matrix: no samples");
  const auto M = static_cast<Eigen::Index>(samples.front().size());
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(M, M);
  for (const auto& s : samples) {
    if (static_cast<Eigen::Index>(s.size()) != M)
      throw std::invalid_argument("ensemble_onebody_matrix: samples of different length");
    Eigen::Map<const Eigen::VectorXcd> a(s.coeffs.data(), M);
    rho.selfadjointView<Eigen::Lower>().rankUpdate(a);
  }
  rho = rho.selfadjointView<Eigen::Lower>();
  rho /= static_cast<double>(samples.size());
  if (half_quantum) rho.diagonal().array() -= 0.5;
  return rho;
}

}  // namespace rotsgpe
