#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "basis.hpp"
#include "field.hpp"
#include "quadrature.hpp"
#include "rng.hpp"
#include "transforms.hpp"

namespace rotsgpe {

/// Parameters of the dimensionless simple-growth equation
///   d alpha = [-i L + Gamma (mu - L)] alpha dt + dW,   L alpha = omega alpha + lambda F(alpha),
///   <dW* dW> = 2 Gamma T dt per mode.
struct EvolutionParams {
  double lambda = 0.0;
  double mu_tilde = 0.0;
  double T_tilde = 0.0;
  double Gamma = 0.0;
  double dt = 1e-3;
  double t_end = 0.0;
  bool noise_on = true;
  std::size_t snapshot_stride = 100;

  void validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("EvolutionParams: dt must be positive");
    if (!(Gamma >= 0.0)) throw std::invalid_argument("EvolutionParams: Gamma must be >= 0");
    if (!(lambda >= 0.0)) throw std::invalid_argument("EvolutionParams: lambda must be >= 0");
    if (!(t_end >= 0.0)) throw std::invalid_argument("EvolutionParams: t_end must be >= 0");
    if (snapshot_stride == 0) throw std::invalid_argument("EvolutionParams: snapshot_stride must be >= 1");
    if (noise_on && Gamma > 0.0 && !(T_tilde >= 0.0))
      throw std::invalid_argument("EvolutionParams: noise needs T_tilde >= 0");
  }

  std::size_t steps() const { return static_cast<std::size_t>(std::llround(t_end / dt)); }
};

struct Observables {
  double t = 0.0;
  double N_GP = 0.0;
  double E_GP = 0.0;
  double L_z = 0.0;
};

/// Snapshots and observables of one trajectory.
struct TrajectoryArchive {
  std::vector<FieldState> snapshots;
  std::vector<Observables> observables;
  EvolutionParams params;
  std::uint64_t seed = 0;
  std::uint32_t traj = 0;
  std::vector<std::string> warnings;
};

inline double norm_gp(std::span<const Complex> a) {
  double s = 0.0;
  for (const auto& c : a) s += std::norm(c);
  return s;
}

inline double angular_momentum(std::span<const Complex> a, const ModeTable& table) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += table[k].l * std::norm(a[k]);
  return s;
}

/// Integral of |alpha|^4 over the plane, Re sum alpha^* F(alpha).
inline double quartic_integral(std::span<const Complex> a, SpectralWorkspace& ws, CoeffVector& scratch) {
  scratch.resize(a.size());
  ws.nonlinear_term(a, scratch);
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (std::conj(a[k]) * scratch[k]).real();
  return s;
}

inline Observables compute_observables(std::span<const Complex> a, double t, double lambda, SpectralWorkspace& ws) {
  Observables o;
  o.t = t;
  const auto& table = ws.table();
  double lin = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) lin += table.freqs()[k] * std::norm(a[k]);
  o.N_GP = norm_gp(a);
  o.L_z = angular_momentum(a, table);
  double quart = 0.0;
  if (lambda != 0.0) {
    CoeffVector scratch;
    quart = quartic_integral(a, ws, scratch);
  }
  o.E_GP = lin + 0.5 * lambda * quart;
  return o;
}

/// -i (omega alpha + lambda F(alpha)).
inline CoeffVector gpe_rhs(const FieldState& f, const EvolutionParams& p, SpectralWorkspace& ws) {
  const auto& w = ws.table().freqs();
  CoeffVector out(f.size());
  if (p.lambda != 0.0) ws.nonlinear_term(f.coeffs, out);
  for (std::size_t k = 0; k < f.size(); ++k) out[k] = Complex(0, -1) * (w[k] * f.coeffs[k] + p.lambda * out[k]);
  return out;
}

/// Gamma (mu alpha - L alpha) dt.
inline CoeffVector apply_growth(const FieldState& f, const EvolutionParams& p, SpectralWorkspace& ws) {
  const auto& w = ws.table().freqs();
  CoeffVector out(f.size());
  if (p.lambda != 0.0) ws.nonlinear_term(f.coeffs, out);
  for (std::size_t k = 0; k < f.size(); ++k)
    out[k] = p.Gamma * (p.mu_tilde * f.coeffs[k] - (w[k] * f.coeffs[k] + p.lambda * out[k])) * p.dt;
  return out;
}

/// Independent complex Gaussians with <|dW|^2> = 2 Gamma T dt.
template <class URBG>
void sample_noise(std::span<Complex> dW, const EvolutionParams& p, double dt, URBG& rng) {
  if (!p.noise_on || p.Gamma == 0.0 || p.T_tilde == 0.0) {
    for (auto& c : dW) c = 0.0;
    return;
  }
  ComplexGaussian g(2.0 * p.Gamma * p.T_tilde * dt);
  for (auto& c : dW) c = g(rng);
}

template <class URBG>
CoeffVector sample_noise(const ModeTable& table, const EvolutionParams& p, double dt, URBG& rng) {
  CoeffVector dW(table.size());
  sample_noise(std::span<Complex>(dW), p, dt, rng);
  return dW;
}

/// Fixed-step integrator: classical RK4 on the drift followed by one additive
/// noise increment per step. With lambda = 0 the drift is diagonal and the RK4
/// update reduces to multiplication by its stability polynomial, applied directly.
class SgpeStepper {
 public:
  SgpeStepper(const ModeTable& table, const QuadratureTables& quad, const EvolutionParams& p, Philox4x32 rng)
      : ws_(table, quad), p_(p), rng_(rng), noise_(std::max(2.0 * p.Gamma * p.T_tilde * p.dt, 1e-300)) {
    p_.validate();
    const std::size_t M = table.size();
    k1_.resize(M);
    k2_.resize(M);
    k3_.resize(M);
    k4_.resize(M);
    tmp_.resize(M);
    F_.resize(M);
    if (p_.lambda == 0.0) {
      R_.resize(M);
      for (std::size_t k = 0; k < M; ++k) {
        const Complex z = p_.dt * drift_factor(table.freqs()[k]);
        R_[k] = 1.0 + z * (1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0)));
      }
    }
  }

  SpectralWorkspace& workspace() { return ws_; }
  const EvolutionParams& params() const { return p_; }
  Philox4x32& rng() { return rng_; }

  /// Deterministic right-hand side (GPE plus growth), written into out.
  void drift(std::span<const Complex> a, std::span<Complex> out) {
    const auto& w = ws_.table().freqs();
    const Complex c(-p_.Gamma, -1.0);  // -i - Gamma
    const double gm = p_.Gamma * p_.mu_tilde;
    if (p_.lambda != 0.0) {
      ws_.nonlinear_term(a, F_);
      for (std::size_t k = 0; k < a.size(); ++k) out[k] = c * (w[k] * a[k] + p_.lambda * F_[k]) + gm * a[k];
    } else {
      for (std::size_t k = 0; k < a.size(); ++k) out[k] = c * (w[k] * a[k]) + gm * a[k];
    }
  }

  void step(CoeffVector& a) {
    const std::size_t M = a.size();
    const double dt = p_.dt;
    if (p_.lambda == 0.0) {
      for (std::size_t k = 0; k < M; ++k) a[k] *= R_[k];
    } else {
      drift(a, k1_);
      for (std::size_t k = 0; k < M; ++k) tmp_[k] = a[k] + 0.5 * dt * k1_[k];
      drift(tmp_, k2_);
      for (std::size_t k = 0; k < M; ++k) tmp_[k] = a[k] + 0.5 * dt * k2_[k];
      drift(tmp_, k3_);
      for (std::size_t k = 0; k < M; ++k) tmp_[k] = a[k] + dt * k3_[k];
      drift(tmp_, k4_);
      for (std::size_t k = 0; k < M; ++k) a[k] += (dt / 6.0) * (k1_[k] + 2.0 * (k2_[k] + k3_[k]) + k4_[k]);
    }
    if (p_.noise_on && p_.Gamma > 0.0 && p_.T_tilde > 0.0)
      for (std::size_t k = 0; k < M; ++k) a[k] += noise_(rng_);
  }

 private:
  Complex drift_factor(double omega) const { return Complex(-p_.Gamma * (omega - p_.mu_tilde), -omega); }

  SpectralWorkspace ws_;
  EvolutionParams p_;
  Philox4x32 rng_;
  ComplexGaussian noise_;
  CoeffVector k1_, k2_, k3_, k4_, tmp_, F_, R_;
};

/// Largest |alpha|^2 on the nonlinear quadrature grid.
inline double max_density(std::span<const Complex> a, SpectralWorkspace& ws) {
  const auto pos = ws.to_position(a, GridKind::Nonlinear);
  double m = 0.0;
  for (const auto& v : pos.values) m = std::max(m, std::norm(v));
  return m;
}

/// Threshold on dt (Nbar + 1 + lambda max|alpha|^2) above which a warning is emitted.
inline constexpr double stability_warning_threshold = 0.2;

using SnapshotCallback = std::function<void(const FieldState&, const Observables&)>;

/// Advance `initial` to params.t_end with the noise stream of trajectory `traj`
/// under `seed`. Snapshots (with observables) are taken at the start, every
/// snapshot_stride steps, and at the final step. If `keep` is false the
/// snapshots are only passed to `on_snapshot` and not stored.
inline TrajectoryArchive evolve(const FieldState& initial, const EvolutionParams& params, const ModeTable& table,
                                const QuadratureTables& quad, std::uint64_t seed, std::uint32_t traj,
                                const SnapshotCallback& on_snapshot = {}, bool keep = true) {
  params.validate();
  if (initial.size() != table.size())
    throw std::invalid_argument("evolve: initial state has " + std::to_string(initial.size()) + " modes, table has " +
                                std::to_string(table.size()));
  SgpeStepper stepper(table, quad, params, make_stream(seed, traj, StreamPurpose::Noise));
  TrajectoryArchive ar;
  ar.params = params;
  ar.seed = seed;
  ar.traj = traj;

  CoeffVector a = initial.coeffs;
  const double ceiling = params.dt * (table.Nbar() + 1.0 + params.lambda * max_density(a, stepper.workspace()));
  if (ceiling > stability_warning_threshold) {
    std::ostringstream os;
    os << "dt*(Nbar+1+lambda*max|alpha|^2) = " << ceiling << " exceeds " << stability_warning_threshold
       << "; the step may not resolve the fastest frequency";
    ar.warnings.push_back(os.str());
  }

  auto record = [&](double t) {
    FieldState s{a, t};
    const Observables o = compute_observables(a, t, params.lambda, stepper.workspace());
    if (on_snapshot) on_snapshot(s, o);
    if (keep) ar.snapshots.push_back(std::move(s));
    ar.observables.push_back(o);
  };

  const double t0 = initial.time;
  record(t0);
  const std::size_t n = params.steps();
  for (std::size_t i = 1; i <= n; ++i) {
    stepper.step(a);
    double acc = 0.0;
    for (const auto& c : a) acc += std::norm(c);
    if (!std::isfinite(acc)) {
      double mx = 0.0;
      for (const auto& c : a)
        if (std::isfinite(std::abs(c))) mx = std::max(mx, std::abs(c));
      std::ostringstream os;
      os << "evolve: non-finite coefficients at step " << i << " (t = " << t0 + i * params.dt
         << "), largest finite |alpha| = " << mx;
      throw std::runtime_error(os.str());
    }
    if (i % params.snapshot_stride == 0 || i == n) record(t0 + static_cast<double>(i) * params.dt);
  }
  return ar;
}

}  // namespace rotsgpe
