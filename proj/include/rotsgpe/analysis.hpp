#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "basis.hpp"
#include "dynamics.hpp"
#include "field.hpp"
#include "laguerre.hpp"
#include "transforms.hpp"

namespace rotsgpe {

// ------------------------------------------------------------ one-body matrix

/// Time average over snapshots of alpha alpha^dagger minus the half quantum.
/// Same ordering as ensemble_onebody_matrix.
inline Eigen::MatrixXcd onebody_matrix(const std::vector<const FieldState*>& samples, bool half_quantum = true) {
  if (samples.empty()) throw std::invalid_argument("onebody_matrix: no samples");
  const auto M = static_cast<Eigen::Index>(samples.front()->size());
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(M, M);
  for (const auto* s : samples) {
    Eigen::Map<const Eigen::VectorXcd> a(s->coeffs.data(), M);
    rho.selfadjointView<Eigen::Lower>().rankUpdate(a);
  }
  rho = rho.selfadjointView<Eigen::Lower>();
  rho /= static_cast<double>(samples.size());
  if (half_quantum) rho.diagonal().array() -= 0.5;
  return rho;
}

/// Picks `n_samples` snapshots spread uniformly over [t_start, t_start + window]
/// (nearest snapshot to each target time, no repeats) and averages them.
inline Eigen::MatrixXcd short_time_density_matrix(const TrajectoryArchive& ar, double t_start, double window,
                                                  std::size_t n_samples, bool half_quantum = true) {
  if (n_samples == 0) throw std::invalid_argument("short_time_density_matrix: n_samples must be >= 1");
  const double t_stop = t_start + window;
  std::vector<std::size_t> inside;
  for (std::size_t i = 0; i < ar.snapshots.size(); ++i) {
    const double t = ar.snapshots[i].time;
    if (t >= t_start - 1e-9 && t <= t_stop + 1e-9) inside.push_back(i);
  }
  if (inside.size() < n_samples)
    throw std::runtime_error("short_time_density_matrix: window [" + std::to_string(t_start) + ", " +
                             std::to_string(t_stop) + "] holds " + std::to_string(inside.size()) +
                             " snapshots, need " + std::to_string(n_samples));
  std::vector<const FieldState*> pick;
  std::size_t last = 0;
  for (std::size_t j = 0; j < n_samples; ++j) {
    const double target = n_samples == 1 ? t_start : t_start + window * static_cast<double>(j) / (n_samples - 1);
    std::size_t best = last;
    double bd = std::abs(ar.snapshots[inside[best]].time - target);
    for (std::size_t q = last; q < inside.size(); ++q) {
      const double dd = std::abs(ar.snapshots[inside[q]].time - target);
      if (dd < bd) {
        bd = dd;
        best = q;
      }
    }
    // keep picks distinct and ordered
    const std::size_t remaining = n_samples - j - 1;
    best = std::min(best, inside.size() - 1 - remaining);
    pick.push_back(&ar.snapshots[inside[best]]);
    last = best + 1;
  }
  return onebody_matrix(pick, half_quantum);
}

struct CondensateResult {
  double N0 = 0.0;
  FieldState mode;                // unit norm
  std::vector<double> spectrum;   // descending
};

inline CondensateResult penrose_onsager(const Eigen::MatrixXcd& rho, double tol = 1e-10) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) throw std::invalid_argument("penrose_onsager: need a square matrix");
  const double scale = std::max(1.0, rho.cwiseAbs().maxCoeff());
  const double asym = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (asym > tol * scale)
    throw std::invalid_argument("penrose_onsager: matrix is not Hermitian (max |rho - rho^H| = " +
                                std::to_string(asym) + ")");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
  if (es.info() != Eigen::Success) throw std::runtime_error("penrose_onsager: eigensolver failed");
  const auto n = rho.rows();
  CondensateResult r;
  r.spectrum.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) r.spectrum[static_cast<std::size_t>(i)] = es.eigenvalues()(n - 1 - i);
  r.N0 = r.spectrum.front();
  const Eigen::VectorXcd v = es.eigenvectors().col(n - 1);
  // fix the global phase: largest component real positive
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  const Complex ph = std::abs(v(imax)) > 0 ? std::conj(v(imax)) / std::abs(v(imax)) : Complex(1.0);
  r.mode.coeffs.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) r.mode.coeffs[static_cast<std::size_t>(i)] = v(i) * ph;
  return r;
}

// ------------------------------------------------------------ condensate fraction

struct FractionResult {
  double N0 = 0.0;
  double N_C = 0.0;
  double N_NC = 0.0;
  double fraction = 0.0;
};

/// N0 / (N_C + N_NC) with N_C = mean N_GP minus half a quantum per mode when
/// `half_quantum` is set.
inline FractionResult condensate_fraction(double N0, double mean_N_GP, std::size_t mode_count, double N_NC,
                                          bool half_quantum = true) {
  FractionResult f;
  f.N0 = N0;
  f.N_C = mean_N_GP - (half_quantum ? 0.5 * static_cast<double>(mode_count) : 0.0);
  f.N_NC = N_NC;
  f.fraction = N0 / (f.N_C + N_NC);
  return f;
}

/// Ideal-gas reference 1 - (T/T_C)^3, zero above T_C.
inline double ideal_condensate_fraction(double T, double T_C) {
  const double x = T / T_C;
  return x >= 1.0 ? 0.0 : 1.0 - x * x * x;
}

// ------------------------------------------------------------ Cartesian grids

struct DensityGrid {
  int M = 0;
  double extent = 0.0;  // half-width [r0]
  double h = 0.0;
  std::vector<double> x;  // cell centres, same for y
  std::vector<Complex> psi;  // row-major, psi[j*M + i] at (x_i, y_j)
  std::vector<double> density;

  Complex at(int i, int j) const { return psi[static_cast<std::size_t>(j) * M + static_cast<std::size_t>(i)]; }
};

/// Direct mode sum on an M x M cell-centred grid covering [-extent, extent]^2.
inline DensityGrid density_grid(std::span<const Complex> alpha, const ModeTable& table, double extent = 12.0,
                                int M = 256) {
  if (M < 2) throw std::invalid_argument("density_grid: need M >= 2");
  DensityGrid g;
  g.M = M;
  g.extent = extent;
  g.h = 2.0 * extent / M;
  g.x.resize(static_cast<std::size_t>(M));
  for (int i = 0; i < M; ++i) g.x[static_cast<std::size_t>(i)] = -extent + (i + 0.5) * g.h;
  g.psi.resize(static_cast<std::size_t>(M) * M);
  g.density.resize(g.psi.size());
  FieldEvaluator ev(table);
  for (int j = 0; j < M; ++j)
    for (int i = 0; i < M; ++i) {
      const double xx = g.x[static_cast<std::size_t>(i)], yy = g.x[static_cast<std::size_t>(j)];
      const Complex v = ev(alpha, std::hypot(xx, yy), std::atan2(yy, xx));
      g.psi[static_cast<std::size_t>(j) * M + static_cast<std::size_t>(i)] = v;
      g.density[static_cast<std::size_t>(j) * M + static_cast<std::size_t>(i)] = std::norm(v);
    }
  return g;
}

/// Healing length 1/sqrt(2 mu) in r0 for chemical potential mu [hbar omega_r].
inline double healing_length(double mu_tilde) { return 1.0 / std::sqrt(2.0 * mu_tilde); }

/// Grid points per healing length, and whether the usual 8-point rule holds.
struct ResolutionCheck {
  double xi = 0.0;
  double points_per_xi = 0.0;
  bool ok = false;
};

inline ResolutionCheck check_resolution(const DensityGrid& g, double mu_tilde, double required = 8.0) {
  ResolutionCheck r;
  if (!(mu_tilde > 0.0)) {
    r.xi = std::numeric_limits<double>::infinity();
    r.points_per_xi = std::numeric_limits<double>::infinity();
    r.ok = true;
    return r;
  }
  r.xi = healing_length(mu_tilde);
  r.points_per_xi = r.xi / g.h;
  r.ok = r.points_per_xi >= required;
  return r;
}

// ------------------------------------------------------------ vortices

struct Vortex {
  double x = 0.0;
  double y = 0.0;
  int charge = 0;
};

struct VortexSet {
  std::vector<Vortex> vortices;
  double filter_radius = 0.0;
  int multi_charge_cells = 0;  // plaquettes with |winding| >= 2, dropped

  int count(int sign) const {
    int n = 0;
    for (const auto& v : vortices) n += (v.charge * sign > 0);
    return n;
  }
  int net_charge() const {
    int n = 0;
    for (const auto& v : vortices) n += v.charge;
    return n;
  }
};

namespace detail {

inline double wrap_phase(double d) {
  constexpr double tp = 2.0 * std::numbers::pi;
  d = std::fmod(d + std::numbers::pi, tp);
  if (d < 0) d += tp;
  return d - std::numbers::pi;
}

// Zero of the bilinear interpolant on the unit cell, by Newton from the centre.
inline bool bilinear_zero(Complex f00, Complex f10, Complex f01, Complex f11, double& s, double& t) {
  s = 0.5;
  t = 0.5;
  for (int it = 0; it < 30; ++it) {
    const Complex f = f00 * (1 - s) * (1 - t) + f10 * s * (1 - t) + f01 * (1 - s) * t + f11 * s * t;
    const Complex fs = (f10 - f00) * (1 - t) + (f11 - f01) * t;
    const Complex ft = (f01 - f00) * (1 - s) + (f11 - f10) * s;
    const double a = fs.real(), b = ft.real(), c = fs.imag(), d = ft.imag();
    const double det = a * d - b * c;
    if (det == 0.0) return false;
    const double ds = (d * f.real() - b * f.imag()) / det;
    const double dtt = (-c * f.real() + a * f.imag()) / det;
    s -= ds;
    t -= dtt;
    if (std::abs(ds) + std::abs(dtt) < 1e-12) break;
  }
  return s > -0.25 && s < 1.25 && t > -0.25 && t < 1.25;
}

}  // namespace detail

/// Plaquette phase winding on the grid; positions refined to the zero of the
/// bilinear interpolant, kept if within filter_radius of the origin.
inline VortexSet detect_vortices(const DensityGrid& g, double filter_radius) {
  VortexSet vs;
  vs.filter_radius = filter_radius;
  const int M = g.M;
  std::vector<double> ph(g.psi.size());
  for (std::size_t i = 0; i < ph.size(); ++i) ph[i] = std::arg(g.psi[i]);
  auto P = [&](int i, int j) { return ph[static_cast<std::size_t>(j) * M + static_cast<std::size_t>(i)]; };
  for (int j = 0; j + 1 < M; ++j)
    for (int i = 0; i + 1 < M; ++i) {
      const double w = detail::wrap_phase(P(i + 1, j) - P(i, j)) + detail::wrap_phase(P(i + 1, j + 1) - P(i + 1, j)) +
                       detail::wrap_phase(P(i, j + 1) - P(i + 1, j + 1)) + detail::wrap_phase(P(i, j) - P(i, j + 1));
      const int q = static_cast<int>(std::lround(w / (2.0 * std::numbers::pi)));
      if (q == 0) continue;
      double s = 0.5, t = 0.5;
      if (!detail::bilinear_zero(g.at(i, j), g.at(i + 1, j), g.at(i, j + 1), g.at(i + 1, j + 1), s, t)) {
        s = 0.5;
        t = 0.5;
      }
      s = std::clamp(s, 0.0, 1.0);
      t = std::clamp(t, 0.0, 1.0);
      const double x = g.x[static_cast<std::size_t>(i)] + s * g.h;
      const double y = g.x[static_cast<std::size_t>(j)] + t * g.h;
      if (std::hypot(x, y) > filter_radius) continue;
      if (std::abs(q) >= 2) {
        ++vs.multi_charge_cells;
        continue;
      }
      vs.vortices.push_back({x, y, q});
    }
  return vs;
}

/// Phase winding number of f around the circle of radius R (n_points samples).
inline int contour_winding(const std::function<Complex(double, double)>& f, double R, int n_points = 4096) {
  double total = 0.0;
  double prev = std::arg(f(R, 0.0));
  for (int k = 1; k <= n_points; ++k) {
    const double th = 2.0 * std::numbers::pi * k / n_points;
    const double cur = std::arg(f(R, th));
    total += detail::wrap_phase(cur - prev);
    prev = cur;
  }
  return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

// ------------------------------------------------------------ pair histogram

struct PairHistogram {
  std::vector<double> bin_edges;
  std::vector<long> counts;
  long overflow = 0;

  long total() const {
    long s = overflow;
    for (long c : counts) s += c;
    return s;
  }
};

inline PairHistogram pair_histogram(const VortexSet& vs, double bin_width = 0.25, double r_max = 20.0) {
  if (!(bin_width > 0.0)) throw std::invalid_argument("pair_histogram: bin width must be positive");
  PairHistogram h;
  const auto nb = static_cast<std::size_t>(std::ceil(r_max / bin_width - 1e-12));
  h.bin_edges.resize(nb + 1);
  for (std::size_t i = 0; i <= nb; ++i) h.bin_edges[i] = static_cast<double>(i) * bin_width;
  h.counts.assign(nb, 0);
  const auto& v = vs.vortices;
  for (std::size_t a = 0; a < v.size(); ++a)
    for (std::size_t b = a + 1; b < v.size(); ++b) {
      const double d = std::hypot(v[a].x - v[b].x, v[a].y - v[b].y);
      const auto idx = static_cast<std::size_t>(std::floor(d / bin_width));
      if (idx < nb)
        ++h.counts[idx];
      else
        ++h.overflow;
    }
  return h;
}

struct HistogramPeak {
  std::size_t bin = 0;
  double position = 0.0;  // bin centre
  double height = 0.0;    // smoothed
  double prominence = 0.0;
};

/// Peaks of the 3-bin moving average whose topographic prominence exceeds
/// `sigmas` times the Poisson error of the smoothed height, sqrt(max(s,1)/3).
inline std::vector<HistogramPeak> histogram_peaks(const PairHistogram& h, double sigmas = 3.0) {
  const std::size_t n = h.counts.size();
  std::vector<double> s(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    int m = 0;
    for (int d = -1; d <= 1; ++d) {
      const auto j = static_cast<long>(i) + d;
      if (j < 0 || j >= static_cast<long>(n)) continue;
      acc += static_cast<double>(h.counts[static_cast<std::size_t>(j)]);
      ++m;
    }
    s[i] = acc / m;
  }
  std::vector<HistogramPeak> peaks;
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i > 0 ? s[i - 1] : -1.0;
    // plateaus: first bin of a flat top counts, provided it then descends
    std::size_t k = i;
    while (k + 1 < n && s[k + 1] == s[i]) ++k;
    const double right = k + 1 < n ? s[k + 1] : -1.0;
    if (!(s[i] > left && s[i] > right) || s[i] <= 0.0) continue;
    // prominence: descend on each side until a higher point (or the edge)
    double lmin = s[i], rmin = s[k];
    for (std::size_t j = i; j-- > 0;) {
      if (s[j] > s[i]) break;
      lmin = std::min(lmin, s[j]);
    }
    for (std::size_t j = k + 1; j < n; ++j) {
      if (s[j] > s[i]) break;
      rmin = std::min(rmin, s[j]);
    }
    const double prom = s[i] - std::max(lmin, rmin);
    const double err = std::sqrt(std::max(s[i], 1.0) / 3.0);
    if (prom >= sigmas * err) {
      const double c = 0.5 * (h.bin_edges[i] + h.bin_edges[k + 1]);
      peaks.push_back({i, c, s[i], prom});
    }
    i = k;
  }
  return peaks;
}

}  // namespace rotsgpe
