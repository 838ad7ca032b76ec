#pragma once

#include <complex>
#include <cstring>
#include <functional>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <fftw3.h>

#include "basis.hpp"
#include "field.hpp"
#include "quadrature.hpp"

namespace rotsgpe {

/// Field values on a (radius_k, theta_j) product grid, row-major in k.
struct PositionField {
  int N_x = 0;
  int N_theta = 0;
  std::vector<double> radius;
  std::vector<double> theta;
  std::vector<Complex> values;

  Complex operator()(int k, int j) const {
    return values[static_cast<std::size_t>(k) * static_cast<std::size_t>(N_theta) + static_cast<std::size_t>(j)];
  }
};

enum class GridKind { Nonlinear, Projection };

namespace detail {

// FFTW's planner is not re-entrant.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct AngularGroup {
  int l;
  int m;    // |l|
  int bin;  // FFT bin
  std::vector<std::size_t> index;  // mode index for n = 0,1,...
};

inline void check_size(std::size_t got, std::size_t want, const char* what) {
  if (got != want)
    throw std::invalid_argument(std::string(what) + ": coefficient vector has " + std::to_string(got) +
                                " entries, mode table has " + std::to_string(want));
}

}  // namespace detail

/// Scratch buffers and FFT plans for one trajectory.
///
/// Tables are shared read-only; each concurrent worker owns its own workspace.
class SpectralWorkspace {
 public:
  SpectralWorkspace(const ModeTable& table, const QuadratureTables& quad) : table_(&table), quad_(&quad) {
    Nx_ = quad.N_x;
    Nt_ = quad.N_theta;
    const std::size_t total = static_cast<std::size_t>(Nx_) * static_cast<std::size_t>(Nt_);
    buf_ = reinterpret_cast<Complex*>(fftw_malloc(sizeof(fftw_complex) * total));
    if (!buf_) throw std::bad_alloc();
    {
      std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
      auto* b = reinterpret_cast<fftw_complex*>(buf_);
      int n[1] = {Nt_};
      synth_ = fftw_plan_many_dft(1, n, Nx_, b, nullptr, 1, Nt_, b, nullptr, 1, Nt_, FFTW_BACKWARD, FFTW_ESTIMATE);
      anal_ = fftw_plan_many_dft(1, n, Nx_, b, nullptr, 1, Nt_, b, nullptr, 1, Nt_, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    if (!synth_ || !anal_) throw std::runtime_error("SpectralWorkspace: FFTW planning failed");

    for (int l = -table.lbar_minus(); l <= table.lbar_plus(); ++l) {
      const auto& list = table.with_l(l);
      if (list.empty()) continue;
      detail::AngularGroup g{l, std::abs(l), quad.bin_of(l), {}};
      for (const auto& e : list) g.index.push_back(e.index);
      groups_.push_back(std::move(g));
    }
    scratch_.resize(static_cast<std::size_t>(table.Nbar() / 2 + 1));
  }

  SpectralWorkspace(const SpectralWorkspace&) = delete;
  SpectralWorkspace& operator=(const SpectralWorkspace&) = delete;

  ~SpectralWorkspace() {
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    if (synth_) fftw_destroy_plan(synth_);
    if (anal_) fftw_destroy_plan(anal_);
    if (buf_) fftw_free(buf_);
  }

  const ModeTable& table() const { return *table_; }
  const QuadratureTables& quad() const { return *quad_; }

  /// Steps (i)-(ii): leaves Psi_kj in the internal buffer.
  void synthesize(std::span<const Complex> alpha, const RadialGrid& grid) {
    detail::check_size(alpha.size(), table_->size(), "synthesize");
    std::memset(static_cast<void*>(buf_), 0, sizeof(Complex) * static_cast<std::size_t>(Nx_) * Nt_);
    for (const auto& g : groups_) {
      const std::size_t cols = static_cast<std::size_t>(grid.cols[static_cast<std::size_t>(g.m)]);
      const double* P = grid.P[static_cast<std::size_t>(g.m)].data();
      const std::size_t nn = g.index.size();
      for (std::size_t n = 0; n < nn; ++n) scratch_[n] = alpha[g.index[n]];
      for (int k = 0; k < Nx_; ++k) {
        const double* row = P + static_cast<std::size_t>(k) * cols;
        double re = 0.0, im = 0.0;
        for (std::size_t n = 0; n < nn; ++n) {
          re += row[n] * scratch_[n].real();
          im += row[n] * scratch_[n].imag();
        }
        buf_[static_cast<std::size_t>(k) * Nt_ + static_cast<std::size_t>(g.bin)] = Complex(re, im);
      }
    }
    fftw_execute(synth_);
  }

  /// Steps (iv)-(v) on whatever is in the buffer, contracted against `grid`.
  void analyse(const RadialGrid& grid, std::span<Complex> out) {
    detail::check_size(out.size(), table_->size(), "analyse");
    fftw_execute(anal_);
    const double inv = 1.0 / Nt_;
    for (const auto& g : groups_) {
      const std::size_t cols = static_cast<std::size_t>(grid.cols[static_cast<std::size_t>(g.m)]);
      const double* P = grid.P[static_cast<std::size_t>(g.m)].data();
      const std::size_t nn = g.index.size();
      for (std::size_t n = 0; n < nn; ++n) scratch_[n] = 0.0;
      for (int k = 0; k < Nx_; ++k) {
        const double* row = P + static_cast<std::size_t>(k) * cols;
        const Complex th = buf_[static_cast<std::size_t>(k) * Nt_ + static_cast<std::size_t>(g.bin)] *
                           (grid.weight[static_cast<std::size_t>(k)] * inv);
        for (std::size_t n = 0; n < nn; ++n) scratch_[n] += row[n] * th;
      }
      for (std::size_t n = 0; n < nn; ++n) out[g.index[n]] = scratch_[n];
    }
  }

  /// F_nl(alpha) = integral of Y_nl^* |alpha|^2 alpha over the plane.
  void nonlinear_term(std::span<const Complex> alpha, std::span<Complex> F) {
    synthesize(alpha, quad_->nonlinear);
    const std::size_t total = static_cast<std::size_t>(Nx_) * Nt_;
    for (std::size_t i = 0; i < total; ++i) buf_[i] *= std::norm(buf_[i]);
    analyse(quad_->nonlinear, F);
  }

  CoeffVector nonlinear_term(std::span<const Complex> alpha) {
    CoeffVector F(table_->size());
    nonlinear_term(alpha, F);
    return F;
  }

  PositionField to_position(std::span<const Complex> alpha, GridKind kind = GridKind::Nonlinear) {
    const RadialGrid& grid = kind == GridKind::Nonlinear ? quad_->nonlinear : quad_->projection;
    synthesize(alpha, grid);
    PositionField f;
    f.N_x = Nx_;
    f.N_theta = Nt_;
    f.radius = grid.radius;
    f.theta = quad_->theta;
    f.values.assign(buf_, buf_ + static_cast<std::size_t>(Nx_) * Nt_);
    return f;
  }

  /// Overlaps of the retained modes with psi(r, theta), by quadrature on the
  /// projection grid. Exact whenever psi is a band-limited Gaussian-weighted
  /// polynomial of the same bandwidth as the cutoff band.
  CoeffVector project(const std::function<Complex(double, double)>& psi) {
    const RadialGrid& grid = quad_->projection;
    for (int k = 0; k < Nx_; ++k)
      for (int j = 0; j < Nt_; ++j)
        buf_[static_cast<std::size_t>(k) * Nt_ + static_cast<std::size_t>(j)] =
            psi(grid.radius[static_cast<std::size_t>(k)], quad_->theta[static_cast<std::size_t>(j)]);
    CoeffVector out(table_->size());
    analyse(grid, out);
    return out;
  }

 private:
  const ModeTable* table_;
  const QuadratureTables* quad_;
  int Nx_ = 0;
  int Nt_ = 0;
  Complex* buf_ = nullptr;
  fftw_plan synth_ = nullptr;
  fftw_plan anal_ = nullptr;
  std::vector<detail::AngularGroup> groups_;
  std::vector<Complex> scratch_;
};

// Convenience wrappers. Each call builds a fresh workspace; hot loops should
// hold a SpectralWorkspace instead.

inline PositionField to_position(const FieldState& field, const ModeTable& table, const QuadratureTables& quad,
                                 GridKind kind = GridKind::Nonlinear) {
  SpectralWorkspace ws(table, quad);
  return ws.to_position(field.coeffs, kind);
}

inline CoeffVector nonlinear_term(const FieldState& field, const ModeTable& table, const QuadratureTables& quad) {
  SpectralWorkspace ws(table, quad);
  return ws.nonlinear_term(field.coeffs);
}

inline FieldState project(const std::function<Complex(double, double)>& psi, const QuadratureTables& quad,
                          const ModeTable& table) {
  SpectralWorkspace ws(table, quad);
  return FieldState{ws.project(psi), 0.0};
}

/// Direct mode sum alpha(r, theta) = sum alpha_nl Y_nl(r, theta); slow, for
/// off-grid evaluation such as density maps.
class FieldEvaluator {
 public:
  explicit FieldEvaluator(const ModeTable& table) : table_(&table) {
    radial_.resize(static_cast<std::size_t>(table.Nbar() / 2 + 1));
  }

  Complex operator()(std::span<const Complex> alpha, double r, double theta) {
    detail::check_size(alpha.size(), table_->size(), "FieldEvaluator");
    const double x = r * r;
    Complex sum = 0.0;
    const Complex e = std::polar(1.0, theta);
    const Complex einv = std::conj(e);
    for (int l = -table_->lbar_minus(); l <= table_->lbar_plus(); ++l) {
      const auto& list = table_->with_l(l);
      if (list.empty()) continue;
      std::span<double> vals(radial_.data(), list.size());
      mode_radial_values(std::abs(l), x, vals);
      Complex s = 0.0;
      for (std::size_t i = 0; i < list.size(); ++i) s += vals[i] * alpha[list[i].index];
      sum += s * ipow(l >= 0 ? e : einv, std::abs(l));
    }
    return sum;
  }

 private:
  static Complex ipow(Complex b, int p) {
    Complex r = 1.0;
    while (p) {
      if (p & 1) r *= b;
      b *= b;
      p >>= 1;
    }
    return r;
  }
  const ModeTable* table_;
  std::vector<double> radial_;
};

}  // namespace rotsgpe
