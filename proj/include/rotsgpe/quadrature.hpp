#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "basis.hpp"
#include "laguerre.hpp"

namespace rotsgpe {

/// Radial sample points with the mode values P_kn^{|l|} evaluated there.
///
/// P[m] is row-major N x (nmax(m)+1): P[m][k*cols + n] = Phi_{n,m}(arg_k).
struct RadialGrid {
  std::vector<double> arg;     // x-variable where modes are sampled (r^2)
  std::vector<double> radius;  // sqrt(arg)
  std::vector<double> weight;  // radial quadrature weight including the angular 2pi/2 factor
  std::vector<std::vector<double>> P;
  std::vector<int> cols;       // nmax(m)+1 per |l|

  std::size_t size() const { return arg.size(); }
  double at(int m, std::size_t k, int n) const {
    return P[static_cast<std::size_t>(m)][k * static_cast<std::size_t>(cols[static_cast<std::size_t>(m)]) +
                                          static_cast<std::size_t>(n)];
  }
};

struct QuadratureOptions {
  /// Round N_theta up to a 2^a 3^b 5^c 7^d size (never below the exact bound).
  bool fast_theta = false;
};

/// Grids for the nonlinear term and for projection.
///
/// `nonlinear` samples modes at x_k/2 with weights pi w_k e^{x_k}/2, which
/// integrates the quartic products in the cutoff band exactly. `projection`
/// samples at x_k with weights pi w_k e^{x_k}, exact for the quadratic products
/// that appear in overlaps; the halved grid is not (see project()).
struct QuadratureTables {
  int N_x = 0;
  int N_theta = 0;
  GaussLaguerreRule rule;
  std::vector<double> wtilde;
  std::vector<double> theta;
  RadialGrid nonlinear;
  RadialGrid projection;
  int lbar_minus = 0;
  int lbar_plus = 0;
  int max_abs_l = 0;

  /// Bin in the length-N_theta FFT where angular number l lives.
  int bin_of(int l) const { return ((l % N_theta) + N_theta) % N_theta; }
};

namespace detail {

inline bool is_7_smooth(int n) {
  for (int p : {2, 3, 5, 7})
    while (n % p == 0) n /= p;
  return n == 1;
}

inline RadialGrid make_radial_grid(const ModeTable& table, const std::vector<double>& arg,
                                   const std::vector<double>& weight, int max_abs_l) {
  RadialGrid g;
  g.arg = arg;
  g.weight = weight;
  g.radius.resize(arg.size());
  for (std::size_t k = 0; k < arg.size(); ++k) g.radius[k] = std::sqrt(arg[k]);
  g.P.resize(static_cast<std::size_t>(max_abs_l + 1));
  g.cols.assign(static_cast<std::size_t>(max_abs_l + 1), 0);
  for (int m = 0; m <= max_abs_l; ++m) {
    const int nmax = table.n_max_abs(m);
    if (nmax < 0) continue;
    const int cols = nmax + 1;
    g.cols[static_cast<std::size_t>(m)] = cols;
    auto& P = g.P[static_cast<std::size_t>(m)];
    P.resize(arg.size() * static_cast<std::size_t>(cols));
    for (std::size_t k = 0; k < arg.size(); ++k)
      mode_radial_values(m, arg[k], std::span<double>(P.data() + k * static_cast<std::size_t>(cols),
                                                      static_cast<std::size_t>(cols)));
  }
  return g;
}

}  // namespace detail

inline int radial_order(const ModeTable& table) {
  return static_cast<int>(std::floor(table.Nbar() / (1.0 - table.Omega_frac()) + detail::cutoff_slack)) + 1;
}

inline int angular_points(const ModeTable& table) {
  return 2 * (table.lbar_minus() + table.lbar_plus()) + 1;
}

inline QuadratureTables build_quadrature(const ModeTable& table, QuadratureOptions opt = {}) {
  if (table.size() == 0) throw std::invalid_argument("build_quadrature: empty mode table");
  QuadratureTables q;
  q.N_x = radial_order(table);
  q.N_theta = angular_points(table);
  if (opt.fast_theta)
    while (!detail::is_7_smooth(q.N_theta)) ++q.N_theta;
  q.lbar_minus = table.lbar_minus();
  q.lbar_plus = table.lbar_plus();
  q.max_abs_l = std::max(q.lbar_minus, q.lbar_plus);

  q.rule = gauss_laguerre(q.N_x);
  const auto N = static_cast<std::size_t>(q.N_x);
  q.wtilde.resize(N);
  std::vector<double> half(N), wproj(N);
  for (std::size_t k = 0; k < N; ++k) {
    q.wtilde[k] = std::numbers::pi * q.rule.w_exp[k] / 2.0;
    half[k] = q.rule.x[k] / 2.0;
    wproj[k] = std::numbers::pi * q.rule.w_exp[k];
  }
  q.theta.resize(static_cast<std::size_t>(q.N_theta));
  for (int j = 0; j < q.N_theta; ++j) q.theta[static_cast<std::size_t>(j)] = 2.0 * std::numbers::pi * j / q.N_theta;

  q.nonlinear = detail::make_radial_grid(table, half, q.wtilde, q.max_abs_l);
  q.projection = detail::make_radial_grid(table, q.rule.x, wproj, q.max_abs_l);
  return q;
}

}  // namespace rotsgpe
