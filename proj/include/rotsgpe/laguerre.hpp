#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace rotsgpe {

/// Gauss-Laguerre rule for weight exp(-x) on [0, inf).
///
/// w_exp[k] = w[k] * exp(x[k]) is stored separately because w[k] underflows
/// for the outer nodes of high-order rules while w_exp stays O(1).
struct GaussLaguerreRule {
  std::vector<double> x;
  std::vector<double> w;
  std::vector<double> w_exp;
  double max_newton_residual = 0.0;  // largest final |dx|/x seen during polishing
};

namespace detail {

// Extended precision: the forward recurrence loses a few digits near the
// smallest roots of high-order polynomials.
using wide = long double;

struct ScaledLaguerre {
  wide p_n;          // L_n(x) / exp(log_scale)
  wide p_nm1;        // L_{n-1}(x) / exp(log_scale)
  double log_scale;  // natural log of the dropped factor
};

// L_n(x) and L_{n-1}(x) by the three-term recurrence, renormalised so that
// large x and n do not overflow.
inline ScaledLaguerre laguerre_pair(int n, wide x) {
  wide p0 = 1.0L, p1 = 1.0L - x;
  double log_scale = 0.0;
  if (n == 0) return {1.0L, 0.0L, 0.0};
  for (int j = 1; j < n; ++j) {
    const wide p2 = ((2.0L * j + 1.0L - x) * p1 - j * p0) / (j + 1.0L);
    p0 = p1;
    p1 = p2;
    if (std::abs(p1) > 1e150L) {
      p0 *= 1e-150L;
      p1 *= 1e-150L;
      log_scale += 150.0 * std::numbers::ln10;
    }
  }
  return {p1, p0, log_scale};
}

}  // namespace detail

/// Nodes and weights of the N-point Gauss-Laguerre rule.
///
/// Golub-Welsch eigenvalues of the Jacobi matrix seed a Newton iteration on
/// L_N(x); weights follow from w_k = x_k / ((N+1) L_{N+1}(x_k))^2.
inline GaussLaguerreRule gauss_laguerre(int N) {
  if (N < 1) throw std::invalid_argument("gauss_laguerre: order must be >= 1");
  GaussLaguerreRule rule;
  rule.x.resize(static_cast<std::size_t>(N));
  rule.w.resize(static_cast<std::size_t>(N));
  rule.w_exp.resize(static_cast<std::size_t>(N));

  Eigen::VectorXd diag(N), sub(std::max(N - 1, 1));
  for (int k = 0; k < N; ++k) diag(k) = 2.0 * k + 1.0;
  for (int k = 1; k < N; ++k) sub(k - 1) = k;
  Eigen::VectorXd guess;
  if (N == 1) {
    guess = diag;
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub.head(N - 1), Eigen::EigenvaluesOnly);
    guess = es.eigenvalues();
  }

  for (int k = 0; k < N; ++k) {
    detail::wide x = guess(k);
    bool converged = false;
    double rel = 0.0;
    for (int it = 0; it < 100; ++it) {
      const auto s = detail::laguerre_pair(N, x);
      // L_N'(x) = N (L_N - L_{N-1}) / x
      const detail::wide dp = N * (s.p_n - s.p_nm1) / x;
      const detail::wide dx = s.p_n / dp;
      x -= dx;
      rel = static_cast<double>(std::abs(dx) / std::abs(x));
      if (rel < 1e-16) {
        converged = true;
        break;
      }
    }
    if (!converged && rel > 1e-14)
      throw std::runtime_error("gauss_laguerre: Newton iteration did not converge for node " +
                               std::to_string(k) + " of order " + std::to_string(N));
    rule.max_newton_residual = std::max(rule.max_newton_residual, rel);
    rule.x[static_cast<std::size_t>(k)] = static_cast<double>(x);

    const auto s = detail::laguerre_pair(N + 1, x);
    // log(w e^x) = log x - 2 log|(N+1) L_{N+1}| + x
    const double log_den = static_cast<double>(std::log(std::abs((N + 1.0L) * s.p_n))) + s.log_scale;
    const double log_wexp = static_cast<double>(std::log(x) + x) - 2.0 * log_den;
    const double xd = static_cast<double>(x);
    rule.w_exp[static_cast<std::size_t>(k)] = std::exp(log_wexp);
    rule.w[static_cast<std::size_t>(k)] = std::exp(log_wexp - xd);
  }
  return rule;
}

/// Radial part of the Laguerre-Gaussian mode in the variable x = r^2:
///   Phi_{n,m}(x) = sqrt(n!/(pi (n+m)!)) x^{m/2} e^{-x/2} L_n^m(x),  m = |l|.
///
/// Fills out[0..nmax]. Uses the recurrence for the normalised functions, so the
/// only large-argument factor (x^{m/2} e^{-x/2}/sqrt(m!)) is formed in log space.
inline void mode_radial_values(int m, double x, std::span<double> out) {
  const int nmax = static_cast<int>(out.size()) - 1;
  if (nmax < 0) return;
  double phi0;
  if (x <= 0.0) {
    phi0 = (m == 0) ? 1.0 / std::sqrt(std::numbers::pi) : 0.0;
  } else {
    const double lg = 0.5 * m * std::log(x) - 0.5 * x - 0.5 * (std::lgamma(m + 1.0) + std::log(std::numbers::pi));
    phi0 = std::exp(lg);
  }
  out[0] = phi0;
  if (nmax == 0) return;
  out[1] = (1.0 + m - x) * phi0 / std::sqrt(1.0 + m);
  for (int n = 1; n < nmax; ++n) {
    const double a = (2.0 * n + 1.0 + m - x) * out[static_cast<std::size_t>(n)];
    const double b = std::sqrt(static_cast<double>(n) * (n + m)) * out[static_cast<std::size_t>(n - 1)];
    out[static_cast<std::size_t>(n + 1)] = (a - b) / std::sqrt((n + 1.0) * (n + 1.0 + m));
  }
}

inline double mode_radial(int n, int m, double x) {
  std::vector<double> v(static_cast<std::size_t>(n + 1));
  mode_radial_values(m, x, v);
  return v.back();
}

/// Y_nl(r, theta) of the rotating-frame linear problem.
inline std::complex<double> mode_value(int n, int l, double r, double theta) {
  return mode_radial(n, std::abs(l), r * r) * std::polar(1.0, l * theta);
}

}  // namespace rotsgpe
