#pragma once

// Reference implementations used only by the tests. They share no code with
// the library beyond the mode table.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/special_functions/laguerre.hpp>

#include <rotsgpe/basis.hpp>

namespace oracle {

using cplx = std::complex<double>;

struct Rule {
  std::vector<double> x, w;
};

// Golub-Welsch on [-1, 1]
inline Rule gauss_legendre(int n) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    J(k, k - 1) = J(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  Rule r;
  for (int k = 0; k < n; ++k) {
    r.x.push_back(es.eigenvalues()(k));
    r.w.push_back(2.0 * es.eigenvectors()(0, k) * es.eigenvectors()(0, k));
  }
  return r;
}

// Composite Gauss-Legendre on [a, b].
inline Rule composite(double a, double b, int panels, int order) {
  const Rule g = gauss_legendre(order);
  Rule r;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p)
    for (int k = 0; k < order; ++k) {
      r.x.push_back(a + h * (p + 0.5 * (g.x[k] + 1.0)));
      r.w.push_back(0.5 * h * g.w[k]);
    }
  return r;
}

// Radial factor of Y_nl from the associated Laguerre polynomial, log-space
// normalisation.
inline double radial(int n, int l, double r) {
  const int m = std::abs(l);
  if (r == 0.0) return m == 0 ? boost::math::laguerre(n, 0, 0.0) * std::sqrt(1.0 / std::numbers::pi) : 0.0;
  const double lg = m * std::log(r) - 0.5 * r * r + 0.5 * (std::lgamma(n + 1.0) - std::lgamma(n + m + 1.0)) -
                    0.5 * std::log(std::numbers::pi);
  return std::exp(lg) * boost::math::laguerre(n, static_cast<unsigned>(m), r * r);
}

inline cplx mode(int n, int l, double r, double th) { return radial(n, l, r) * std::polar(1.0, l * th); }

/// F_nl = integral Y_nl^* |psi|^2 psi d^2r by composite Gauss-Legendre in r
/// and a uniform theta rule of n_theta points, with direct exponential sums.
inline std::vector<cplx> dense_nonlinear(const std::vector<cplx>& alpha, const rotsgpe::ModeTable& t) {
  const int lmin = -t.lbar_minus(), lmax = t.lbar_plus();
  const int L = lmax - lmin + 1;
  const double rmax = std::sqrt(std::max(lmax, -lmin) + 2.0 * t.Nbar() + 1.0) + 6.0;
  const Rule rr = composite(0.0, rmax, static_cast<int>(std::ceil(rmax / 0.25)), 14);
  const int nth = 4 * std::max(lmax, -lmin) + 8;
  std::vector<cplx> ph(static_cast<std::size_t>(L) * nth);
  for (int l = lmin; l <= lmax; ++l)
    for (int j = 0; j < nth; ++j) ph[static_cast<std::size_t>(l - lmin) * nth + j] = std::polar(1.0, 2.0 * std::numbers::pi * l * j / nth);

  std::vector<cplx> F(t.size(), 0.0);
  std::vector<cplx> R(L), psi(nth), G(L);
  std::vector<double> rad(t.size());
  for (std::size_t i = 0; i < rr.x.size(); ++i) {
    const double r = rr.x[i];
    for (std::size_t k = 0; k < t.size(); ++k) rad[k] = radial(t[k].n, t[k].l, r);
    std::fill(R.begin(), R.end(), 0.0);
    for (std::size_t k = 0; k < t.size(); ++k) R[t[k].l - lmin] += alpha[k] * rad[k];
    for (int j = 0; j < nth; ++j) {
      cplx s = 0.0;
      for (int l = 0; l < L; ++l) s += R[l] * ph[static_cast<std::size_t>(l) * nth + j];
      psi[j] = std::norm(s) * s;
    }
    for (int l = 0; l < L; ++l) {
      cplx s = 0.0;
      for (int j = 0; j < nth; ++j) s += psi[j] * std::conj(ph[static_cast<std::size_t>(l) * nth + j]);
      G[l] = s * (2.0 * std::numbers::pi / nth);
    }
    for (std::size_t k = 0; k < t.size(); ++k) F[k] += rr.w[i] * r * rad[k] * G[t[k].l - lmin];
  }
  return F;
}

/// Li_nu(z) = sum z^k / k^nu, |z| < 1.
inline double polylog(double nu, double z) {
  double s = 0.0, zk = 1.0;
  for (int k = 1; k < 100000; ++k) {
    zk *= z;
    const double term = zk / std::pow(k, nu);
    s += term;
    if (std::abs(term) < 1e-18 * std::abs(s)) break;
  }
  return s;
}

}  // namespace oracle
