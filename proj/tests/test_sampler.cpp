#include <gtest/gtest.h>

#include <rotsgpe/sampler.hpp>

using namespace rotsgpe;

namespace {

InitialEnsembleSpec paper_initial(std::size_t n = 1) {
  InitialEnsembleSpec s;
  s.T_tilde = 30.1252;
  s.mu_tilde = 0.340361;
  s.n_samples = n;
  s.seed = 17;
  return s;
}

}  // namespace

TEST(Occupations, BoseEinstein) {
  EXPECT_NEAR(thermal_occupation(2.0, 0.5, 3.0), 1.0 / (std::exp(0.5) - 1.0), 1e-14);
  EXPECT_THROW(thermal_occupation(1.0, 1.0, 3.0), std::domain_error);
  const auto t = enumerate_modes(4, 0.979);
  const auto N = thermal_occupations(t, paper_initial());
  for (std::size_t k = 0; k < t.size(); ++k)
    EXPECT_NEAR(N[k], 1.0 / std::expm1((t.freqs()[k] - 0.340361) / 30.1252), 1e-12 * N[k]);
}

TEST(Occupations, RejectsMuAboveGround) {
  auto s = paper_initial();
  s.mu_tilde = 1.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
}

TEST(Wigner, SampleIsIndexAddressable) {
  const auto t = enumerate_modes(4, 0.979);
  const auto s = paper_initial(20);
  const auto all = sample_ensemble(s, t);
  const auto one = sample_wigner(s, t, 13);
  EXPECT_EQ(one.coeffs, all[13].coeffs);
  EXPECT_NE(all[12].coeffs, all[13].coeffs);
}

TEST(Wigner, MomentsMatchOccupations) {
  const auto t = enumerate_modes(4, 0.979);
  const auto s = paper_initial(4000);
  const auto N = thermal_occupations(t, s);
  const auto samples = sample_ensemble(s, t);
  for (std::size_t k : {std::size_t{0}, std::size_t{7}, t.size() / 2, t.size() - 1}) {
    double m = 0.0;
    std::complex<double> sq = 0.0;
    for (const auto& f : samples) {
      m += std::norm(f.coeffs[k]);
      sq += f.coeffs[k] * f.coeffs[k];
    }
    m /= samples.size();
    const double mean = N[k] + 0.5;  // |alpha|^2 is exponential with this mean
    EXPECT_NEAR(m, mean, 5 * mean / std::sqrt(samples.size())) << "k=" << k;
    EXPECT_LT(std::abs(sq) / samples.size(), 5 * mean / std::sqrt(samples.size()));
  }
}

TEST(Wigner, OneBodyMatrixDiagonalIsOccupation) {
  const auto t = enumerate_modes(4, 0.979);
  const auto s = paper_initial(3000);
  const auto N = thermal_occupations(t, s);
  const auto rho = ensemble_onebody_matrix(sample_ensemble(s, t));
  ASSERT_EQ(rho.rows(), static_cast<Eigen::Index>(t.size()));
  EXPECT_LT((rho - rho.adjoint()).norm(), 1e-10 * rho.norm());
  const double tol = 5 * (N[0] + 0.5) / std::sqrt(3000.0);
  for (std::size_t k = 0; k < t.size(); k += 17) EXPECT_NEAR(rho(k, k).real(), N[k], 5 * (N[k] + 0.5) / std::sqrt(3000.0));
  // off-diagonals are noise of the same size
  EXPECT_LT(std::abs(rho(0, 1)), tol);
}

TEST(Wigner, HalfQuantumSwitch) {
  const auto t = enumerate_modes(2, 0.5);
  const auto samples = sample_ensemble(paper_initial(10), t);
  const auto a = ensemble_onebody_matrix(samples, true);
  const auto b = ensemble_onebody_matrix(samples, false);
  EXPECT_NEAR((b - a).trace().real(), 0.5 * t.size(), 1e-10);
}

TEST(Wigner, OrderingMakesEigenvectorsTheCoefficients) {
  const auto t = enumerate_modes(2, 0.5);
  FieldState f;
  f.coeffs.assign(t.size(), 0.0);
  f.coeffs[1] = {3.0, 4.0};
  f.coeffs[2] = {0.0, -1.0};
  const auto rho = ensemble_onebody_matrix({f}, false);
  EXPECT_NEAR(std::abs(rho(1, 2) - f.coeffs[1] * std::conj(f.coeffs[2])), 0.0, 1e-14);
}
