#include <gtest/gtest.h>

#include <boost/math/special_functions/zeta.hpp>

#include <rotsgpe/special.hpp>

#include "oracles.hpp"

using namespace rotsgpe;

namespace {

// (1/Gamma(nu)) int_y^{y+L} x^{nu-1} z e^{-x}/(1 - z e^{-x}) dx by composite Gauss-Legendre
double bose_integral(double nu, double z, double y) {
  // geometrically graded panels resolve the near-pole at x = y
  double s = 0.0, a = y;
  for (double len : {1e-4, 1e-3, 1e-2, 0.1, 1.0, 10.0, 80.0}) {
    const auto r = oracle::composite(a, y + len, 40, 16);
    for (std::size_t i = 0; i < r.x.size(); ++i) {
      const double x = r.x[i];
      s += r.w[i] * std::pow(x, nu - 1.0) * z * std::exp(-x) / (-std::expm1(std::log(z) - x));
    }
    a = y + len;
  }
  return s / std::tgamma(nu);
}

}  // namespace

TEST(BoseFunction, MatchesPolylogSeries) {
  for (double nu : {1.5, 2.0, 3.0, 4.0, 5.0})
    for (double z : {0.01, 0.3, 0.7, 0.9, 0.97, 0.995}) {
      const double ref = oracle::polylog(nu, z);
      EXPECT_NEAR(bose_function(nu, z), ref, 1e-12 * ref) << "nu=" << nu << " z=" << z;
    }
}

TEST(BoseFunction, ZetaAtUnitFugacity) {
  EXPECT_NEAR(bose_function(3.0, 1.0), boost::math::zeta(3.0), 1e-15);
  EXPECT_NEAR(bose_function(1.5, 1.0), 2.6123753486854883, 1e-14);
}

TEST(IncompleteBose, MatchesDefiningIntegral) {
  for (double nu : {1.5, 3.0, 4.0, 5.0})
    for (auto [z, y] : {std::pair{0.5, 0.2}, std::pair{0.99, 0.01}, std::pair{1.1, 0.2}, std::pair{1.0, 0.5},
                        std::pair{0.2, 3.0}, std::pair{3.0, 1.2}}) {
      const double ref = bose_integral(nu, z, y);
      EXPECT_NEAR(incomplete_bose(nu, z, y), ref, 1e-11 * ref) << "nu=" << nu << " z=" << z << " y=" << y;
    }
}

TEST(IncompleteBose, ReducesToBoseFunctionAtZeroCutoff) {
  EXPECT_NEAR(incomplete_bose(3.0, 0.8, 0.0), oracle::polylog(3.0, 0.8), 1e-13);
}

TEST(IncompleteBose, DecreasesWithCutoff) {
  double prev = incomplete_bose(3.0, 1.0, 0.0);
  for (double y : {0.01, 0.1, 1.0, 5.0}) {
    const double v = incomplete_bose(3.0, 1.0, y);
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(IncompleteBose, RejectsDivergentArguments) {
  EXPECT_THROW(incomplete_bose(3.0, 2.0, 0.5), std::domain_error);
  EXPECT_THROW(incomplete_bose(1.0, 1.0, 0.0), std::domain_error);
  EXPECT_THROW(incomplete_bose(3.0, 0.5, -1.0), std::domain_error);
}

TEST(Lerch, MatchesDirectSum) {
  for (double z : {0.1, 0.5, 0.9, 0.95, 0.99})
    for (double a : {1.0, 2.0, 7.5, 40.0}) {
      double s = 0.0, zk = 1.0;
      for (int k = 0; k < 20000; ++k, zk *= z) s += zk / (a + k);
      EXPECT_NEAR(lerch_phi1(z, a), s, 1e-13 * s) << "z=" << z << " a=" << a;
    }
}

TEST(Lerch, LadderAgreesWithDirectEvaluation) {
  const double z = 0.97;
  const auto lad = lerch_phi1_ladder(z, 60);
  for (int r : {1, 2, 10, 59, 60}) EXPECT_NEAR(lad[r], lerch_phi1(z, r + 1.0), 1e-13 * lad[r]);
}
