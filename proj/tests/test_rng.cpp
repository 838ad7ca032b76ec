#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include <rotsgpe/rng.hpp>

using namespace rotsgpe;

// Known-answer vectors for Philox4x32-10.
TEST(Philox, KnownAnswerZero) {
  const auto r = Philox4x32::bijection({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(r, (Philox4x32::counter_type{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
}

TEST(Philox, KnownAnswerOnes) {
  const auto r = Philox4x32::bijection({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
  EXPECT_EQ(r, (Philox4x32::counter_type{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
}

TEST(Philox, KnownAnswerPi) {
  const auto r = Philox4x32::bijection({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u});
  EXPECT_EQ(r, (Philox4x32::counter_type{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(Philox, SeekReproducesStream) {
  Philox4x32 a(5, 9);
  std::vector<std::uint32_t> first;
  for (int i = 0; i < 40; ++i) first.push_back(a());
  Philox4x32 b(5, 9);
  b.seek(3);
  for (int i = 12; i < 40; ++i) EXPECT_EQ(b(), first[i]);
}

TEST(Philox, StreamsDiffer) {
  std::set<std::uint32_t> seen;
  for (std::uint32_t traj = 0; traj < 50; ++traj)
    for (auto p : {StreamPurpose::InitialState, StreamPurpose::Noise}) seen.insert(make_stream(3, traj, p)());
  EXPECT_EQ(seen.size(), 100u);
  EXPECT_NE(make_stream(1, 0, StreamPurpose::Noise)(), make_stream(2, 0, StreamPurpose::Noise)());
}

TEST(Philox, UniformBitsUnbiased) {
  Philox4x32 g(11, 0);
  const int n = 400000;
  std::array<long, 32> ones{};
  for (int i = 0; i < n; ++i) {
    const auto v = g();
    for (int b = 0; b < 32; ++b) ones[b] += (v >> b) & 1u;
  }
  const double sd = std::sqrt(n * 0.25);
  for (int b = 0; b < 32; ++b) EXPECT_LT(std::abs(ones[b] - 0.5 * n), 5 * sd) << "bit " << b;
}

TEST(ComplexGaussian, Moments) {
  Philox4x32 g(2, 0);
  ComplexGaussian eta(3.0);
  const int n = 200000;
  double m2 = 0, m4 = 0;
  std::complex<double> s2 = 0, s1 = 0;
  for (int i = 0; i < n; ++i) {
    const auto z = eta(g);
    s1 += z;
    s2 += z * z;
    m2 += std::norm(z);
    m4 += std::norm(z) * std::norm(z);
  }
  // |eta|^2 is exponential with mean 3, variance 9
  EXPECT_NEAR(m2 / n, 3.0, 5 * 3.0 / std::sqrt(n));
  EXPECT_NEAR(m4 / n, 18.0, 5 * std::sqrt(20.0 * 81 - 324) / std::sqrt(n));
  EXPECT_LT(std::abs(s2) / n, 5 * 3.0 / std::sqrt(n));
  EXPECT_LT(std::abs(s1) / n, 5 * std::sqrt(3.0 / n));
}
