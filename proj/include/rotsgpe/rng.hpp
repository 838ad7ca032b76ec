#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>

namespace rotsgpe {

/// Philox4x32-10 counter-based generator.
///
/// Satisfies UniformRandomBitGenerator. The 128-bit counter is split into a
/// 64-bit stream id (high words) and a 64-bit block index (low words), so
/// every (seed, stream) pair is an independent sequence of 2^64 blocks.
class Philox4x32 {
 public:
  using result_type = std::uint32_t;
  using counter_type = std::array<std::uint32_t, 4>;
  using key_type = std::array<std::uint32_t, 2>;

  Philox4x32() : Philox4x32(0, 0) {}
  Philox4x32(std::uint64_t seed, std::uint64_t stream) {
    key_ = {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    stream_ = stream;
    block_ = 0;
    pos_ = 4;
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (pos_ == 4) {
      buf_ = bijection(counter(), key_);
      ++block_;
      pos_ = 0;
    }
    return buf_[pos_++];
  }

  /// Skip to a block index; the buffered outputs are discarded.
  void seek(std::uint64_t block) {
    block_ = block;
    pos_ = 4;
  }

  std::uint64_t block() const { return block_; }
  std::uint64_t stream() const { return stream_; }

  static counter_type bijection(counter_type c, key_type k) {
    for (int round = 0; round < 10; ++round) {
      c = single_round(c, k);
      k[0] += 0x9E3779B9u;
      k[1] += 0xBB67AE85u;
    }
    return c;
  }

 private:
  static counter_type single_round(const counter_type& c, const key_type& k) {
    const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * c[0];
    const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }

  counter_type counter() const {
    return {static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
            static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
  }

  key_type key_{};
  std::uint64_t stream_ = 0;
  std::uint64_t block_ = 0;
  counter_type buf_{};
  int pos_ = 4;
};

/// What a stream is used for; part of the stream id.
enum class StreamPurpose : std::uint32_t { InitialState = 0, Noise = 1, Test = 7 };

/// Independent generator for trajectory `traj` and `purpose` under `seed`.
inline Philox4x32 make_stream(std::uint64_t seed, std::uint32_t traj, StreamPurpose purpose) {
  return Philox4x32(seed, (std::uint64_t{traj} << 32) | static_cast<std::uint32_t>(purpose));
}

/// Complex Gaussian with <|eta|^2> = variance and <eta^2> = 0.
class ComplexGaussian {
 public:
  explicit ComplexGaussian(double variance = 1.0) : nd_(0.0, std::sqrt(0.5 * variance)) {}
  template <class URBG>
  std::complex<double> operator()(URBG& g) {
    const double re = nd_(g);
    const double im = nd_(g);
    return {re, im};
  }
  void reset() { nd_.reset(); }

 private:
  std::normal_distribution<double> nd_;
};

}  // namespace rotsgpe
