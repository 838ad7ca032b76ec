#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "units.hpp"

namespace rotsgpe {

/// Energy cutoff: keep every mode with 2n + |l| - (Omega/omega_r) l <= Nbar.
struct CutoffSpec {
  int Nbar = 0;

  /// Cutoff energy in units of hbar*omega_r.
  double E_R() const { return Nbar + 1.0; }
  double E_R_joule(const TrapGeometry& trap) const { return E_R() * trap.energy_unit(); }

  static CutoffSpec from_energy(double E_R_in_hbar_omega_r) {
    const double nb = E_R_in_hbar_omega_r - 1.0;
    const double r = std::round(nb);
    if (std::abs(nb - r) > 1e-9 || r < 0)
      throw std::invalid_argument("CutoffSpec: E_R must equal (Nbar+1) hbar omega_r for integer Nbar >= 0");
    return CutoffSpec{static_cast<int>(r)};
  }
};

struct ModeIndex {
  int n = 0;
  int l = 0;
  friend bool operator==(const ModeIndex&, const ModeIndex&) = default;
};

namespace detail {
// Slack for floating-point comparisons against the integer cutoff.
inline constexpr double cutoff_slack = 1e-10;
}  // namespace detail

/// Rotating-frame frequency 2n + |l| - Omega_frac*l + 1 in units of omega_r.
inline double mode_frequency(ModeIndex idx, double Omega_frac) {
  return 2.0 * idx.n + std::abs(idx.l) - Omega_frac * idx.l + 1.0;
}

/// Ordered table of retained Laguerre-Gaussian modes.
///
/// Ordering is n ascending, then l ascending from -l_minus(n) to l_plus(n).
/// This ordering is also the on-disk order of checkpoint coefficients.
class ModeTable {
 public:
  struct Entry {
    int n;
    std::size_t index;
  };

  ModeTable() = default;

  ModeTable(int Nbar, double Omega_frac) : Nbar_(Nbar), Omega_frac_(Omega_frac) {
    if (Nbar < 0) throw std::invalid_argument("ModeTable: Nbar must be >= 0");
    if (!(Omega_frac >= 0.0) || !(Omega_frac < 1.0))
      throw std::invalid_argument("ModeTable: rotation must satisfy 0 <= Omega/omega_r < 1");
    for (int n = 0; n <= Nbar / 2; ++n) {
      const int lm = l_minus(n), lp = l_plus(n);
      for (int l = -lm; l <= lp; ++l) {
        modes_.push_back({n, l});
        freqs_.push_back(mode_frequency({n, l}, Omega_frac));
      }
    }
    lbar_minus_ = l_minus(0);
    lbar_plus_ = l_plus(0);
    by_l_.resize(static_cast<std::size_t>(lbar_minus_ + lbar_plus_ + 1));
    for (std::size_t k = 0; k < modes_.size(); ++k)
      by_l_[static_cast<std::size_t>(modes_[k].l + lbar_minus_)].push_back({modes_[k].n, k});
  }

  int Nbar() const { return Nbar_; }
  double Omega_frac() const { return Omega_frac_; }
  std::size_t size() const { return modes_.size(); }
  const std::vector<ModeIndex>& modes() const { return modes_; }
  const std::vector<double>& freqs() const { return freqs_; }
  const ModeIndex& operator[](std::size_t k) const { return modes_[k]; }
  int lbar_minus() const { return lbar_minus_; }
  int lbar_plus() const { return lbar_plus_; }

  int l_plus(int n) const {
    if (n < 0 || 2 * n > Nbar_) return -1;
    return static_cast<int>(std::floor((Nbar_ - 2 * n) / (1.0 - Omega_frac_) + detail::cutoff_slack));
  }
  int l_minus(int n) const {
    if (n < 0 || 2 * n > Nbar_) return -1;
    return static_cast<int>(std::floor((Nbar_ - 2 * n) / (1.0 + Omega_frac_) + detail::cutoff_slack));
  }

  bool contains(ModeIndex m) const {
    if (m.n < 0 || 2 * m.n > Nbar_) return false;
    return m.l >= -l_minus(m.n) && m.l <= l_plus(m.n);
  }

  std::optional<std::size_t> index_of(ModeIndex m) const {
    if (!contains(m)) return std::nullopt;
    const auto& list = by_l_[static_cast<std::size_t>(m.l + lbar_minus_)];
    for (const auto& e : list)
      if (e.n == m.n) return e.index;
    return std::nullopt;
  }

  /// Modes sharing angular number l, n ascending.
  const std::vector<Entry>& with_l(int l) const {
    return by_l_.at(static_cast<std::size_t>(l + lbar_minus_));
  }

  /// Largest radial number retained for |l| (either sign), or -1.
  int n_max_abs(int abs_l) const {
    int nm = -1;
    for (int s : {1, -1}) {
      const int l = s * abs_l;
      if (l < -lbar_minus_ || l > lbar_plus_) continue;
      const auto& list = with_l(l);
      if (!list.empty()) nm = std::max(nm, list.back().n);
    }
    return nm;
  }

  /// Debug dump: CSV rows "n,l,omega".
  void write_csv(std::ostream& os) const {
    os << "n,l,omega\n";
    os.precision(17);
    for (std::size_t k = 0; k < modes_.size(); ++k)
      os << modes_[k].n << ',' << modes_[k].l << ',' << freqs_[k] << '\n';
  }

 private:
  int Nbar_ = 0;
  double Omega_frac_ = 0.0;
  int lbar_minus_ = 0;
  int lbar_plus_ = 0;
  std::vector<ModeIndex> modes_;
  std::vector<double> freqs_;
  std::vector<std::vector<Entry>> by_l_;
};

inline ModeTable enumerate_modes(int Nbar, double Omega_frac) {
  if (!(Omega_frac < 1.0)) throw std::invalid_argument("enumerate_modes: Omega >= omega_r gives an unbounded band");
  return ModeTable(Nbar, Omega_frac);
}

inline ModeTable enumerate_modes(const TrapGeometry& trap, const CutoffSpec& cutoff) {
  if (!(trap.Omega < trap.omega_r))
    throw std::invalid_argument("enumerate_modes: Omega >= omega_r gives an unbounded band");
  return ModeTable(cutoff.Nbar, trap.omega_frac());
}

}  // namespace rotsgpe
