#pragma once

#include <complex>
#include <vector>

namespace rotsgpe {

using Complex = std::complex<double>;
using CoeffVector = std::vector<Complex>;

/// Spectral coefficients alpha_nl of the condensate-band field, ordered as the
/// ModeTable they were built against, at dimensionless time `time`.
struct FieldState {
  CoeffVector coeffs;
  double time = 0.0;

  std::size_t size() const { return coeffs.size(); }
};

}  // namespace rotsgpe
