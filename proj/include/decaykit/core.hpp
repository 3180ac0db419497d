#pragma once

#include <complex>

namespace decaykit {

using complex_t = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

// Riemann sheet selector for self-energy evaluation. The second sheet is the
// continuation reached by crossing the branch cut downward from the upper
// half plane.
enum class Sheet { first, second };

inline complex_t iu() { return complex_t(0.0, 1.0); }

}  // namespace decaykit
