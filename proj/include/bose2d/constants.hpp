#pragma once

namespace bose2d {

// Euler-Mascheroni constant and friends, to more digits than double holds.
// These enter second-order energy coefficients directly, so they are kept
// as literals rather than recomputed.
inline constexpr double euler_gamma = 0.577215664901532861;
inline constexpr double pi          = 3.14159265358979324;
inline constexpr double log_pi      = 1.14472988584940017;
inline constexpr double log_two     = 0.693147180559945309;

// Coefficient of the second-order term in the 2D energy expansion.
inline constexpr double lhy_constant = 2.0 * euler_gamma + 0.5 + log_pi;

} // namespace bose2d
