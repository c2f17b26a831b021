#pragma once

#include <cmath>

namespace gqfi {

inline constexpr const char* kVersion = "0.1.0";

// Squeezing strength in dB maps to the dimensionless rate through
// dB = 10*log10(e^{2r}), i.e. r = ln(10)/20 * dB (so 10 dB ~ r = 1.1513).
inline constexpr const char* kDbConvention = "dB = 10*log10(exp(2r))";

inline double db_to_r(double db) { return db * std::log(10.0) / 20.0; }
inline double r_to_db(double r) { return 20.0 * r / std::log(10.0); }

}  // namespace gqfi
