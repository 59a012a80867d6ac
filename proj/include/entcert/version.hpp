#pragma once

#include <cstdlib>
#include <string>

namespace entcert {

inline constexpr const char* kVersion = "0.1.0";

// Validation tolerance (Hermiticity, trace, positivity) and the tighter
// tolerance used for algebraic identities.
inline constexpr double kDefaultTol = 1e-9;
inline constexpr double kAlgebraTol = 1e-12;

// ENTCERT_TOL overrides the validation tolerance for CLI runs.
inline double default_tolerance() {
  if (const char* env = std::getenv("ENTCERT_TOL")) {
    char* end = nullptr;
    double v = std::strtod(env, &end);
    if (end != env && v > 0.0) return v;
  }
  return kDefaultTol;
}

}  // namespace entcert
