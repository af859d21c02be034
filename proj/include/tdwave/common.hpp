#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace tdwave {

inline constexpr double kPi = 3.14159265358979323846;

/// Raised for malformed parameters, configs, or files. Mapped to exit code 2
/// by the command-line driver.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when an algorithm fails to reach its declared tolerance or a
/// postcondition is violated. Mapped to exit code 3 by the driver.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Three-valued verdict used by the evidential checkers: a finite computation
/// can support or contradict an asymptotic hypothesis, or fail to decide.
enum class Verdict { pass, fail, inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    default: return "inconclusive";
  }
}

/// Surface area of the unit sphere S^d embedded in R^{d+1},
/// |S^d| = 2 pi^{(d+1)/2} / Gamma((d+1)/2). |S^0| = 2.
inline double sphere_area(int d) {
  if (d < 0) throw ConfigError("sphere_area: negative dimension");
  const double k = 0.5 * (d + 1);
  return 2.0 * std::pow(kPi, k) / std::tgamma(k);
}

}  // namespace tdwave
