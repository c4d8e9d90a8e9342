#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace ecs {

using cplx = std::complex<double>;

inline double wrap_phase(double p) {
  p = std::remainder(p, 2.0 * std::numbers::pi);
  return p;
}

// Complex number held as log|z| and arg z.
struct LogAmp {
  double log_mag = -std::numeric_limits<double>::infinity();
  double phase = 0.0;

  static LogAmp zero() { return {}; }
  static LogAmp one() { return {0.0, 0.0}; }
  static LogAmp from_log(double lm, double ph) { return {lm, wrap_phase(ph)}; }
  static LogAmp from_complex(cplx z) {
    double m = std::abs(z);
    if (m == 0.0) return {};
    return {std::log(m), std::arg(z)};
  }
  // exp(z) for complex z
  static LogAmp exp_of(cplx z) { return {z.real(), wrap_phase(z.imag())}; }

  bool is_zero() const { return std::isinf(log_mag) && log_mag < 0; }
  bool finite() const {
    return (is_zero() || std::isfinite(log_mag)) && std::isfinite(phase);
  }

  cplx value() const {
    if (is_zero()) return {0.0, 0.0};
    return std::polar(std::exp(log_mag), phase);
  }
  cplx scaled(double shift) const {
    if (is_zero()) return {0.0, 0.0};
    return std::polar(std::exp(log_mag + shift), phase);
  }
  LogAmp conj() const { return {log_mag, is_zero() ? 0.0 : wrap_phase(-phase)}; }

  friend LogAmp operator*(const LogAmp& x, const LogAmp& y) {
    if (x.is_zero() || y.is_zero()) return {};
    return {x.log_mag + y.log_mag, wrap_phase(x.phase + y.phase)};
  }
  friend LogAmp operator/(const LogAmp& x, const LogAmp& y) {
    if (x.is_zero()) return {};
    return {x.log_mag - y.log_mag, wrap_phase(x.phase - y.phase)};
  }
  friend LogAmp operator+(const LogAmp& x, const LogAmp& y) { return combine(x, y, 1.0); }
  friend LogAmp operator-(const LogAmp& x, const LogAmp& y) { return combine(x, y, -1.0); }

 private:
  // x + sign * y relative to the larger magnitude
  static LogAmp combine(const LogAmp& x, const LogAmp& y, double sign) {
    if (y.is_zero()) return x;
    if (x.is_zero()) return {y.log_mag, sign > 0 ? y.phase : wrap_phase(y.phase + std::numbers::pi)};
    const bool x_big = x.log_mag >= y.log_mag;
    const LogAmp& big = x_big ? x : y;
    const LogAmp& small = x_big ? y : x;
    const cplx ratio = std::polar(std::exp(small.log_mag - big.log_mag), small.phase - big.phase);
    const cplx r = x_big ? 1.0 + sign * ratio : ratio + sign;
    LogAmp out = from_complex(r);
    if (out.is_zero()) return out;
    return {big.log_mag + out.log_mag, wrap_phase(big.phase + out.phase)};
  }
};

}  // namespace ecs
