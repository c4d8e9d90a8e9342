#include "ecs/faddeeva.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace ecs {
namespace {

constexpr int kTerms = 40;
constexpr double kSwitchRadius = 8.0;
constexpr int kFractionDepth = 40;

struct Weideman {
  double L;
  std::array<double, kTerms + 1> a{};  // a[m], m = 1..kTerms, Z^{m-1} coefficient

  Weideman() {
    const int M = 2 * kTerms;
    const int size = 2 * M;
    L = std::sqrt(kTerms / std::numbers::sqrt2);
    std::array<double, 2 * 2 * kTerms> g{};
    for (int i = 0; i < size; ++i) {
      int k = i < M ? i : i - size;
      if (i == M) continue;
      double t = L * std::tan(k * std::numbers::pi / (2.0 * M));
      g[i] = std::exp(-t * t) * (L * L + t * t);
    }
    for (int m = 1; m <= kTerms; ++m) {
      double s = 0.0;
      for (int i = 0; i < size; ++i) {
        s += g[i] * std::cos(2.0 * std::numbers::pi * double(i) * m / size);
      }
      a[m] = s / size;
    }
  }

  cplx eval(cplx z) const {
    const cplx iz(-z.imag(), z.real());
    const cplx den = L - iz;
    const cplx Z = (L + iz) / den;
    cplx p = 0.0;
    for (int m = kTerms; m >= 1; --m) p = p * Z + a[m];
    return 2.0 * p / (den * den) + (1.0 / std::sqrt(std::numbers::pi)) / den;
  }
};

const Weideman& weideman() {
  static const Weideman w;
  return w;
}

cplx continued_fraction(cplx z) {
  cplx r = 0.0;
  for (int n = kFractionDepth; n >= 1; --n) r = (0.5 * n) / (z - r);
  return cplx(0.0, 1.0 / std::sqrt(std::numbers::pi)) / (z - r);
}

cplx w_upper(cplx z) {
  if (std::abs(z) >= kSwitchRadius) return continued_fraction(z);
  return weideman().eval(z);
}

}  // namespace

cplx faddeeva_w(cplx z) {
  cplx w = z.imag() >= 0.0 ? w_upper(z) : 2.0 * std::exp(-z * z) - w_upper(-z);
  if (z.real() == 0.0) w.imag(0.0);  // w(iy) is real
  return w;
}

cplx erf_complex(cplx z) {
  if (z.real() < 0.0) return -erf_complex(-z);
  const cplx iz(-z.imag(), z.real());
  return 1.0 - std::exp(-z * z) * w_upper(iz);
}

double erfi(double x) {
  return std::exp(x * x) * faddeeva_w(cplx(x, 0.0)).imag();
}

double log_erfi(double x) {
  return x * x + std::log(faddeeva_w(cplx(x, 0.0)).imag());
}

}  // namespace ecs
