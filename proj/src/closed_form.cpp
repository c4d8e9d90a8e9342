#include <cmath>
#include <numbers>

#include "ecs/faddeeva.hpp"
#include "ecs/homodyne.hpp"

namespace ecs {
namespace {

struct Side {
  double q;  // quarter polar angle
  double p;  // azimuth
};

LogAmp erf_term(double alpha, double q, double p) {
  const cplx z(std::numbers::sqrt2 * alpha,
               (4.0 * q + p) / (2.0 * std::numbers::sqrt2 * alpha));
  return LogAmp::from_complex(erf_complex(z));
}

LogAmp erfi_term(double alpha, double q, double p) {
  const double x = (4.0 * q + p) / (2.0 * std::numbers::sqrt2 * alpha);
  if (x == 0.0) return {};
  const double lm = std::abs(x) < 1.0 ? std::log(std::abs(erfi(x))) : log_erfi(std::abs(x));
  return LogAmp::from_log(lm, x < 0.0 ? std::numbers::pi : 0.0);
}

LogAmp ex(double re, double im) { return LogAmp::exp_of(cplx(re, im)); }

}  // namespace

double correlation_closed_form(double alpha, const SettingPair& settings,
                               AzimuthConvention conv) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ValidationError("alpha must be positive and finite");
  }
  const MeasurementSetting sa =
      physical_setting(settings.a.canonical(), Mode::A, conv);
  const MeasurementSetting sb =
      physical_setting(settings.b.canonical(), Mode::B, conv);
  const Side s[2] = {{sa.theta / 4.0, sa.phi}, {sb.theta / 4.0, sb.phi}};
  const double a2 = alpha * alpha;

  double sum_u2 = 0.0, sum_u = 0.0, sum_q = 0.0, sum_q2 = 0.0, sum_p = 0.0;
  for (const auto& x : s) {
    const double u = 4.0 * x.q + x.p;
    sum_u += u;
    sum_u2 += u * u;
    sum_q += x.q;
    sum_q2 += x.q * x.q;
    sum_p += x.p;
  }
  // 1 / (1 + e^{4 a^2}) = e^{-4 a^2} / (1 + e^{-4 a^2})
  const double log_den = std::log1p(std::exp(-4.0 * a2));

  LogAmp t1 = ex(std::log(0.25) - log_den - 2.0 * sum_q2 / a2, -4.0 * sum_q);
  LogAmp t2 = ex(std::log(0.125) - log_den - sum_u2 / (8.0 * a2), -sum_u);
  t2.phase = wrap_phase(t2.phase + std::numbers::pi);
  LogAmp t3 = ex(std::log(0.125) - log_den - sum_u2 / (8.0 * a2), -sum_u + 2.0 * sum_p);
  t3.phase = wrap_phase(t3.phase + std::numbers::pi);
  LogAmp t4 = ex(std::log(0.25) - log_den - sum_u2 / (8.0 * a2) - 4.0 * a2, 0.0);

  for (const auto& x : s) {
    const double q = x.q, p = x.p;
    t1 = t1 * (erf_term(alpha, -q, 0.0) + ex(0.0, 8.0 * q) * erf_term(alpha, q, 0.0));
    t2 = t2 * (erf_term(alpha, -q, -p) - ex(2.0 * q * p / a2, 8.0 * q) * erf_term(alpha, q, -p));
    t3 = t3 * (ex(2.0 * q * p / a2, 0.0) * erf_term(alpha, -q, p) -
               ex(0.0, 8.0 * q) * erf_term(alpha, q, p));
    t4 = t4 * (ex(2.0 * q * p / a2, 0.0) * erfi_term(alpha, q, -p) + erfi_term(alpha, q, p));
  }
  const LogAmp total = t1 + t2 + t3 + t4;
  const double v = total.value().real();
  if (!total.finite() || !std::isfinite(v)) {
    throw NumericalError("closed-form correlation overflowed in log-domain evaluation");
  }
  return v;
}

}  // namespace ecs
