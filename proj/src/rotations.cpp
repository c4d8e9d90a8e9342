#include "ecs/rotations.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace ecs {
namespace {

constexpr double kPi = std::numbers::pi;

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ValidationError("alpha must be positive and finite, got " +
                          std::to_string(alpha));
  }
}

double wrap_azimuth(double p) {
  p = std::remainder(p, 2.0 * kPi);
  if (p <= -kPi) p += 2.0 * kPi;
  return p;
}

}  // namespace

MeasurementSetting MeasurementSetting::canonical() const {
  if (!std::isfinite(theta) || !std::isfinite(phi)) {
    throw ValidationError("measurement angles must be finite");
  }
  double t = std::fmod(theta, 2.0 * kPi);
  if (t < 0.0) t += 2.0 * kPi;
  double p = phi;
  if (t > kPi) {
    t = 2.0 * kPi - t;
    p += kPi;
  }
  return {t, wrap_azimuth(p)};
}

MeasurementSetting physical_setting(const MeasurementSetting& s, Mode mode,
                                    AzimuthConvention conv) {
  if (mode == Mode::B && conv == AzimuthConvention::MirroredBob) {
    return {s.theta, -s.phi};
  }
  return s;
}

CoherentDyadSum rotate(const CoherentDyadSum& state, Mode mode,
                       const MeasurementSetting& setting, double alpha) {
  check_alpha(alpha);
  const MeasurementSetting s = setting.canonical();
  const cplx i(0.0, 1.0);
  CoherentDyadSum out = displace(state, mode, i * s.phi / (4.0 * alpha));
  out = kerr_split(out, mode);
  out = displace(out, mode, i * s.theta / (4.0 * alpha));
  out = kerr_split(out, mode);
  out = displace(out, mode, -i * s.phi / (4.0 * alpha));
  return merge_terms(out);
}

KetSum displace_ket(const KetSum& ket, cplx mu) {
  KetSum out;
  out.reserve(ket.size());
  for (const auto& k : ket) {
    double ph = std::imag(mu * std::conj(k.label));
    out.push_back({k.coeff * LogAmp::from_log(0.0, ph), k.label + mu});
  }
  return out;
}

KetSum kerr_split_ket(const KetSum& ket) {
  const LogAmp same = LogAmp::from_log(-0.5 * std::log(2.0), -kPi / 4.0);
  const LogAmp flip = LogAmp::from_log(-0.5 * std::log(2.0), kPi / 4.0);
  KetSum out;
  out.reserve(2 * ket.size());
  for (const auto& k : ket) {
    out.push_back({k.coeff * same, k.label});
    out.push_back({k.coeff * flip, -k.label});
  }
  return out;
}

KetSum merge_ket(const KetSum& ket, double tol) {
  KetSum out;
  std::vector<double> top;
  for (const auto& k : ket) {
    auto it = std::find_if(out.begin(), out.end(), [&](const KetTerm& o) {
      return std::abs(o.label - k.label) <= tol;
    });
    if (it == out.end()) {
      out.push_back(k);
      top.push_back(k.coeff.log_mag);
    } else {
      it->coeff = it->coeff + k.coeff;
      double& t = top[static_cast<std::size_t>(it - out.begin())];
      t = std::max(t, k.coeff.log_mag);
    }
  }
  KetSum kept;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!out[i].coeff.is_zero() && out[i].coeff.log_mag >= top[i] + kLogCancellation) kept.push_back(out[i]);
  }
  return kept;
}

KetSum rotate_ket(const KetSum& ket, const MeasurementSetting& setting,
                  double alpha) {
  check_alpha(alpha);
  const MeasurementSetting s = setting.canonical();
  const cplx i(0.0, 1.0);
  KetSum out = displace_ket(ket, i * s.phi / (4.0 * alpha));
  out = kerr_split_ket(out);
  out = displace_ket(out, i * s.theta / (4.0 * alpha));
  out = kerr_split_ket(out);
  out = displace_ket(out, -i * s.phi / (4.0 * alpha));
  return merge_ket(out);
}

KetSum closed_form_image(int branch, const MeasurementSetting& setting,
                         double alpha) {
  check_alpha(alpha);
  const double t = setting.theta;
  const double p = setting.phi;
  const cplx i(0.0, 1.0);
  const cplx et = std::exp(i * t / 4.0);
  const cplx emt = std::exp(-i * t / 4.0);
  const cplx dt = i * t / (4.0 * alpha);
  const cplx dp = i * p / (2.0 * alpha);
  KetSum out;
  auto add = [&](cplx c, cplx label) {
    out.push_back({LogAmp::from_complex(0.5 * c), label});
  };
  if (branch > 0) {
    const cplx ep = std::exp(i * p / 2.0);
    add(et, alpha + dt);
    add(et * i * ep, -alpha - dp - dt);
    add(i * emt * ep, -alpha - dp + dt);
    add(i * emt * i, alpha - dt);
  } else {
    const cplx ep = std::exp(-i * p / 2.0);
    add(i * et * i, -alpha - dt);
    add(i * et * ep, alpha - dp + dt);
    add(emt * i * ep, alpha - dp - dt);
    add(emt, -alpha + dt);
  }
  return out;
}

LogAmp ket_inner(const KetSum& bra, const KetSum& ket) {
  LogAmp s;
  for (const auto& g : bra) {
    for (const auto& b : ket) {
      s = s + g.coeff.conj() * b.coeff * overlap(b.label, g.label);
    }
  }
  return s;
}

double ket_fidelity(const KetSum& x, const KetSum& y) {
  const LogAmp xy = ket_inner(x, y);
  const LogAmp xx = ket_inner(x, x);
  const LogAmp yy = ket_inner(y, y);
  return std::exp(2.0 * xy.log_mag - xx.log_mag - yy.log_mag);
}

IdealQubitMap ideal_map(const MeasurementSetting& setting) {
  const double s = std::sin(setting.theta / 2.0);
  const double c = std::cos(setting.theta / 2.0);
  const cplx e = std::polar(1.0, setting.phi);
  return {s, e * c, std::conj(e) * c, -s};
}

KetSum ideal_image(int branch, const MeasurementSetting& setting,
                   double alpha) {
  const IdealQubitMap m = ideal_map(setting);
  const cplx cp = branch > 0 ? m.m11 : m.m12;
  const cplx cm = branch > 0 ? m.m21 : m.m22;
  KetSum out;
  if (cp != 0.0) out.push_back({LogAmp::from_complex(cp), alpha});
  if (cm != 0.0) out.push_back({LogAmp::from_complex(cm), -alpha});
  return out;
}

double rotation_fidelity(const MeasurementSetting& setting, double alpha,
                         bool literal) {
  check_alpha(alpha);
  const MeasurementSetting s = setting.canonical();
  const KetSum out = rotate_ket({{LogAmp::one(), alpha}}, s, alpha);
  const MeasurementSetting target = literal ? s : MeasurementSetting{s.theta, -s.phi};
  return std::clamp(ket_fidelity(ideal_image(+1, target, alpha), out), 0.0, 1.0);
}

}  // namespace ecs
