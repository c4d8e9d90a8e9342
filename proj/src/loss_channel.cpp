#include "ecs/loss_channel.hpp"

#include <cmath>
#include <string>

namespace ecs {

Efficiency::Efficiency(double eta) : eta_(eta) {
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw ValidationError("efficiency must lie in (0, 1], got " + std::to_string(eta));
  }
}

CoherentDyadSum apply_loss(const CoherentDyadSum& state, Mode mode, const Efficiency& eff) {
  const double eta = eff.eta();
  if (eta == 1.0) return state;
  const double r = std::sqrt(eta);
  const double lost = 1.0 - eta;
  CoherentDyadSum out = state;
  for (auto& t : out.terms) {
    cplx& k = t.ket(mode);
    cplx& b = t.bra(mode);
    t.coeff = t.coeff * LogAmp::from_log(-0.5 * lost * std::norm(k - b),
                                         lost * std::imag(std::conj(b) * k));
    k *= r;
    b *= r;
  }
  return out;
}

CoherentDyadSum measured_state(double alpha, const SettingPair& settings,
                               const Efficiency& eff, const PipelineOptions& opt) {
  CoherentDyadSum s = make_ecs({alpha});
  s = rotate(s, Mode::A, physical_setting(settings.a, Mode::A, opt.convention), alpha);
  s = rotate(s, Mode::B, physical_setting(settings.b, Mode::B, opt.convention), alpha);
  if (eff.eta() < 1.0) {
    s = apply_loss(s, Mode::A, eff);
    s = apply_loss(s, Mode::B, eff);
  }
  return prune(s, opt.prune_tol);
}

SignProbabilities lossy_probabilities(double alpha, const SettingPair& settings,
                                      const Efficiency& eff, const PipelineOptions& opt) {
  return sign_probabilities(measured_state(alpha, settings, eff, opt), opt.quadrature,
                            opt.policy);
}

double lossy_correlation(double alpha, const SettingPair& settings, const Efficiency& eff,
                         const PipelineOptions& opt) {
  return lossy_probabilities(alpha, settings, eff, opt).correlation();
}

}  // namespace ecs
