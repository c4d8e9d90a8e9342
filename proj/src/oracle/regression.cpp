#include "ecs/oracle/regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "ecs/oracle/fock.hpp"
#include "ecs/oracle/wigner.hpp"

namespace ecs::oracle {
namespace {

double max_diff(const SignProbabilities& x, const SignProbabilities& y) {
  return std::max({std::abs(x.pp - y.pp), std::abs(x.pm - y.pm), std::abs(x.mp - y.mp),
                   std::abs(x.mm - y.mm)});
}

SettingPair random_pair(std::mt19937_64& rng, double theta_max, double phi_lo, double phi_hi) {
  std::uniform_real_distribution<double> t(0.0, theta_max);
  std::uniform_real_distribution<double> p(phi_lo, phi_hi);
  SettingPair s;
  s.a = {t(rng), p(rng)};
  s.b = {t(rng), p(rng)};
  return s;
}

}  // namespace

bool RegressionReport::passed() const {
  return max_fock_diff <= kFockAgreement &&
         !(max_wigner_diff > kWignerAgreement) &&
         max_closed_form_diff <= kClosedFormAgreement;
}

std::vector<RegressionCase> regression_cases(std::uint64_t seed, int pairs) {
  std::mt19937_64 rng(seed);
  std::vector<SettingPair> settings;
  for (int i = 0; i < pairs; ++i) {
    settings.push_back(random_pair(rng, std::numbers::pi, -std::numbers::pi, std::numbers::pi));
  }
  std::vector<RegressionCase> out;
  for (double alpha : {0.8, 1.5})
    for (const auto& s : settings)
      for (double eta : {1.0, 0.6}) out.push_back({alpha, s, eta});
  return out;
}

RegressionReport run_regression(const RegressionOptions& opt) {
  RegressionReport rep;
  PipelineOptions popt;
  popt.policy = ExecutionPolicy::Serial;
  for (const auto& c : regression_cases(opt.seed, opt.pairs)) {
    CaseResult r;
    r.input = c;
    const Efficiency eff(c.eta);
    r.engine = lossy_probabilities(c.alpha, c.settings, eff, popt);
    r.fock = fock_pipeline(c.alpha, c.settings, eff);
    r.fock_diff = max_diff(r.engine, r.fock);
    rep.max_fock_diff = std::max(rep.max_fock_diff, r.fock_diff);
    if (opt.wigner) {
      r.wigner = wigner_marginal(c.alpha, c.settings, eff);
      r.wigner_diff = max_diff(r.engine, r.wigner);
      rep.max_wigner_diff = std::max(rep.max_wigner_diff, r.wigner_diff);
    } else {
      r.wigner_diff = std::numeric_limits<double>::quiet_NaN();
    }
    rep.cases.push_back(r);
  }
  std::mt19937_64 rng(opt.seed ^ 0x9e3779b97f4a7c15ULL);
  for (double alpha : {2.0, 5.0, 10.0}) {
    for (int i = 0; i < opt.closed_form_pairs; ++i) {
      const SettingPair s =
          random_pair(rng, std::numbers::pi / 2, 0.0, std::numbers::pi / 2);
      ClosedFormCase cf{alpha, s, 0.0, 0.0, 0.0};
      cf.engine = lossy_correlation(alpha, s, Efficiency{1.0}, popt);
      cf.closed_form = correlation_closed_form(alpha, s);
      cf.diff = std::abs(cf.engine - cf.closed_form);
      rep.max_closed_form_diff = std::max(rep.max_closed_form_diff, cf.diff);
      rep.closed_form.push_back(cf);
    }
  }
  return rep;
}

}  // namespace ecs::oracle
