#pragma once

#include <cstdint>
#include <vector>

#include "ecs/homodyne.hpp"
#include "ecs/loss_channel.hpp"

namespace ecs::oracle {

inline constexpr double kFockAgreement = 1e-6;
inline constexpr double kWignerAgreement = 1e-4;
inline constexpr double kClosedFormAgreement = 1e-6;

struct RegressionCase {
  double alpha;
  SettingPair settings;
  double eta;
};

struct CaseResult {
  RegressionCase input;
  SignProbabilities engine, fock, wigner;
  double fock_diff = 0.0;    // max abs difference over the four bins
  double wigner_diff = 0.0;  // NaN when not evaluated
};

struct ClosedFormCase {
  double alpha;
  SettingPair settings;
  double engine, closed_form, diff;
};

struct RegressionReport {
  std::vector<CaseResult> cases;
  std::vector<ClosedFormCase> closed_form;
  double max_fock_diff = 0.0;
  double max_wigner_diff = 0.0;
  double max_closed_form_diff = 0.0;
  bool passed() const;
};

struct RegressionOptions {
  std::uint64_t seed = 7;
  int pairs = 20;
  bool wigner = true;
  int closed_form_pairs = 10;
};

// alpha in {0.8, 1.5} x random setting pairs x eta in {1, 0.6}.
std::vector<RegressionCase> regression_cases(std::uint64_t seed, int pairs);

RegressionReport run_regression(const RegressionOptions& opt = {});

}  // namespace ecs::oracle
