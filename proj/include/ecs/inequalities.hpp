#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ecs/loss_channel.hpp"

namespace ecs {

enum class InequalityKind { L, LS, BELL };

std::string to_string(InequalityKind k);
InequalityKind parse_kind(const std::string& s);

struct SettingsCatalogL {
  std::array<MeasurementSetting, 3> a;
  std::array<MeasurementSetting, 7> b;
  double phi = 0.0;
};

struct SettingsCatalogLS {
  std::array<MeasurementSetting, 3> a;
  std::array<MeasurementSetting, 3> bplus, bminus;
  double phi = 0.0;
};

SettingsCatalogL catalog_L(double phi);
SettingsCatalogLS catalog_LS(double phi);

double bound_L(double phi);
double bound_LS(double phi);
inline constexpr double kBellBound = 2.0;

struct ViolationReport {
  InequalityKind kind = InequalityKind::L;
  double value = 0.0;
  double bound = 0.0;
  double violation = 0.0;
  double alpha = 0.0;
  double phi = 0.0;
  double eta = 1.0;
  std::vector<SettingPair> settings;  // one entry per correlation used
};

ViolationReport leggett_L(double alpha, double phi, double eta = 1.0,
                          const PipelineOptions& opt = {});
ViolationReport leggett_LS(double alpha, double phi, double eta = 1.0,
                           const PipelineOptions& opt = {});

// settings = {a1, a2, b1, b2}
ViolationReport bell_chsh(double alpha, const std::array<MeasurementSetting, 4>& settings,
                          double eta = 1.0, const PipelineOptions& opt = {});

struct OptimizeOptions {
  std::uint64_t seed = 20240601;
  int restarts = 12;
  double phi_step = 0.01;
  double phi_tol = 1e-4;
  PipelineOptions pipeline{};
};

struct OptimizeResult {
  double best_phi = 0.0;                          // L and LS
  std::array<MeasurementSetting, 4> best_bell{};  // BELL
  bool boundary_maximum = false;
  int evaluations = 0;
  ViolationReport report;
};

OptimizeResult optimize_settings(InequalityKind kind, double alpha, double eta = 1.0,
                                 const OptimizeOptions& opt = {});

ViolationReport evaluate(InequalityKind kind, double alpha, double phi, double eta,
                         const PipelineOptions& opt = {});

}  // namespace ecs
