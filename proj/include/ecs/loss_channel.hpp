#pragma once

#include "ecs/coherent_algebra.hpp"
#include "ecs/homodyne.hpp"
#include "ecs/rotations.hpp"

namespace ecs {

// Detector efficiency, modelled as a beam splitter of transmittivity eta with
// a vacuum ancilla.
class Efficiency {
 public:
  Efficiency() = default;
  explicit Efficiency(double eta);
  double eta() const { return eta_; }

 private:
  double eta_ = 1.0;
};

CoherentDyadSum apply_loss(const CoherentDyadSum& state, Mode mode, const Efficiency& eff);

struct PipelineOptions {
  AzimuthConvention convention = AzimuthConvention::MirroredBob;
  ExecutionPolicy policy = ExecutionPolicy::Parallel;
  QuadratureConvention quadrature{};
  double prune_tol = kDefaultPruneTol;
};

// Entangled state, local rotations on both modes, loss on both modes,
// pruning, and state right before homodyne binning.
CoherentDyadSum measured_state(double alpha, const SettingPair& settings,
                               const Efficiency& eff, const PipelineOptions& opt = {});

SignProbabilities lossy_probabilities(double alpha, const SettingPair& settings,
                                      const Efficiency& eff,
                                      const PipelineOptions& opt = {});

double lossy_correlation(double alpha, const SettingPair& settings, const Efficiency& eff,
                         const PipelineOptions& opt = {});

}  // namespace ecs
