#pragma once

#include "ecs/coherent_algebra.hpp"
#include "ecs/rotations.hpp"

namespace ecs {

inline constexpr double kDefaultQuadratureScale = 0.70710678118654752440;
inline constexpr double kTraceTolerance = 1e-8;

// x = scale * (a + a^dagger)
struct QuadratureConvention {
  double scale = kDefaultQuadratureScale;
};

enum class HalfLine { Positive, Negative };

enum class ExecutionPolicy { Serial, Parallel };

// Integral of pi^{-1/2} exp(-x^2 + b x + c) over x >= 0 or x <= 0.
LogAmp half_line_integral(cplx b, cplx c, HalfLine side);

// Same, with the full-line value log(integral) = c + b^2/4 supplied in a
// numerically better form by the caller.
LogAmp half_line_integral(cplx b, cplx c, cplx full_log, HalfLine side);

struct SignProbabilities {
  double pp = 0.0, pm = 0.0, mp = 0.0, mm = 0.0;

  double sum() const { return pp + pm + mp + mm; }
  double correlation() const { return pp + mm - pm - mp; }
};

SignProbabilities sign_probabilities(const CoherentDyadSum& state,
                                     const QuadratureConvention& conv = {},
                                     ExecutionPolicy policy = ExecutionPolicy::Parallel);

double correlation(const CoherentDyadSum& state,
                   const QuadratureConvention& conv = {},
                   ExecutionPolicy policy = ExecutionPolicy::Parallel);

// Closed-form correlation of the rotated entangled state after homodyne sign
// binning, evaluated in log-domain. Used to cross-check the dyad engine.
double correlation_closed_form(double alpha, const SettingPair& settings,
                               AzimuthConvention conv = AzimuthConvention::MirroredBob);

}  // namespace ecs
