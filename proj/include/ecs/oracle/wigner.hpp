#pragma once

#include <vector>

#include "ecs/homodyne.hpp"
#include "ecs/loss_channel.hpp"

namespace ecs::oracle {

inline constexpr double kMaxWignerAlpha = 2.0;
inline constexpr double kWignerNormTolerance = 1e-4;

struct WignerGridSpec {
  int points = 512;     // per axis, multiple of 4
  double extent = 0.0;  // half-width; 0 selects sqrt(2) alpha + 6
};

// Row-major samples on [-extent, extent)^2 with spacing step.
struct WignerGrid {
  std::vector<double> values;
  int points = 0;
  double extent = 0.0;
  double step = 0.0;

  double at(int i, int j) const { return values[static_cast<std::size_t>(i) * points + j]; }
  double integral() const;
};

// Tr[rho D(mu_a) (x) D(mu_b)] for the rotated entangled state, from coherent
// matrix elements of the four-term rotation images.
cplx weyl_chi(double alpha, const SettingPair& settings, cplx mu_a, cplx mu_b,
              AzimuthConvention conv = AzimuthConvention::MirroredBob);

// Characteristic function -> Wigner function by FFT, vacuum-ancilla loss
// convolution, marginalisation over the conjugate quadratures, sign binning.
SignProbabilities wigner_marginal(double alpha, const SettingPair& settings,
                                  const Efficiency& eff, const WignerGridSpec& spec = {},
                                  AzimuthConvention conv = AzimuthConvention::MirroredBob);

// Joint lossy density of (x_A, x_B) on the grid.
WignerGrid joint_marginal_grid(double alpha, const SettingPair& settings, const Efficiency& eff,
                               const WignerGridSpec& spec = {},
                               AzimuthConvention conv = AzimuthConvention::MirroredBob);

// Single-mode Wigner function of the dyad |ket><bra| on the grid, row index
// along x and column index along p. Complex unless ket == bra.
std::vector<cplx> dyad_wigner(cplx ket, cplx bra, int points, double extent);

}  // namespace ecs::oracle
