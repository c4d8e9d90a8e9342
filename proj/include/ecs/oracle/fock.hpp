#pragma once

#include <Eigen/Dense>

#include "ecs/homodyne.hpp"
#include "ecs/loss_channel.hpp"

namespace ecs::oracle {

inline constexpr double kMaxFockAlpha = 3.0;
inline constexpr double kTailBudget = 1e-10;

// Smallest accepted truncation for amplitude alpha: ceil((sqrt(2) alpha + 6)^2).
int default_nmax(double alpha);

struct FockVector {
  Eigen::VectorXcd amps;  // n = 0..nmax
  int nmax() const { return static_cast<int>(amps.size()) - 1; }
  // Mass in the top `band` levels.
  double tail_mass(int band = 5) const;
};

// Number basis {0..nmax} for x = (a + a^dagger)/sqrt(2).
class FockSpace {
 public:
  explicit FockSpace(int nmax);

  int nmax() const { return nmax_; }
  int dim() const { return nmax_ + 1; }

  FockVector coherent(cplx beta) const;
  Eigen::MatrixXcd displacement(cplx mu) const;
  Eigen::VectorXcd kerr_phases() const;
  Eigen::MatrixXcd rotation(const MeasurementSetting& s, double alpha) const;
  Eigen::VectorXd hermite_functions(double x) const;
  // <n| Theta(+-x) |m>
  const Eigen::MatrixXd& half_line(HalfLine side) const;
  // Heisenberg-picture image of a real effect under the loss channel.
  Eigen::MatrixXd loss_effect(const Eigen::MatrixXd& effect, double eta) const;

 private:
  int nmax_;
  Eigen::MatrixXd pos_, neg_;
};

struct FockOptions {
  AzimuthConvention convention = AzimuthConvention::MirroredBob;
  int nmax = 0;  // 0: default_nmax(alpha)
};

// Two-mode amplitude matrix psi(n, m) after both rotations.
Eigen::MatrixXcd fock_state(double alpha, const SettingPair& settings, const FockSpace& space,
                            AzimuthConvention conv);

SignProbabilities fock_pipeline(double alpha, const SettingPair& settings,
                                const Efficiency& eff, const FockOptions& opt = {});

// <psi| D(mu_a) (x) D(mu_b) |psi> for the rotated entangled state.
cplx fock_chi(double alpha, const SettingPair& settings, cplx mu_a, cplx mu_b,
              const FockOptions& opt = {});

// Evaluations of engine dyad sums in the number basis.
LogAmp dyad_trace_fock(const CoherentDyadSum& state, const FockSpace& space);
double dyad_quadrature_mean_fock(const CoherentDyadSum& state, Mode mode,
                                 const FockSpace& space);
SignProbabilities dyad_sign_probabilities_fock(const CoherentDyadSum& state,
                                               const FockSpace& space);

// |<x|psi>|^2 for a single-mode vector.
double quadrature_pdf(const FockVector& v, const FockSpace& space, double x);

}  // namespace ecs::oracle
