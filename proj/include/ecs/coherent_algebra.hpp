#pragma once

#include <cstddef>
#include <vector>

#include "ecs/errors.hpp"
#include "ecs/log_amp.hpp"

namespace ecs {

enum class Mode { A, B };

inline constexpr double kDefaultLabelCap = 1e3;
inline constexpr double kLabelMergeTol = 1e-12;
// Merged coefficients below 1e-14 of their largest summand count as cancelled.
inline constexpr double kLogCancellation = -32.236;
inline constexpr double kDefaultPruneTol = 1e-30;

// coeff * |ket_a><bra_a| (x) |ket_b><bra_b|
struct DyadTerm {
  LogAmp coeff;
  cplx ket_a, bra_a, ket_b, bra_b;

  cplx& ket(Mode m) { return m == Mode::A ? ket_a : ket_b; }
  cplx& bra(Mode m) { return m == Mode::A ? bra_a : bra_b; }
  const cplx& ket(Mode m) const { return m == Mode::A ? ket_a : ket_b; }
  const cplx& bra(Mode m) const { return m == Mode::A ? bra_a : bra_b; }
};

// exp(log_scale) * sum(terms)
struct CoherentDyadSum {
  std::vector<DyadTerm> terms;
  double log_scale = 0.0;

  std::size_t size() const { return terms.size(); }
};

struct ECSParams {
  double alpha = 1.0;
};

// <g|b> in log form.
LogAmp overlap(cplx b, cplx g);

CoherentDyadSum make_ecs(const ECSParams& params);

CoherentDyadSum displace(const CoherentDyadSum& state, Mode mode, cplx mu,
                         double label_cap = kDefaultLabelCap);

// exp(-i pi n^2 / 2) on one mode, both sides.
CoherentDyadSum kerr_split(const CoherentDyadSum& state, Mode mode);

// Adds coefficients of terms whose four labels agree within tol.
CoherentDyadSum merge_terms(const CoherentDyadSum& state,
                            double tol = kLabelMergeTol);

// Merges, then drops terms whose largest possible contribution to any
// sign-binned probability is below tol. Only meaningful right before
// measurement: later unitaries can amplify dropped terms.
CoherentDyadSum prune(const CoherentDyadSum& state,
                      double tol = kDefaultPruneTol);

LogAmp trace(const CoherentDyadSum& state);

CoherentDyadSum normalize(const CoherentDyadSum& state);

CoherentDyadSum adjoint(const CoherentDyadSum& state);

// max |c_i - c'_i| / max|c| after matching state against its adjoint, where c'
// are the merged coefficients of the adjoint. Zero for Hermitian operators.
double hermiticity_defect(const CoherentDyadSum& state);

// Single-mode quadrature mean <s(a + a^dagger)> of a unit-trace state.
double quadrature_mean(const CoherentDyadSum& state, Mode mode,
                       double scale = 0.70710678118654752440);

}  // namespace ecs
