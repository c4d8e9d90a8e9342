#include "ecs/homodyne.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ecs/faddeeva.hpp"
#include "homodyne_kernels.hpp"

namespace ecs {
namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

LogAmp half_line_integral(cplx b, cplx c, cplx full_log, HalfLine side) {
  if (!finite(b) || !finite(c) || !finite(full_log)) {
    throw ValidationError("half_line_integral requires finite arguments");
  }
  const cplx i(0.0, 1.0);
  const LogAmp full = LogAmp::exp_of(full_log);
  // The side away from the Gaussian centre Re(b)/2 is evaluated directly from
  // the scaled complementary error function; the other side by subtraction.
  const bool tail_is_negative = b.real() >= 0.0;
  const cplx w = faddeeva_w(tail_is_negative ? i * b / 2.0 : -i * b / 2.0);
  const LogAmp tail = LogAmp::exp_of(c) * LogAmp::from_complex(0.5 * w);
  const bool want_tail = (side == HalfLine::Negative) == tail_is_negative;
  return want_tail ? tail : full - tail;
}

LogAmp half_line_integral(cplx b, cplx c, HalfLine side) {
  return half_line_integral(b, c, c + b * b / 4.0, side);
}

SignProbabilities sign_probabilities(const CoherentDyadSum& state,
                                     const QuadratureConvention& conv,
                                     ExecutionPolicy policy) {
  if (!(conv.scale > 0.0) || !std::isfinite(conv.scale)) {
    throw ValidationError("quadrature scale must be positive");
  }
  const detail::BinTables tab = detail::build_tables(state, conv.scale);

  double shift = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < state.terms.size(); ++i) {
    shift = std::max(shift, state.terms[i].coeff.log_mag + tab.a[tab.a_index[i]].peak +
                                tab.b[tab.b_index[i]].peak);
  }
  if (!std::isfinite(shift)) throw NumericalError("state has no finite terms");

  std::vector<detail::Contribution> parts;
  if (policy == ExecutionPolicy::Parallel) {
    detail::term_contributions_parallel(state, tab, shift, parts);
  } else {
    detail::term_contributions_serial(state, tab, shift, parts);
  }
  detail::Contribution acc{};
  for (const auto& p : parts) {
    for (int k = 0; k < 4; ++k) acc[k] += p[k];
  }
  const double f = std::exp(shift + state.log_scale);
  SignProbabilities out{(acc[0] * f).real(), (acc[1] * f).real(),
                        (acc[2] * f).real(), (acc[3] * f).real()};
  if (!std::isfinite(out.sum())) {
    throw NumericalError("non-finite sign probability accumulation");
  }
  // The four bins of each term add up to its trace contribution.
  if (std::abs(out.sum() - 1.0) > kTraceTolerance) {
    throw ValidationError("sign_probabilities requires a unit-trace state (trace " +
                          std::to_string(out.sum()) + ")");
  }
  return out;
}

double correlation(const CoherentDyadSum& state, const QuadratureConvention& conv,
                   ExecutionPolicy policy) {
  return sign_probabilities(state, conv, policy).correlation();
}

}  // namespace ecs
