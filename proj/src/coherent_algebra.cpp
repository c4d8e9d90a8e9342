#include "ecs/coherent_algebra.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace ecs {
namespace {

void check_label(cplx z, double cap) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw NumericalError("non-finite coherent label");
  }
  if (std::abs(z) > cap) {
    throw NumericalError("coherent label magnitude " +
                         std::to_string(std::abs(z)) + " exceeds cap " +
                         std::to_string(cap));
  }
}

using Key = std::array<long long, 8>;

// Labels snapped to cells of width tol; nearby labels become adjacent in the
// sorted order.
Key key(const DyadTerm& t, double tol) {
  const double cell = tol > 0.0 ? tol : 1e-300;
  auto q = [cell](double x) { return std::llround(x / cell); };
  return {q(t.ket_a.real()), q(t.ket_a.imag()), q(t.bra_a.real()), q(t.bra_a.imag()),
          q(t.ket_b.real()), q(t.ket_b.imag()), q(t.bra_b.real()), q(t.bra_b.imag())};
}

bool same_labels(const DyadTerm& x, const DyadTerm& y, double tol) {
  return std::abs(x.ket_a - y.ket_a) <= tol && std::abs(x.bra_a - y.bra_a) <= tol &&
         std::abs(x.ket_b - y.ket_b) <= tol && std::abs(x.bra_b - y.bra_b) <= tol;
}

// Groups of term indices with matching labels, ordered by first occurrence.
std::vector<std::vector<std::size_t>> label_groups(const std::vector<DyadTerm>& terms,
                                                   double tol) {
  const std::size_t n = terms.size();
  std::vector<Key> keys(n);
  for (std::size_t i = 0; i < n; ++i) keys[i] = key(terms[i], tol);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return keys[x] < keys[y]; });

  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t p = 0; p < n; ++p) {
    const std::size_t i = order[p];
    if (!groups.empty() && same_labels(terms[groups.back().front()], terms[i], tol)) {
      groups.back().push_back(i);
    } else {
      groups.push_back({i});
    }
  }
  for (auto& g : groups) std::sort(g.begin(), g.end());
  std::sort(groups.begin(), groups.end(),
            [](const auto& x, const auto& y) { return x.front() < y.front(); });
  return groups;
}

}  // namespace

LogAmp overlap(cplx b, cplx g) {
  if (!std::isfinite(b.real()) || !std::isfinite(b.imag()) ||
      !std::isfinite(g.real()) || !std::isfinite(g.imag())) {
    throw ValidationError("overlap requires finite labels");
  }
  return LogAmp::from_log(-0.5 * std::norm(b - g), std::imag(std::conj(g) * b));
}

CoherentDyadSum make_ecs(const ECSParams& params) {
  const double a = params.alpha;
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw ValidationError("ECS amplitude must be positive and finite");
  }
  CoherentDyadSum s;
  s.log_scale = -std::log(2.0) - std::log1p(std::exp(-4.0 * a * a));
  for (double k : {a, -a}) {
    for (double g : {a, -a}) {
      s.terms.push_back({LogAmp::one(), k, g, k, g});
    }
  }
  return s;
}

CoherentDyadSum displace(const CoherentDyadSum& state, Mode mode, cplx mu,
                         double label_cap) {
  if (!std::isfinite(mu.real()) || !std::isfinite(mu.imag())) {
    throw ValidationError("displacement must be finite");
  }
  CoherentDyadSum out = state;
  for (auto& t : out.terms) {
    cplx& k = t.ket(mode);
    cplx& b = t.bra(mode);
    const double ph = std::imag(mu * std::conj(k)) - std::imag(mu * std::conj(b));
    t.coeff = t.coeff * LogAmp::from_log(0.0, ph);
    k += mu;
    b += mu;
    check_label(k, label_cap);
    check_label(b, label_cap);
  }
  return out;
}

CoherentDyadSum kerr_split(const CoherentDyadSum& state, Mode mode) {
  constexpr double q = std::numbers::pi / 4.0;
  const double half = -std::log(2.0);
  // (ket flipped, bra flipped) -> phase
  const std::array<std::pair<std::array<bool, 2>, double>, 4> parts{{
      {{false, false}, 0.0},
      {{false, true}, -2.0 * q},
      {{true, false}, 2.0 * q},
      {{true, true}, 0.0},
  }};
  CoherentDyadSum out;
  out.log_scale = state.log_scale;
  out.terms.reserve(4 * state.terms.size());
  for (const auto& t : state.terms) {
    for (const auto& [flips, ph] : parts) {
      DyadTerm n = t;
      if (flips[0]) n.ket(mode) = -n.ket(mode);
      if (flips[1]) n.bra(mode) = -n.bra(mode);
      n.coeff = t.coeff * LogAmp::from_log(half, ph);
      out.terms.push_back(n);
    }
  }
  return out;
}

CoherentDyadSum merge_terms(const CoherentDyadSum& state, double tol) {
  CoherentDyadSum out;
  out.log_scale = state.log_scale;
  for (const auto& g : label_groups(state.terms, tol)) {
    DyadTerm t = state.terms[g.front()];
    double top = t.coeff.log_mag;
    for (std::size_t k = 1; k < g.size(); ++k) {
      t.coeff = t.coeff + state.terms[g[k]].coeff;
      top = std::max(top, state.terms[g[k]].coeff.log_mag);
    }
    if (t.coeff.is_zero() || t.coeff.log_mag < top + kLogCancellation) continue;
    out.terms.push_back(t);
  }
  return out;
}

CoherentDyadSum prune(const CoherentDyadSum& state, double tol) {
  if (!(tol >= 0.0)) throw ValidationError("prune tolerance must be >= 0");
  CoherentDyadSum merged = merge_terms(state);
  if (tol == 0.0) return merged;
  const double cut = std::log(tol);
  CoherentDyadSum out;
  out.log_scale = merged.log_scale;
  for (const auto& t : merged.terms) {
    const double da = t.ket_a.real() - t.bra_a.real();
    const double db = t.ket_b.real() - t.bra_b.real();
    const double bound = t.coeff.log_mag + merged.log_scale - 0.5 * (da * da + db * db);
    if (bound >= cut) out.terms.push_back(t);
  }
  return out;
}

LogAmp trace(const CoherentDyadSum& state) {
  LogAmp s;
  for (const auto& t : state.terms) {
    s = s + t.coeff * overlap(t.ket_a, t.bra_a) * overlap(t.ket_b, t.bra_b);
  }
  return s * LogAmp::from_log(state.log_scale, 0.0);
}

CoherentDyadSum normalize(const CoherentDyadSum& state) {
  const LogAmp tr = trace(state);
  if (tr.is_zero() || !std::isfinite(tr.log_mag) || std::abs(tr.phase) > 1e-8) {
    throw NumericalError("cannot normalize: trace is not a positive real number");
  }
  CoherentDyadSum out = state;
  out.log_scale -= tr.log_mag;
  return out;
}

CoherentDyadSum adjoint(const CoherentDyadSum& state) {
  CoherentDyadSum out = state;
  for (auto& t : out.terms) {
    t.coeff = t.coeff.conj();
    std::swap(t.ket_a, t.bra_a);
    std::swap(t.ket_b, t.bra_b);
  }
  return out;
}

double hermiticity_defect(const CoherentDyadSum& state) {
  const CoherentDyadSum x = merge_terms(state);
  const CoherentDyadSum y = merge_terms(adjoint(state));
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& t : x.terms) top = std::max(top, t.coeff.log_mag);
  if (!std::isfinite(top)) return 0.0;
  std::vector<bool> used(y.terms.size(), false);
  double worst = 0.0;
  for (const auto& t : x.terms) {
    LogAmp partner;
    for (std::size_t j = 0; j < y.terms.size(); ++j) {
      if (!used[j] && same_labels(t, y.terms[j], kLabelMergeTol)) {
        used[j] = true;
        partner = y.terms[j].coeff;
        break;
      }
    }
    worst = std::max(worst, std::abs((t.coeff - partner).scaled(-top)));
  }
  for (std::size_t j = 0; j < y.terms.size(); ++j) {
    if (!used[j]) worst = std::max(worst, std::abs(y.terms[j].coeff.scaled(-top)));
  }
  return worst;
}

double quadrature_mean(const CoherentDyadSum& state, Mode mode, double scale) {
  cplx num = 0.0;
  cplx den = 0.0;
  const Mode other = mode == Mode::A ? Mode::B : Mode::A;
  for (const auto& t : state.terms) {
    const LogAmp w = t.coeff * overlap(t.ket(mode), t.bra(mode)) *
                     overlap(t.ket(other), t.bra(other));
    const cplx v = w.scaled(state.log_scale);
    num += v * scale * (t.ket(mode) + std::conj(t.bra(mode)));
    den += v;
  }
  if (std::abs(den) == 0.0) throw NumericalError("state has zero trace");
  return (num / den).real();
}

}  // namespace ecs
