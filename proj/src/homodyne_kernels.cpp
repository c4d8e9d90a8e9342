#include "homodyne_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace ecs::detail {
namespace {

using LabelPair = std::array<double, 4>;

PairIntegrals pair_integrals(cplx ket, cplx bra, double scale) {
  // Density of |ket><bra| at x is (2 pi s^2)^{-1/2} exp(-x^2/(2 s^2) + b' x + c);
  // substituting x = t / sqrt(a) with a = 1/(2 s^2) gives the unit kernel.
  const double a = 1.0 / (2.0 * scale * scale);
  const cplx b = (ket + std::conj(bra)) / scale / std::sqrt(a);
  const cplx c = -0.5 * (ket * ket + std::conj(bra) * std::conj(bra)) -
                 0.5 * (std::norm(ket) + std::norm(bra));
  const LogAmp full = overlap(ket, bra);
  const cplx full_log(full.log_mag, full.phase);
  const LogAmp pos = half_line_integral(b, c, full_log, HalfLine::Positive);
  const LogAmp neg = half_line_integral(b, c, full_log, HalfLine::Negative);
  double peak = std::max(pos.log_mag, neg.log_mag);
  if (!std::isfinite(peak)) peak = 0.0;
  return {peak, pos.scaled(-peak), neg.scaled(-peak)};
}

void index_mode(const CoherentDyadSum& state, Mode mode, double scale,
                std::vector<PairIntegrals>& table, std::vector<std::size_t>& index) {
  std::map<LabelPair, std::size_t> seen;
  index.resize(state.terms.size());
  for (std::size_t i = 0; i < state.terms.size(); ++i) {
    const cplx k = state.terms[i].ket(mode);
    const cplx b = state.terms[i].bra(mode);
    const LabelPair key{k.real(), k.imag(), b.real(), b.imag()};
    auto [it, inserted] = seen.try_emplace(key, table.size());
    if (inserted) table.push_back(pair_integrals(k, b, scale));
    index[i] = it->second;
  }
}

inline Contribution one_term(const DyadTerm& t, const PairIntegrals& a,
                             const PairIntegrals& b, double shift) {
  const cplx w = t.coeff.scaled(a.peak + b.peak - shift);
  const cplx wa = w * a.pos;
  const cplx wn = w * a.neg;
  return {wa * b.pos, wa * b.neg, wn * b.pos, wn * b.neg};
}

}  // namespace

BinTables build_tables(const CoherentDyadSum& state, double scale) {
  BinTables tab;
  index_mode(state, Mode::A, scale, tab.a, tab.a_index);
  index_mode(state, Mode::B, scale, tab.b, tab.b_index);
  return tab;
}

void term_contributions_serial(const CoherentDyadSum& state, const BinTables& tab,
                               double shift, std::vector<Contribution>& out) {
  const std::size_t n = state.terms.size();
  out.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = one_term(state.terms[i], tab.a[tab.a_index[i]], tab.b[tab.b_index[i]], shift);
  }
}

void term_contributions_parallel(const CoherentDyadSum& state, const BinTables& tab,
                                 double shift, std::vector<Contribution>& out) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(state.terms.size());
  out.resize(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out[k] = one_term(state.terms[k], tab.a[tab.a_index[k]], tab.b[tab.b_index[k]], shift);
  }
}

}  // namespace ecs::detail
