#pragma once

#include <array>
#include <vector>

#include "ecs/homodyne.hpp"

namespace ecs::detail {

// Positive and negative half-line integrals for one (ket, bra) label pair,
// stored as exp(peak) * (pos, neg).
struct PairIntegrals {
  double peak;
  cplx pos, neg;
};

struct BinTables {
  std::vector<PairIntegrals> a, b;
  std::vector<std::size_t> a_index, b_index;  // per term
};

BinTables build_tables(const CoherentDyadSum& state, double scale);

// Per-term contributions to (pp, pm, mp, mm), scaled by exp(-shift).
using Contribution = std::array<cplx, 4>;

void term_contributions_serial(const CoherentDyadSum& state, const BinTables& tab,
                               double shift, std::vector<Contribution>& out);
void term_contributions_parallel(const CoherentDyadSum& state, const BinTables& tab,
                                 double shift, std::vector<Contribution>& out);

}  // namespace ecs::detail
