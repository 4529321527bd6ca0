// Copyright 2026 The zigzag Authors
// SPDX-License-Identifier: Apache-2.0

#include "zigzag/hamiltonian.hpp"

#include <stdexcept>

namespace zigzag {

namespace {

void check_sector(const ModelParams& p, const BasisSector& sector) {
  p.validate();
  if (sector.sites() != p.L || sector.particles() != p.N)
    throw ConfigError("sector (L=" + std::to_string(sector.sites()) + ", N=" + std::to_string(sector.particles()) +
                      ") does not match parameters (L=" + std::to_string(p.L) + ", N=" + std::to_string(p.N) + ")");
}

Config bits_below(int site) noexcept { return site == 0 ? 0u : (~Config{0} >> (32 - site)); }

// The term table is closed under h.c., so row r is H(r,c) = conj(<c|H|r>)
// and a pass over the hops out of each state fills the rows in order.
template <class SignFn>
SparseOperator assemble(const TermTable& terms, const BasisSector& sector, SignFn sign) {
  SparseOperator::Builder builder(sector.dim());
  std::vector<SparseOperator::Entry> row;
  for (StateIndex r = 0; r < sector.dim(); ++r) {
    const Config s = sector[r];
    row.clear();
    for (const auto& h : terms.hops) {
      if (!h.acts_on(s)) continue;
      const Config t = s ^ h.need_mask() ^ (Config{1} << h.dst);
      const StateIndex c = sector.rank_unchecked(t);
      row.push_back({c, std::conj(h.amp) * static_cast<double>(sign(s, h))});
    }
    builder.push_row(terms.diagonal(s), row);
  }
  return builder.finish();
}

}  // namespace

int fermion_hop_sign(Config c, int src, int dst, bool with_strings) noexcept {
  // c_src picks up (-1)^{occupied below src}
  int n = std::popcount(c & bits_below(src));
  const Config mid = c & ~(Config{1} << src);
  n += std::popcount(mid & bits_below(dst));
  if (with_strings) {
    const int lo = std::min(src, dst);
    const int hi = std::max(src, dst);
    n += std::popcount(mid & bits_below(hi) & ~bits_below(lo + 1));
  }
  return (n % 2 == 0) ? 1 : -1;
}

SparseOperator build_operator(const TermTable& terms, const BasisSector& sector) {
  if (terms.L != sector.sites()) throw ConfigError("term table and sector disagree on L");
  return assemble(terms, sector, [](Config, const HopTerm&) { return 1; });
}

SparseOperator build_boson(const ModelParams& p, const BasisSector& sector, int max_range) {
  check_sector(p, sector);
  return build_operator(build_terms(p, max_range), sector);
}

SparseOperator build_fermion_jw(const ModelParams& p, const BasisSector& sector, bool with_strings) {
  check_sector(p, sector);
  if (p.periodic())
    throw UnsupportedBoundary("Jordan-Wigner build is only defined for open boundaries");
  return assemble(build_terms(p), sector, [with_strings](Config s, const HopTerm& h) {
    return fermion_hop_sign(s, h.src, h.dst, with_strings);
  });
}

}  // namespace zigzag
