#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qgraph/bond_system.hpp"

namespace qgraph {

inline constexpr std::size_t kDefaultOrbitCap = 1'000'000;

/// Periodic orbit on the bond digraph, each bond at most once, rotated so that
/// the lowest bond index comes first.
struct Cycle {
  std::vector<int> bonds;

  friend bool operator==(const Cycle&, const Cycle&) = default;
};

/// Irreducible pseudo-orbit: pairwise bond-disjoint cycles. The amplitude is
/// kept symbolically as the list of S(k) entries to multiply, since S depends on k.
struct PseudoOrbitTerm {
  int orbit_count = 0;
  std::vector<Cycle> cycles;
  std::vector<int> bonds;        ///< sorted bond indices used by the term
  std::vector<int> edge_counts;  ///< per edge: how many of its two bonds appear (0..2)
  std::vector<std::pair<int, int>> transitions;  ///< (row, col) entries of S

  /// sum_j edge_counts_j * values_j; gives l, l-dot or l-ddot of the term.
  template <class T>
  T length(std::span<const T> edge_values) const {
    T sum{};
    for (std::size_t j = 0; j < edge_counts.size(); ++j) sum += static_cast<double>(edge_counts[j]) * edge_values[j];
    return sum;
  }

  Complex amplitude(const CMatrix& s) const;
  int sign() const { return orbit_count % 2 == 0 ? 1 : -1; }
};

/// A_gamma = S_{b2 b1} S_{b3 b2} ... S_{b1 bn}.
Complex cycle_amplitude(const Cycle& c, const CMatrix& s);

/// All simple cycles of the bond digraph (Johnson's algorithm), each in
/// canonical rotation, sorted by length then lexicographically.
/// Throws OrbitExplosion past `cap` cycles.
std::vector<Cycle> enumerate_simple_cycles(const BondSystem& bs, std::size_t cap = kDefaultOrbitCap);

/// Every collection of pairwise bond-disjoint cycles, the empty one first.
/// Throws OrbitExplosion past `cap` terms or beyond 64 bonds.
std::vector<PseudoOrbitTerm> enumerate_irreducible_pseudo_orbits(const BondSystem& bs, std::span<const Cycle> cycles,
                                                                 std::size_t cap = kDefaultOrbitCap);

/// sum over terms of (-1)^m A(k) exp(i k l_term).
Complex secular_po(const BondSystem& bs, std::span<const EffectiveSigma> sigmas, std::span<const PseudoOrbitTerm> terms,
                   std::span<const double> lengths, Complex k);

/// Same sum for a precomputed S(k).
Complex pseudo_orbit_sum(const CMatrix& s, std::span<const PseudoOrbitTerm> terms, std::span<const double> lengths, Complex k);

/// `m=<int> bonds=(b1,b1^)(b2,b2^) length=2*l1+2*l2`
std::string describe_term(const BondSystem& bs, const PseudoOrbitTerm& term);

}  // namespace qgraph
