#pragma once

#include <span>
#include <string>
#include <vector>

#include "qgraph/graph.hpp"
#include "qgraph/vertex_scattering.hpp"

namespace qgraph {

/// Directed copy of an internal edge. Bond j (j < N) runs along edge j from its
/// x=0 end to its x=l end; bond N+j is the reversed copy.
struct Bond {
  int edge = 0;
  bool reversed = false;
  int tail = 0;
  int head = 0;
  int tail_end = 0;  ///< position of the departing edge end in the tail's local ordering
  int head_end = 0;  ///< position of the arriving edge end in the head's local ordering
};

/// The doubled digraph: 2N bonds in canonical order (b_1..b_N, b^_1..b^_N).
class BondSystem {
public:
  BondSystem() = default;
  explicit BondSystem(const MetricGraph& g);

  int edge_count() const { return edge_count_; }
  int bond_count() const { return 2 * edge_count_; }
  const std::vector<Bond>& bonds() const { return bonds_; }
  const Bond& bond(int b) const { return bonds_[static_cast<std::size_t>(b)]; }
  int reverse(int b) const { return b < edge_count_ ? b + edge_count_ : b - edge_count_; }

  /// b' may follow b iff head(b) == tail(b').
  bool follows(int b, int next) const { return bond(b).head == bond(next).tail; }

  /// Diagonal of L for the given edge lengths (size N -> 2N).
  std::vector<double> bond_lengths(std::span<const double> edge_lengths) const;

  /// The block swap [[0, I_N], [I_N, 0]].
  CMatrix q() const;

  /// "b3" or "b3^" (1-based edge number, ^ for the reversed bond).
  std::string label(int b) const;

private:
  int edge_count_ = 0;
  std::vector<Bond> bonds_;
};

BondSystem build_bond_system(const MetricGraph& g);

/// One EffectiveSigma per vertex of g (empty entries for vertices without
/// internal edges).
std::vector<EffectiveSigma> vertex_sigmas(const MetricGraph& g);

/// Sigma~(k) in canonical bond order: the block-diagonal matrix of vertex
/// sigmas, bonds grouped by the vertex they arrive at,
///   Sigma~_{c b} = sigma^(v)_{head_end(c), head_end(b)},  v = head(c) = head(b).
CMatrix big_sigma(const BondSystem& bs, std::span<const EffectiveSigma> sigmas, Complex k);

/// Bond scattering matrix S(k) = Q Sigma~(k); S_{b' b} is the amplitude for
/// scattering from bond b into bond b'.
CMatrix scattering_matrix(const BondSystem& bs, std::span<const EffectiveSigma> sigmas, Complex k);

}  // namespace qgraph
