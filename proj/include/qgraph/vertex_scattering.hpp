#pragma once

#include <string>

#include "qgraph/graph.hpp"
#include "qgraph/linalg.hpp"

namespace qgraph {

/// Partition of a vertex coupling matrix into internal (n) and lead (m) blocks:
///   U = [U1 U2; U3 U4],  U1 n x n,  U4 m x m.
struct VertexBlocks {
  CMatrix u1, u2, u3, u4;

  int n() const { return static_cast<int>(u1.rows()); }
  int m() const { return static_cast<int>(u4.rows()); }

  static VertexBlocks split(const CMatrix& u, int n);
  CMatrix assemble() const;
};

/// Lead-eliminated coupling
///   U~(k) = U1 - (1-k) U2 [(1-k) U4 - (k+1) I]^{-1} U3,
/// equal to U1 when there are no leads. Throws PoleError(EffectiveCoupling).
CMatrix effective_coupling(const VertexBlocks& blocks, Complex k);

/// The two factors of the vertex-scattering matrix, sigma = -D^{-1} N with
///   D = (1-k) U~ - (1+k) I,   N = (1+k) U~ - (1-k) I.
/// D and N commute (both are polynomials in U~).
struct SigmaFactors {
  CMatrix denominator;
  CMatrix numerator;
};
SigmaFactors sigma_factors(const CMatrix& ueff, Complex k);

/// sigma~(k) = -[(1-k) U~ - (1+k) I]^{-1} [(1+k) U~ - (1-k) I].
/// Throws PoleError(Sigma) at singular brackets.
CMatrix effective_sigma(const CMatrix& ueff, Complex k);

/// k -> sigma~(k) for one vertex, mapping incoming to outgoing amplitudes on
/// its internal edge ends.
class EffectiveSigma {
public:
  EffectiveSigma() = default;
  EffectiveSigma(const Vertex& v, int vertex_index);

  int vertex() const { return vertex_; }
  const VertexBlocks& blocks() const { return blocks_; }
  int n() const { return blocks_.n(); }

  CMatrix coupling(Complex k) const { return effective_coupling(blocks_, k); }
  CMatrix operator()(Complex k) const { return effective_sigma(coupling(k), k); }
  SigmaFactors factors(Complex k) const { return sigma_factors(coupling(k), k); }

private:
  int vertex_ = -1;
  VertexBlocks blocks_;
};

}  // namespace qgraph
