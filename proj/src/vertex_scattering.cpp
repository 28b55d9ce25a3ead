#include "qgraph/vertex_scattering.hpp"

namespace qgraph {

VertexBlocks VertexBlocks::split(const CMatrix& u, int n) {
  const Eigen::Index d = u.rows();
  const Eigen::Index m = d - n;
  if (n < 0 || m < 0) throw GraphError("invalid block partition");
  return VertexBlocks{u.topLeftCorner(n, n), u.topRightCorner(n, m), u.bottomLeftCorner(m, n), u.bottomRightCorner(m, m)};
}

CMatrix VertexBlocks::assemble() const {
  const Eigen::Index n = u1.rows();
  const Eigen::Index m = u4.rows();
  CMatrix u(n + m, n + m);
  u.topLeftCorner(n, n) = u1;
  u.topRightCorner(n, m) = u2;
  u.bottomLeftCorner(m, n) = u3;
  u.bottomRightCorner(m, m) = u4;
  return u;
}

CMatrix effective_coupling(const VertexBlocks& b, Complex k) {
  const Eigen::Index m = b.u4.rows();
  if (m == 0) return b.u1;
  const CMatrix inner = (1.0 - k) * b.u4 - (k + 1.0) * CMatrix::Identity(m, m);
  const CMatrix x = guarded_solve(inner, b.u3, PoleError::Kind::EffectiveCoupling, k);
  return b.u1 - (1.0 - k) * b.u2 * x;
}

SigmaFactors sigma_factors(const CMatrix& ueff, Complex k) {
  const CMatrix id = CMatrix::Identity(ueff.rows(), ueff.cols());
  return SigmaFactors{(1.0 - k) * ueff - (1.0 + k) * id, (1.0 + k) * ueff - (1.0 - k) * id};
}

CMatrix effective_sigma(const CMatrix& ueff, Complex k) {
  const SigmaFactors f = sigma_factors(ueff, k);
  return -guarded_solve(f.denominator, f.numerator, PoleError::Kind::Sigma, k);
}

EffectiveSigma::EffectiveSigma(const Vertex& v, int vertex_index)
    : vertex_(vertex_index), blocks_(VertexBlocks::split(coupling_matrix(v.coupling, v.degree()), v.internal_degree)) {}

}  // namespace qgraph
