#include "qgraph/bond_system.hpp"

namespace qgraph {

namespace {

int end_position(const Vertex& v, int edge, int side) {
  for (std::size_t p = 0; p < v.ends.size(); ++p) {
    const EdgeEnd& e = v.ends[p];
    if (e.kind == EdgeEnd::Kind::Internal && e.index == edge && e.side == side) return static_cast<int>(p);
  }
  throw GraphError("edge end missing from vertex ordering");
}

}  // namespace

BondSystem::BondSystem(const MetricGraph& g) : edge_count_(g.edge_count()) {
  const auto& vs = g.vertices();
  bonds_.resize(static_cast<std::size_t>(2 * edge_count_));
  for (int j = 0; j < edge_count_; ++j) {
    const Edge& e = g.edges()[static_cast<std::size_t>(j)];
    const int end_a = end_position(vs[static_cast<std::size_t>(e.a)], j, 0);
    const int end_b = end_position(vs[static_cast<std::size_t>(e.b)], j, 1);
    bonds_[static_cast<std::size_t>(j)] = Bond{j, false, e.a, e.b, end_a, end_b};
    bonds_[static_cast<std::size_t>(j + edge_count_)] = Bond{j, true, e.b, e.a, end_b, end_a};
  }
}

std::vector<double> BondSystem::bond_lengths(std::span<const double> edge_lengths) const {
  if (static_cast<int>(edge_lengths.size()) != edge_count_) throw GraphError("length vector size mismatch");
  std::vector<double> out(static_cast<std::size_t>(2 * edge_count_));
  for (int b = 0; b < 2 * edge_count_; ++b) out[static_cast<std::size_t>(b)] = edge_lengths[static_cast<std::size_t>(bond(b).edge)];
  return out;
}

CMatrix BondSystem::q() const {
  const Eigen::Index n = edge_count_;
  CMatrix q = CMatrix::Zero(2 * n, 2 * n);
  q.topRightCorner(n, n).setIdentity();
  q.bottomLeftCorner(n, n).setIdentity();
  return q;
}

std::string BondSystem::label(int b) const {
  return "b" + std::to_string(bond(b).edge + 1) + (bond(b).reversed ? "^" : "");
}

BondSystem build_bond_system(const MetricGraph& g) { return BondSystem(g); }

std::vector<EffectiveSigma> vertex_sigmas(const MetricGraph& g) {
  std::vector<EffectiveSigma> out(g.vertices().size());
  for (std::size_t v = 0; v < g.vertices().size(); ++v) {
    const Vertex& vx = g.vertices()[v];
    if (vx.internal_degree > 0) out[v] = EffectiveSigma(vx, static_cast<int>(v));
  }
  return out;
}

CMatrix big_sigma(const BondSystem& bs, std::span<const EffectiveSigma> sigmas, Complex k) {
  const int nb = bs.bond_count();
  std::vector<CMatrix> sig(sigmas.size());
  for (std::size_t v = 0; v < sigmas.size(); ++v)
    if (sigmas[v].n() > 0) sig[v] = sigmas[v](k);
  CMatrix out = CMatrix::Zero(nb, nb);
  for (int c = 0; c < nb; ++c)
    for (int b = 0; b < nb; ++b) {
      const Bond& bc = bs.bond(c);
      const Bond& bb = bs.bond(b);
      if (bc.head == bb.head) out(c, b) = sig[static_cast<std::size_t>(bb.head)](bc.head_end, bb.head_end);
    }
  return out;
}

CMatrix scattering_matrix(const BondSystem& bs, std::span<const EffectiveSigma> sigmas, Complex k) {
  return bs.q() * big_sigma(bs, sigmas, k);
}

}  // namespace qgraph
