#include "qgraph/secular.hpp"

#include <cmath>
#include <mutex>

namespace qgraph {

struct ResonanceModel::OrbitCache {
  std::once_flag once;
  std::vector<Cycle> cycles;
  std::vector<PseudoOrbitTerm> terms;
};

namespace {

// Exponentials of the bond lengths; works for real and complex lengths.
template <class T>
CMatrix exp_ikl_q(const BondSystem& bs, std::span<const T> lengths, Complex k) {
  if (static_cast<int>(lengths.size()) != bs.edge_count()) throw GraphError("length vector size mismatch");
  const int nb = bs.bond_count();
  CMatrix eq = CMatrix::Zero(nb, nb);
  for (int b = 0; b < nb; ++b) {
    // (E Q)_{b, rev(b)} = exp(ik l_b)
    eq(b, bs.reverse(b)) = std::exp(kI * k * Complex(lengths[static_cast<std::size_t>(bs.bond(b).edge)]));
  }
  return eq;
}

// Scatter per-vertex matrices into the 2N x 2N bond basis grouped by head vertex.
CMatrix assemble_by_head(const BondSystem& bs, const std::vector<CMatrix>& per_vertex) {
  const int nb = bs.bond_count();
  CMatrix out = CMatrix::Zero(nb, nb);
  for (int c = 0; c < nb; ++c)
    for (int b = 0; b < nb; ++b) {
      const Bond& bc = bs.bond(c);
      const Bond& bb = bs.bond(b);
      if (bc.head == bb.head) out(c, b) = per_vertex[static_cast<std::size_t>(bb.head)](bc.head_end, bb.head_end);
    }
  return out;
}

template <class T>
Complex cleared_impl(const BondSystem& bs, std::span<const EffectiveSigma> sigmas, std::span<const T> lengths, Complex k) {
  std::vector<CMatrix> num(sigmas.size()), den(sigmas.size());
  for (std::size_t v = 0; v < sigmas.size(); ++v) {
    if (sigmas[v].n() == 0) continue;
    SigmaFactors f = sigmas[v].factors(k);
    num[v] = std::move(f.numerator);
    den[v] = std::move(f.denominator);
  }
  // det(EQ Sigma~ - I) det(D') = det(-EQ N' - D') = det(EQ N' + D') since 2N is even.
  const CMatrix m = exp_ikl_q(bs, lengths, k) * assemble_by_head(bs, num) + assemble_by_head(bs, den);
  return m.determinant();
}

}  // namespace

std::string_view variant_name(SecularVariant v) {
  switch (v) {
    case SecularVariant::Det: return "det";
    case SecularVariant::DetCleared: return "cleared";
    case SecularVariant::PseudoOrbit: return "po";
    case SecularVariant::ClosedForm: return "closed_form";
  }
  return "?";
}

SecularVariant parse_variant(std::string_view name) {
  if (name == "det") return SecularVariant::Det;
  if (name == "cleared" || name == "det_cleared") return SecularVariant::DetCleared;
  if (name == "po" || name == "pseudo_orbit") return SecularVariant::PseudoOrbit;
  throw Error("unknown secular variant '" + std::string(name) + "'");
}

ResonanceModel::ResonanceModel(MetricGraph g, std::size_t orbit_cap)
    : graph_(std::move(g)),
      bonds_(graph_),
      sigmas_(vertex_sigmas(graph_)),
      lengths_(graph_.lengths()),
      orbit_cap_(orbit_cap),
      orbits_(std::make_shared<OrbitCache>()) {}

const std::vector<PseudoOrbitTerm>& ResonanceModel::terms() const {
  std::call_once(orbits_->once, [this] {
    orbits_->cycles = enumerate_simple_cycles(bonds_, orbit_cap_);
    orbits_->terms = enumerate_irreducible_pseudo_orbits(bonds_, orbits_->cycles, orbit_cap_);
  });
  return orbits_->terms;
}

const std::vector<Cycle>& ResonanceModel::cycles() const {
  terms();
  return orbits_->cycles;
}

CMatrix ResonanceModel::big_sigma(Complex k) const { return qgraph::big_sigma(bonds_, sigmas_, k); }

CMatrix ResonanceModel::scattering(Complex k) const { return qgraph::scattering_matrix(bonds_, sigmas_, k); }

Complex ResonanceModel::det(Complex k, std::span<const double> lengths) const {
  const int nb = bonds_.bond_count();
  const CMatrix m = exp_ikl_q(bonds_, lengths, k) * big_sigma(k) - CMatrix::Identity(nb, nb);
  return m.determinant();
}

Complex ResonanceModel::cleared(Complex k, std::span<const double> lengths) const {
  return cleared_impl(bonds_, std::span<const EffectiveSigma>(sigmas_), lengths, k);
}

Complex ResonanceModel::cleared(Complex k, std::span<const Complex> lengths) const {
  return cleared_impl(bonds_, std::span<const EffectiveSigma>(sigmas_), lengths, k);
}

Complex ResonanceModel::clearing_factor(Complex k) const {
  Complex prod{1.0, 0.0};
  for (const auto& s : sigmas_)
    if (s.n() > 0) prod *= s.factors(k).denominator.determinant();
  return prod;
}

double ResonanceModel::clearing_ratio(Complex k) const {
  double ratio = 1.0;
  for (const auto& s : sigmas_) {
    if (s.n() == 0) continue;
    const CMatrix d = s.factors(k).denominator;
    const double bound = std::pow(d.norm(), static_cast<double>(d.rows()));
    ratio *= bound > 0.0 ? std::abs(d.determinant()) / bound : 0.0;
  }
  return ratio;
}

Complex ResonanceModel::po(Complex k, std::span<const double> lengths) const {
  return pseudo_orbit_sum(scattering(k), terms(), lengths, k);
}

SecularFunction ResonanceModel::function(SecularVariant v, std::vector<double> lengths) const {
  SecularFunction f;
  f.variant = v;
  f.name = std::string(variant_name(v));
  const ResonanceModel self = *this;
  switch (v) {
    case SecularVariant::Det:
      f.eval = [self, lengths](Complex k) { return self.det(k, lengths); };
      break;
    case SecularVariant::DetCleared:
      f.eval = [self, lengths](Complex k) { return self.cleared(k, std::span<const double>(lengths)); };
      f.clearing_ratio = [self](Complex k) { return self.clearing_ratio(k); };
      break;
    case SecularVariant::PseudoOrbit:
      self.terms();
      f.eval = [self, lengths](Complex k) { return self.po(k, lengths); };
      break;
    case SecularVariant::ClosedForm:
      throw Error("closed-form conditions come from closed_form_condition()");
  }
  return f;
}

Complex secular_det(const MetricGraph& g, Complex k) { return ResonanceModel(g).det(k); }

Complex secular_cleared(const MetricGraph& g, Complex k) { return ResonanceModel(g).cleared(k); }

const std::vector<std::string>& closed_form_names() {
  static const std::vector<std::string> names{"loop_delta_sym", "cross_robin", "loop_delta_2", "loop_deltaprime", "loop_mixed"};
  return names;
}

SecularFunction closed_form_condition(std::string_view name, const ClosedFormParams& p) {
  SecularFunction f;
  f.variant = SecularVariant::ClosedForm;
  f.name = std::string(name);
  const double l1 = p.l1;
  const double l2 = p.l2;
  if (name == "loop_delta_sym") {
    const double a = p.alpha1;
    f.eval = [=](Complex k) {
      return (a - 3.0 * kI * k) * (a - 3.0 * kI * k) -
             (a - kI * k) * (a - kI * k) * (std::exp(2.0 * kI * k * l1) + std::exp(2.0 * kI * k * l2)) +
             8.0 * k * k * std::exp(kI * k * (l1 + l2)) + (a + kI * k) * (a + kI * k) * std::exp(2.0 * kI * k * (l1 + l2));
    };
  } else if (name == "cross_robin") {
    const double a = p.alpha1;
    f.eval = [=](Complex k) {
      const Complex s1 = std::sin(k * l1), c1 = std::cos(k * l1), s2 = std::sin(k * l2), c2 = std::cos(k * l2);
      return k * c1 * c2 + (a - 2.0 * kI * k) * s1 * c2 + a * c1 * s2 - (2.0 * kI * a + k) * s1 * s2;
    };
  } else if (name == "loop_delta_2") {
    const double a1 = p.alpha1, a2 = p.alpha2;
    f.eval = [=](Complex k) {
      const Complex h = std::sin(k * (l1 + l2) / 2.0);
      return (a1 - kI * k) * (a2 - kI * k) * std::sin(k * l1) * std::sin(k * l2) - 4.0 * k * k * h * h +
             k * (a1 + a2 - 2.0 * kI * k) * std::sin(k * (l1 + l2));
    };
  } else if (name == "loop_deltaprime") {
    const double b1 = p.beta1, b2 = p.beta2;
    f.eval = [=](Complex k) {
      return ((b1 + b2) * k + 2.0 * kI) * std::sin(k * (l1 + l2)) + 2.0 * (1.0 - std::cos(k * l1) * std::cos(k * l2)) +
             (3.0 - b1 * b2 * k * k - kI * k * (b1 + b2)) * std::sin(k * l1) * std::sin(k * l2);
    };
  } else if (name == "loop_mixed") {
    const double a = p.alpha1, b = p.beta2;
    f.eval = [=](Complex k) {
      return (b * k * k + kI * k * a * b + 3.0 * kI * k - a) * std::cos(k * l1) * std::cos(k * l2) +
             (-kI * b * k * k + kI * a + 2.0 * k) * std::sin(k * (l1 + l2)) - 2.0 * kI * k * std::sin(k * l1) * std::sin(k * l2) +
             2.0 * kI * k;
    };
  } else {
    throw FixtureError("unknown fixture '" + std::string(name) + "'");
  }
  return f;
}

}  // namespace qgraph
