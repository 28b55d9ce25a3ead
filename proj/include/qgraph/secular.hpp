#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qgraph/bond_system.hpp"
#include "qgraph/graph.hpp"
#include "qgraph/pseudo_orbit.hpp"

namespace qgraph {

enum class SecularVariant { Det, DetCleared, PseudoOrbit, ClosedForm };

std::string_view variant_name(SecularVariant v);
SecularVariant parse_variant(std::string_view name);  ///< det | cleared | po

/// An analytic function of k whose zeros are the resonances.
struct SecularFunction {
  std::function<Complex(Complex)> eval;
  SecularVariant variant = SecularVariant::Det;
  std::string name;
  /// Optional: |clearing factor| relative to its Hadamard bound. Values near 0
  /// mark zeros introduced by pole clearing rather than by the graph.
  std::function<double(Complex)> clearing_ratio;

  Complex operator()(Complex k) const { return eval(k); }
};

/// Resonance problem of one graph: bond system, vertex sigmas and (lazily) the
/// irreducible pseudo-orbits. Lengths default to the graph's but may be
/// overridden per call, as needed when edges move.
class ResonanceModel {
public:
  explicit ResonanceModel(MetricGraph g, std::size_t orbit_cap = kDefaultOrbitCap);

  const MetricGraph& graph() const { return graph_; }
  const BondSystem& bonds() const { return bonds_; }
  std::span<const EffectiveSigma> sigmas() const { return sigmas_; }
  const std::vector<double>& lengths() const { return lengths_; }

  /// Enumerated on first use; throws OrbitExplosion past the cap.
  const std::vector<PseudoOrbitTerm>& terms() const;
  const std::vector<Cycle>& cycles() const;

  CMatrix big_sigma(Complex k) const;
  CMatrix scattering(Complex k) const;

  /// det(exp(ikL) Q Sigma~(k) - I). Throws PoleError at sigma poles.
  Complex det(Complex k) const { return det(k, std::span<const double>(lengths_)); }
  Complex det(Complex k, std::span<const double> lengths) const;

  /// det(...) * prod_v det[(1-k) U~_v - (1+k) I], evaluated without inverting
  /// the sigma brackets, so it stays analytic through sigma poles.
  Complex cleared(Complex k) const { return cleared(k, std::span<const double>(lengths_)); }
  Complex cleared(Complex k, std::span<const double> lengths) const;
  Complex cleared(Complex k, std::span<const Complex> lengths) const;

  Complex clearing_factor(Complex k) const;
  double clearing_ratio(Complex k) const;

  /// Pseudo-orbit form, sum (-1)^m A exp(ikl).
  Complex po(Complex k) const { return po(k, std::span<const double>(lengths_)); }
  Complex po(Complex k, std::span<const double> lengths) const;

  SecularFunction function(SecularVariant v) const { return function(v, lengths_); }
  SecularFunction function(SecularVariant v, std::vector<double> lengths) const;

private:
  struct OrbitCache;

  MetricGraph graph_;
  BondSystem bonds_;
  std::vector<EffectiveSigma> sigmas_;
  std::vector<double> lengths_;
  std::size_t orbit_cap_;
  std::shared_ptr<OrbitCache> orbits_;
};

Complex secular_det(const MetricGraph& g, Complex k);
Complex secular_cleared(const MetricGraph& g, Complex k);

/// Parameters of the printed fixture conditions. Index 1 is the left vertex
/// (x=0 end of both loop edges) and index 2 the right one; the cross uses
/// alpha1 for the Robin end.
struct ClosedFormParams {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;
  double l1 = 1.0;
  double l2 = 1.0;
};

/// Literal resonance conditions of the fixture graphs:
///   loop_delta_sym   circle with two leads, equal delta(alpha1) couplings
///   cross_robin      cross-shaped resonator with Dirichlet and Robin(alpha1) ends
///   loop_delta_2     loop with delta(alpha1), delta(alpha2)
///   loop_deltaprime  loop with delta'_s(beta1), delta'_s(beta2)
///   loop_mixed       loop with delta(alpha1) left and delta'_s(beta2) right
/// They differ from the determinant by nonvanishing factors; compare zero sets only.
SecularFunction closed_form_condition(std::string_view name, const ClosedFormParams& p);

const std::vector<std::string>& closed_form_names();

}  // namespace qgraph
