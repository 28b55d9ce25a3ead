#pragma once

#include <functional>
#include <vector>

#include "qgraph/linalg.hpp"

namespace qgraph {

/// Taylor coefficients c_0..c_order of an analytic f around `center`, from the
/// trapezoid rule on the circle |z - center| = radius with `nodes` points:
///   c_p = (1/nodes) sum_j f(z_j) exp(-i p theta_j) / radius^p.
/// Derivatives follow as f^(p) = p! c_p.
std::vector<Complex> taylor_on_circle(const std::function<Complex(Complex)>& f, Complex center, double radius, int nodes,
                                      int order);

/// Same, from samples f(center + radius exp(i theta_j)) already computed.
std::vector<Complex> taylor_from_samples(const std::vector<Complex>& samples, double radius, int order);

/// Circle nodes center + radius exp(2 pi i j / nodes).
std::vector<Complex> circle_nodes(Complex center, double radius, int nodes);

/// First derivative by Cauchy's formula.
Complex cauchy_derivative(const std::function<Complex(Complex)>& f, Complex center, double radius, int nodes = 32);

/// Mixed Taylor coefficients c[p][q] (p, q <= order) of an analytic f(k, t)
/// from a torus of circles: radius_k around k0 and radius_t around t0.
std::vector<std::vector<Complex>> taylor_on_torus(const std::function<Complex(Complex, Complex)>& f, Complex k0,
                                                  Complex t0, double radius_k, double radius_t, int nodes, int order);

}  // namespace qgraph
