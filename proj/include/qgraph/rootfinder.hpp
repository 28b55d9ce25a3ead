#pragma once

#include <vector>

#include "qgraph/secular.hpp"

namespace qgraph {

/// Axis-aligned rectangle of the complex k-plane. im_max defaults slightly
/// above the real axis so that embedded eigenvalues lie inside.
struct SearchRegion {
  double re_min = 0.0;
  double re_max = 1.0;
  double im_min = -1.0;
  double im_max = 0.05;

  void validate() const;  ///< throws RootFinderError unless min < max on both axes
  Complex center() const { return {0.5 * (re_min + re_max), 0.5 * (im_min + im_max)}; }
  double diameter() const;
  bool contains(Complex k, double margin = 0.0) const;
};

struct Resonance {
  Complex k;
  double residual = 0.0;  ///< |f(k) / f'(k)|, the remaining Newton step
  int winding = 1;        ///< multiplicity estimate from the enclosing contour
  bool suspect = false;   ///< the pole-clearing factor vanishes here
  bool real_axis = false; ///< |Im k| below RootFinderOptions::real_axis_tol (embedded eigenvalue)
};

struct RootFinderOptions {
  double abs_tol = 1e-10;
  int initial_samples = 64;  ///< per rectangle side
  int max_samples = 4096;
  double min_cell = 1e-8;
  double dedupe = 1e-7;
  int max_newton = 100;
  double max_excursion = 5.0;  ///< Newton gives up beyond this distance from its start
  int max_nudges = 8;
  double real_axis_tol = 1e-9;
  double suspect_ratio = 1e-8;
};

/// Radius of the Cauchy circle used for f'(k): max(1e-4, 1e-6 |k|), 32 nodes.
double derivative_radius(Complex k);
Complex secular_derivative(const SecularFunction& f, Complex k);

struct NewtonResult {
  Complex k;
  double residual = 0.0;
  int iterations = 0;
};

/// Newton iteration with Cauchy-circle derivatives. Throws RootFinderError on
/// divergence, a vanishing derivative or when the residual stays above abs_tol.
NewtonResult newton_refine(const SecularFunction& f, Complex k0, const RootFinderOptions& opts = {});
Complex newton_refine(const SecularFunction& f, Complex k0, double abs_tol);

/// Winding number of f along the boundary of r (argument principle). A zero on
/// the boundary makes the rectangle grow slightly, up to max_nudges times.
int count_zeros(const SecularFunction& f, const SearchRegion& r, const RootFinderOptions& opts = {});

/// All zeros in r: recursive quadrisection down to cells with winding <= 1 (or
/// smaller than min_cell), Newton from each cell center, duplicates within
/// `dedupe` merged, sorted by ascending Re k.
std::vector<Resonance> find_roots(const SecularFunction& f, const SearchRegion& r, const RootFinderOptions& opts = {});

}  // namespace qgraph
