#pragma once

#include <vector>

#include "qgraph/graph.hpp"
#include "qgraph/secular.hpp"

namespace qgraph {

/// Second-order Taylor data of a resonance trajectory k(t) = k0 + t kdot + t^2/2 kddot
/// started at an embedded eigenvalue k0^2.
struct FermiExpansion {
  Complex k0;
  Complex kdot;
  Complex kddot;
  Complex coefficient;  ///< sum (l A - i dA/dk) (-1)^m exp(i k0 l), shared by both equations
};

struct CorollaryResult {
  double kdot = 0.0;
  double kddot_re = 0.0;
  double kddot_im = 0.0;
};

struct TrajectoryPoint {
  double t = 0.0;
  Complex k;
  double residual = 0.0;
};

struct TraceOptions {
  double tol = 1e-10;
  double min_step = 1e-6;
};

/// Pseudo-orbit evaluation of the first-order rule:
///   kdot = -k0 sum ldot A (-1)^m e^{ik0 l} / sum (l A - i dA/dk) (-1)^m e^{ik0 l}.
/// The model's lengths are ignored; the schedule provides l, ldot, lddot per edge.
/// Throws FermiError when k0 is not a real root at t = 0 or the coefficient vanishes.
Complex kdot(const ResonanceModel& model, const EdgeLengthSchedule& schedule, Complex k0);

/// Second-order rule, solved as a linear equation for kddot.
Complex kddot(const ResonanceModel& model, const EdgeLengthSchedule& schedule, Complex k0, Complex kdot);

FermiExpansion fermi_expansion(const ResonanceModel& model, const EdgeLengthSchedule& schedule, Complex k0);

/// Closed forms for real, k-independent amplitudes. Throws FermiError
/// ("corollary inapplicable") if some |dA/dk| >= 1e-10 or |Im A| >= 1e-12.
CorollaryResult fermi_corollary(const ResonanceModel& model, const EdgeLengthSchedule& schedule, Complex k0);

/// Same derivatives by implicit differentiation of the cleared determinant
/// F(k, t): kdot = -F_t / F_k, kddot = -(F_tt + 2 F_kt kdot + F_kk kdot^2) / F_k.
FermiExpansion fermi_implicit(const ResonanceModel& model, const EdgeLengthSchedule& schedule, Complex k0);

/// Predictor-corrector continuation of the root through k0 at t = 0, sampled at
/// t_min + i (t_max - t_min) / steps, i = 0..steps. Traced outward from t = 0
/// in both directions. Throws FermiError when the step falls below min_step.
std::vector<TrajectoryPoint> trace_trajectory(const ResonanceModel& model, const EdgeLengthSchedule& schedule, Complex k0,
                                              double t_min, double t_max, int steps, const TraceOptions& opts = {});

}  // namespace qgraph
