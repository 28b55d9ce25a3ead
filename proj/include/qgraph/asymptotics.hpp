#pragma once

#include <string_view>
#include <utility>
#include <vector>

#include "qgraph/graph.hpp"
#include "qgraph/rootfinder.hpp"

namespace qgraph {

/// Comparison graph for the high-energy limits:
///   Standard  every delta coupling replaced by standard coupling
///   Neumann   every delta'_s coupling replaced by Neumann
///   Mixed     both replacements
enum class ReferenceMode { Standard, Neumann, Mixed };

ReferenceMode parse_reference_mode(std::string_view name);  ///< standard|delta, neumann|deltaprime, mixed
std::string_view reference_mode_name(ReferenceMode m);

struct Window {
  double lo = 0.0;
  double hi = 1.0;
};

struct WindowScan {
  Window window;
  std::vector<Resonance> resonances;  ///< all roots in the window, real-axis ones included
  std::vector<Complex> reference;
  std::vector<std::pair<int, int>> pairs;  ///< (resonance, reference) indices, greedy nearest first
  std::vector<double> pair_distances;
  int unmatched = 0;  ///< non-real resonances left without a reference partner
};

struct ScanOptions {
  ReferenceMode mode = ReferenceMode::Standard;
  double im_depth = -3.0;
  double im_top = 0.05;
  RootFinderOptions root;
  int threads = 0;  ///< 0: hardware concurrency
};

MetricGraph reference_graph(const MetricGraph& g, ReferenceMode mode);

/// Reference values with Re k in the window, sorted. When every vertex of the
/// reference graph is Neumann the spectrum is n pi / l_j per edge (repeated for
/// equal lengths); otherwise the reference graph is scanned numerically.
std::vector<Complex> reference_spectrum(const MetricGraph& g, ReferenceMode mode, const Window& w, double im_depth = -3.0,
                                        const RootFinderOptions& root = {});

/// Windows of width pi / (2 max l) centered at n pi / max l, n = n_min..n_max.
std::vector<Window> standard_windows(const MetricGraph& g, int n_min, int n_max);

/// find_roots and reference_spectrum per window, then greedy pairing of the
/// non-real resonances with the reference. Windows run in parallel; the output
/// order follows the input.
std::vector<WindowScan> scan_windows(const MetricGraph& g, const std::vector<Window>& windows, const ScanOptions& opts = {});

enum class DecayQuantity { Imag, PairDistance, RealOffset };
DecayQuantity parse_decay_quantity(std::string_view name);  ///< imag | pair_distance | real_offset
std::string_view decay_quantity_name(DecayQuantity q);

/// Per-window medians over the paired non-real resonances: (median Re k, median quantity).
/// Windows without pairs are skipped.
std::vector<std::pair<double, double>> window_medians(const std::vector<WindowScan>& scans, DecayQuantity q);

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int points = 0;
};

/// Least squares of log(quantity) against log(Re k) on the window medians.
/// Throws Error with fewer than 6 usable windows.
FitResult fit_decay(const std::vector<WindowScan>& scans, DecayQuantity q);
FitResult fit_loglog(const std::vector<std::pair<double, double>>& points);

struct TrendResult {
  bool ok = false;
  int inversions = 0;
  double ratio = 0.0;  ///< first / last
};

/// Nonincreasing up to `max_inversions` increases, and first / last >= min_ratio.
TrendResult decreasing_trend(const std::vector<double>& values, double min_ratio, int max_inversions = 1);

}  // namespace qgraph
