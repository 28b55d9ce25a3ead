#include "qgraph/asymptotics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <string>
#include <thread>

#include "qgraph/secular.hpp"

namespace qgraph {

namespace {

bool is_delta(const VertexCoupling& c) { return std::holds_alternative<Delta>(c); }
bool is_delta_prime(const VertexCoupling& c) { return std::holds_alternative<DeltaPrimeS>(c); }

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void pair_up(WindowScan& scan) {
  struct Candidate {
    double distance;
    int res;
    int ref;
  };
  std::vector<Candidate> candidates;
  int nonreal = 0;
  for (std::size_t i = 0; i < scan.resonances.size(); ++i) {
    if (scan.resonances[i].real_axis) continue;
    ++nonreal;
    for (std::size_t j = 0; j < scan.reference.size(); ++j)
      candidates.push_back({std::abs(scan.resonances[i].k - scan.reference[j]), static_cast<int>(i), static_cast<int>(j)});
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.distance < b.distance; });
  std::vector<bool> res_used(scan.resonances.size(), false), ref_used(scan.reference.size(), false);
  for (const auto& c : candidates) {
    if (res_used[static_cast<std::size_t>(c.res)] || ref_used[static_cast<std::size_t>(c.ref)]) continue;
    res_used[static_cast<std::size_t>(c.res)] = true;
    ref_used[static_cast<std::size_t>(c.ref)] = true;
    scan.pairs.emplace_back(c.res, c.ref);
    scan.pair_distances.push_back(c.distance);
  }
  scan.unmatched = nonreal - static_cast<int>(scan.pairs.size());
}

WindowScan scan_one(const MetricGraph& g, const SecularFunction& f, const Window& w, const ScanOptions& opts) {
  WindowScan scan;
  scan.window = w;
  if (!(w.lo < w.hi)) return scan;
  scan.resonances = find_roots(f, SearchRegion{w.lo, w.hi, opts.im_depth, opts.im_top}, opts.root);
  scan.reference = reference_spectrum(g, opts.mode, w, opts.im_depth, opts.root);
  pair_up(scan);
  return scan;
}

}  // namespace

ReferenceMode parse_reference_mode(std::string_view name) {
  if (name == "standard" || name == "delta") return ReferenceMode::Standard;
  if (name == "neumann" || name == "deltaprime") return ReferenceMode::Neumann;
  if (name == "mixed") return ReferenceMode::Mixed;
  throw Error("unknown reference mode '" + std::string(name) + "'");
}

std::string_view reference_mode_name(ReferenceMode m) {
  switch (m) {
    case ReferenceMode::Standard: return "standard";
    case ReferenceMode::Neumann: return "neumann";
    case ReferenceMode::Mixed: return "mixed";
  }
  return "?";
}

MetricGraph reference_graph(const MetricGraph& g, ReferenceMode mode) {
  const bool replace_delta = mode != ReferenceMode::Neumann;
  const bool replace_prime = mode != ReferenceMode::Standard;
  return g.with_couplings([&](const Vertex& v) -> VertexCoupling {
    if (replace_delta && is_delta(v.coupling)) return Standard{};
    if (replace_prime && is_delta_prime(v.coupling)) return Neumann{};
    return v.coupling;
  });
}

std::vector<Complex> reference_spectrum(const MetricGraph& g, ReferenceMode mode, const Window& w, double im_depth,
                                        const RootFinderOptions& root) {
  std::vector<Complex> out;
  if (!(w.lo < w.hi)) return out;
  const MetricGraph ref = reference_graph(g, mode);
  const bool decoupled = std::all_of(ref.vertices().begin(), ref.vertices().end(),
                                     [](const Vertex& v) { return std::holds_alternative<Neumann>(v.coupling); });
  if (decoupled) {
    for (const auto& e : ref.edges()) {
      const double step = kPi / e.length;
      for (long n = std::max(0L, static_cast<long>(std::ceil(w.lo / step))); n * step <= w.hi; ++n)
        if (n * step >= w.lo) out.emplace_back(n * step, 0.0);
    }
    std::sort(out.begin(), out.end(), [](Complex a, Complex b) { return a.real() < b.real(); });
    return out;
  }
  const SecularFunction f = ResonanceModel(ref).function(SecularVariant::DetCleared);
  for (const auto& r : find_roots(f, SearchRegion{w.lo, w.hi, im_depth, 0.05}, root)) out.push_back(r.k);
  return out;
}

std::vector<Window> standard_windows(const MetricGraph& g, int n_min, int n_max) {
  double l_max = 0.0;
  for (const auto& e : g.edges()) l_max = std::max(l_max, e.length);
  if (l_max <= 0.0) throw Error("standard windows need at least one internal edge");
  const double half = kPi / (4.0 * l_max);
  std::vector<Window> out;
  for (int n = n_min; n <= n_max; ++n) {
    const double c = n * kPi / l_max;
    out.push_back(Window{std::max(c - half, 1e-6), c + half});
  }
  return out;
}

std::vector<WindowScan> scan_windows(const MetricGraph& g, const std::vector<Window>& windows, const ScanOptions& opts) {
  for (std::size_t i = 1; i < windows.size(); ++i)
    if (windows[i].lo < windows[i - 1].hi) throw Error("windows must be disjoint and ascending");
  const SecularFunction f = ResonanceModel(g).function(SecularVariant::DetCleared);

  std::vector<WindowScan> out(windows.size());
  std::vector<std::exception_ptr> errors(windows.size());
  unsigned threads = opts.threads > 0 ? static_cast<unsigned>(opts.threads) : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, windows.size())));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < windows.size(); i = next++) {
      try {
        out[i] = scan_one(g, f, windows[i], opts);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

DecayQuantity parse_decay_quantity(std::string_view name) {
  if (name == "imag") return DecayQuantity::Imag;
  if (name == "pair_distance") return DecayQuantity::PairDistance;
  if (name == "real_offset") return DecayQuantity::RealOffset;
  throw Error("unknown decay quantity '" + std::string(name) + "'");
}

std::string_view decay_quantity_name(DecayQuantity q) {
  switch (q) {
    case DecayQuantity::Imag: return "imag";
    case DecayQuantity::PairDistance: return "pair_distance";
    case DecayQuantity::RealOffset: return "real_offset";
  }
  return "?";
}

std::vector<std::pair<double, double>> window_medians(const std::vector<WindowScan>& scans, DecayQuantity q) {
  std::vector<std::pair<double, double>> out;
  for (const auto& s : scans) {
    if (s.pairs.empty()) continue;
    std::vector<double> re, value;
    for (std::size_t p = 0; p < s.pairs.size(); ++p) {
      const Complex k = s.resonances[static_cast<std::size_t>(s.pairs[p].first)].k;
      const Complex ref = s.reference[static_cast<std::size_t>(s.pairs[p].second)];
      re.push_back(k.real());
      switch (q) {
        case DecayQuantity::Imag: value.push_back(std::abs(k.imag())); break;
        case DecayQuantity::PairDistance: value.push_back(s.pair_distances[p]); break;
        case DecayQuantity::RealOffset: value.push_back(std::abs(k.real() - ref.real())); break;
      }
    }
    out.emplace_back(median(re), median(value));
  }
  return out;
}

FitResult fit_loglog(const std::vector<std::pair<double, double>>& points) {
  std::vector<double> x, y;
  for (const auto& [re, v] : points) {
    if (!(re > 0.0) || !(v > 0.0)) continue;
    x.push_back(std::log(re));
    y.push_back(std::log(v));
  }
  if (x.size() < 6) throw Error("insufficient data: fit needs at least 6 windows, got " + std::to_string(x.size()));
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw Error("insufficient data: all windows at the same Re k");
  FitResult r;
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  r.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  r.points = static_cast<int>(x.size());
  return r;
}

FitResult fit_decay(const std::vector<WindowScan>& scans, DecayQuantity q) { return fit_loglog(window_medians(scans, q)); }

TrendResult decreasing_trend(const std::vector<double>& values, double min_ratio, int max_inversions) {
  TrendResult r;
  if (values.size() < 2) return r;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[i - 1]) ++r.inversions;
  r.ratio = values.back() > 0.0 ? values.front() / values.back() : std::numeric_limits<double>::infinity();
  r.ok = r.inversions <= max_inversions && r.ratio >= min_ratio;
  return r;
}

}  // namespace qgraph
