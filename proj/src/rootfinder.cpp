#include "qgraph/rootfinder.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "qgraph/analytic.hpp"

namespace qgraph {

namespace {

// The contour passes through (or numerically too close to) a zero or pole.
struct BoundaryHit {};

constexpr double kMaxPhaseStep = kPi / 3.0;

Complex eval_checked(const SecularFunction& f, Complex z) {
  Complex v;
  try {
    v = f(z);
  } catch (const PoleError&) {
    throw BoundaryHit{};
  }
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) || v == Complex{}) throw BoundaryHit{};
  return v;
}

double segment_phase(const SecularFunction& f, Complex za, Complex zb, Complex fa, Complex fb, int depth) {
  const double d = std::arg(fb / fa);
  if (std::abs(d) <= kMaxPhaseStep) return d;
  if (depth >= 48 || std::abs(zb - za) < 1e-13 * (1.0 + std::abs(za))) throw BoundaryHit{};
  const Complex zm = 0.5 * (za + zb);
  const Complex fm = eval_checked(f, zm);
  return segment_phase(f, za, zm, fa, fm, depth + 1) + segment_phase(f, zm, zb, fm, fb, depth + 1);
}

double side_phase(const SecularFunction& f, Complex za, Complex zb, int samples) {
  double total = 0.0;
  Complex z_prev = za;
  Complex f_prev = eval_checked(f, za);
  for (int i = 1; i <= samples; ++i) {
    const Complex z = za + (zb - za) * (static_cast<double>(i) / samples);
    const Complex fz = eval_checked(f, z);
    total += segment_phase(f, z_prev, z, f_prev, fz, 0);
    z_prev = z;
    f_prev = fz;
  }
  return total;
}

// Winding number, or BoundaryHit. Two successive sample densities must agree.
int winding(const SecularFunction& f, const SearchRegion& r, const RootFinderOptions& opts) {
  const std::array<Complex, 4> corners{Complex(r.re_min, r.im_min), Complex(r.re_max, r.im_min), Complex(r.re_max, r.im_max),
                                       Complex(r.re_min, r.im_max)};
  bool have_previous = false;
  long previous = 0;
  for (int n = opts.initial_samples; n <= opts.max_samples; n *= 2) {
    double total = 0.0;
    for (int s = 0; s < 4; ++s) total += side_phase(f, corners[static_cast<std::size_t>(s)], corners[static_cast<std::size_t>((s + 1) % 4)], n);
    const double w = total / (2.0 * kPi);
    const long rounded = std::lround(w);
    if (std::abs(w - static_cast<double>(rounded)) < 0.25) {
      if (have_previous && previous == rounded) {
        if (rounded < 0) throw RootFinderError("negative winding: the function has poles inside the region");
        return static_cast<int>(rounded);
      }
      previous = rounded;
      have_previous = true;
    } else {
      have_previous = false;
    }
  }
  throw BoundaryHit{};
}

SearchRegion grown(const SearchRegion& r, int attempt) {
  const double step = 1e-7 * (1.0 + r.diameter()) * attempt * attempt;
  return SearchRegion{r.re_min - step, r.re_max + 1.3 * step, r.im_min - 0.7 * step, r.im_max + 1.1 * step};
}

// Split fractions tried in turn when a split line hits a zero.
constexpr std::array<double, 9> kSplitOffsets{0.0, 0.0123, -0.0171, 0.0311, -0.0377, 0.0573, -0.0619, 0.0871, -0.0937};

struct Cell {
  SearchRegion region;
  int count;
};

Resonance make_resonance(const SecularFunction& f, Complex k, double residual, int count, const RootFinderOptions& opts) {
  Resonance res;
  res.k = k;
  res.residual = residual;
  res.winding = std::max(1, count);
  res.real_axis = std::abs(k.imag()) < opts.real_axis_tol;
  if (f.clearing_ratio) res.suspect = f.clearing_ratio(k) < opts.suspect_ratio;
  return res;
}

double residual_at(const SecularFunction& f, Complex k) {
  const Complex v = f(k);
  if (v == Complex{}) return 0.0;
  const Complex d = secular_derivative(f, k);
  return std::abs(v / d);
}

}  // namespace

void SearchRegion::validate() const {
  if (!(re_min < re_max) || !(im_min < im_max)) throw RootFinderError("search region needs re_min < re_max and im_min < im_max");
}

double SearchRegion::diameter() const { return std::hypot(re_max - re_min, im_max - im_min); }

bool SearchRegion::contains(Complex k, double margin) const {
  return k.real() >= re_min - margin && k.real() <= re_max + margin && k.imag() >= im_min - margin && k.imag() <= im_max + margin;
}

double derivative_radius(Complex k) { return std::max(1e-4, 1e-6 * std::abs(k)); }

Complex secular_derivative(const SecularFunction& f, Complex k) { return cauchy_derivative(f.eval, k, derivative_radius(k), 32); }

NewtonResult newton_refine(const SecularFunction& f, Complex k0, const RootFinderOptions& opts) {
  Complex k = k0;
  double last_step = std::numeric_limits<double>::infinity();
  int it = 0;
  for (; it < opts.max_newton; ++it) {
    const Complex v = f(k);
    if (v == Complex{}) return NewtonResult{k, 0.0, it};
    const Complex d = secular_derivative(f, k);
    if (d == Complex{} || !std::isfinite(std::abs(d)) || !std::isfinite(std::abs(v)))
      throw RootFinderError("newton: derivative vanishes or is not finite");
    const Complex step = v / d;
    k -= step;
    if (!std::isfinite(k.real()) || !std::isfinite(k.imag()) || std::abs(k - k0) > opts.max_excursion)
      throw RootFinderError("newton diverged");
    const double s = std::abs(step);
    if (s <= 1e-14 * std::max(1.0, std::abs(k))) break;
    // Round-off floor: the step no longer shrinks.
    if (s <= opts.abs_tol && s > 0.5 * last_step) break;
    last_step = s;
  }
  const double residual = residual_at(f, k);
  if (!(residual <= opts.abs_tol)) throw RootFinderError("newton: no convergence after " + std::to_string(it) + " steps");
  return NewtonResult{k, residual, it};
}

Complex newton_refine(const SecularFunction& f, Complex k0, double abs_tol) {
  RootFinderOptions opts;
  opts.abs_tol = abs_tol;
  return newton_refine(f, k0, opts).k;
}

int count_zeros(const SecularFunction& f, const SearchRegion& r, const RootFinderOptions& opts) {
  r.validate();
  for (int attempt = 0; attempt <= opts.max_nudges; ++attempt) {
    try {
      return winding(f, grown(r, attempt), opts);
    } catch (const BoundaryHit&) {
    }
  }
  throw RootFinderError("zero on the search-region boundary after repeated nudges");
}

std::vector<Resonance> find_roots(const SecularFunction& f, const SearchRegion& r, const RootFinderOptions& opts) {
  r.validate();
  SearchRegion top = r;
  int total = -1;
  for (int attempt = 0; attempt <= opts.max_nudges && total < 0; ++attempt) {
    try {
      top = grown(r, attempt);
      total = winding(f, top, opts);
    } catch (const BoundaryHit&) {
    }
  }
  if (total < 0) throw RootFinderError("zero on the search-region boundary after repeated nudges");

  std::vector<Resonance> found;
  std::vector<Cell> stack{{top, total}};
  while (!stack.empty()) {
    const Cell cell = stack.back();
    stack.pop_back();
    if (cell.count == 0) continue;
    const SearchRegion& c = cell.region;
    const bool tiny = c.diameter() < opts.min_cell;

    if (cell.count == 1 || tiny) {
      try {
        const NewtonResult nr = newton_refine(f, c.center(), opts);
        if (c.contains(nr.k, tiny ? opts.min_cell : 1e-12 * (1.0 + std::abs(nr.k)))) {
          found.push_back(make_resonance(f, nr.k, nr.residual, cell.count, opts));
          continue;
        }
      } catch (const RootFinderError&) {
        // Newton left the cell or stalled: subdivide further.
      }
      if (tiny) {
        found.push_back(make_resonance(f, c.center(), residual_at(f, c.center()), cell.count, opts));
        continue;
      }
    }

    bool split = false;
    for (std::size_t a = 0; a < kSplitOffsets.size() && !split; ++a) {
      const double fx = 0.5 + kSplitOffsets[a];
      const double fy = 0.5 - kSplitOffsets[a];
      const double xm = c.re_min + fx * (c.re_max - c.re_min);
      const double ym = c.im_min + fy * (c.im_max - c.im_min);
      const std::array<SearchRegion, 4> quads{SearchRegion{c.re_min, xm, c.im_min, ym}, SearchRegion{xm, c.re_max, c.im_min, ym},
                                              SearchRegion{c.re_min, xm, ym, c.im_max}, SearchRegion{xm, c.re_max, ym, c.im_max}};
      try {
        std::array<int, 4> counts{};
        int sum = 0;
        for (std::size_t q = 0; q < 4; ++q) {
          counts[q] = winding(f, quads[q], opts);
          sum += counts[q];
        }
        if (sum != cell.count) continue;
        // Pushed in reverse so that the lower-left quadrant is processed first.
        for (std::size_t q = 4; q-- > 0;) stack.push_back(Cell{quads[q], counts[q]});
        split = true;
      } catch (const BoundaryHit&) {
      }
    }
    if (!split) throw RootFinderError("count mismatch after refinement");
  }

  std::sort(found.begin(), found.end(), [](const Resonance& a, const Resonance& b) {
    if (a.k.real() != b.k.real()) return a.k.real() < b.k.real();
    return a.k.imag() < b.k.imag();
  });
  std::vector<Resonance> unique;
  for (const auto& res : found) {
    auto dup = std::find_if(unique.begin(), unique.end(), [&](const Resonance& u) { return std::abs(u.k - res.k) < opts.dedupe; });
    if (dup == unique.end()) {
      unique.push_back(res);
    } else {
      // A multiple zero split across adjacent cells: merge and keep the combined multiplicity.
      dup->winding += res.winding;
      if (res.residual < dup->residual) {
        dup->k = res.k;
        dup->residual = res.residual;
      }
    }
  }
  int winding_sum = 0;
  for (const auto& u : unique) winding_sum += u.winding;
  if (winding_sum != total) throw RootFinderError("count mismatch after refinement");
  return unique;
}

}  // namespace qgraph
