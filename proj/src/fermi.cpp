#include "qgraph/fermi.hpp"

#include <algorithm>
#include <cmath>
#include <array>
#include <numbers>

#include <Eigen/Dense>

#include "qgraph/analytic.hpp"
#include "qgraph/rootfinder.hpp"

namespace qgraph {

namespace {

constexpr int kAmplitudeNodes = 64;
constexpr double kRootTol = 1e-9;

// Amplitude derivatives come from a small Cauchy circle, which amplifies
// rounding in the node samples by 1/r^2. The k-dependent part of S is therefore
// evaluated in extended precision.
using XComplex = std::complex<long double>;
using XMatrix = Eigen::Matrix<XComplex, Eigen::Dynamic, Eigen::Dynamic>;

XMatrix widen(const CMatrix& m) { return m.cast<XComplex>(); }

XMatrix sigma_extended(const VertexBlocks& b, XComplex k) {
  const int n = b.n();
  const XComplex one{1.0L, 0.0L};
  XMatrix ueff = widen(b.u1);
  if (b.m() > 0) {
    const XMatrix bracket = (one - k) * widen(b.u4) - (k + one) * XMatrix::Identity(b.m(), b.m());
    ueff -= (one - k) * widen(b.u2) * bracket.partialPivLu().solve(widen(b.u3));
  }
  const XMatrix id = XMatrix::Identity(n, n);
  const XMatrix d = (one - k) * ueff - (one + k) * id;
  const XMatrix num = (one + k) * ueff - (one - k) * id;
  return -d.partialPivLu().solve(num);
}

XMatrix scattering_extended(const ResonanceModel& model, XComplex k) {
  const BondSystem& bs = model.bonds();
  const auto sigmas = model.sigmas();
  std::vector<XMatrix> sig(sigmas.size());
  for (std::size_t v = 0; v < sigmas.size(); ++v)
    if (sigmas[v].n() > 0) sig[v] = sigma_extended(sigmas[v].blocks(), k);
  const int nb = bs.bond_count();
  XMatrix s = XMatrix::Zero(nb, nb);
  for (int r = 0; r < nb; ++r) {
    const Bond& via = bs.bond(bs.reverse(r));
    for (int c = 0; c < nb; ++c) {
      const Bond& from = bs.bond(c);
      if (via.head == from.head) s(r, c) = sig[static_cast<std::size_t>(from.head)](via.head_end, from.head_end);
    }
  }
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (!std::isfinite(std::abs(s.data()[i]))) 
      throw PoleError(PoleError::Kind::Sigma, Complex(static_cast<double>(k.real()), static_cast<double>(k.imag())));
  return s;
}

// First and second Taylor coefficients of every term amplitude about k0.
std::vector<std::array<Complex, 2>> amplitude_taylor(const ResonanceModel& model, Complex k0, double radius) {
  const auto& terms = model.terms();
  std::vector<std::array<XComplex, 2>> acc(terms.size(), {XComplex{}, XComplex{}});
  const XComplex center(k0.real(), k0.imag());
  const long double r = radius;
  for (int j = 0; j < kAmplitudeNodes; ++j) {
    const long double theta = 2.0L * std::numbers::pi_v<long double> * j / kAmplitudeNodes;
    const XComplex w(std::cos(theta), std::sin(theta));
    const XMatrix s = scattering_extended(model, center + r * w);
    for (std::size_t t = 0; t < terms.size(); ++t) {
      XComplex a{1.0L, 0.0L};
      for (const auto& [row, col] : terms[t].transitions) a *= s(row, col);
      acc[t][0] += a / w;
      acc[t][1] += a / (w * w);
    }
  }
  std::vector<std::array<Complex, 2>> out(terms.size());
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const XComplex c1 = acc[t][0] / (static_cast<long double>(kAmplitudeNodes) * r);
    const XComplex c2 = acc[t][1] / (static_cast<long double>(kAmplitudeNodes) * r * r);
    out[t] = {Complex(static_cast<double>(c1.real()), static_cast<double>(c1.imag())),
              Complex(static_cast<double>(c2.real()), static_cast<double>(c2.imag()))};
  }
  return out;
}

struct TermData {
  double sign;
  Complex a;
  Complex da;
  Complex d2a;
  double l;
  double ldot;
  double lddot;
  Complex e;
};

std::vector<TermData> term_data(const ResonanceModel& model, const EdgeLengthSchedule& schedule, Complex k0) {
  if (static_cast<int>(schedule.size()) != model.graph().edge_count())
    throw FermiError("schedule has " + std::to_string(schedule.size()) + " edges, graph has " +
                     std::to_string(model.graph().edge_count()));
  const auto& terms = model.terms();
  const double radius = 1e-4 * std::max(1.0, std::abs(k0));
  const auto taylor = amplitude_taylor(model, k0, radius);
  const CMatrix s0 = model.scattering(k0);

  const std::vector<double> l = schedule.base_lengths();
  const std::vector<double> ldot = schedule.rates();
  const std::vector<double> lddot = schedule.accels();

  std::vector<TermData> out;
  out.reserve(terms.size());
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const auto& term = terms[t];
    const auto& c = taylor[t];
    TermData d;
    d.sign = term.sign();
    d.a = term.amplitude(s0);
    d.da = c[0];
    d.d2a = 2.0 * c[1];
    d.l = term.length(std::span<const double>(l));
    d.ldot = term.length(std::span<const double>(ldot));
    d.lddot = term.length(std::span<const double>(lddot));
    d.e = std::exp(kI * k0 * d.l);
    out.push_back(d);
  }
  return out;
}

void require_embedded_root(const std::vector<TermData>& data, Complex k0) {
  if (!(std::abs(k0.imag()) < kRootTol)) throw FermiError("k0 is not real: Im k0 = " + std::to_string(k0.imag()));
  Complex f{};
  double scale = 0.0;
  for (const auto& d : data) {
    f += d.sign * d.a * d.e;
    scale += std::abs(d.a * d.e);
  }
  if (!(std::abs(f) <= kRootTol * scale)) throw FermiError("k0 is not a root of the secular function at t = 0");
}

Complex leading_coefficient(const std::vector<TermData>& data) {
  Complex c{};
  double scale = 0.0;
  for (const auto& d : data) {
    c += (d.l * d.a - kI * d.da) * d.sign * d.e;
    scale += std::abs(d.l * d.a) + std::abs(d.da);
  }
  if (!(std::abs(c) > 1e-12 * scale)) throw FermiError("degenerate eigenvalue: the kdot coefficient vanishes");
  return c;
}

Complex kdot_from(const std::vector<TermData>& data, Complex k0, Complex coefficient) {
  Complex num{};
  for (const auto& d : data) num += d.ldot * d.sign * d.a * d.e;
  return -k0 * num / coefficient;
}

Complex kddot_from(const std::vector<TermData>& data, Complex k, Complex kd, Complex coefficient) {
  Complex first{}, second{}, source{};
  for (const auto& d : data) {
    const Complex w = d.sign * d.e;
    first += (kI * k * d.l * d.ldot * d.a + d.ldot * d.a + k * d.ldot * d.da) * w;
    second += (2.0 * d.l * d.da - kI * d.d2a + kI * d.l * d.l * d.a) * w;
    source += (d.lddot + kI * k * d.ldot * d.ldot) * d.a * w;
  }
  return -(2.0 * kd * first + kd * kd * second + k * source) / coefficient;
}

// F(k, t) with complex t, for Cauchy differentiation in both variables.
Complex moving_secular(const ResonanceModel& model, const EdgeLengthSchedule& schedule, Complex k, Complex t) {
  const auto l = schedule.lengths_at(t);
  return model.cleared(k, std::span<const Complex>(l));
}

Complex local_kdot(const ResonanceModel& model, const EdgeLengthSchedule& schedule, Complex k, double t) {
  const double rk = derivative_radius(k);
  const double rt = 1e-4;
  const Complex fk = cauchy_derivative([&](Complex z) { return moving_secular(model, schedule, z, t); }, k, rk, 32);
  const Complex ft = cauchy_derivative([&](Complex s) { return moving_secular(model, schedule, k, s); }, Complex(t, 0.0), rt, 32);
  if (fk == Complex{}) throw FermiError("trajectory: dF/dk vanishes");
  return -ft / fk;
}

}  // namespace

Complex kdot(const ResonanceModel& model, const EdgeLengthSchedule& schedule, Complex k0) {
  const auto data = term_data(model, schedule, k0);
  require_embedded_root(data, k0);
  return kdot_from(data, k0, leading_coefficient(data));
}

Complex kddot(const ResonanceModel& model, const EdgeLengthSchedule& schedule, Complex k0, Complex kd) {
  const auto data = term_data(model, schedule, k0);
  require_embedded_root(data, k0);
  return kddot_from(data, k0, kd, leading_coefficient(data));
}

FermiExpansion fermi_expansion(const ResonanceModel& model, const EdgeLengthSchedule& schedule, Complex k0) {
  const auto data = term_data(model, schedule, k0);
  require_embedded_root(data, k0);
  FermiExpansion fe;
  fe.k0 = k0;
  fe.coefficient = leading_coefficient(data);
  fe.kdot = kdot_from(data, k0, fe.coefficient);
  fe.kddot = kddot_from(data, k0, fe.kdot, fe.coefficient);
  return fe;
}

CorollaryResult fermi_corollary(const ResonanceModel& model, const EdgeLengthSchedule& schedule, Complex k0) {
  const auto data = term_data(model, schedule, k0);
  for (const auto& d : data)
    if (!(std::abs(d.da) < 1e-10) || !(std::abs(d.a.imag()) < 1e-12))
      throw FermiError("corollary inapplicable: amplitudes are not real and k-independent");
  require_embedded_root(data, k0);

  const double k = k0.real();
  double num = 0.0, lc = 0.0, ls = 0.0;
  for (const auto& d : data) {
    const double a = d.sign * d.a.real();
    num += d.ldot * a * std::cos(k * d.l);
    lc += d.l * a * std::cos(k * d.l);
    ls += d.l * a * std::sin(k * d.l);
  }
  const double den = lc * lc + ls * ls;
  if (lc == 0.0 || den == 0.0) throw FermiError("degenerate eigenvalue: the kdot coefficient vanishes");
  const double kd = -k * num / lc;

  double p1a = 0.0, p1b = 0.0, p1c = 0.0, p2a = 0.0, p2b = 0.0, p2c = 0.0;
  for (const auto& d : data) {
    const double a = d.sign * d.a.real();
    const double c = std::cos(k * d.l);
    const double s = std::sin(k * d.l);
    p1a += (k * d.ldot * d.l * c + d.ldot * s) * a;
    p1b += d.l * d.l * a * c;
    p1c += (k * d.ldot * d.ldot * c + d.lddot * s) * a;
    p2a += (-k * d.ldot * d.l * s + d.ldot * c) * a;
    p2b += d.l * d.l * a * s;
    p2c += (d.lddot * c - k * d.ldot * d.ldot * s) * a;
  }
  const double p1 = 2.0 * kd * p1a + kd * kd * p1b + k * p1c;
  const double p2 = 2.0 * kd * p2a - kd * kd * p2b + k * p2c;

  CorollaryResult r;
  r.kdot = kd;
  r.kddot_im = -lc / den * p1 + ls / den * p2;
  r.kddot_re = -ls / den * p1 - lc / den * p2;
  return r;
}

FermiExpansion fermi_implicit(const ResonanceModel& model, const EdgeLengthSchedule& schedule, Complex k0) {
  if (static_cast<int>(schedule.size()) != model.graph().edge_count()) throw FermiError("schedule does not match the graph");
  const double rk = 1e-3 * std::max(1.0, std::abs(k0));
  const double rt = 1e-3;
  const auto c = taylor_on_torus([&](Complex k, Complex t) { return moving_secular(model, schedule, k, t); }, k0, Complex{},
                                 rk, rt, 32, 2);
  const Complex fk = c[1][0];
  const Complex ft = c[0][1];
  const Complex fkk = 2.0 * c[2][0];
  const Complex ftt = 2.0 * c[0][2];
  const Complex fkt = c[1][1];
  if (fk == Complex{}) throw FermiError("degenerate eigenvalue: dF/dk vanishes");
  FermiExpansion fe;
  fe.k0 = k0;
  fe.coefficient = fk;
  fe.kdot = -ft / fk;
  fe.kddot = -(ftt + 2.0 * fkt * fe.kdot + fkk * fe.kdot * fe.kdot) / fk;
  return fe;
}

std::vector<TrajectoryPoint> trace_trajectory(const ResonanceModel& model, const EdgeLengthSchedule& schedule, Complex k0,
                                              double t_min, double t_max, int steps, const TraceOptions& opts) {
  if (!(t_min <= t_max)) throw FermiError("trajectory needs t_min <= t_max");
  if (steps < 0) throw FermiError("trajectory needs steps >= 0");
  if (static_cast<int>(schedule.size()) != model.graph().edge_count()) throw FermiError("schedule does not match the graph");
  schedule.validate(std::min(t_min, 0.0), std::max(t_max, 0.0));

  std::vector<double> times;
  if (t_min == t_max || steps == 0) {
    times.push_back(t_min);
  } else {
    for (int i = 0; i <= steps; ++i) times.push_back(t_min + (t_max - t_min) * static_cast<double>(i) / steps);
  }

  RootFinderOptions nopts;
  nopts.abs_tol = opts.tol;
  nopts.max_excursion = 1.0;
  auto f_at = [&](double t) {
    SecularFunction f;
    f.variant = SecularVariant::DetCleared;
    const auto l = schedule.lengths_at(t);
    f.eval = [&model, l](Complex k) { return model.cleared(k, std::span<const double>(l)); };
    return f;
  };

  const NewtonResult start = newton_refine(f_at(0.0), k0, nopts);

  // Continue from (t, k) to target, halving the step on a failed correction.
  auto advance = [&](double& t, Complex& k, double target) -> double {
    double h = target - t;
    double residual = 0.0;
    while (t != target) {
      if (std::abs(h) > std::abs(target - t)) h = target - t;
      const Complex kd = local_kdot(model, schedule, k, t);
      const Complex predicted = k + kd * h;
      bool ok = false;
      try {
        const NewtonResult nr = newton_refine(f_at(t + h), predicted, nopts);
        if (std::abs(nr.k - predicted) <= std::max(0.5 * std::abs(h) * (1.0 + std::abs(kd)), 1e-9)) {
          k = nr.k;
          residual = nr.residual;
          ok = true;
        }
      } catch (const RootFinderError&) {
      }
      if (ok) {
        t = (std::abs(target - (t + h)) < 1e-15) ? target : t + h;
        h *= 2.0;
      } else {
        h *= 0.5;
        if (std::abs(h) < opts.min_step) throw FermiError("trajectory lost: step below minimum at t = " + std::to_string(t));
      }
    }
    return residual;
  };

  std::vector<TrajectoryPoint> out(times.size());
  // Forward from t = 0 over non-negative times, then backward over negative ones.
  {
    double t = 0.0;
    Complex k = start.k;
    double residual = start.residual;
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (times[i] < 0.0) continue;
      if (times[i] != t) residual = advance(t, k, times[i]);
      out[i] = TrajectoryPoint{times[i], k, residual};
    }
  }
  {
    double t = 0.0;
    Complex k = start.k;
    double residual = start.residual;
    for (std::size_t i = times.size(); i-- > 0;) {
      if (times[i] >= 0.0) continue;
      residual = advance(t, k, times[i]);
      out[i] = TrajectoryPoint{times[i], k, residual};
    }
  }
  return out;
}

}  // namespace qgraph
