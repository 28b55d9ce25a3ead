#include <gtest/gtest.h>

#include <random>

#include "qgraph/fermi.hpp"
#include "qgraph/fixtures.hpp"

using namespace qgraph;

namespace {

struct Printed {
  double kdot, re_kddot, im_kddot;
};

// Closed forms printed for the circle with two delta(alpha) leads, l1 = l2 = l.
Printed printed_delta_loop(double a, double l, double k, double l1d, double l2d, double l1dd, double l2dd) {
  const double kd = -(l1d + l2d) * k / (2.0 * l);
  const double pre = -1.0 / (2.0 * k * l * (a * a + k * k));
  const double re = pre * (kd * k * (l1d + l2d) * (a * a * a * l + 4 * a * a + 6 * k * k - 3 * k * k * a * l) +
                           kd * kd * (a * a * a * l * l + 4 * a * a * l - 3 * k * k * a * l * l + 8 * k * k * l) +
                           (l1dd + l2dd) * k * k * (a * a + k * k) - (l1d * l1d + l2d * l2d) * k * k * k * k * a +
                           l1d * l2d * k * k * a * (a * a - k * k));
  const double im = pre * (kd * k * k * (l1d + l2d) * (7 * a * a * l + 3 * k * k * l - 2 * a) +
                           kd * kd * k * (7 * a * a * l * l + 3 * k * k * l * l - 4 * a * l) +
                           (l1d * l1d + l2d * l2d) * k * k * k * (2 * a * a + k * k) + l1d * l2d * k * k * k * (3 * a * a + k * k));
  return {kd, re, im};
}

ResonanceModel model_of(const Fixture& f) { return ResonanceModel(f.graph.with_lengths(f.schedule.base_lengths())); }

MetricGraph neumann_pair(double l1, double l2) {
  GraphDescription d;
  d.vertices = {{"a", Neumann{}}, {"b", Neumann{}}};
  d.edges = {{"a", "b", l1}, {"a", "b", l2}};
  d.leads = {{"a"}};
  return MetricGraph::build(d);
}

}  // namespace

TEST(Kdot, DeltaLoopFigure) {
  const Fixture f = load_fixture("fig1");
  const Complex kd = kdot(model_of(f), f.schedule, 2.0 * kPi);
  EXPECT_NEAR(kd.real(), -kPi, 1e-9);
  EXPECT_LT(std::abs(kd.imag()), 1e-8);
}

TEST(Kdot, DeltaLoopPrintedFormulaRandomSchedules) {
  const Fixture f = load_fixture("fig1");
  const ResonanceModel m = model_of(f);
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 10; ++i) {
    const double r1 = u(rng), r2 = u(rng), a1 = u(rng), a2 = u(rng);
    const EdgeLengthSchedule s({{1.0, r1, a1}, {1.0, r2, a2}});
    const FermiExpansion fe = fermi_expansion(m, s, 2.0 * kPi);
    const Printed p = printed_delta_loop(10.0, 1.0, 2.0 * kPi, r1, r2, a1, a2);
    EXPECT_NEAR(fe.kdot.real(), p.kdot, 1e-9);
    EXPECT_NEAR(fe.kddot.real(), p.re_kddot, 1e-6 * (1.0 + std::abs(p.re_kddot)));
    EXPECT_NEAR(fe.kddot.imag(), p.im_kddot, 1e-6 * (1.0 + std::abs(p.im_kddot)));
  }
}

TEST(Kddot, DeltaLoopFigureMatchesPrintedClosedForm) {
  const Fixture f = load_fixture("fig1");
  const FermiExpansion fe = fermi_expansion(model_of(f), f.schedule, 2.0 * kPi);
  const Printed p = printed_delta_loop(10.0, 1.0, 2.0 * kPi, -1.0, 2.0, 0.0, 0.0);
  EXPECT_NEAR(fe.kddot.real(), p.re_kddot, 1e-6);
  EXPECT_NEAR(fe.kddot.imag(), p.im_kddot, 1e-6);
  EXPECT_NEAR(fe.kddot.imag(), -44.41, 0.01);
}

TEST(Kdot, StaticScheduleGivesZero) {
  const Fixture f = load_fixture("fig1");
  const EdgeLengthSchedule s = EdgeLengthSchedule::constant(f.graph);
  const FermiExpansion fe = fermi_expansion(model_of(f), s, 2.0 * kPi);
  EXPECT_EQ(std::abs(fe.kdot), 0.0);
  EXPECT_EQ(std::abs(fe.kddot), 0.0);
}

TEST(Kdot, CrossFigure) {
  const Fixture f = load_fixture("fig9");
  const FermiExpansion fe = fermi_expansion(model_of(f), f.schedule, kPi);
  EXPECT_LT(std::abs(fe.kdot), 1e-8);
  EXPECT_LT(std::abs(fe.kddot.real()), 1e-6);
  // Independent dense-matrix prototype value.
  EXPECT_NEAR(fe.kddot.imag(), -20.7601, 1e-3);
  EXPECT_NEAR(fe.kddot.imag(), -20.76, 0.01);
}

TEST(Kdot, ImplicitDifferentiationAgrees) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (const char* name : {"fig1", "fig9"}) {
    const Fixture f = load_fixture(name);
    const ResonanceModel m = model_of(f);
    for (int i = 0; i < 4; ++i) {
      std::vector<EdgeMotion> motion = f.schedule.motions();
      if (i > 0)
        for (auto& e : motion) {
          e.rate = u(rng);
          e.accel = u(rng);
        }
      const EdgeLengthSchedule s(motion);
      const FermiExpansion a = fermi_expansion(m, s, *f.k0);
      const FermiExpansion b = fermi_implicit(m, s, *f.k0);
      EXPECT_LE(std::abs(a.kdot - b.kdot), 1e-8 * (1.0 + std::abs(a.kdot))) << name;
      EXPECT_LE(std::abs(a.kddot - b.kddot), 1e-8 * (1.0 + std::abs(a.kddot))) << name;
    }
  }
}

TEST(Kdot, RealForEmbeddedEigenvalues) {
  for (const char* name : {"fig1", "fig9"}) {
    const Fixture f = load_fixture(name);
    EXPECT_LT(std::abs(kdot(model_of(f), f.schedule, *f.k0).imag()), 1e-8) << name;
  }
}

TEST(Kdot, RefusesNonRoots) {
  const Fixture f = load_fixture("fig1");
  EXPECT_THROW(kdot(model_of(f), f.schedule, 2.0 * kPi + 0.1), FermiError);
  EXPECT_THROW(kdot(model_of(f), f.schedule, Complex(2.0 * kPi, -0.1)), FermiError);
  EXPECT_THROW(kdot(model_of(f), EdgeLengthSchedule({{1.0, 1.0, 0.0}}), 2.0 * kPi), FermiError);
}

TEST(Kdot, DegenerateEigenvalueIsAnError) {
  const MetricGraph g = neumann_pair(1.0, 1.0);  // pi is a double root
  EXPECT_THROW(kdot(ResonanceModel(g), EdgeLengthSchedule({{1.0, 1.0, 0.0}, {1.0, 0.0, 0.0}}), kPi), FermiError);
}

TEST(Corollary, StandardLoopMatchesGeneralRule) {
  const MetricGraph g = make_two_lead_loop(Standard{}, Standard{}, 1.0, 1.0);
  const ResonanceModel m(g);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (const double k0 : {kPi, 2.0 * kPi, 3.0 * kPi}) {
    for (int i = 0; i < 3; ++i) {
      const EdgeLengthSchedule s({{1.0, u(rng), u(rng)}, {1.0, u(rng), u(rng)}});
      const CorollaryResult c = fermi_corollary(m, s, k0);
      const FermiExpansion fe = fermi_expansion(m, s, k0);
      EXPECT_NEAR(c.kdot, fe.kdot.real(), 1e-9);
      EXPECT_NEAR(c.kddot_re, fe.kddot.real(), 1e-9 * (1.0 + std::abs(c.kddot_re)));
      EXPECT_NEAR(c.kddot_im, fe.kddot.imag(), 1e-9 * (1.0 + std::abs(c.kddot_im)));
    }
  }
}

TEST(Corollary, DeltaCouplingIsInapplicable) {
  const Fixture f = load_fixture("fig1");
  try {
    fermi_corollary(model_of(f), f.schedule, 2.0 * kPi);
    FAIL() << "expected FermiError";
  } catch (const FermiError& e) {
    EXPECT_NE(std::string(e.what()).find("corollary inapplicable"), std::string::npos);
  }
}

TEST(Corollary, DecoupledNeumannEdge) {
  const double l = 1.5, rate = 0.3;
  const MetricGraph g = neumann_pair(l, 1.0);
  const double k0 = 2.0 * kPi / l;
  const EdgeLengthSchedule s({{l, rate, 0.0}, {1.0, 0.0, 0.0}});
  const CorollaryResult c = fermi_corollary(ResonanceModel(g), s, k0);
  EXPECT_NEAR(c.kdot, -k0 * rate / l, 1e-12);
  EXPECT_NEAR(kdot(ResonanceModel(g), s, k0).real(), -k0 * rate / l, 1e-10);
  // k(t) = 2 pi / (l + rate t) exactly, so kddot = 2 k0 rate^2 / l^2.
  EXPECT_NEAR(c.kddot_re, 2.0 * k0 * rate * rate / (l * l), 1e-10);
  EXPECT_NEAR(c.kddot_im, 0.0, 1e-10);
}

TEST(Trajectory, ZeroWidthRange) {
  const Fixture f = load_fixture("fig1");
  const auto pts = trace_trajectory(model_of(f), f.schedule, *f.k0, 0.0, 0.0, 10);
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_LT(std::abs(pts[0].k - 2.0 * kPi), 1e-12);
}

TEST(Trajectory, FollowsTaylorModel) {
  const Fixture f = load_fixture("fig1");
  const ResonanceModel m = model_of(f);
  const FermiExpansion fe = fermi_expansion(m, f.schedule, *f.k0);
  const auto pts = trace_trajectory(m, f.schedule, *f.k0, -0.2, 0.2, 400);
  ASSERT_EQ(pts.size(), 401u);
  for (const auto& p : pts) {
    EXPECT_LE(p.residual, 1e-10);
    EXPECT_LE(p.k.imag(), 1e-9);
    if (std::abs(std::abs(p.t) - 0.05) < 1e-12) {
      const Complex taylor = fe.k0 + p.t * fe.kdot + 0.5 * p.t * p.t * fe.kddot;
      EXPECT_LT(std::abs(p.k - taylor), 0.2 * 0.5 * p.t * p.t * std::abs(fe.kddot)) << "t=" << p.t;
    }
  }
}

TEST(Trajectory, FiniteDifferencesReproduceDerivatives) {
  for (const char* name : {"fig1", "fig9"}) {
    const Fixture f = load_fixture(name);
    const ResonanceModel m = model_of(f);
    const FermiExpansion fe = fermi_expansion(m, f.schedule, *f.k0);
    double err1[2], err2[2];
    const double hs[2] = {1e-3, 1e-4};
    for (int i = 0; i < 2; ++i) {
      const double h = hs[i];
      const auto pts = trace_trajectory(m, f.schedule, *f.k0, -h, h, 2);
      const Complex d1 = (pts[2].k - pts[0].k) / (2.0 * h);
      const Complex d2 = (pts[2].k - 2.0 * pts[1].k + pts[0].k) / (h * h);
      err1[i] = std::abs(d1 - fe.kdot);
      err2[i] = std::abs(d2 - fe.kddot);
    }
    EXPECT_LT(err1[0], 1e-4) << name;
    EXPECT_LT(err2[0], 1e-2) << name;
    EXPECT_GE(err1[0] / err1[1], 50.0) << name;
    EXPECT_GE(err2[0] / err2[1], 50.0) << name;
  }
}

TEST(Trajectory, LengthsMustStayPositive) {
  const Fixture f = load_fixture("fig1");
  EXPECT_THROW(trace_trajectory(model_of(f), f.schedule, *f.k0, -0.2, 1.5, 10), GraphError);
}
