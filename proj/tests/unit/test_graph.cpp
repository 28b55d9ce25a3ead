#include <gtest/gtest.h>

#include "qgraph/fixtures.hpp"
#include "qgraph/graph.hpp"

using namespace qgraph;

namespace {

GraphDescription two_lead_loop_description() {
  GraphDescription d;
  d.vertices = {{"a", Delta{1.0}}, {"b", Delta{1.0}}};
  d.edges = {{"a", "b", 1.0}, {"a", "b", 1.0}};
  d.leads = {{"a"}, {"b"}};
  return d;
}

double max_diff(const CMatrix& a, const CMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST(BuildGraph, CircleWithTwoLeads) {
  const MetricGraph g = MetricGraph::build(two_lead_loop_description());
  EXPECT_EQ(g.edge_count(), 2);
  EXPECT_EQ(g.lead_count(), 2);
  for (const auto& v : g.vertices()) {
    EXPECT_EQ(v.internal_degree, 2);
    EXPECT_EQ(v.lead_count, 1);
    ASSERT_EQ(v.ends.size(), 3u);
    EXPECT_EQ(v.ends[0].kind, EdgeEnd::Kind::Internal);
    EXPECT_EQ(v.ends[1].kind, EdgeEnd::Kind::Internal);
    EXPECT_EQ(v.ends[2].kind, EdgeEnd::Kind::Lead);
  }
}

TEST(BuildGraph, SingleLoopHasDegreeTwo) {
  GraphDescription d;
  d.vertices = {{"v", Neumann{}}};
  d.edges = {{"v", "v", 2.0}};
  const MetricGraph g = MetricGraph::build(d);
  EXPECT_EQ(g.edge_count(), 1);
  EXPECT_EQ(g.lead_count(), 0);
  ASSERT_EQ(g.vertices().size(), 1u);
  const Vertex& v = g.vertices()[0];
  EXPECT_EQ(v.degree(), 2);
  EXPECT_EQ(v.ends[0].side, 0);
  EXPECT_EQ(v.ends[1].side, 1);
}

TEST(BuildGraph, DanglingReferenceIsRejected) {
  GraphDescription d = two_lead_loop_description();
  d.edges.push_back({"a", "missing", 1.0});
  try {
    MetricGraph::build(d);
    FAIL() << "expected GraphError";
  } catch (const GraphError& e) {
    EXPECT_NE(std::string(e.what()).find("dangling reference"), std::string::npos);
  }
  GraphDescription l = two_lead_loop_description();
  l.leads.push_back({"nowhere"});
  EXPECT_THROW(MetricGraph::build(l), GraphError);
}

TEST(BuildGraph, RejectsBadLengthsAndCouplings) {
  GraphDescription d = two_lead_loop_description();
  d.edges[0].length = 0.0;
  EXPECT_THROW(MetricGraph::build(d), GraphError);
  d.edges[0].length = -1.0;
  EXPECT_THROW(MetricGraph::build(d), GraphError);
  d.edges[0].length = std::numeric_limits<double>::infinity();
  EXPECT_THROW(MetricGraph::build(d), GraphError);

  GraphDescription r = two_lead_loop_description();
  r.vertices[0].coupling = Robin{1.0};
  EXPECT_THROW(MetricGraph::build(r), GraphError);

  GraphDescription u = two_lead_loop_description();
  CMatrix m = CMatrix::Identity(3, 3);
  m(0, 1) = 0.5;
  u.vertices[0].coupling = General{m};
  EXPECT_THROW(MetricGraph::build(u), GraphError);
  u.vertices[0].coupling = General{CMatrix::Identity(2, 2)};
  EXPECT_THROW(MetricGraph::build(u), GraphError);
}

TEST(CouplingMatrix, DeltaZeroIsStandard) {
  const CMatrix expected = (2.0 / 3.0) * ones(3) - CMatrix::Identity(3, 3);
  EXPECT_LT(max_diff(coupling_matrix(Delta{0.0}, 3), expected), 1e-15);
  EXPECT_EQ(coupling_matrix(Delta{0.0}, 3), coupling_matrix(Standard{}, 3));
}

TEST(CouplingMatrix, SimpleFamilies) {
  for (int d = 1; d <= 5; ++d) {
    EXPECT_EQ(coupling_matrix(Neumann{}, d), CMatrix::Identity(d, d));
    EXPECT_EQ(coupling_matrix(Dirichlet{}, d), CMatrix(-CMatrix::Identity(d, d)));
  }
  EXPECT_LT(std::abs(coupling_matrix(Robin{0.0}, 1)(0, 0) - Complex(1.0, 0.0)), 1e-15);
  const Complex u3 = -(Complex(3.0, 1.0)) / Complex(3.0, -1.0);
  EXPECT_LT(std::abs(coupling_matrix(Robin{3.0}, 1)(0, 0) - u3), 1e-15);
  EXPECT_THROW(coupling_matrix(Robin{3.0}, 2), GraphError);
}

// Substituting u into (u-1) f + i (u+1) f' = 0 must give f' = alpha f.
TEST(CouplingMatrix, RobinReducesToDerivativeCondition) {
  for (double alpha : {-4.0, -1.0, 0.5, 3.0, 10.0}) {
    const Complex u = coupling_matrix(Robin{alpha}, 1)(0, 0);
    const Complex ratio = -(u - 1.0) / (kI * (u + 1.0));  // f'/f
    EXPECT_NEAR(ratio.real(), alpha, 1e-12);
    EXPECT_NEAR(ratio.imag(), 0.0, 1e-12);
  }
}

TEST(CouplingMatrix, UnitaryForAllFamilies) {
  for (int d = 1; d <= 8; ++d) {
    for (double p = -10.0; p <= 10.0; p += 0.5) {
      EXPECT_LT(unitarity_defect(coupling_matrix(Delta{p}, d)), 1e-12);
      EXPECT_LT(unitarity_defect(coupling_matrix(DeltaPrimeS{p}, d)), 1e-12);
      if (d == 1) EXPECT_LT(unitarity_defect(coupling_matrix(Robin{p}, d)), 1e-12);
    }
    EXPECT_LT(unitarity_defect(coupling_matrix(Standard{}, d)), 1e-12);
  }
}

TEST(CouplingMatrix, DeterministicOutput) {
  const CMatrix a = coupling_matrix(DeltaPrimeS{1.7}, 5);
  const CMatrix b = coupling_matrix(DeltaPrimeS{1.7}, 5);
  EXPECT_EQ(a, b);
}

TEST(GraphFile, ParsesAllCouplingTypes) {
  const char* text = R"({
    "vertices": [
      {"id": "c", "coupling": {"type": "standard"}},
      {"id": 1, "coupling": {"type": "dirichlet"}},
      {"id": "r", "coupling": {"type": "robin", "param": 3}},
      {"id": "g", "coupling": {"type": "general", "matrix": [[[0,0],[1,0]],[[1,0],[0,0]]]}},
      {"id": "d", "coupling": {"type": "delta", "param": 2.5}},
      {"id": "p", "coupling": {"type": "deltaprime", "param": -1}}
    ],
    "edges": [{"a": 1, "b": "c", "length": 1.0}, {"a": "r", "b": "c", "length": 0.5},
              {"a": "g", "b": "d", "length": 2}, {"a": "g", "b": "p", "length": 1.25},
              {"a": "d", "b": "p", "length": 0.75}],
    "leads": [{"vertex": "c"}, "d"]
  })";
  const MetricGraph g = parse_graph(text);
  EXPECT_EQ(g.vertices().size(), 6u);
  EXPECT_EQ(g.edge_count(), 5);
  EXPECT_EQ(g.lead_count(), 2);
  EXPECT_TRUE(std::holds_alternative<Robin>(g.vertices()[2].coupling));
  EXPECT_DOUBLE_EQ(std::get<Delta>(g.vertices()[4].coupling).alpha, 2.5);
  EXPECT_EQ(g.vertex_index("1"), 1);
}

TEST(GraphFile, RejectsMalformedDocuments) {
  EXPECT_THROW(parse_graph("{not json"), GraphError);
  EXPECT_THROW(parse_graph(R"({"vertices": [{"id": "a", "coupling": {"type": "delta"}}], "edges": []})"), GraphError);
  EXPECT_THROW(parse_graph(R"({"vertices": [{"id": "a", "coupling": {"type": "magic"}}], "edges": []})"), GraphError);
  EXPECT_THROW(parse_graph(R"({"vertices": [{"id": "a", "coupling": {"type": "standard"}}],
                              "edges": [{"a": "a", "b": "z", "length": 1}]})"),
               GraphError);
}

TEST(GraphFile, FixturesRoundTrip) {
  for (const auto& name : list_fixtures()) {
    const Fixture f = load_fixture(name);
    const MetricGraph back = parse_graph(graph_to_json(f.graph));
    ASSERT_EQ(back.edge_count(), f.graph.edge_count());
    ASSERT_EQ(back.vertices().size(), f.graph.vertices().size());
    for (std::size_t v = 0; v < back.vertices().size(); ++v) {
      const int d = back.vertices()[v].degree();
      EXPECT_LT(max_diff(coupling_matrix(back.vertices()[v].coupling, d), coupling_matrix(f.graph.vertices()[v].coupling, d)),
                1e-15);
    }
    EXPECT_EQ(back.lengths(), f.graph.lengths());
  }
}

TEST(Schedule, EvaluatesAndValidates) {
  const EdgeLengthSchedule s({{1.0, -1.0, 0.0}, {1.0, 2.0, 4.0}});
  const auto l = s.lengths_at(0.1);
  EXPECT_DOUBLE_EQ(l[0], 0.9);
  EXPECT_DOUBLE_EQ(l[1], 1.0 + 0.2 + 0.02);
  EXPECT_NO_THROW(s.validate(-0.2, 0.2));
  EXPECT_THROW(s.validate(0.0, 1.5), GraphError);
  const EdgeLengthSchedule dip({{1.0, -4.0, 8.0}});  // minimum 0 at t = 0.5
  EXPECT_THROW(dip.validate(0.0, 1.0), GraphError);
  EXPECT_FALSE(s.is_static());
}

TEST(Schedule, ParsesScheduleFile) {
  const MetricGraph g = load_fixture("loop_delta_2").graph;
  const EdgeLengthSchedule s = parse_schedule(R"({"schedule": [{"edge": 1, "rate": 2, "accel": 0.5}]})", g);
  EXPECT_EQ(s.rates(), (std::vector<double>{0.0, 2.0}));
  EXPECT_EQ(s.accels(), (std::vector<double>{0.0, 0.5}));
  EXPECT_EQ(s.base_lengths(), g.lengths());
  EXPECT_THROW(parse_schedule(R"({"schedule": [{"edge": 7, "rate": 1}]})", g), GraphError);
}
