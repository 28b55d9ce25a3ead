#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qgraph/graph.hpp"
#include "qgraph/secular.hpp"

namespace qgraph {

/// Named reference graph with its edge-length schedule and, when it has one,
/// the embedded eigenvalue k0 at t = 0.
struct Fixture {
  std::string name;
  std::string alias;
  std::string source;
  MetricGraph graph;
  EdgeLengthSchedule schedule;
  std::optional<double> k0;
  std::string closed_form;  ///< name accepted by closed_form_condition
  ClosedFormParams params;
};

/// Canonical names: loop_delta_sym (alias fig1), cross_robin (alias fig9),
/// loop_delta_2, loop_deltaprime, loop_mixed. Throws FixtureError otherwise.
Fixture load_fixture(std::string_view name);
const std::vector<std::string>& list_fixtures();

/// Two vertices "left" and "right" joined by two edges (x=0 at "left"), one
/// lead at each vertex.
MetricGraph make_two_lead_loop(const VertexCoupling& left, const VertexCoupling& right, double l1, double l2);

/// Standard-coupled center with two leads; edge 0 ends in a Dirichlet vertex,
/// edge 1 in a Robin(alpha) vertex.
MetricGraph make_cross(double alpha, double l1, double l2);

/// Length of the Robin edge for which k = n pi / l1 is an embedded eigenvalue
/// of the cross: cot(k l2) = -alpha / k, taking the m-th positive branch.
double cross_embedded_length(double alpha, double l1, int n = 1, int m = 1);

}  // namespace qgraph
