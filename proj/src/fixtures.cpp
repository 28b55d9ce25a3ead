#include "qgraph/fixtures.hpp"

#include <cmath>

namespace qgraph {

MetricGraph make_two_lead_loop(const VertexCoupling& left, const VertexCoupling& right, double l1, double l2) {
  GraphDescription d;
  d.vertices = {{"left", left}, {"right", right}};
  d.edges = {{"left", "right", l1}, {"left", "right", l2}};
  d.leads = {{"left"}, {"right"}};
  return MetricGraph::build(d);
}

MetricGraph make_cross(double alpha, double l1, double l2) {
  GraphDescription d;
  d.vertices = {{"center", Standard{}}, {"dirichlet", Dirichlet{}}, {"robin", Robin{alpha}}};
  d.edges = {{"dirichlet", "center", l1}, {"robin", "center", l2}};
  d.leads = {{"center"}, {"center"}};
  return MetricGraph::build(d);
}

double cross_embedded_length(double alpha, double l1, int n, int m) {
  const double k = n * kPi / l1;
  return (m * kPi - std::atan(k / alpha)) / k;
}

const std::vector<std::string>& list_fixtures() {
  static const std::vector<std::string> names{"loop_delta_sym", "cross_robin", "loop_delta_2", "loop_deltaprime", "loop_mixed"};
  return names;
}

Fixture load_fixture(std::string_view name) {
  Fixture f;
  if (name == "loop_delta_sym" || name == "fig1") {
    f.name = "loop_delta_sym";
    f.alias = "fig1";
    f.source = "circle with two leads, delta(10) at both vertices, l1=1-t, l2=1+2t, k0=2pi";
    f.graph = make_two_lead_loop(Delta{10.0}, Delta{10.0}, 1.0, 1.0);
    f.schedule = EdgeLengthSchedule({{1.0, -1.0, 0.0}, {1.0, 2.0, 0.0}});
    f.k0 = 2.0 * kPi;
    f.closed_form = "loop_delta_sym";
    f.params.alpha1 = f.params.alpha2 = 10.0;
  } else if (name == "cross_robin" || name == "fig9") {
    const double l2 = cross_embedded_length(3.0, 1.0);
    f.name = "cross_robin";
    f.alias = "fig9";
    f.source = "cross-shaped resonator, standard center with two leads, Dirichlet and Robin(3) ends, l1=1-t, l2=0.74266+t, k0=pi";
    f.graph = make_cross(3.0, 1.0, l2);
    f.schedule = EdgeLengthSchedule({{1.0, -1.0, 0.0}, {l2, 1.0, 0.0}});
    f.k0 = kPi;
    f.closed_form = "cross_robin";
    f.params.alpha1 = 3.0;
    f.params.l2 = l2;
  } else if (name == "loop_delta_2") {
    f.name = "loop_delta_2";
    f.source = "loop with two leads, delta(1) at both vertices, l1=l2=1";
    f.graph = make_two_lead_loop(Delta{1.0}, Delta{1.0}, 1.0, 1.0);
    f.closed_form = "loop_delta_2";
    f.params.alpha1 = f.params.alpha2 = 1.0;
  } else if (name == "loop_deltaprime") {
    f.name = "loop_deltaprime";
    f.source = "loop with two leads, delta'_s(1) at both vertices, l1=l2=1";
    f.graph = make_two_lead_loop(DeltaPrimeS{1.0}, DeltaPrimeS{1.0}, 1.0, 1.0);
    f.closed_form = "loop_deltaprime";
    f.params.beta1 = f.params.beta2 = 1.0;
  } else if (name == "loop_mixed") {
    f.name = "loop_mixed";
    f.source = "loop with two leads, delta(1) left and delta'_s(1) right, l1=1, l2=1.2137";
    f.graph = make_two_lead_loop(Delta{1.0}, DeltaPrimeS{1.0}, 1.0, 1.2137);
    f.closed_form = "loop_mixed";
    f.params.alpha1 = 1.0;
    f.params.beta2 = 1.0;
    f.params.l2 = 1.2137;
  } else {
    throw FixtureError("unknown fixture '" + std::string(name) + "'");
  }
  if (f.schedule.size() == 0) f.schedule = EdgeLengthSchedule::constant(f.graph);
  return f;
}

}  // namespace qgraph
