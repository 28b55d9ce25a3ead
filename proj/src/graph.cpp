#include "qgraph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qgraph {

using nlohmann::json;

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GraphError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string id_of(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw GraphError("vertex id must be a string or an integer");
}

double require_number(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw GraphError(std::string("missing numeric field '") + key + "'");
  return j.at(key).get<double>();
}

CMatrix parse_matrix(const json& j) {
  if (!j.is_array() || j.empty()) throw GraphError("general coupling needs a non-empty 'matrix'");
  auto parse_entry = [](const json& e) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      throw GraphError("matrix entries must be [re, im] pairs");
    return Complex(e[0].get<double>(), e[1].get<double>());
  };
  std::vector<Complex> flat;
  const bool nested = j[0].is_array() && !j[0].empty() && j[0][0].is_array();
  if (nested) {
    for (const auto& row : j) {
      if (row.size() != j.size()) throw GraphError("general coupling matrix must be square");
      for (const auto& e : row) flat.push_back(parse_entry(e));
    }
  } else {
    for (const auto& e : j) flat.push_back(parse_entry(e));
  }
  const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(flat.size()))));
  if (d * d != static_cast<Eigen::Index>(flat.size())) throw GraphError("general coupling matrix must be square");
  CMatrix m(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) m(r, c) = flat[static_cast<std::size_t>(r * d + c)];
  return m;
}

VertexCoupling parse_coupling(const json& j) {
  if (!j.is_object() || !j.contains("type")) throw GraphError("coupling needs a 'type'");
  std::string type = j.at("type").get<std::string>();
  std::transform(type.begin(), type.end(), type.begin(), [](unsigned char c) { return std::tolower(c); });
  if (type == "standard" || type == "kirchhoff") return Standard{};
  if (type == "delta") return Delta{require_number(j, "param")};
  if (type == "deltaprime" || type == "delta_prime_s" || type == "deltaprimes") return DeltaPrimeS{require_number(j, "param")};
  if (type == "dirichlet") return Dirichlet{};
  if (type == "neumann") return Neumann{};
  if (type == "robin") return Robin{require_number(j, "param")};
  if (type == "general") {
    if (!j.contains("matrix")) throw GraphError("general coupling needs a 'matrix'");
    return General{parse_matrix(j.at("matrix"))};
  }
  throw GraphError("unknown coupling type '" + type + "'");
}

json coupling_to_json(const VertexCoupling& c) {
  return std::visit(Overloaded{
                        [](const Standard&) { return json{{"type", "standard"}}; },
                        [](const Delta& d) { return json{{"type", "delta"}, {"param", d.alpha}}; },
                        [](const DeltaPrimeS& d) { return json{{"type", "deltaprime"}, {"param", d.beta}}; },
                        [](const Dirichlet&) { return json{{"type", "dirichlet"}}; },
                        [](const Neumann&) { return json{{"type", "neumann"}}; },
                        [](const Robin& r) { return json{{"type", "robin"}, {"param", r.alpha}}; },
                        [](const General& g) {
                          json rows = json::array();
                          for (Eigen::Index r = 0; r < g.matrix.rows(); ++r) {
                            json row = json::array();
                            for (Eigen::Index c = 0; c < g.matrix.cols(); ++c)
                              row.push_back({g.matrix(r, c).real(), g.matrix(r, c).imag()});
                            rows.push_back(row);
                          }
                          return json{{"type", "general"}, {"matrix", rows}};
                        },
                    },
                    c);
}

}  // namespace

std::string coupling_name(const VertexCoupling& c) {
  return std::visit(Overloaded{
                        [](const Standard&) { return std::string("standard"); },
                        [](const Delta&) { return std::string("delta"); },
                        [](const DeltaPrimeS&) { return std::string("deltaprime"); },
                        [](const Dirichlet&) { return std::string("dirichlet"); },
                        [](const Neumann&) { return std::string("neumann"); },
                        [](const Robin&) { return std::string("robin"); },
                        [](const General&) { return std::string("general"); },
                    },
                    c);
}

CMatrix coupling_matrix(const VertexCoupling& c, int degree) {
  if (degree < 1) throw GraphError("coupling matrix needs degree >= 1");
  const Eigen::Index d = degree;
  const CMatrix id = CMatrix::Identity(d, d);
  const Complex dd(static_cast<double>(degree), 0.0);
  return std::visit(Overloaded{
                        [&](const Standard&) -> CMatrix { return (2.0 / dd) * ones(d) - id; },
                        [&](const Delta& x) -> CMatrix { return (2.0 / (dd + kI * x.alpha)) * ones(d) - id; },
                        [&](const DeltaPrimeS& x) -> CMatrix { return id - (2.0 / (dd - kI * x.beta)) * ones(d); },
                        [&](const Dirichlet&) -> CMatrix { return -id; },
                        [&](const Neumann&) -> CMatrix { return id; },
                        [&](const Robin& x) -> CMatrix {
                          if (degree != 1) throw GraphError("Robin coupling requires a vertex of degree 1");
                          CMatrix u(1, 1);
                          u(0, 0) = -(x.alpha + kI) / (x.alpha - kI);
                          return u;
                        },
                        [&](const General& x) -> CMatrix {
                          if (x.matrix.rows() != d || x.matrix.cols() != d)
                            throw GraphError("general coupling matrix size does not match vertex degree");
                          return x.matrix;
                        },
                    },
                    c);
}

MetricGraph MetricGraph::build(const GraphDescription& description) {
  MetricGraph g;
  for (const auto& v : description.vertices) {
    if (g.vertex_index(v.id) >= 0) throw GraphError("duplicate vertex id '" + v.id + "'");
    g.vertices_.push_back(Vertex{v.id, v.coupling, {}, 0, 0});
  }
  auto resolve = [&](const std::string& id) {
    const int idx = g.vertex_index(id);
    if (idx < 0) throw GraphError("dangling reference to vertex '" + id + "'");
    return idx;
  };
  for (const auto& e : description.edges) {
    if (!std::isfinite(e.length) || e.length <= 0.0)
      throw GraphError("edge length must be positive and finite");
    g.edges_.push_back(Edge{resolve(e.a), resolve(e.b), e.length});
  }
  for (const auto& l : description.leads) g.leads_.push_back(Lead{resolve(l.vertex)});

  for (int j = 0; j < g.edge_count(); ++j) {
    const Edge& e = g.edges_[static_cast<std::size_t>(j)];
    g.vertices_[static_cast<std::size_t>(e.a)].ends.push_back({EdgeEnd::Kind::Internal, j, 0});
    g.vertices_[static_cast<std::size_t>(e.b)].ends.push_back({EdgeEnd::Kind::Internal, j, 1});
  }
  for (auto& v : g.vertices_) v.internal_degree = static_cast<int>(v.ends.size());
  for (int s = 0; s < g.lead_count(); ++s) {
    auto& v = g.vertices_[static_cast<std::size_t>(g.leads_[static_cast<std::size_t>(s)].vertex)];
    v.ends.push_back({EdgeEnd::Kind::Lead, s, 0});
    ++v.lead_count;
  }

  for (const auto& v : g.vertices_) {
    if (std::holds_alternative<Robin>(v.coupling) && v.degree() != 1)
      throw GraphError("Robin coupling at vertex '" + v.id + "' of degree " + std::to_string(v.degree()));
    if (const auto* gen = std::get_if<General>(&v.coupling)) {
      if (gen->matrix.rows() != v.degree() || gen->matrix.cols() != v.degree())
        throw GraphError("general coupling at vertex '" + v.id + "' does not match its degree");
      if (unitarity_defect(gen->matrix) >= 1e-12)
        throw GraphError("general coupling at vertex '" + v.id + "' is not unitary");
    }
  }
  return g;
}

int MetricGraph::vertex_index(std::string_view id) const {
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    if (vertices_[i].id == id) return static_cast<int>(i);
  return -1;
}

std::vector<double> MetricGraph::lengths() const {
  std::vector<double> out;
  out.reserve(edges_.size());
  for (const auto& e : edges_) out.push_back(e.length);
  return out;
}

MetricGraph MetricGraph::with_lengths(std::span<const double> lengths) const {
  if (lengths.size() != edges_.size()) throw GraphError("length vector size mismatch");
  GraphDescription d = description();
  for (std::size_t j = 0; j < lengths.size(); ++j) d.edges[j].length = lengths[j];
  return build(d);
}

MetricGraph MetricGraph::with_couplings(const std::function<VertexCoupling(const Vertex&)>& replace) const {
  GraphDescription d = description();
  for (std::size_t i = 0; i < vertices_.size(); ++i) d.vertices[i].coupling = replace(vertices_[i]);
  return build(d);
}

GraphDescription MetricGraph::description() const {
  GraphDescription d;
  for (const auto& v : vertices_) d.vertices.push_back({v.id, v.coupling});
  for (const auto& e : edges_)
    d.edges.push_back({vertices_[static_cast<std::size_t>(e.a)].id, vertices_[static_cast<std::size_t>(e.b)].id, e.length});
  for (const auto& l : leads_) d.leads.push_back({vertices_[static_cast<std::size_t>(l.vertex)].id});
  return d;
}

MetricGraph parse_graph(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw GraphError(std::string("graph document does not parse: ") + e.what());
  }
  GraphDescription d;
  try {
    for (const auto& v : doc.at("vertices")) {
      VertexCoupling c = v.contains("coupling") ? parse_coupling(v.at("coupling")) : VertexCoupling{Standard{}};
      d.vertices.push_back({id_of(v.at("id")), std::move(c)});
    }
    if (doc.contains("edges"))
      for (const auto& e : doc.at("edges")) d.edges.push_back({id_of(e.at("a")), id_of(e.at("b")), require_number(e, "length")});
    if (doc.contains("leads"))
      for (const auto& l : doc.at("leads")) d.leads.push_back({id_of(l.is_object() ? l.at("vertex") : l)});
  } catch (const json::exception& e) {
    throw GraphError(std::string("malformed graph document: ") + e.what());
  }
  return MetricGraph::build(d);
}

MetricGraph load_graph_file(const std::string& path) { return parse_graph(read_file(path)); }

std::string graph_to_json(const MetricGraph& g) {
  json doc;
  doc["vertices"] = json::array();
  for (const auto& v : g.vertices()) doc["vertices"].push_back({{"id", v.id}, {"coupling", coupling_to_json(v.coupling)}});
  doc["edges"] = json::array();
  for (const auto& e : g.edges())
    doc["edges"].push_back({{"a", g.vertices()[static_cast<std::size_t>(e.a)].id},
                            {"b", g.vertices()[static_cast<std::size_t>(e.b)].id},
                            {"length", e.length}});
  doc["leads"] = json::array();
  for (const auto& l : g.leads()) doc["leads"].push_back({{"vertex", g.vertices()[static_cast<std::size_t>(l.vertex)].id}});
  return doc.dump(2);
}

EdgeLengthSchedule::EdgeLengthSchedule(std::vector<EdgeMotion> motions) : motions_(std::move(motions)) {
  for (const auto& m : motions_)
    if (!std::isfinite(m.length) || m.length <= 0.0 || !std::isfinite(m.rate) || !std::isfinite(m.accel))
      throw GraphError("schedule needs positive finite base lengths and finite rates");
}

EdgeLengthSchedule EdgeLengthSchedule::constant(const MetricGraph& g) {
  std::vector<EdgeMotion> m;
  for (const auto& e : g.edges()) m.push_back({e.length, 0.0, 0.0});
  return EdgeLengthSchedule(std::move(m));
}

std::vector<double> EdgeLengthSchedule::lengths_at(double t) const {
  std::vector<double> out;
  out.reserve(motions_.size());
  for (const auto& m : motions_) out.push_back(m.length + m.rate * t + 0.5 * m.accel * t * t);
  return out;
}

std::vector<Complex> EdgeLengthSchedule::lengths_at(Complex t) const {
  std::vector<Complex> out;
  out.reserve(motions_.size());
  for (const auto& m : motions_) out.push_back(m.length + m.rate * t + 0.5 * m.accel * t * t);
  return out;
}

std::vector<double> EdgeLengthSchedule::base_lengths() const { return lengths_at(0.0); }

std::vector<double> EdgeLengthSchedule::rates() const {
  std::vector<double> out;
  for (const auto& m : motions_) out.push_back(m.rate);
  return out;
}

std::vector<double> EdgeLengthSchedule::accels() const {
  std::vector<double> out;
  for (const auto& m : motions_) out.push_back(m.accel);
  return out;
}

bool EdgeLengthSchedule::is_static() const {
  return std::all_of(motions_.begin(), motions_.end(), [](const EdgeMotion& m) { return m.rate == 0.0 && m.accel == 0.0; });
}

void EdgeLengthSchedule::validate(double t_min, double t_max) const {
  for (std::size_t j = 0; j < motions_.size(); ++j) {
    const auto& m = motions_[j];
    // Minimum of the quadratic over the interval: endpoints or the vertex.
    std::vector<double> probes{t_min, t_max};
    if (m.accel != 0.0) {
      const double tv = -m.rate / m.accel;
      if (tv > t_min && tv < t_max) probes.push_back(tv);
    }
    for (double t : probes)
      if (m.length + m.rate * t + 0.5 * m.accel * t * t <= 0.0)
        throw GraphError("edge " + std::to_string(j) + " length becomes non-positive on the schedule interval");
  }
}

EdgeLengthSchedule parse_schedule(std::string_view json_text, const MetricGraph& g) {
  std::vector<EdgeMotion> motions;
  for (const auto& e : g.edges()) motions.push_back({e.length, 0.0, 0.0});
  try {
    const json doc = json::parse(json_text);
    for (const auto& item : doc.at("schedule")) {
      const int edge = item.at("edge").get<int>();
      if (edge < 0 || edge >= g.edge_count()) throw GraphError("schedule references a missing edge");
      auto& m = motions[static_cast<std::size_t>(edge)];
      if (item.contains("rate")) m.rate = item.at("rate").get<double>();
      if (item.contains("accel")) m.accel = item.at("accel").get<double>();
    }
  } catch (const json::exception& e) {
    throw GraphError(std::string("malformed schedule document: ") + e.what());
  }
  return EdgeLengthSchedule(std::move(motions));
}

EdgeLengthSchedule load_schedule_file(const std::string& path, const MetricGraph& g) {
  return parse_schedule(read_file(path), g);
}

}  // namespace qgraph
