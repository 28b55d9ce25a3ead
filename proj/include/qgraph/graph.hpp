#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qgraph/linalg.hpp"

namespace qgraph {

// Vertex coupling families. All of them are stored as the unitary matrix U of
// the condition (U - I) psi + i (U + I) psi' = 0, see coupling_matrix().
struct Standard {};
struct Delta {
  double alpha = 0.0;
};
struct DeltaPrimeS {
  double beta = 0.0;
};
struct Dirichlet {};
struct Neumann {};
/// f'(0) = alpha f(0) at a degree-one vertex.
struct Robin {
  double alpha = 0.0;
};
struct General {
  CMatrix matrix;
};

using VertexCoupling = std::variant<Standard, Delta, DeltaPrimeS, Dirichlet, Neumann, Robin, General>;

std::string coupling_name(const VertexCoupling& c);

/// Unitary d x d coupling matrix of a vertex of degree d.
///   delta       2/(d + i alpha) J - I
///   delta'_s    I - 2/(d - i beta) J
///   standard    2/d J - I
///   Dirichlet   -I,  Neumann  I
///   Robin       -(alpha + i)/(alpha - i), d = 1 only
/// Throws GraphError for Robin with d != 1, d < 1, or a General matrix of the
/// wrong size.
CMatrix coupling_matrix(const VertexCoupling& c, int degree);

/// One slot of the vertex-local ordering: internal edge ends come first (in
/// edge order, a loop contributing its x=0 end then its x=l end), leads last.
struct EdgeEnd {
  enum class Kind { Internal, Lead };
  Kind kind = Kind::Internal;
  int index = 0;  ///< edge or lead index
  int side = 0;   ///< 0: the x=0 end of the edge, 1: the x=l end; always 0 for leads
};

struct Vertex {
  std::string id;
  VertexCoupling coupling;
  std::vector<EdgeEnd> ends;
  int internal_degree = 0;
  int lead_count = 0;

  int degree() const { return internal_degree + lead_count; }
};

/// Internal edge parametrised by (0, length), x=0 at vertex a.
struct Edge {
  int a = 0;
  int b = 0;
  double length = 1.0;
};

struct Lead {
  int vertex = 0;
};

/// Unvalidated graph description, vertices referenced by id.
struct GraphDescription {
  struct VertexSpec {
    std::string id;
    VertexCoupling coupling;
  };
  struct EdgeSpec {
    std::string a;
    std::string b;
    double length = 1.0;
  };
  struct LeadSpec {
    std::string vertex;
  };

  std::vector<VertexSpec> vertices;
  std::vector<EdgeSpec> edges;
  std::vector<LeadSpec> leads;
};

/// Validated, immutable metric graph with leads. Units hbar = 2m = 1; lengths
/// and wave numbers are dimensionless.
class MetricGraph {
public:
  /// Throws GraphError on dangling references, non-positive or non-finite
  /// lengths, Robin at a vertex of degree != 1, or a non-unitary General matrix.
  static MetricGraph build(const GraphDescription& description);

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Lead>& leads() const { return leads_; }

  int edge_count() const { return static_cast<int>(edges_.size()); }
  int lead_count() const { return static_cast<int>(leads_.size()); }
  int vertex_index(std::string_view id) const;

  std::vector<double> lengths() const;

  /// Same graph with new internal edge lengths.
  MetricGraph with_lengths(std::span<const double> lengths) const;

  /// Same graph with every vertex coupling replaced by `replace(vertex)`.
  MetricGraph with_couplings(const std::function<VertexCoupling(const Vertex&)>& replace) const;

  GraphDescription description() const;

private:
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<Lead> leads_;
};

/// Parses the JSON graph document:
///   {"vertices": [{"id": .., "coupling": {"type": .., "param": .., "matrix": ..}}],
///    "edges": [{"a": .., "b": .., "length": ..}], "leads": [{"vertex": ..}]}
/// Coupling types: standard, delta, deltaprime, dirichlet, neumann, robin, general.
/// General matrices are row-major [re, im] pairs, either nested per row or flat.
MetricGraph parse_graph(std::string_view json_text);
MetricGraph load_graph_file(const std::string& path);
std::string graph_to_json(const MetricGraph& g);

/// Edge lengths l_j(t) = l_j + rate_j t + accel_j t^2 / 2.
struct EdgeMotion {
  double length = 1.0;
  double rate = 0.0;
  double accel = 0.0;
};

class EdgeLengthSchedule {
public:
  EdgeLengthSchedule() = default;
  explicit EdgeLengthSchedule(std::vector<EdgeMotion> motions);

  /// Every edge constant at the graph's lengths.
  static EdgeLengthSchedule constant(const MetricGraph& g);

  const std::vector<EdgeMotion>& motions() const { return motions_; }
  std::size_t size() const { return motions_.size(); }

  std::vector<double> lengths_at(double t) const;
  /// Complex-parameter evaluation, used for Cauchy differentiation in t.
  std::vector<Complex> lengths_at(Complex t) const;
  std::vector<double> base_lengths() const;
  std::vector<double> rates() const;
  std::vector<double> accels() const;
  bool is_static() const;

  /// Throws GraphError unless every l_j(t) > 0 on [t_min, t_max].
  void validate(double t_min, double t_max) const;

private:
  std::vector<EdgeMotion> motions_;
};

/// Reads {"schedule": [{"edge": i, "rate": .., "accel": ..}]} on top of the
/// graph's lengths; edges not listed stay constant.
EdgeLengthSchedule parse_schedule(std::string_view json_text, const MetricGraph& g);
EdgeLengthSchedule load_schedule_file(const std::string& path, const MetricGraph& g);

}  // namespace qgraph
