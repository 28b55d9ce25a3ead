#include "qgraph/analytic.hpp"

#include <cmath>

namespace qgraph {

std::vector<Complex> circle_nodes(Complex center, double radius, int nodes) {
  std::vector<Complex> z(static_cast<std::size_t>(nodes));
  for (int j = 0; j < nodes; ++j) z[static_cast<std::size_t>(j)] = center + std::polar(radius, 2.0 * kPi * j / nodes);
  return z;
}

std::vector<Complex> taylor_from_samples(const std::vector<Complex>& samples, double radius, int order) {
  const int n = static_cast<int>(samples.size());
  std::vector<Complex> c(static_cast<std::size_t>(order + 1));
  for (int p = 0; p <= order; ++p) {
    Complex sum{0.0, 0.0};
    for (int j = 0; j < n; ++j) sum += samples[static_cast<std::size_t>(j)] * std::polar(1.0, -2.0 * kPi * p * j / n);
    c[static_cast<std::size_t>(p)] = sum / (static_cast<double>(n) * std::pow(radius, p));
  }
  return c;
}

std::vector<Complex> taylor_on_circle(const std::function<Complex(Complex)>& f, Complex center, double radius, int nodes,
                                      int order) {
  std::vector<Complex> samples;
  samples.reserve(static_cast<std::size_t>(nodes));
  for (Complex z : circle_nodes(center, radius, nodes)) samples.push_back(f(z));
  return taylor_from_samples(samples, radius, order);
}

Complex cauchy_derivative(const std::function<Complex(Complex)>& f, Complex center, double radius, int nodes) {
  return taylor_on_circle(f, center, radius, nodes, 1)[1];
}

std::vector<std::vector<Complex>> taylor_on_torus(const std::function<Complex(Complex, Complex)>& f, Complex k0,
                                                  Complex t0, double radius_k, double radius_t, int nodes, int order) {
  const auto zk = circle_nodes(k0, radius_k, nodes);
  const auto zt = circle_nodes(t0, radius_t, nodes);
  // First transform along t for every k node, then along k.
  std::vector<std::vector<Complex>> along_t(static_cast<std::size_t>(nodes));
  for (int i = 0; i < nodes; ++i) {
    std::vector<Complex> row;
    row.reserve(static_cast<std::size_t>(nodes));
    for (int j = 0; j < nodes; ++j) row.push_back(f(zk[static_cast<std::size_t>(i)], zt[static_cast<std::size_t>(j)]));
    along_t[static_cast<std::size_t>(i)] = taylor_from_samples(row, radius_t, order);
  }
  std::vector<std::vector<Complex>> c(static_cast<std::size_t>(order + 1), std::vector<Complex>(static_cast<std::size_t>(order + 1)));
  for (int q = 0; q <= order; ++q) {
    std::vector<Complex> col;
    col.reserve(static_cast<std::size_t>(nodes));
    for (int i = 0; i < nodes; ++i) col.push_back(along_t[static_cast<std::size_t>(i)][static_cast<std::size_t>(q)]);
    const auto ck = taylor_from_samples(col, radius_k, order);
    for (int p = 0; p <= order; ++p) c[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)] = ck[static_cast<std::size_t>(p)];
  }
  return c;
}

}  // namespace qgraph
