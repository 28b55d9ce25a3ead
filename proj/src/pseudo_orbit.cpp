#include "qgraph/pseudo_orbit.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <sstream>

namespace qgraph {

namespace {

// Johnson's elementary circuit search restricted to bonds >= start.
class CircuitSearch {
public:
  CircuitSearch(const BondSystem& bs, std::size_t cap, std::vector<Cycle>& out)
      : bs_(bs), n_(bs.bond_count()), cap_(cap), out_(out), blocked_(static_cast<std::size_t>(n_)), blocked_by_(static_cast<std::size_t>(n_)) {}

  void run() {
    for (int s = 0; s < n_; ++s) {
      start_ = s;
      std::fill(blocked_.begin(), blocked_.end(), false);
      for (auto& b : blocked_by_) b.clear();
      circuit(s);
    }
  }

private:
  void unblock(int u) {
    blocked_[static_cast<std::size_t>(u)] = false;
    auto& list = blocked_by_[static_cast<std::size_t>(u)];
    while (!list.empty()) {
      const int w = list.back();
      list.pop_back();
      if (blocked_[static_cast<std::size_t>(w)]) unblock(w);
    }
  }

  bool circuit(int v) {
    bool found = false;
    stack_.push_back(v);
    blocked_[static_cast<std::size_t>(v)] = true;
    for (int w = start_; w < n_; ++w) {
      if (!bs_.follows(v, w)) continue;
      if (w == start_) {
        if (out_.size() >= cap_) throw OrbitExplosion("orbit explosion: more than " + std::to_string(cap_) + " cycles");
        out_.push_back(Cycle{stack_});
        found = true;
      } else if (!blocked_[static_cast<std::size_t>(w)]) {
        if (circuit(w)) found = true;
      }
    }
    if (found) {
      unblock(v);
    } else {
      for (int w = start_; w < n_; ++w) {
        if (!bs_.follows(v, w)) continue;
        auto& list = blocked_by_[static_cast<std::size_t>(w)];
        if (std::find(list.begin(), list.end(), v) == list.end()) list.push_back(v);
      }
    }
    stack_.pop_back();
    return found;
  }

  const BondSystem& bs_;
  int n_;
  std::size_t cap_;
  std::vector<Cycle>& out_;
  int start_ = 0;
  std::vector<int> stack_;
  std::vector<bool> blocked_;
  std::vector<std::vector<int>> blocked_by_;
};

std::uint64_t mask_of(const Cycle& c) {
  std::uint64_t m = 0;
  for (int b : c.bonds) m |= std::uint64_t{1} << b;
  return m;
}

}  // namespace

Complex cycle_amplitude(const Cycle& c, const CMatrix& s) {
  Complex a{1.0, 0.0};
  const std::size_t n = c.bonds.size();
  for (std::size_t i = 0; i < n; ++i) a *= s(c.bonds[(i + 1) % n], c.bonds[i]);
  return a;
}

Complex PseudoOrbitTerm::amplitude(const CMatrix& s) const {
  Complex a{1.0, 0.0};
  for (const auto& [r, c] : transitions) a *= s(r, c);
  return a;
}

std::vector<Cycle> enumerate_simple_cycles(const BondSystem& bs, std::size_t cap) {
  std::vector<Cycle> cycles;
  CircuitSearch(bs, cap, cycles).run();
  // Johnson starts every circuit at its lowest bond, which is the canonical rotation.
  std::sort(cycles.begin(), cycles.end(), [](const Cycle& a, const Cycle& b) {
    if (a.bonds.size() != b.bonds.size()) return a.bonds.size() < b.bonds.size();
    return a.bonds < b.bonds;
  });
  return cycles;
}

std::vector<PseudoOrbitTerm> enumerate_irreducible_pseudo_orbits(const BondSystem& bs, std::span<const Cycle> cycles,
                                                                 std::size_t cap) {
  if (bs.bond_count() > 64) throw OrbitExplosion("orbit explosion: pseudo-orbit enumeration supports at most 64 bonds");
  std::vector<std::uint64_t> masks;
  masks.reserve(cycles.size());
  for (const auto& c : cycles) masks.push_back(mask_of(c));

  std::vector<PseudoOrbitTerm> terms;
  std::vector<std::size_t> chosen;

  auto emit = [&]() {
    if (terms.size() >= cap) throw OrbitExplosion("orbit explosion: more than " + std::to_string(cap) + " pseudo-orbits");
    PseudoOrbitTerm t;
    t.orbit_count = static_cast<int>(chosen.size());
    t.edge_counts.assign(static_cast<std::size_t>(bs.edge_count()), 0);
    for (std::size_t idx : chosen) {
      const Cycle& c = cycles[idx];
      t.cycles.push_back(c);
      const std::size_t n = c.bonds.size();
      for (std::size_t i = 0; i < n; ++i) {
        t.bonds.push_back(c.bonds[i]);
        ++t.edge_counts[static_cast<std::size_t>(bs.bond(c.bonds[i]).edge)];
        t.transitions.emplace_back(c.bonds[(i + 1) % n], c.bonds[i]);
      }
    }
    std::sort(t.bonds.begin(), t.bonds.end());
    terms.push_back(std::move(t));
  };

  std::function<void(std::size_t, std::uint64_t)> extend = [&](std::size_t from, std::uint64_t used) {
    emit();
    for (std::size_t i = from; i < cycles.size(); ++i) {
      if (masks[i] & used) continue;
      chosen.push_back(i);
      extend(i + 1, used | masks[i]);
      chosen.pop_back();
    }
  };
  extend(0, 0);
  return terms;
}

Complex pseudo_orbit_sum(const CMatrix& s, std::span<const PseudoOrbitTerm> terms, std::span<const double> lengths, Complex k) {
  Complex sum{0.0, 0.0};
  for (const auto& t : terms) {
    const double l = t.length(lengths);
    sum += static_cast<double>(t.sign()) * t.amplitude(s) * std::exp(kI * k * l);
  }
  return sum;
}

Complex secular_po(const BondSystem& bs, std::span<const EffectiveSigma> sigmas, std::span<const PseudoOrbitTerm> terms,
                   std::span<const double> lengths, Complex k) {
  return pseudo_orbit_sum(scattering_matrix(bs, sigmas, k), terms, lengths, k);
}

std::string describe_term(const BondSystem& bs, const PseudoOrbitTerm& term) {
  std::ostringstream os;
  os << "m=" << term.orbit_count << " bonds=";
  for (const auto& c : term.cycles) {
    os << '(';
    for (std::size_t i = 0; i < c.bonds.size(); ++i) os << (i ? "," : "") << bs.label(c.bonds[i]);
    os << ')';
  }
  os << " length=";
  bool any = false;
  for (std::size_t j = 0; j < term.edge_counts.size(); ++j) {
    if (term.edge_counts[j] == 0) continue;
    os << (any ? "+" : "") << term.edge_counts[j] << "*l" << j + 1;
    any = true;
  }
  if (!any) os << '0';
  return os.str();
}

}  // namespace qgraph
