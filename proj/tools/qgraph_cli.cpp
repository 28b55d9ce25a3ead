#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qgraph/asymptotics.hpp"
#include "qgraph/fermi.hpp"
#include "qgraph/fixtures.hpp"
#include "qgraph/rootfinder.hpp"
#include "qgraph/secular.hpp"

namespace {

using namespace qgraph;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::pair<double, double> parse_range(const std::string& text, const char* flag) {
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) throw std::invalid_argument(text);
    std::size_t used = 0;
    const double a = std::stod(text.substr(0, colon), &used);
    if (used != colon) throw std::invalid_argument(text);
    const std::string rest = text.substr(colon + 1);
    const double b = std::stod(rest, &used);
    if (used != rest.size()) throw std::invalid_argument(text);
    if (!(a <= b)) throw UsageError(std::string(flag) + " needs lo <= hi, got '" + text + "'");
    return {a, b};
  } catch (const std::logic_error&) {
    throw UsageError(std::string(flag) + " expects lo:hi, got '" + text + "'");
  }
}

Complex parse_complex(const std::string& text) {
  const auto comma = text.find(',');
  try {
    std::size_t used = 0;
    if (comma == std::string::npos) {
      const double re = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return {re, 0.0};
    }
    const double re = std::stod(text.substr(0, comma), &used);
    if (used != comma) throw std::invalid_argument(text);
    const std::string rest = text.substr(comma + 1);
    const double im = std::stod(rest, &used);
    if (used != rest.size()) throw std::invalid_argument(text);
    return {re, im};
  } catch (const std::logic_error&) {
    throw UsageError("--k expects re,im, got '" + text + "'");
  }
}

int thread_budget() {
  const char* env = std::getenv("QGRAPH_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  try {
    return std::max(0, std::stoi(env));
  } catch (const std::logic_error&) {
    throw UsageError(std::string("QGRAPH_THREADS must be an integer, got '") + env + "'");
  }
}

struct Source {
  std::string graph_path;
  std::string fixture;
  std::string schedule_path;

  void add_to(CLI::App* app, bool with_schedule) {
    app->add_option("--graph", graph_path, "graph description file");
    app->add_option("--fixture", fixture, "named fixture, replaces --graph");
    if (with_schedule) app->add_option("--schedule", schedule_path, "edge-length schedule file");
  }

  Fixture load() const {
    if (!fixture.empty()) return load_fixture(fixture);
    if (graph_path.empty()) throw UsageError("either --graph or --fixture is required");
    Fixture f;
    f.name = graph_path;
    f.graph = load_graph_file(graph_path);
    f.schedule = EdgeLengthSchedule::constant(f.graph);
    return f;
  }

  EdgeLengthSchedule schedule(const Fixture& f) const {
    if (!schedule_path.empty()) return load_schedule_file(schedule_path, f.graph);
    return f.schedule;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resonances of quantum graphs with leads"};
  app.require_subcommand(1);
  std::string output_path;
  app.add_option("-o,--output", output_path, "write output to this file instead of standard output");

  std::ostringstream out;

  // resonances
  Source res_src;
  std::string res_re = "0.5:30", res_im = "-3:0.05", res_variant = "cleared";
  double res_tol = 1e-10;
  auto* res = app.add_subcommand("resonances", "all resonances in a rectangle of the k-plane");
  res_src.add_to(res, false);
  res->add_option("--re", res_re, "Re k range lo:hi")->capture_default_str();
  res->add_option("--im", res_im, "Im k range lo:hi")->capture_default_str();
  res->add_option("--tol", res_tol, "Newton residual tolerance")->capture_default_str()->check(CLI::PositiveNumber);
  res->add_option("--variant", res_variant, "det|cleared|po")->capture_default_str();

  // secular eval
  Source sec_src;
  std::string sec_k, sec_variant = "det";
  auto* sec = app.add_subcommand("secular", "secular function");
  auto* sec_eval = sec->add_subcommand("eval", "evaluate at one k");
  sec->require_subcommand(1);
  sec_src.add_to(sec_eval, false);
  sec_eval->add_option("--k", sec_k, "re,im")->required();
  sec_eval->add_option("--variant", sec_variant, "det|cleared|po")->capture_default_str();

  // orbits
  Source orb_src;
  std::size_t orb_cap = kDefaultOrbitCap;
  auto* orb = app.add_subcommand("orbits", "irreducible pseudo-orbits");
  orb_src.add_to(orb, false);
  orb->add_option("--cap", orb_cap, "maximum number of terms")->capture_default_str();

  // fermi
  Source fer_src;
  std::optional<double> fer_k0;
  auto* fer = app.add_subcommand("fermi", "first and second derivative of the resonance trajectory");
  fer_src.add_to(fer, true);
  fer->add_option("--k0", fer_k0, "embedded eigenvalue (square root) at t = 0");

  // trajectory
  Source tra_src;
  std::optional<double> tra_k0;
  std::string tra_t = "-0.2:0.2";
  int tra_steps = 400;
  auto* tra = app.add_subcommand("trajectory", "trace the resonance through k0 as the lengths move");
  tra_src.add_to(tra, true);
  tra->add_option("--k0", tra_k0, "embedded eigenvalue (square root) at t = 0");
  tra->add_option("--t", tra_t, "t range lo:hi")->capture_default_str();
  tra->add_option("--steps", tra_steps, "number of intervals")->capture_default_str()->check(CLI::NonNegativeNumber);

  // asymptotics
  Source asy_src;
  std::string asy_mode = "delta", asy_im = "-3:0.05";
  int asy_nmin = 3, asy_nmax = 40;
  auto* asy = app.add_subcommand("asymptotics", "windowed high-energy scan against the reference spectrum");
  asy_src.add_to(asy, false);
  asy->add_option("--mode", asy_mode, "delta|deltaprime|mixed")->capture_default_str();
  asy->add_option("--n-min", asy_nmin, "first window index")->capture_default_str()->check(CLI::PositiveNumber);
  asy->add_option("--n-max", asy_nmax, "last window index")->capture_default_str()->check(CLI::PositiveNumber);
  asy->add_option("--im", asy_im, "Im k range lo:hi")->capture_default_str();

  // fixtures
  std::string dump_name;
  auto* fix = app.add_subcommand("fixtures", "named graphs");
  fix->require_subcommand(1);
  auto* fix_list = fix->add_subcommand("list", "list fixtures");
  auto* fix_dump = fix->add_subcommand("dump", "print a fixture as a graph file");
  fix_dump->add_option("name", dump_name)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (res->parsed()) {
      const Fixture f = res_src.load();
      const auto [re_lo, re_hi] = parse_range(res_re, "--re");
      const auto [im_lo, im_hi] = parse_range(res_im, "--im");
      const SearchRegion region{re_lo, re_hi, im_lo, im_hi};
      if (!(re_lo < re_hi) || !(im_lo < im_hi)) throw UsageError("--re and --im need lo < hi");
      RootFinderOptions opts;
      opts.abs_tol = res_tol;
      const auto roots = find_roots(ResonanceModel(f.graph).function(parse_variant(res_variant)), region, opts);
      out << "re_k,im_k,residual,winding,suspect\n";
      for (const auto& r : roots)
        out << num(r.k.real()) << ',' << num(r.k.imag()) << ',' << num(r.residual) << ',' << r.winding << ','
            << (r.suspect ? 1 : 0) << '\n';
    } else if (sec_eval->parsed()) {
      const Fixture f = sec_src.load();
      const Complex k = parse_complex(sec_k);
      const Complex v = ResonanceModel(f.graph).function(parse_variant(sec_variant))(k);
      out << num(v.real()) << ' ' << num(v.imag()) << '\n';
    } else if (orb->parsed()) {
      const Fixture f = orb_src.load();
      const ResonanceModel model(f.graph, orb_cap);
      for (const auto& term : model.terms()) out << describe_term(model.bonds(), term) << '\n';
    } else if (fer->parsed()) {
      const Fixture f = fer_src.load();
      const auto k0 = fer_k0 ? fer_k0 : f.k0;
      if (!k0) throw UsageError("--k0 is required for graphs without a known eigenvalue");
      const EdgeLengthSchedule sched = fer_src.schedule(f);
      const ResonanceModel model(f.graph.with_lengths(sched.base_lengths()));
      RootFinderOptions nopts;
      nopts.max_excursion = 0.5;
      const Complex k = newton_refine(model.function(SecularVariant::DetCleared), Complex(*k0, 0.0), nopts).k;
      const FermiExpansion fe = fermi_expansion(model, sched, Complex(k.real(), 0.0));
      out << "kdot=" << num(fe.kdot.real()) << ", re_kddot=" << num(fe.kddot.real()) << ", im_kddot=" << num(fe.kddot.imag())
          << '\n';
    } else if (tra->parsed()) {
      const Fixture f = tra_src.load();
      const auto k0 = tra_k0 ? tra_k0 : f.k0;
      if (!k0) throw UsageError("--k0 is required for graphs without a known eigenvalue");
      const auto [t_lo, t_hi] = parse_range(tra_t, "--t");
      const EdgeLengthSchedule sched = tra_src.schedule(f);
      const ResonanceModel model(f.graph.with_lengths(sched.base_lengths()));
      const auto points = trace_trajectory(model, sched, Complex(*k0, 0.0), t_lo, t_hi, tra_steps);
      out << "t,re_k,im_k,residual\n";
      for (const auto& p : points) out << num(p.t) << ',' << num(p.k.real()) << ',' << num(p.k.imag()) << ',' << num(p.residual) << '\n';
    } else if (asy->parsed()) {
      const Fixture f = asy_src.load();
      if (asy_nmin > asy_nmax) throw UsageError("--n-min must not exceed --n-max");
      const auto [im_lo, im_hi] = parse_range(asy_im, "--im");
      ScanOptions opts;
      try {
        opts.mode = parse_reference_mode(asy_mode);
      } catch (const Error& e) {
        throw UsageError(e.what());
      }
      opts.im_depth = im_lo;
      opts.im_top = im_hi;
      opts.threads = thread_budget();
      const auto scans = scan_windows(f.graph, standard_windows(f.graph, asy_nmin, asy_nmax), opts);
      out << "window_lo,window_hi,resonances,paired,unmatched,median_re_k,median_imag,median_pair_distance,median_real_offset\n";
      for (const auto& s : scans) {
        out << num(s.window.lo) << ',' << num(s.window.hi) << ',' << s.resonances.size() << ',' << s.pairs.size() << ','
            << s.unmatched;
        const std::vector<WindowScan> one{s};
        const auto imag = window_medians(one, DecayQuantity::Imag);
        if (imag.empty()) {
          out << ",nan,nan,nan,nan\n";
          continue;
        }
        out << ',' << num(imag[0].first) << ',' << num(imag[0].second) << ','
            << num(window_medians(one, DecayQuantity::PairDistance)[0].second) << ','
            << num(window_medians(one, DecayQuantity::RealOffset)[0].second) << '\n';
      }
      out << "quantity,slope,intercept,r2\n";
      for (const auto q : {DecayQuantity::Imag, DecayQuantity::PairDistance, DecayQuantity::RealOffset}) {
        try {
          const FitResult fit = fit_decay(scans, q);
          out << decay_quantity_name(q) << ',' << num(fit.slope) << ',' << num(fit.intercept) << ',' << num(fit.r2) << '\n';
        } catch (const Error& e) {
          std::cerr << "qgraph: " << decay_quantity_name(q) << ": " << e.what() << '\n';
          out << decay_quantity_name(q) << ",nan,nan,nan\n";
        }
      }
    } else if (fix_list->parsed()) {
      out << "name,alias,source\n";
      for (const auto& name : list_fixtures()) {
        const Fixture f = load_fixture(name);
        out << f.name << ',' << f.alias << ",\"" << f.source << "\"\n";
      }
    } else if (fix_dump->parsed()) {
      out << graph_to_json(load_fixture(dump_name).graph) << '\n';
    }
  } catch (const UsageError& e) {
    std::cerr << "qgraph: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "qgraph: " << e.what() << '\n';
    return 1;
  }

  if (output_path.empty()) {
    std::cout << out.str();
  } else {
    std::ofstream file(output_path);
    if (!file) {
      std::cerr << "qgraph: cannot write " << output_path << '\n';
      return 1;
    }
    file << out.str();
  }
  return 0;
}
