#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "ktess/angles.hpp"
#include "ktess/checks.hpp"
#include "ktess/counterexample.hpp"
#include "ktess/distributions.hpp"
#include "ktess/errors.hpp"
#include "ktess/events.hpp"
#include "ktess/pointsets.hpp"
#include "ktess/tilings.hpp"

using namespace ktess;
using nlohmann::ordered_json;

namespace {

constexpr int kExitFailedCheck = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitGenericity = 3;
constexpr int kExitGuarantee = 4;
constexpr int kExitWindow = 5;
constexpr int kExitNonGeneric = 6;

// Every flag of every command; unused fields keep their defaults.
struct RunConfig {
  std::string command;
  std::string kind = "zsquare";
  int copies = 9;
  int n0 = 50;
  int n = 30;
  double rho = 400.0;
  std::string tau = "1/5";
  std::string eps = "1/100";
  std::uint64_t seed = 1;
  int k = 2;
  int k_min = 1;
  int k_max = 10;
  std::vector<int> orders;
  std::string structures = "del,vor,bri,igl";
  std::string structure = "del";
  std::string density;
  std::string suite;
  std::string input;
  std::string output;
  std::string json_out;
  std::string svg_out;
  std::string report;
  long zone_site = -1;
  int bins = 64;
  int scan_depth = 3;
  int seeds = 1;
  int threads = 1;
  bool observe = false;
  bool check_dual = false;
  bool dry_run = false;

  ordered_json canonical() const {
    ordered_json j;
    j["command"] = command;
    auto rat = [](const std::string& s) { return to_string(parse_rational(s)); };
    if (command == "gen") {
      j["kind"] = kind;
      j["copies"] = copies;
      j["n0"] = n0;
      j["n"] = n;
      j["rho"] = rho;
      j["tau"] = rat(tau);
      j["eps"] = rat(eps);
      j["k"] = k;
      j["seed"] = seed;
      j["scan_depth"] = scan_depth;
    } else if (command == "extremes") {
      j["input"] = input;
      j["k_min"] = k_min;
      j["k_max"] = k_max;
      j["structures"] = structures;
      j["observe"] = observe;
    } else if (command == "angles") {
      j["input"] = input;
      j["structure"] = structure;
      j["k"] = k;
      j["zone_site"] = zone_site;
    } else if (command == "distribution") {
      j["input"] = input;
      j["structure"] = structure;
      j["orders"] = orders;
      j["density"] = density;
      j["zone_site"] = zone_site;
      j["bins"] = bins;
      j["seed"] = seed;
    } else if (command == "tiling") {
      j["input"] = input;
      j["structure"] = structure;
      j["k"] = k;
      j["check_dual"] = check_dual;
    } else if (command == "counterexample") {
      j["k"] = k;
      j["tau"] = rat(tau);
      j["eps"] = rat(eps);
      j["seed"] = seed;
    } else if (command == "check") {
      j["suite"] = suite;
      j["input"] = input;
      j["k"] = k;
      j["k_max"] = k_max;
      j["n"] = n;
      j["seed"] = seed;
      j["seeds"] = seeds;
      j["tau"] = rat(tau);
      j["eps"] = rat(eps);
    }
    j["output"] = output;
    if (!json_out.empty()) j["json"] = json_out;
    if (!svg_out.empty()) j["svg"] = svg_out;
    if (!report.empty()) j["report"] = report;
    j["threads"] = threads;
    return j;
  }
};

std::vector<Structure> parse_structures(const std::string& list) {
  std::vector<Structure> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(parse_structure(item));
  if (out.empty()) throw InvalidParams("no structure selected");
  return out;
}

MilesKind parse_density(const std::string& name) {
  if (name == "f") return MilesKind::F;
  if (name == "g") return MilesKind::G;
  if (name == "h") return MilesKind::H;
  throw InvalidParams("unknown density: " + name);
}

MilesKind default_density(Structure m) {
  switch (m) {
    case Structure::Del: return MilesKind::F;
    case Structure::Vor: return MilesKind::G;
    default: return MilesKind::H;
  }
}

// Output stream: the named file, or stdout when the path is empty or "-".
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw InvalidParams("cannot write " + path);
    }
  }
  std::ostream& out() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }
  bool to_stdout() const { return !file_.is_open(); }

 private:
  std::ofstream file_;
};

void write_text(const std::string& path, const std::string& text) {
  Sink s(path);
  s.out() << text;
}

WindowedSet load_input(const RunConfig& c) {
  if (c.input.empty()) throw InvalidParams("--input is required");
  return read_pointset(c.input);
}

EnumerateOptions enum_options(const RunConfig& c) {
  EnumerateOptions o;
  o.threads = std::max(1, c.threads);
  return o;
}

int cmd_gen(const RunConfig& c) {
  WindowedSet set;
  if (c.kind == "zsquare") {
    set = integer_lattice(c.copies);
  } else if (c.kind == "perturbed") {
    set = perturbed_lattice(c.copies, parse_rational(c.tau), c.seed);
  } else if (c.kind == "random") {
    set = random_periodic(c.n0, c.copies, c.seed);
  } else if (c.kind == "poisson") {
    set = poisson_torus(c.rho, c.copies, c.seed);
  } else if (c.kind == "noncocircular") {
    set = non_cocircular_lattice(c.copies, c.seed);
  } else if (c.kind == "finite") {
    set = random_finite(c.n, c.seed);
  } else if (c.kind == "triangle") {
    set = finite_example_triangle_barycenter();
  } else if (c.kind == "counterexample") {
    CounterexampleParams p{c.k, parse_rational(c.tau), parse_rational(c.eps), c.seed};
    set = build_counterexample(p);
  } else {
    throw InvalidParams("unknown generator: " + c.kind);
  }
  if (c.output.empty()) throw InvalidParams("-o is required");
  write_pointset(set, c.output);
  GenericityReport g = genericity_report(set, c.scan_depth);
  std::cout << "points " << set.size() << "\n";
  std::cout << "tag " << set.tag << "\n";
  std::cout << "generic " << (g.is_generic ? "yes" : "no") << " (scan depth " << c.scan_depth
            << ", " << g.violations.size() << " cocircular circles)\n";
  return 0;
}

int cmd_extremes(const RunConfig& c) {
  const std::vector<Structure> wanted = parse_structures(c.structures);
  WindowedSet set = load_input(c);
  EventSet events = enumerate_events(set, std::max(c.k_max - 1, 0), enum_options(c));
  MonotonicityReport rep = monotonicity_report(events, c.k_min, c.k_max);
  std::vector<ExtremeRow> rows;
  for (const auto& r : rep.rows)
    if (std::find(wanted.begin(), wanted.end(), r.structure) != wanted.end()) rows.push_back(r);
  Sink sink(c.output);
  write_extremes_csv(sink.out(), rows);
  std::ostream& log = sink.to_stdout() ? std::cerr : std::cout;
  bool violated = false;
  log << "input " << (rep.generic ? "generic" : "non-generic") << "\n";
  for (const auto& chk : rep.checks) {
    bool selected = false;
    for (Structure m : wanted)
      if (chk.name.find(" " + structure_name(m) + " ") != std::string::npos) selected = true;
    if (!selected || (chk.observation && !c.observe)) continue;
    log << (chk.observation ? "observation " : "check ") << chk.name << ": "
        << (chk.passed ? "holds" : "fails");
    if (!chk.violations_at.empty()) {
      log << " at k =";
      for (int k : chk.violations_at) log << ' ' << k << "->" << k + 1;
    }
    log << "\n";
    if (!chk.observation && !chk.passed) violated = true;
  }
  return violated ? kExitGuarantee : 0;
}

int cmd_angles(const RunConfig& c) {
  WindowedSet set = load_input(c);
  const int cap = c.zone_site >= 0 ? c.k : std::max(c.k - 1, 0);
  EventSet events = enumerate_events(set, cap, enum_options(c));
  Sink sink(c.output);
  sink.out() << std::setprecision(17);
  if (c.zone_site >= 0) {
    if (static_cast<std::size_t>(c.zone_site) >= set.size()) throw InvalidParams("site out of range");
    sink.out() << "site,k,value\n";
    for (double v : zone_angles(events, static_cast<SiteIndex>(c.zone_site), c.k))
      sink.out() << c.zone_site << ',' << c.k << ',' << v << '\n';
    return 0;
  }
  write_samples_csv(sink.out(), structure_angles(events, parse_structure(c.structure), c.k));
  return 0;
}

int cmd_distribution(const RunConfig& c) {
  if (c.orders.empty()) throw InvalidParams("--k needs at least one order");
  if (c.output.empty()) throw InvalidParams("-o prefix is required");
  WindowedSet set = load_input(c);
  const int k_top = *std::max_element(c.orders.begin(), c.orders.end());
  const Structure m = parse_structure(c.structure);
  const bool zone = c.zone_site >= 0;
  const MilesKind kind = c.density.empty() ? (zone ? MilesKind::H : default_density(m))
                                           : parse_density(c.density);
  EventSet events = enumerate_events(set, zone ? k_top : k_top - 1, enum_options(c));
  ordered_json fits = ordered_json::array();
  for (int k : c.orders) {
    std::vector<double> values;
    std::string label;
    if (zone) {
      if (static_cast<std::size_t>(c.zone_site) >= set.size()) throw InvalidParams("site out of range");
      for (int j = 1; j <= k; ++j)
        for (double v : zone_angles(events, static_cast<SiteIndex>(c.zone_site), j))
          values.push_back(v);
      label = "zone" + std::to_string(c.zone_site) + "_k" + std::to_string(k);
    } else {
      for (const auto& s : structure_angles(events, m, k)) values.push_back(s.value);
      label = structure_name(m) + "_k" + std::to_string(k);
    }
    Histogram hist = empirical_density(values, c.bins);
    FitReport fit = fit_report(hist, kind);
    Sink csv(c.output + "_" + label + ".csv");
    write_histogram_csv(csv.out(), hist, kind);
    const double threshold = self_consistency_threshold(kind, values.size(), c.bins, 20, c.seed);
    ordered_json j = ordered_json::parse(fit_report_json(fit, kind, label));
    j["threshold"] = threshold;
    j["within"] = fit.l1 < threshold;
    fits.push_back(j);
    std::cout << label << " n " << values.size() << " l1 " << fit.l1 << " threshold " << threshold
              << (fit.l1 < threshold ? " within" : " outside") << "\n";
  }
  write_text(c.output + "_fit.json", fits.dump(2) + "\n");
  return 0;
}

Tiling build_tiling(const EventSet& events, Structure m, int k) {
  switch (m) {
    case Structure::Del: return delaunay_mosaic(events, k);
    case Structure::Vor: return voronoi_tessellation(events, k);
    case Structure::Bri: return brillouin_tessellation(events, k);
    case Structure::Igl: return iglesias_mosaic(events, k);
  }
  throw InvalidParams("unknown structure");
}

Structure dual_of(Structure m) {
  switch (m) {
    case Structure::Del: return Structure::Vor;
    case Structure::Vor: return Structure::Del;
    case Structure::Bri: return Structure::Igl;
    case Structure::Igl: return Structure::Bri;
  }
  return m;
}

int cmd_tiling(const RunConfig& c) {
  WindowedSet set = load_input(c);
  const Structure m = parse_structure(c.structure);
  EventSet events = enumerate_events(set, c.k, enum_options(c));
  Tiling t = build_tiling(events, m, c.k);
  if (c.json_out.empty() && c.svg_out.empty()) {
    std::cout << tiling_to_json(t) << "\n";
  }
  if (!c.json_out.empty()) write_text(c.json_out, tiling_to_json(t) + "\n");
  if (!c.svg_out.empty()) write_text(c.svg_out, tiling_to_svg(t, set.inner_window));
  std::cerr << structure_name(m) << " k " << c.k << " vertices " << t.vertices.size() << " edges "
            << t.edges.size() << " tiles " << t.tiles.size()
            << (t.vertices_only ? " (vertices only)" : "") << "\n";
  if (!c.check_dual) return 0;
  const Structure d = dual_of(m);
  Tiling dual = build_tiling(events, d, c.k);
  const bool primal_is_mosaic = m == Structure::Del || m == Structure::Igl;
  DualReport r = primal_is_mosaic ? check_orthogonal_dual(t, dual) : check_orthogonal_dual(dual, t);
  std::cerr << "duality checked " << r.checked << " orthogonality violations "
            << r.orthogonality_violations << " orientation violations " << r.orientation_violations
            << "\n";
  return r.ok() ? 0 : kExitFailedCheck;
}

int cmd_counterexample(const RunConfig& c) {
  CounterexampleParams p{c.k, parse_rational(c.tau), parse_rational(c.eps), c.seed};
  WindowedSet set = build_counterexample(p);
  if (!c.output.empty()) write_pointset(set, c.output);
  CounterexampleReport r = verify_counterexample(set, p);
  const std::string json = counterexample_report_json(r, p);
  if (!c.report.empty()) write_text(c.report, json + "\n");
  std::cout << json << "\n";
  return r.pass ? 0 : kExitFailedCheck;
}

// One line of a check suite.
struct CheckLine {
  std::string name;
  bool passed = true;
  std::string detail;
};

void print_line(const CheckLine& l) {
  std::cout << (l.passed ? "PASS " : "FAIL ") << l.name;
  if (!l.detail.empty()) std::cout << ": " << l.detail;
  std::cout << "\n";
}

std::vector<CheckLine> suite_monotonicity(const RunConfig& c) {
  WindowedSet set = load_input(c);
  EventSet events = enumerate_events(set, c.k_max - 1, enum_options(c));
  MonotonicityReport rep = monotonicity_report(events, c.k_min, c.k_max);
  std::vector<CheckLine> out;
  for (const auto& chk : rep.checks) {
    if (chk.observation) continue;
    std::string detail;
    for (int k : chk.violations_at) detail += (detail.empty() ? "violated at " : ", ") + std::to_string(k);
    out.push_back({chk.name, chk.passed, detail});
  }
  return out;
}

std::vector<CheckLine> suite_duality(const RunConfig& c) {
  WindowedSet set = load_input(c);
  EventSet events = enumerate_events(set, c.k, enum_options(c));
  std::vector<CheckLine> out;
  auto run = [&](Structure mosaic) {
    Tiling t = build_tiling(events, mosaic, c.k);
    Tiling d = build_tiling(events, dual_of(mosaic), c.k);
    DualReport r = check_orthogonal_dual(t, d);
    out.push_back({structure_name(mosaic) + "/" + structure_name(dual_of(mosaic)) + " k=" +
                       std::to_string(c.k),
                   r.ok() && r.checked > 0,
                   std::to_string(r.checked) + " edges, " +
                       std::to_string(r.orthogonality_violations) + " orthogonality and " +
                       std::to_string(r.orientation_violations) + " orientation violations"});
  };
  run(Structure::Del);
  run(Structure::Igl);
  return out;
}

std::vector<CheckLine> suite_oracle(const RunConfig& c) {
  WindowedSet set = random_finite(c.n, c.seed, 10);
  EventSet events = enumerate_events(set, c.k, enum_options(c));
  std::vector<CheckLine> out;
  for (bool igl : {false, true}) {
    Tiling oracle = lifted_hull_oracle(subset_sites(set.points, c.k, igl), set.outer_window);
    Tiling mine = igl ? iglesias_mosaic(events, c.k) : delaunay_mosaic(events, c.k);
    out.push_back({std::string(igl ? "igl" : "del") + " k=" + std::to_string(c.k) +
                       " against lifted hull",
                   same_tiles(oracle, mine),
                   std::to_string(mine.tiles.size()) + " tiles vs " +
                       std::to_string(oracle.tiles.size())});
  }
  return out;
}

std::string fmt(double v) {
  std::ostringstream o;
  o << std::setprecision(12) << v;
  return o.str();
}

std::vector<CheckLine> suite_distributions() {
  std::vector<CheckLine> out;
  for (MilesKind kind : {MilesKind::F, MilesKind::G, MilesKind::H}) {
    const double mass = miles_integral(kind, 0.0, std::numbers::pi);
    out.push_back({"integral of " + miles_name(kind), std::fabs(mass - 1.0) <= 1e-9,
                   fmt(mass)});
  }
  double worst = -1e300;
  for (int i = 0; i <= 10000; ++i)
    worst = std::max(worst, h_second_derivative(std::numbers::pi * i / 10000.0));
  out.push_back({"h concave", worst <= 1e-12, "max h'' " + fmt(worst)});
  return out;
}

std::vector<CheckLine> suite_counterexample(const RunConfig& c) {
  std::vector<CheckLine> out;
  for (int s = 0; s < std::max(1, c.seeds); ++s) {
    CounterexampleParams p{c.k, parse_rational(c.tau), parse_rational(c.eps),
                           c.seed + static_cast<std::uint64_t>(s)};
    CounterexampleReport r = verify_counterexample(build_counterexample(p), p);
    std::ostringstream d;
    d << std::setprecision(12) << "omega(Del_k) " << r.omega_del_k << " omega(Del_k+1) "
      << r.omega_del_k1;
    out.push_back({"k=" + std::to_string(c.k) + " seed=" + std::to_string(p.seed), r.pass, d.str()});
  }
  return out;
}

int cmd_check(const RunConfig& c) {
  std::vector<CheckLine> lines;
  if (c.suite == "monotonicity") lines = suite_monotonicity(c);
  else if (c.suite == "duality") lines = suite_duality(c);
  else if (c.suite == "oracle") lines = suite_oracle(c);
  else if (c.suite == "distributions") lines = suite_distributions();
  else if (c.suite == "counterexample") lines = suite_counterexample(c);
  else throw InvalidParams("unknown suite: " + c.suite);
  bool ok = true;
  for (const auto& l : lines) {
    print_line(l);
    ok = ok && l.passed;
  }
  return ok ? 0 : kExitFailedCheck;
}

int dispatch(const RunConfig& c) {
  if (c.command == "gen") return cmd_gen(c);
  if (c.command == "extremes") return cmd_extremes(c);
  if (c.command == "angles") return cmd_angles(c);
  if (c.command == "distribution") return cmd_distribution(c);
  if (c.command == "tiling") return cmd_tiling(c);
  if (c.command == "counterexample") return cmd_counterexample(c);
  if (c.command == "check") return cmd_check(c);
  throw InvalidParams("no command given");
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig c;
  c.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  CLI::App app{"Higher-order Voronoi, Delaunay, Brillouin and Iglesias tilings"};
  app.require_subcommand(1);
  app.add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--dry-run", c.dry_run, "print the normalized configuration and exit");

  auto* gen = app.add_subcommand("gen", "generate a point set");
  gen->add_option("kind", c.kind,
                  "zsquare, perturbed, random, poisson, noncocircular, finite, triangle, counterexample")
      ->required();
  gen->add_option("--copies", c.copies);
  gen->add_option("--n0", c.n0);
  gen->add_option("--n", c.n);
  gen->add_option("--rho", c.rho);
  gen->add_option("--tau", c.tau, "rational p/q");
  gen->add_option("--eps", c.eps, "rational p/q");
  gen->add_option("--k", c.k);
  gen->add_option("--seed", c.seed);
  gen->add_option("--scan-depth", c.scan_depth);
  gen->add_option("-o,--output", c.output)->required();

  auto* ext = app.add_subcommand("extremes", "extreme angles and monotonicity");
  ext->add_option("--input", c.input)->required();
  ext->add_option("--k-min", c.k_min);
  ext->add_option("--k-max", c.k_max);
  ext->add_option("--structures", c.structures);
  ext->add_flag("--observe", c.observe, "also report the unguaranteed inequalities");
  ext->add_option("-o,--output", c.output);

  auto* ang = app.add_subcommand("angles", "angle samples of one structure");
  ang->add_option("--input", c.input)->required();
  ang->add_option("--structure", c.structure);
  ang->add_option("--k", c.k);
  ang->add_option("--zone-site", c.zone_site, "emit the k-th zone angles of this site");
  ang->add_option("-o,--output", c.output);

  auto* dist = app.add_subcommand("distribution", "angle histograms and fits");
  dist->add_option("--input", c.input)->required();
  dist->add_option("--structure", c.structure);
  dist->add_option("--k", c.orders)->delimiter(',');
  dist->add_option("--density", c.density, "f, g or h");
  dist->add_option("--zone-site", c.zone_site, "pool zone angles of this site for orders 1..k");
  dist->add_option("--bins", c.bins);
  dist->add_option("--seed", c.seed, "seed of the self-consistency draws");
  dist->add_option("-o,--output", c.output, "output prefix")->required();

  auto* til = app.add_subcommand("tiling", "tiling export");
  til->add_option("--input", c.input)->required();
  til->add_option("--structure", c.structure);
  til->add_option("--k", c.k);
  til->add_option("--json", c.json_out);
  til->add_option("--svg", c.svg_out);
  til->add_flag("--check-dual", c.check_dual);

  auto* ce = app.add_subcommand("counterexample", "build and verify the satellite set");
  ce->add_option("--k", c.k);
  ce->add_option("--tau", c.tau);
  ce->add_option("--eps", c.eps);
  ce->add_option("--seed", c.seed);
  ce->add_option("-o,--output", c.output);
  ce->add_option("--report", c.report);

  auto* chk = app.add_subcommand("check", "run a verification suite");
  chk->add_option("--suite", c.suite)->required();
  chk->add_option("--input", c.input);
  chk->add_option("--k", c.k);
  chk->add_option("--k-min", c.k_min);
  chk->add_option("--k-max", c.k_max);
  chk->add_option("--n", c.n);
  chk->add_option("--seed", c.seed);
  chk->add_option("--seeds", c.seeds);
  chk->add_option("--tau", c.tau);
  chk->add_option("--eps", c.eps);

  // Defaults that differ per command.
  ce->preparse_callback([&](std::size_t) { c.k = 10; c.seed = 5; });
  chk->preparse_callback([&](std::size_t) { c.k = 10; c.seed = 5; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }
  c.command = app.get_subcommands().front()->get_name();
  if (c.command == "check" && c.suite != "counterexample" && chk->count("--k") == 0) c.k = 2;
  if (c.command == "gen" && c.kind == "counterexample" && gen->count("--k") == 0) c.k = 10;

  try {
    if (c.dry_run) {
      std::cout << c.canonical().dump(2) << "\n";
      return 0;
    }
    return dispatch(c);
  } catch (const GenericityFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitGenericity;
  } catch (const WindowTooSmall& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitWindow;
  } catch (const DiskOutsideWindow& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitWindow;
  } catch (const OrderOutOfRange& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitWindow;
  } catch (const NonGenericUnsupported& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNonGeneric;
  } catch (const InvalidParams& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailedCheck;
  }
}
