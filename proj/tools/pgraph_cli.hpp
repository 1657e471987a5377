#pragma once

// Command-line front end. run() is separate from main() so tests can drive
// it in-process. Exit codes: 0 success, 1 domain or validation error, 2 usage.

#include <cmath>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pgraph/pgraph.hpp"

namespace pgraph::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string command;
  std::string input;
  std::string builtin_name;
  double q = kDefaultPotential;
  std::string output;
  int grid = 0;
  double tolerance = 1e-10;
  unsigned threads = 0;
  std::size_t band = 1;
  std::string kind = "max";
  std::string from, to, index;
  std::optional<std::size_t> edge;
  std::string t_sequence;
};

inline IndexVector parse_index(const std::string& text) {
  IndexVector out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw UsageError("bad index entry '" + item + "' in '" + text + "'");
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size()) throw UsageError("bad index entry '" + item + "' in '" + text + "'");
    out.push_back(v);
  }
  if (out.empty()) throw UsageError("empty index vector");
  return out;
}

inline std::vector<IndexVector> parse_t_sequence(const std::string& text) {
  std::vector<IndexVector> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';'))
    if (!item.empty()) out.push_back(parse_index(item));
  if (out.empty()) throw UsageError("--t-sequence is empty");
  return out;
}

inline GridSpec grid_spec(const Config& c) {
  GridSpec g;
  g.points = c.grid;
  g.refine_tolerance = c.tolerance;
  g.threads = c.threads;
  return g;
}

inline FundamentalGraph load_input(const Config& c) {
  if (!c.input.empty() && !c.builtin_name.empty()) throw UsageError("give either a graph file or --builtin, not both");
  if (c.input.empty() && c.builtin_name.empty()) throw UsageError("a graph file or --builtin is required");
  if (!c.builtin_name.empty()) return builtin(c.builtin_name, c.q);
  return load_graph(c.input);
}

inline PerturbationSpec perturbation(const Config& c, const FundamentalGraph& g) {
  if (c.index.empty()) throw UsageError("--index is required");
  PerturbationSpec p;
  p.v1 = c.from.empty() ? g.vertices().front().id : c.from;
  p.v2 = c.to.empty() ? g.vertices()[std::min<std::size_t>(1, g.vertex_count() - 1)].id : c.to;
  p.t = parse_index(c.index);
  return p;
}

inline EdgeKind edge_kind(const Config& c) { return c.kind == "min" ? EdgeKind::lower : EdgeKind::upper; }

inline void emit_graph(const Config& c, const FundamentalGraph& g, std::ostream& out) {
  if (c.output.empty())
    out << format_graph(g);
  else
    save_graph(g, c.output);
}

inline std::string format_k(const QuasiMomentum& k) {
  std::string s = "(";
  for (std::size_t i = 0; i < k.size(); ++i) s += (i ? ", " : "") + format_real(k[i]);
  return s + ")";
}

inline int cmd_spectrum(const Config& c, std::ostream& out, std::ostream& err) {
  const auto g = load_input(c);
  const auto bs = spectrum(g, grid_spec(c));
  out << "band,lower,upper,flat\n";
  for (const auto& b : bs.bands)
    out << b.band << ',' << format_real(b.lower.value) << ',' << format_real(b.upper.value) << ','
        << (b.flat ? "yes" : "no") << '\n';
  out << "spectrum:";
  for (std::size_t i = 0; i < bs.spectrum.size(); ++i)
    out << (i ? " U " : " ") << '[' << format_real(bs.spectrum[i].lower) << ", " << format_real(bs.spectrum[i].upper)
        << ']';
  out << '\n';
  if (bs.coarse_grid()) err << "warning: grid may be too coarse; refined optimum moved more than one cell\n";
  return kExitOk;
}

inline int cmd_perturb(const Config& c, std::ostream& out, std::ostream&) {
  const auto g = load_input(c);
  emit_graph(c, perturb(g, perturbation(c, g)), out);
  return kExitOk;
}

inline int cmd_limit(const Config& c, std::ostream& out, std::ostream&) {
  const auto g = load_input(c);
  if (g.edge_count() == 0) throw GraphError("graph has no edges to lift");
  emit_graph(c, lift_to_limit(g, c.edge.value_or(g.edge_count() - 1)), out);
  return kExitOk;
}

inline int cmd_dispersion(const Config& c, std::ostream& out, std::ostream&) {
  const auto g = load_input(c);
  const auto table = dispersion_table(g, grid_spec(c));
  if (c.output.empty()) {
    write_dispersion_csv(out, table);
  } else {
    std::ofstream f(c.output, std::ios::binary);
    if (!f) throw GraphError("cannot write '" + c.output + "'");
    write_dispersion_csv(f, table);
  }
  return kExitOk;
}

inline int cmd_isospectral(const Config& c, std::ostream& out, std::ostream& err) {
  const auto g = load_input(c);
  const auto p = perturbation(c, g);
  const auto g_t = perturb(g, p);
  const auto g_limit = lift_to_limit(g_t);
  const auto rep = check_isospectral(g_t, g_limit, p.t, grid_spec(c));
  for (const auto& e : rep.edges) {
    out << "band " << e.band << ' ' << to_string(e.kind) << ": limit=" << format_real(e.limit_edge)
        << " perturbed=" << format_real(e.direct_edge);
    if (e.coincidence.holds)
      out << " coincide witness=" << format_k(*e.coincidence.witness)
          << " residual=" << format_real(e.coincidence.residual);
    else
      out << " differ (no level-set point on the hyperplanes; nearest residual "
          << format_real(e.coincidence.residual) << ")";
    out << '\n';
  }
  out << (rep.isospectral ? "ISOSPECTRAL" : "NOT ISOSPECTRAL") << '\n';
  if (rep.direct.coarse_grid() || rep.limit.coarse_grid())
    err << "warning: grid may be too coarse; refined optimum moved more than one cell\n";
  return kExitOk;
}

inline int cmd_asymptotics(const Config& c, std::ostream& out, std::ostream&) {
  const auto g = load_input(c);
  if (c.t_sequence.empty()) throw UsageError("--t-sequence is required");
  const auto ts = parse_t_sequence(c.t_sequence);
  Config cc = c;
  cc.index = c.t_sequence.substr(0, c.t_sequence.find(';'));
  const auto p = perturbation(cc, g);
  detail::check_band(g, c.band);
  const auto st = convergence_study(g, p.v1, p.v2, c.band, edge_kind(c), ts, grid_spec(c));
  if (c.output.empty()) {
    write_convergence_csv(out, st);
  } else {
    std::ofstream f(c.output, std::ios::binary);
    if (!f) throw GraphError("cannot write '" + c.output + "'");
    write_convergence_csv(f, st);
  }
  out << "# band " << st.band << ' ' << to_string(st.kind) << " limit edge " << format_real(st.limit_edge)
      << ", error order " << st.error_order << '\n';
  for (const auto& r : st.rows)
    out << "# t_norm=" << format_real(r.t_norm)
        << " eps*t_norm^2=" << format_real(std::abs(st.limit_edge - r.direct) * r.t_norm * r.t_norm) << '\n';
  out << "# residual log-log slope " << format_real(st.slope) << '\n';
  return kExitOk;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Band spectra of periodic graphs, edge perturbations and limit graphs", "pgraph"};
  app.require_subcommand(1);

  auto add_graph = [&](CLI::App* s) {
    s->add_option("graph", c.input, "Graph JSON file");
    s->add_option("--builtin", c.builtin_name, "Built-in graph: " + [] {
      std::string s;
      for (const auto& n : builtin_names()) s += (s.empty() ? "" : ", ") + n;
      return s;
    }());
    s->add_option("--q", c.q, "Potential parameter for built-ins")->capture_default_str();
  };
  auto add_grid = [&](CLI::App* s) {
    s->add_option("--grid", c.grid, "Grid points per dimension (>= 8; default by dimension)")
        ->check(CLI::Range(8, 1 << 20));
    s->add_option("--tol", c.tolerance, "Refinement tolerance")->check(CLI::PositiveNumber);
    s->add_option("--threads", c.threads, "Worker threads (default: available parallelism)");
  };
  auto add_perturbation = [&](CLI::App* s) {
    s->add_option("--from", c.from, "First endpoint of the added edge (default: first vertex)");
    s->add_option("--to", c.to, "Second endpoint of the added edge (default: second vertex)");
  };

  auto* spec = app.add_subcommand("spectrum", "Band edges and spectrum");
  add_graph(spec);
  add_grid(spec);

  auto* pert = app.add_subcommand("perturb", "Add one edge (from, to, index)");
  add_graph(pert);
  add_perturbation(pert);
  pert->add_option("--index", c.index, "Index of the added edge, comma separated")->required();
  pert->add_option("-o,--out", c.output, "Output graph file (default: stdout)");

  auto* lim = app.add_subcommand("limit", "Lift a perturbed graph to its limit graph");
  add_graph(lim);
  lim->add_option("--edge", c.edge, "Ordinal of the added edge (default: last edge)");
  lim->add_option("-o,--out", c.output, "Output graph file (default: stdout)");

  auto* disp = app.add_subcommand("dispersion", "Band functions on a regular grid as CSV");
  add_graph(disp);
  add_grid(disp);
  disp->add_option("-o,--out", c.output, "Output CSV file (default: stdout)");

  auto* iso = app.add_subcommand("isospectral", "Compare a perturbed graph with its limit graph");
  add_graph(iso);
  add_grid(iso);
  add_perturbation(iso);
  iso->add_option("--index", c.index, "Index t of the added edge, comma separated")->required();

  auto* asy = app.add_subcommand("asymptotics", "Band-edge asymptotics along a sequence of t");
  add_graph(asy);
  add_grid(asy);
  add_perturbation(asy);
  asy->add_option("--t-sequence", c.t_sequence, "Index vectors separated by ';', e.g. 20;40;80 or 6,8;12,16")
      ->required();
  asy->add_option("--band", c.band, "Band index (1-based)")->capture_default_str()->check(CLI::PositiveNumber);
  asy->add_option("--kind", c.kind, "Band edge: min or max")->capture_default_str()->check(CLI::IsMember({"min", "max"}));
  asy->add_option("-o,--out", c.output, "Output CSV file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (spec->parsed()) return cmd_spectrum(c, out, err);
    if (pert->parsed()) return cmd_perturb(c, out, err);
    if (lim->parsed()) return cmd_limit(c, out, err);
    if (disp->parsed()) return cmd_dispersion(c, out, err);
    if (iso->parsed()) return cmd_isospectral(c, out, err);
    if (asy->parsed()) return cmd_asymptotics(c, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const AssumptionViolation& e) {
    err << "refused: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitUsage;
}

}  // namespace pgraph::cli
