#include "tropikam/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tropikam/barrier.hpp"
#include "tropikam/ergodic.hpp"
#include "tropikam/ingest.hpp"
#include "tropikam/mather.hpp"
#include "tropikam/minplus.hpp"
#include "tropikam/transport.hpp"
#include "tropikam/weakkam.hpp"

namespace tropikam::cli {

using nlohmann::json;

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

struct Options {
  std::string input;
  std::string format;  // empty: from the file extension
  std::string out;
  std::string lagrangian;
  std::string emit_csv;
  std::string mu0 = "dirac:0";
  std::string mu1 = "uniform";
  Tolerances tol;
  std::uint64_t seed = 0;
  std::size_t orbit_length = 100000;
};

// Input problems that map to exit code 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct Loaded {
  CostKernel kernel;
  std::string source;
  std::string digest;
};

std::string hex(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << v;
  return s.str();
}

std::optional<CostFormat> parse_format(const std::string& f) {
  if (f.empty()) return std::nullopt;
  if (f == "json") return CostFormat::json;
  if (f == "csv") return CostFormat::csv;
  throw UsageError("--format must be json or csv, got '" + f + "'");
}

Loaded load_input(const Options& o) {
  if (!o.input.empty() && !o.lagrangian.empty())
    throw UsageError("give either --input or --lagrangian, not both");
  if (!o.lagrangian.empty()) {
    const LagrangianSpec spec = parse_lagrangian(o.lagrangian);
    CostKernel k = action_kernel(spec);
    const std::string digest = hex(fnv1a64(format_cost(k, CostFormat::json)));
    return {std::move(k), "lagrangian " + to_string(spec), digest};
  }
  if (o.input.empty()) throw UsageError("an --input file or a --lagrangian is required");
  std::ifstream in(o.input, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + o.input + "'", 0, 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto fmt = parse_format(o.format).value_or(format_for_path(o.input));
  return {parse_cost(text, fmt), o.input, hex(fnv1a64(text))};
}

Measure parse_measure(const std::string& text, std::size_t n, std::uint64_t seed,
                      const Tolerances& tol) {
  Measure m;
  if (text == "uniform") {
    m = Measure::uniform(n);
  } else if (text.rfind("dirac:", 0) == 0) {
    std::size_t idx = 0;
    const char* first = text.data() + 6;
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, idx);
    if (ec != std::errc() || ptr != last || idx >= n)
      throw UsageError("bad Dirac index in '" + text + "' for " + std::to_string(n) + " points");
    m = Measure::dirac(n, idx);
  } else if (text == "random") {
    std::mt19937_64 rng(seed);
    m = Measure::random(n, rng);
  } else {
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw UsageError("measure '" + text + "' is neither a keyword nor a JSON array");
    }
    if (!doc.is_array() || doc.size() != n)
      throw UsageError("measure must be a JSON array of " + std::to_string(n) + " weights");
    std::vector<double> w;
    for (const json& v : doc) {
      if (!v.is_number()) throw UsageError("measure weights must be numbers");
      w.push_back(v.get<double>());
    }
    m = Measure(std::move(w));
  }
  try {
    m.validate(tol);
  } catch (const PreconditionError& e) {
    throw UsageError(e.what());
  }
  return m;
}

json checks_json(const Report& r) {
  json arr = json::array();
  for (const Check& c : r.checks()) {
    json j{{"name", c.name}, {"residual", c.residual}, {"tolerance", c.tolerance},
           {"pass", c.passed()}};
    if (!c.detail.empty()) j["detail"] = c.detail;
    arr.push_back(std::move(j));
  }
  return arr;
}

json edges_json(const EdgeSet& e) {
  json arr = json::array();
  for (const auto& [x, y] : e) arr.push_back({x, y});
  return arr;
}

json matrix_json(const Matrix& m) {
  json arr = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i)
    arr.push_back(std::vector<double>(m.row(i).begin(), m.row(i).end()));
  return arr;
}

double coord(const CostKernel& k, std::size_t i) {
  const auto& c = k.points()[i].coords;
  return c.empty() ? static_cast<double>(i) : c.front();
}

// Writes rows of a CSV table; numbers at full precision.
class CsvOut {
 public:
  CsvOut(const std::string& path, const std::string& header) {
    if (path.empty()) return;
    file_.open(path);
    if (!file_) throw UsageError("cannot write '" + path + "'");
    file_ << header << '\n';
    file_ << std::setprecision(17);
  }
  bool active() const { return file_.is_open(); }
  template <class... Ts>
  void row(const Ts&... cols) {
    if (!active()) return;
    bool first = true;
    ((file_ << (first ? "" : ",") << cols, first = false), ...);
    file_ << '\n';
  }

 private:
  std::ofstream file_;
};

struct Context {
  const Options& opt;
  std::ostream& out;
  json doc;
  Report report;
};

json tolerances_json(const Tolerances& t) {
  return {{"num", t.num}, {"aubry", t.aubry}, {"dual", t.dual}, {"mass", t.mass}};
}

void describe_barrier(Context& ctx, const Analysis& an) {
  const BarrierData& bd = an.barrier;
  ctx.doc["critical_value"] = bd.critical_value;
  ctx.doc["oscillation_bound"] = bd.oscillation_bound;
  ctx.doc["aubry"] = bd.aubry;
  ctx.doc["d_edges"] = edges_json(bd.d_edges);
  ctx.out << "critical value l = " << std::setprecision(17) << bd.critical_value << "\n"
          << "Aubry set: " << bd.aubry.size() << " of " << bd.size() << " points\n"
          << "D: " << bd.d_edges.size() << " edges\n";
}

void cmd_analyze(Context& ctx, const Loaded& in) {
  const Analysis an = analyze_kernel(in.kernel, ctx.opt.tol);
  describe_barrier(ctx, an);
  const CostKernel& a = an.normalized.kernel;
  const double mmc = min_mean_cycle(a.costs());
  ctx.report.add("normalized_min_mean_cycle", std::abs(mmc), ctx.opt.tol.num);
  ctx.report.append(check_cost_axioms(an.barrier, ctx.opt.tol));
  ctx.report.append(check_propdec(a, an.barrier, 1, ctx.opt.tol), "n1.");
  ctx.report.append(check_propdec(a, an.barrier, 2, ctx.opt.tol), "n2.");
  ctx.doc["barrier"] = matrix_json(an.barrier.barrier);

  CsvOut csv(ctx.opt.emit_csv, "index,label,coord,in_aubry,diagonal_barrier");
  for (std::size_t i = 0; i < a.size(); ++i)
    csv.row(i, a.points()[i].label, coord(a, i), an.barrier.in_aubry(i) ? 1 : 0,
            an.barrier(i, i));
}

void cmd_kam(Context& ctx, const Loaded& in) {
  const Analysis an = analyze_kernel(in.kernel, ctx.opt.tol);
  describe_barrier(ctx, an);
  const BarrierData& bd = an.barrier;
  const CostKernel& a = an.normalized.kernel;
  std::mt19937_64 rng(ctx.opt.seed);
  const std::vector<double> seed_values = random_lipschitz_on_aubry(bd, rng);
  const KamPair pair = pair_from_lipschitz(bd, seed_values, ctx.opt.tol);
  ctx.report.append(check_theorem_pairs(a, bd, pair, ctx.opt.tol));
  const KamPair completed = complete_pair(a, bd, pair.phi1, ctx.opt.tol);
  const Potential other = completion_from_all_points(bd, pair.phi1);
  ctx.report.add("completion_matches_pair",
                 max_abs_diff(completed.phi0.values, pair.phi0.values), ctx.opt.tol.num);
  ctx.report.add("completion_unique", max_abs_diff(completed.phi0.values, other.values),
                 ctx.opt.tol.num);
  ctx.doc["phi0"] = pair.phi0.values;
  ctx.doc["phi1"] = pair.phi1.values;

  CsvOut csv(ctx.opt.emit_csv, "index,label,coord,phi0,phi1");
  for (std::size_t i = 0; i < a.size(); ++i)
    csv.row(i, a.points()[i].label, coord(a, i), pair.phi0[i], pair.phi1[i]);
}

void cmd_transport(Context& ctx, const Loaded& in) {
  const Analysis an = analyze_kernel(in.kernel, ctx.opt.tol);
  describe_barrier(ctx, an);
  const BarrierData& bd = an.barrier;
  const std::size_t n = bd.size();
  const Measure mu0 = parse_measure(ctx.opt.mu0, n, derive_seed(ctx.opt.seed, 0), ctx.opt.tol);
  const Measure mu1 = parse_measure(ctx.opt.mu1, n, derive_seed(ctx.opt.seed, 1), ctx.opt.tol);

  const PrimalSolution primal = solve_primal(bd.barrier, mu0, mu1, ctx.opt.tol);
  const DualSolution dual = dual_value(bd, mu0, mu1, ctx.opt.tol);
  ctx.report.append(check_duality(primal.value, dual.value, ctx.opt.tol));
  ctx.report.append(check_support(primal.plan, dual.pair, bd, ctx.opt.tol));
  ctx.report.append(is_admissible_pair(bd, dual.pair, ctx.opt.tol), "dual_pair.");
  const Factorization f = factor_through_aubry(bd, mu0, mu1, ctx.opt.tol);
  ctx.report.append(f.report, "factorization.");

  ctx.doc["mu0"] = mu0.weights;
  ctx.doc["mu1"] = mu1.weights;
  ctx.doc["primal_value"] = primal.value;
  ctx.doc["dual_value"] = dual.value;
  ctx.doc["factorization"] = {{"via", f.via.weights}, {"direct", f.direct},
                              {"first", f.first}, {"second", f.second}};
  ctx.out << "transport cost C(mu0, mu1) = " << primal.value << " (dual " << dual.value
          << ")\n";

  CsvOut csv(ctx.opt.emit_csv, "x,y,mass,cost");
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (primal.plan.eta(x, y) > ctx.opt.tol.mass)
        csv.row(x, y, primal.plan.eta(x, y), bd(x, y));
}

void cmd_mather(Context& ctx, const Loaded& in) {
  const Analysis an = analyze_kernel(in.kernel, ctx.opt.tol);
  describe_barrier(ctx, an);
  const BarrierData& bd = an.barrier;
  const CostKernel& a = an.normalized.kernel;
  const MatherSolution sol = solve_mather(a, ctx.opt.tol, ctx.opt.seed);
  ctx.report.append(verify_minimizer_characterization(a, bd, sol.coupling, ctx.opt.tol));

  const EdgeSet d1 = contact_edges(a, bd, ctx.opt.tol);
  const EdgeSet dinf = d_infinity_filter(d1);
  double outside_d = 0.0;
  for (const auto& [x, y] : dinf)
    if (!bd.in_d(x, y)) outside_d += 1.0;
  double outside_dinf = 0.0;
  for (std::size_t x = 0; x < a.size(); ++x)
    for (std::size_t y = 0; y < a.size(); ++y)
      if (sol.coupling.eta(x, y) > ctx.opt.tol.mass &&
          !std::binary_search(dinf.begin(), dinf.end(), Edge{x, y}))
        outside_dinf += 1.0;
  ctx.report.add("d_infinity_within_D", outside_d, 0.0, "edges of D_inf outside D");
  ctx.report.add("support_within_d_infinity", outside_dinf, 0.0,
                 "optimal support edges outside D_inf");

  ctx.doc["mather_value"] = sol.value;
  ctx.doc["d1_edges"] = edges_json(d1);
  ctx.doc["d_infinity_edges"] = edges_json(dinf);
  // Informational: the finite generating family may miss part of D.
  ctx.doc["d_infinity_matches_D"] = dinf == bd.d_edges;
  json support = json::array();
  CsvOut csv(ctx.opt.emit_csv, "x,y,mass");
  for (std::size_t x = 0; x < a.size(); ++x)
    for (std::size_t y = 0; y < a.size(); ++y)
      if (sol.coupling.eta(x, y) > ctx.opt.tol.mass) {
        support.push_back({{"x", x}, {"y", y}, {"mass", sol.coupling.eta(x, y)}});
        csv.row(x, y, sol.coupling.eta(x, y));
      }
  ctx.doc["coupling"] = std::move(support);
  ctx.out << "minimal stationary cost = " << sol.value << "; D_inf has " << dinf.size()
          << " edges\n";
}

void cmd_ergodic(Context& ctx, const Loaded& in) {
  const Analysis an = analyze_kernel(in.kernel, ctx.opt.tol);
  describe_barrier(ctx, an);
  const CostKernel& a = an.normalized.kernel;
  const MatherSolution sol = solve_mather(a, ctx.opt.tol, ctx.opt.seed);
  ErgodicOptions eo;
  eo.length = ctx.opt.orbit_length;
  eo.seed = ctx.opt.seed;
  if (eo.length < 2) throw UsageError("--orbit-length must be at least 2");
  const ErgodicResult r = check_ergodic(a, sol.coupling, eo, ctx.opt.tol);
  ctx.report.append(r.report);
  ctx.doc["birkhoff"] = {{"average", r.average},
                         {"space_average", r.space_average},
                         {"statistical_tolerance", r.statistical_tolerance},
                         {"pair_total_variation", r.pair_tv},
                         {"occupation_total_variation", r.occupation_tv},
                         {"recurrent_classes", r.classes},
                         {"orbit_length", eo.length}};
  ctx.out << "Birkhoff average " << r.average << " vs space average " << r.space_average
          << " (tolerance " << r.statistical_tolerance << ")\n";

  CsvOut csv(ctx.opt.emit_csv, "index,label,coord,stationary");
  for (std::size_t i = 0; i < a.size(); ++i)
    csv.row(i, a.points()[i].label, coord(a, i), sol.coupling.marginal[i]);
}

int cmd_ingest(const Options& o, std::ostream& out) {
  const Loaded in = load_input(o);
  out << "kernel: " << in.kernel.size() << " points from " << in.source << "\n"
      << "digest: " << in.digest << "\n";
  if (!o.out.empty()) {
    const auto fmt = parse_format(o.format).value_or(format_for_path(o.out));
    save_cost(in.kernel, o.out, fmt);
    out << "wrote " << o.out << "\n";
  }
  CsvOut csv(o.emit_csv, "index,label,coord,loop_cost");
  for (std::size_t i = 0; i < in.kernel.size(); ++i)
    csv.row(i, in.kernel.points()[i].label, coord(in.kernel, i), in.kernel(i, i));
  return ok;
}

void add_common(CLI::App* sub, Options& o, bool analysis) {
  sub->add_option("--input", o.input, "Cost file (JSON or CSV)");
  sub->add_option("--format", o.format, "Cost file format: json or csv");
  sub->add_option("--lagrangian", o.lagrangian,
                  "Generate the kernel, e.g. pendulum:eps=0.1,N=50,K=10");
  sub->add_option("--emit-csv", o.emit_csv, "Write a plot-ready CSV table");
  sub->add_option("--eps-num", o.tol.num, "Numerical zero")->check(CLI::PositiveNumber);
  sub->add_option("--eps-aubry", o.tol.aubry, "Aubry set and D membership tolerance")
      ->check(CLI::PositiveNumber);
  sub->add_option("--eps-dual", o.tol.dual, "LP value and duality gap tolerance")
      ->check(CLI::PositiveNumber);
  if (analysis) {
    sub->add_option("--out", o.out, "Write the JSON report here ('-' for standard output)");
    sub->add_option("--seed", o.seed, "Seed for random choices");
  } else {
    sub->add_option("--out", o.out, "Write the kernel here");
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete weak KAM, Peierls barrier and Mather analysis of cost kernels",
               "tropikam"};
  app.require_subcommand(1);
  Options o;
  auto* ingest = app.add_subcommand("ingest", "Generate a kernel or validate a cost file");
  add_common(ingest, o, false);
  struct Cmd {
    const char* name;
    const char* help;
    void (*fn)(Context&, const Loaded&);
  };
  const Cmd cmds[] = {
      {"analyze", "Critical value, barrier, Aubry set and axiom checks", cmd_analyze},
      {"kam", "Build and verify a weak KAM pair", cmd_kam},
      {"transport", "Primal and dual transport, support and factorization", cmd_transport},
      {"mather", "Minimizing stationary coupling and its support", cmd_mather},
      {"ergodic", "Markov realization and Birkhoff averages", cmd_ergodic},
  };
  std::vector<CLI::App*> subs;
  for (const Cmd& c : cmds) {
    auto* s = app.add_subcommand(c.name, c.help);
    add_common(s, o, true);
    if (std::string_view(c.name) == "transport") {
      s->add_option("--mu0", o.mu0, "Source measure: JSON array, dirac:IDX, uniform or random");
      s->add_option("--mu1", o.mu1, "Target measure: JSON array, dirac:IDX, uniform or random");
    }
    if (std::string_view(c.name) == "ergodic")
      s->add_option("--orbit-length", o.orbit_length, "Steps per sampled orbit");
    subs.push_back(s);
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : usage_error;
  }

  try {
    set_default_tolerances(o.tol);
    parse_format(o.format);
    if (ingest->parsed()) return cmd_ingest(o, out);
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (!subs[i]->parsed()) continue;
      const Loaded in = load_input(o);
      Context ctx{o, out, json::object(), {}};
      ctx.doc["report_version"] = 1;
      ctx.doc["command"] = cmds[i].name;
      ctx.doc["input"] = {{"source", in.source}, {"digest", in.digest},
                          {"size", in.kernel.size()}};
      ctx.doc["seed"] = o.seed;
      ctx.doc["tolerances"] = tolerances_json(o.tol);
      cmds[i].fn(ctx, in);
      ctx.doc["checks"] = checks_json(ctx.report);
      ctx.doc["pass"] = ctx.report.passed();

      for (const Check& c : ctx.report.checks())
        out << (c.passed() ? "  ok    " : "  FAIL  ") << c.name << "  residual "
            << c.residual << " <= " << c.tolerance << "\n";
      const std::string text = ctx.doc.dump(2) + "\n";
      if (o.out == "-") {
        out << text;
      } else if (!o.out.empty()) {
        std::ofstream f(o.out);
        if (!f) throw UsageError("cannot write '" + o.out + "'");
        f << text;
      }
      return ctx.report.passed() ? ok : check_failed;
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return usage_error;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return usage_error;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return usage_error;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << "\n";
    return usage_error;
  } catch (const Error& e) {
    err << "check failed: " << e.what() << "\n";
    return check_failed;
  }
  return usage_error;
}

}  // namespace tropikam::cli
