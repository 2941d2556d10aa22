// rlab: command-line front end.
//
// Exit codes: 0 success, 1 invalid input, 2 internal error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rlab/chg_io.hpp"
#include "rlab/lab.hpp"
#include "rlab/models.hpp"
#include "rlab/moments.hpp"
#include "rlab/rational.hpp"
#include "rlab/solver.hpp"

using nlohmann::json;
using namespace rlab;

namespace {

constexpr int kExitInvalid = 1;
constexpr int kExitInternal = 2;

struct Options {
  int n = 0;
  int k = 0;
  int ell = 1;
  std::optional<long> r;
  std::optional<std::string> c;
  std::optional<std::string> p;
  std::optional<std::string> p_grid;
  long trials = 100;
  std::uint64_t seed = 1;
  std::uint64_t budget = 0;
  std::string mode = "exhaustive";
  std::string sample_mode = "enumerate";
  int workers = 0;
  std::string out;
  std::string format;  // empty: per-command default
  std::string input;
  std::string perm;
  bool directed = false;
  bool canonical_blocks = false;
  bool second = false;
};

double parse_probability(const std::string& text) {
  const mpq_class q = parse_rational(text);
  if (q < 0 || q > 1) throw Error(ErrorKind::InvalidInput, "probability must lie in [0, 1]");
  return q.get_num().get_d() / q.get_den().get_d();
}

SearchMode parse_mode(const std::string& s) {
  if (s == "exhaustive") return SearchMode::Exhaustive;
  if (s == "budgeted") return SearchMode::Budgeted;
  throw Error(ErrorKind::InvalidInput, "unknown mode '" + s + "'");
}

SampleMode parse_sample_mode(const std::string& s) {
  if (s == "enumerate") return SampleMode::Enumerate;
  if (s == "binomial") return SampleMode::Binomial;
  throw Error(ErrorKind::InvalidInput, "unknown sample mode '" + s + "'");
}

ColorRule color_rule(const Options& o) {
  ColorRule rule;
  if (o.r) rule.r = *o.r;
  if (o.c) rule.c = ColorDensity::parse(*o.c);
  if (!rule.r && !rule.c) throw Error(ErrorKind::InvalidInput, "give --r or --c");
  return rule;
}

CycleSpec spec_of(int n, int k, int ell) {
  try {
    return CycleSpec::make(n, k, ell);
  } catch (const Error& e) {
    throw Error(ErrorKind::InvalidInput, e.what());
  }
}

std::vector<double> grid_of(const Options& o) {
  if (o.p && o.p_grid) throw Error(ErrorKind::InvalidInput, "give --p or --p-grid, not both");
  if (o.p) return {parse_probability(*o.p)};
  if (o.p_grid) return PGrid::parse(*o.p_grid).values();
  throw Error(ErrorKind::InvalidInput, "give --p or --p-grid");
}

// Writes to --out when given, stdout otherwise.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw Error(ErrorKind::InvalidInput, "cannot open '" + path + "' for writing");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void check_format(Options& o, const char* fallback = "csv") {
  if (o.format.empty()) o.format = fallback;
  if (o.format != "csv" && o.format != "json") throw Error(ErrorKind::InvalidInput, "format must be csv or json");
}

json kset_json(KSet e) { return e.vertices(); }

json certificate_json(const RainbowCertificate& cert) {
  json edges = json::array();
  for (KSet e : cert.edges) edges.push_back(kset_json(e));
  return {{"permutation", cert.hamperm.pi()}, {"edges", edges}, {"colors", cert.colors}};
}

std::string csv_join(const std::vector<int>& v, char sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(v[i]);
  }
  return out;
}

// Instance from --input, or sampled from --n --k --r/--c --p --seed.
struct Instance {
  ColoredHypergraph h;
  json provenance;
};

Instance load_instance(const Options& o) {
  if (!o.input.empty()) {
    return {read_chg_file(o.input), {{"source", "file"}, {"path", o.input}}};
  }
  if (o.n == 0 || o.k == 0 || !o.p) throw Error(ErrorKind::InvalidInput, "give --input or --n, --k, --p and --r/--c");
  const long r = color_rule(o).colors_for(o.n);
  const double p = parse_probability(*o.p);
  json prov = {{"source", "generated"}, {"n", o.n}, {"k", o.k}, {"r", r}, {"p", p}, {"seed", o.seed}};
  if (o.directed) {
    const double q = q_from_p(p);
    prov["model"] = "directed";
    prov["q"] = q;
    return {sample_directed(o.n, o.k, q, static_cast<int>(r), o.seed), prov};
  }
  prov["model"] = "plain";
  prov["sample_mode"] = o.sample_mode;
  return {sample_colored(o.n, o.k, p, static_cast<int>(r), o.seed, parse_sample_mode(o.sample_mode)), prov};
}

void cmd_gen(const Options& o) {
  if (o.n == 0 || o.k == 0 || !o.p) throw Error(ErrorKind::InvalidInput, "gen needs --n, --k, --p and --r/--c");
  const Instance inst = load_instance(o);
  HeaderFields header;
  for (const auto& [key, value] : inst.provenance.items()) {
    if (key == "source") continue;
    header.emplace_back(key, value.is_string() ? value.get<std::string>() : value.dump());
  }
  Output out(o.out);
  write_chg(out.stream(), inst.h, header);
}

void cmd_check(Options& o) {
  check_format(o);
  if (o.input.empty() || o.perm.empty()) throw Error(ErrorKind::InvalidInput, "check needs --input and --perm");
  const ColoredHypergraph h = read_chg_file(o.input);
  std::vector<int> pi;
  std::stringstream ss(o.perm);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      pi.push_back(std::stoi(item));
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::InvalidInput, "malformed permutation entry '" + item + "'");
    }
  }
  const CycleSpec spec = spec_of(h.n(), h.k(), o.ell);
  const Validation v = validate_cycle(h, Hamperm(pi, spec));

  json rec = {{"n", spec.n}, {"k", spec.k}, {"ell", spec.ell}, {"permutation", pi}};
  if (const auto* cert = std::get_if<RainbowCertificate>(&v)) {
    rec["result"] = "RainbowCertificate";
    rec["certificate"] = certificate_json(*cert);
  } else if (const auto* miss = std::get_if<MissingEdge>(&v)) {
    rec["result"] = "MissingEdge";
    rec["index"] = miss->index;
  } else {
    rec["result"] = "NotRainbow";
  }
  Output out(o.out);
  if (o.format == "json") {
    out.stream() << rec.dump(2) << '\n';
  } else {
    out.stream() << "result,index,colors\n"
                 << rec["result"].get<std::string>() << ','
                 << (rec.contains("index") ? std::to_string(rec["index"].get<int>()) : "") << ','
                 << (rec.contains("certificate") ? csv_join(rec["certificate"]["colors"].get<std::vector<int>>(), ' ')
                                                 : "")
                 << '\n';
  }
}

void cmd_solve(Options& o) {
  check_format(o, "json");
  const Instance inst = load_instance(o);
  const CycleSpec spec = spec_of(inst.h.n(), inst.h.k(), o.ell);
  SearchOptions options;
  options.mode = parse_mode(o.mode);
  options.budget = o.budget;
  options.canonical_blocks = o.canonical_blocks;
  const SearchOutcome res = find_rainbow_cycle(inst.h, spec, options);

  json rec = {{"status", to_string(res.status)},
              {"reason", res.reason},
              {"nodes_expanded", res.nodes_expanded},
              {"budget_hit", res.budget_hit},
              {"mode", to_string(options.mode)},
              {"budget", options.budget},
              {"spec", {{"n", spec.n}, {"k", spec.k}, {"ell", spec.ell}, {"m", spec.m}}},
              {"instance", inst.provenance}};
  rec["certificate"] = res.certificate ? certificate_json(*res.certificate) : json(nullptr);
  Output out(o.out);
  if (o.format == "csv") {
    out.stream() << "status,reason,nodes_expanded,budget_hit,permutation,colors\n"
                 << to_string(res.status) << ',' << res.reason << ',' << res.nodes_expanded << ','
                 << (res.budget_hit ? 1 : 0) << ','
                 << (res.certificate ? csv_join(res.certificate->hamperm.pi(), ' ') : "") << ','
                 << (res.certificate ? csv_join(res.certificate->colors, ' ') : "") << '\n';
  } else {
    out.stream() << rec.dump(2) << '\n';
  }
}

void cmd_count(Options& o) {
  check_format(o);
  const Instance inst = load_instance(o);
  const CycleSpec spec = spec_of(inst.h.n(), inst.h.k(), o.ell);
  const HampermCounts counts = count_hamperms(inst.h, spec, kDefaultEnumerationLimit, o.workers);
  Output out(o.out);
  if (o.format == "json") {
    json rec = {{"n", spec.n}, {"k", spec.k}, {"ell", spec.ell}, {"x_count", counts.x_count},
                {"y_count", counts.y_count}, {"instance", inst.provenance}};
    out.stream() << rec.dump(2) << '\n';
  } else {
    out.stream() << "n,k,ell,x_count,y_count\n"
                 << spec.n << ',' << spec.k << ',' << spec.ell << ',' << counts.x_count << ',' << counts.y_count
                 << '\n';
  }
}

void cmd_overlap(Options& o) {
  check_format(o);
  const CycleSpec spec = spec_of(o.n, o.k, o.ell);
  const OverlapProfile prof = overlap_profile(spec, kDefaultEnumerationLimit, o.workers);
  Output out(o.out);
  if (o.format == "json") {
    json rows = json::array();
    for (const auto& [key, count] : prof.table) rows.push_back({{"b", key.first}, {"a", key.second}, {"count", count}});
    out.stream() << json{{"n", spec.n}, {"k", spec.k}, {"ell", spec.ell}, {"total", prof.total()}, {"table", rows}}.dump(2)
                 << '\n';
  } else {
    out.stream() << "b,a,count\n";
    for (const auto& [key, count] : prof.table) out.stream() << key.first << ',' << key.second << ',' << count << '\n';
  }
}

std::string num(double x) {
  if (std::isnan(x)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

void cmd_moments(Options& o) {
  check_format(o);
  const CycleSpec spec = spec_of(o.n, o.k, o.ell);
  const long r = color_rule(o).colors_for(o.n);
  const double c = static_cast<double>(r) / o.n;
  const std::vector<double> grid = grid_of(o);
  const bool exact = spec.n <= 64;
  std::optional<OverlapProfile> prof;
  if (o.second) {
    if (spec.n > kDefaultEnumerationLimit) throw Error(ErrorKind::TooLarge, "--second needs n <= 9");
    prof = overlap_profile(spec, kDefaultEnumerationLimit, o.workers);
  }

  auto optional_threshold = [](auto&& f) {
    try {
      return f();
    } catch (const Error&) {
      return std::nan("");
    }
  };
  const double t_general = optional_threshold([&] { return threshold_general(spec.k, spec.ell, c, spec.n); });
  const double t_tight =
      spec.tight() ? optional_threshold([&] { return threshold_tight(spec.k, c, spec.n); }) : std::nan("");

  json rows = json::array();
  for (double p : grid) {
    json row = {{"n", spec.n}, {"k", spec.k}, {"ell", spec.ell}, {"r", r}, {"c", c}, {"p", p}};
    row["log_EY"] = log_expected_Y(spec.n, spec.k, spec.ell, p, r);
    row["log_EY_asymptotic"] =
        optional_threshold([&] { return asymptotic_log_expected_Y(spec.n, spec.k, spec.ell, p, r); });
    if (exact) {
      const mpq_class pq(p);
      row["EY"] = exact_expected_Y(spec, pq, r).get_d();
      if (prof && r >= spec.m && p > 0) {
        const mpq_class ey = exact_expected_Y(spec, pq, r);
        const mpq_class ratio = second_moment_from_profile(*prof, pq, r) / (ey * ey);
        row["second_moment_ratio"] = ratio.get_d();
      }
    }
    row["threshold_general"] = t_general;
    row["threshold_tight"] = t_tight;
    rows.push_back(row);
  }

  Output out(o.out);
  if (o.format == "json") {
    out.stream() << rows.dump(2) << '\n';
    return;
  }
  out.stream() << "n,k,ell,r,c,p,EY,log_EY,log_EY_asymptotic,second_moment_ratio,threshold_general,threshold_tight\n";
  auto cell = [](const json& row, const char* key) {
    if (!row.contains(key) || row[key].is_null()) return std::string();
    return num(row[key].get<double>());
  };
  for (const json& row : rows) {
    out.stream() << spec.n << ',' << spec.k << ',' << spec.ell << ',' << r << ',' << num(c) << ','
                 << num(row["p"].get<double>()) << ',' << cell(row, "EY") << ',' << cell(row, "log_EY") << ','
                 << cell(row, "log_EY_asymptotic") << ',' << cell(row, "second_moment_ratio") << ','
                 << cell(row, "threshold_general") << ',' << cell(row, "threshold_tight") << '\n';
  }
}

SweepConfig sweep_config(const Options& o) {
  SweepConfig cfg;
  cfg.n = o.n;
  cfg.k = o.k;
  cfg.ell = o.ell;
  cfg.colors = color_rule(o);
  cfg.grid = grid_of(o);
  cfg.trials = o.trials;
  cfg.seed = o.seed;
  cfg.mode = parse_mode(o.mode);
  cfg.budget = o.budget;
  cfg.workers = o.workers;
  cfg.validate();
  return cfg;
}

void write_rows(const Options& o, const SweepConfig& cfg, const std::vector<SweepResult>& rows) {
  Output out(o.out);
  if (o.format == "csv") {
    write_sweep_csv(out.stream(), cfg, rows);
    return;
  }
  json arr = json::array();
  for (const SweepResult& row : rows) {
    arr.push_back({{"n", cfg.n}, {"k", cfg.k}, {"ell", cfg.ell}, {"r", cfg.r()}, {"p", row.p},
                   {"trials", row.trials}, {"found", row.found}, {"not_found", row.not_found},
                   {"unknown", row.unknown}, {"phat", row.phat}, {"ci_lo", row.ci_lo}, {"ci_hi", row.ci_hi},
                   {"mean_nodes", row.mean_nodes}});
  }
  json rec = {{"seed", cfg.seed}, {"mode", to_string(cfg.mode)}, {"budget", cfg.budget}, {"rows", arr}};
  if (const auto crossing = estimate_crossing(rows)) rec["crossing"] = *crossing;
  out.stream() << rec.dump(2) << '\n';
}

void cmd_sweep(Options& o, bool coupled) {
  check_format(o);
  const SweepConfig cfg = sweep_config(o);
  write_rows(o, cfg, coupled ? run_coupled_sweep(cfg).rows : run_sweep(cfg));
}

void cmd_reduce(const Options& o) {
  if (o.input.empty()) throw Error(ErrorKind::InvalidInput, "reduce needs --input");
  const ColoredHypergraph h = read_chg_file(o.input);
  const GammaGraph g = build_gamma(h);
  const GammaPartition& part = g.partition();
  Output out(o.out);
  write_chg(out.stream(), g.as_hypergraph(),
            {{"source", o.input},
             {"X", "1-" + std::to_string(part.m)},
             {"Y", std::to_string(part.m + 1) + "-" + std::to_string(part.n)},
             {"Z", std::to_string(part.n + 1) + "-" + std::to_string(part.n + part.m)},
             {"color", "z - " + std::to_string(part.n)}});
}

void cmd_couple(const Options& o) {
  if (!o.p) throw Error(ErrorKind::InvalidInput, "couple needs --p");
  const double p = parse_probability(*o.p);
  const CoupleResult res = couple_experiment(o.n, o.k, p, o.trials, o.seed, o.workers);
  json rec = {{"n", o.n},
              {"k", o.k},
              {"r", o.n / (o.k - 1)},
              {"p", res.p},
              {"q", res.q},
              {"trials", res.trials},
              {"seed", o.seed},
              {"found_undirected", res.found_undirected},
              {"found_directed", res.found_directed},
              {"phat_undirected", res.phat_undirected},
              {"phat_directed", res.phat_directed},
              {"ci_undirected", {res.ci_undirected.lo, res.ci_undirected.hi}},
              {"ci_directed", {res.ci_directed.lo, res.ci_directed.hi}},
              {"pooled_se", res.pooled_se},
              {"holds", res.holds}};
  Output out(o.out);
  out.stream() << rec.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rainbow Hamilton cycles in random colored hypergraphs"};
  app.require_subcommand(1);
  Options o;

  auto add_shape = [&](CLI::App* cmd, bool need_n) {
    auto* n = cmd->add_option("--n", o.n, "number of vertices");
    auto* k = cmd->add_option("--k", o.k, "edge size");
    if (need_n) {
      n->required();
      k->required();
    }
    cmd->add_option("--ell", o.ell, "overlap of consecutive cycle edges")->capture_default_str();
  };
  auto add_colors = [&](CLI::App* cmd) {
    auto* r = cmd->add_option("--r", o.r, "number of colors");
    auto* c = cmd->add_option("--c", o.c, "color density, r = floor(c n)");
    r->excludes(c);
  };
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", o.out, "output file (default stdout)");
    cmd->add_option("--format", o.format, "csv or json");
    cmd->add_option("--workers", o.workers, "worker threads, 0 = all")->capture_default_str();
  };
  auto add_search = [&](CLI::App* cmd) {
    cmd->add_option("--mode", o.mode, "exhaustive or budgeted")->capture_default_str();
    cmd->add_option("--budget", o.budget, "node budget in budgeted mode");
  };
  auto add_instance = [&](CLI::App* cmd) {
    cmd->add_option("--input", o.input, ".chg instance file");
    cmd->add_option("--p", o.p, "edge probability");
    cmd->add_option("--seed", o.seed, "master seed")->capture_default_str();
    cmd->add_option("--sample-mode", o.sample_mode, "enumerate or binomial")->capture_default_str();
    cmd->add_flag("--directed", o.directed, "sample the directed model at q_from_p(p)");
  };

  auto* gen = app.add_subcommand("gen", "sample a colored hypergraph to .chg");
  add_shape(gen, true);
  add_colors(gen);
  add_instance(gen);
  gen->add_option("--out", o.out, "output file (default stdout)");

  auto* check = app.add_subcommand("check", "validate a permutation against a .chg file");
  check->add_option("--input", o.input, ".chg instance file")->required();
  check->add_option("--perm", o.perm, "comma-separated permutation of [n]")->required();
  check->add_option("--ell", o.ell, "overlap of consecutive cycle edges")->capture_default_str();
  add_common(check);

  auto* solve = app.add_subcommand("solve", "search one instance for a rainbow cycle");
  add_shape(solve, false);
  add_colors(solve);
  add_instance(solve);
  add_search(solve);
  add_common(solve);
  solve->add_flag("--canonical-blocks", o.canonical_blocks, "fix the order inside each block");

  auto* count = app.add_subcommand("count", "count hamperms by enumeration");
  add_shape(count, false);
  add_colors(count);
  add_instance(count);
  add_common(count);

  auto* overlap = app.add_subcommand("overlap", "N(b, a) overlap table");
  add_shape(overlap, true);
  add_common(overlap);

  auto* moments = app.add_subcommand("moments", "first-moment formulas and thresholds");
  add_shape(moments, true);
  add_colors(moments);
  moments->add_option("--p", o.p, "edge probability");
  moments->add_option("--p-grid", o.p_grid, "start:stop:points:spacing");
  moments->add_flag("--second", o.second, "add E(Y^2)/E(Y)^2 from the overlap table (n <= 9)");
  add_common(moments);

  auto add_sweep = [&](CLI::App* cmd) {
    add_shape(cmd, true);
    add_colors(cmd);
    cmd->add_option("--p", o.p, "single edge probability");
    cmd->add_option("--p-grid", o.p_grid, "start:stop:points:spacing");
    cmd->add_option("--trials", o.trials, "trials per grid point")->capture_default_str();
    cmd->add_option("--seed", o.seed, "master seed")->capture_default_str();
    add_search(cmd);
    add_common(cmd);
  };
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo sweep over p");
  add_sweep(sweep);
  auto* csweep = app.add_subcommand("csweep", "coupled Monte Carlo sweep over p");
  add_sweep(csweep);

  auto* reduce = app.add_subcommand("reduce", "map a loose instance to its (k+1)-uniform color graph");
  reduce->add_option("--input", o.input, ".chg instance file")->required();
  reduce->add_option("--out", o.out, "output file (default stdout)");

  auto* couple = app.add_subcommand("couple", "plain vs directed model experiment");
  couple->add_option("--n", o.n, "number of vertices")->required();
  couple->add_option("--k", o.k, "edge size")->required();
  couple->add_option("--p", o.p, "edge probability, at most 1/8")->required();
  couple->add_option("--trials", o.trials, "trials per model")->capture_default_str();
  couple->add_option("--seed", o.seed, "master seed")->capture_default_str();
  couple->add_option("--workers", o.workers, "worker threads, 0 = all")->capture_default_str();
  couple->add_option("--out", o.out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (gen->parsed()) cmd_gen(o);
    if (check->parsed()) cmd_check(o);
    if (solve->parsed()) cmd_solve(o);
    if (count->parsed()) cmd_count(o);
    if (overlap->parsed()) cmd_overlap(o);
    if (moments->parsed()) cmd_moments(o);
    if (sweep->parsed()) cmd_sweep(o, false);
    if (csweep->parsed()) cmd_sweep(o, true);
    if (reduce->parsed()) cmd_reduce(o);
    if (couple->parsed()) cmd_couple(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return 0;
}
