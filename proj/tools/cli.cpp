#include "cli.hpp"

#include "dpda/dual_bound.hpp"
#include "dpda/report.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>

namespace dpda {

namespace {

enum Exit { kOk = 0, kDiverged = 1, kConfig = 2, kCertFail = 3 };

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::string toml(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s = buf;
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}
std::string toml(long v) { return std::to_string(v); }
std::string toml(int v) { return std::to_string(v); }
std::string toml(std::uint64_t v) { return std::to_string(v); }
std::string toml(bool v) { return v ? "true" : "false"; }
std::string toml(const std::string& s) {
  std::string o = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') o += '\\';
    o += ch;
  }
  return o + "\"";
}
template <class T>
std::string toml(const std::vector<T>& v) {
  std::string o = "[";
  for (size_t i = 0; i < v.size(); ++i) o += (i ? ", " : "") + toml(v[i]);
  return o + "]";
}

// Options that are also config keys; remembers how to echo them.
class Settings {
 public:
  explicit Settings(CLI::App* app) : app_(app) {}

  template <class T>
  CLI::Option* add(const std::string& key, T& var, const std::string& desc) {
    items_.push_back({key, [&var] { return toml(var); }, [&var] { return json(var); }});
    return app_->add_option("--" + key, var, desc);
  }

  std::string echo() const {
    std::string s;
    for (const auto& it : items_) s += it.key + " = " + it.text() + "\n";
    return s;
  }

  json echo_json() const {
    json j = json::object();
    for (const auto& it : items_) j[it.key] = it.value();
    return j;
  }

 private:
  struct Item {
    std::string key;
    std::function<std::string()> text;
    std::function<json()> value;
  };
  CLI::App* app_;
  std::vector<Item> items_;
};

struct Command {
  CLI::App* app = nullptr;
  std::unique_ptr<Settings> settings;
  std::string config_path;
  bool dump_config = false;
};

Command make_command(CLI::App& parent, const std::string& name, const std::string& desc) {
  Command c;
  c.app = parent.add_subcommand(name, desc);
  c.app->allow_config_extras(CLI::config_extras_mode::error);
  c.app->add_option("--config", c.config_path, "TOML config file; flags override its values");
  c.app->add_flag("--dump-config", c.dump_config, "print the effective config and exit");
  c.settings = std::make_unique<Settings>(c.app);
  return c;
}

struct RunOptions {
  std::string problem;
  std::uint64_t seed = 0;
  long K = 1000;
  double gamma = 1.0;
  std::vector<double> c_i{1.0};
  std::string out = "out";
  std::string graph;
  double lambda2 = 1.0;
  double lambda2_tol = 0.2;
  double C = 10.0;
  int N = 10;
  std::string x0;
  bool oracle = true;
  double oracle_tol = 1e-9;
  // dynamic and resource
  double p = 2.0;
  double activation_prob = 0.7;
  int T_window = 3;
  double B = 0.0;  // 0: derived
  bool diagnostic_shadow = false;
  double B_d = 0.0;  // 0: derived from a Slater point
  std::string slater_point;
};

void add_common(Settings& s, RunOptions& o) {
  s.add("problem", o.problem, "built-in problem");
  s.add("seed", o.seed, "master seed (data, graph, activation streams)");
  s.add("K", o.K, "iterations")->check(CLI::PositiveNumber);
  s.add("gamma", o.gamma, "consensus step gamma")->check(CLI::PositiveNumber);
  s.add("c_i", o.c_i, "step-size margins, one value or one per agent");
  s.add("out", o.out, "output directory");
  s.add("graph", o.graph, "edge-list file overriding the problem's graph");
  s.add("x0", o.x0, "initial point, vector text format");
  s.add("oracle", o.oracle, "solve the centralized problem for subopt and certificates");
  s.add("oracle_tol", o.oracle_tol, "oracle KKT tolerance")->check(CLI::PositiveNumber);
}

void add_svm(Settings& s, RunOptions& o) {
  s.add("N", o.N, "svm: node count")->check(CLI::PositiveNumber);
  s.add("C", o.C, "svm: penalty")->check(CLI::PositiveNumber);
  s.add("lambda2", o.lambda2, "svm: target algebraic connectivity")->check(CLI::PositiveNumber);
  s.add("lambda2_tol", o.lambda2_tol, "svm: relative tolerance on lambda2")->check(CLI::NonNegativeNumber);
}

void add_mixing(Settings& s, RunOptions& o) {
  s.add("p", o.p, "consensus schedule q_k = ceil(k^(1/p))");
  s.add("activation_prob", o.activation_prob, "edge activation probability; 1 activates every edge");
  s.add("T_window", o.T_window, "every T_window-th round is fully active")->check(CLI::PositiveNumber);
}

Graph pick_graph(const RunOptions& o, Graph fallback, int nodes, std::ostream& err) {
  if (!o.graph.empty()) {
    Graph g = load_graph(o.graph);
    if (g.nodes() != nodes) throw ConfigError("graph file has " + std::to_string(g.nodes()) + " nodes, problem has " +
                                              std::to_string(nodes));
    return g;
  }
  (void)err;
  return fallback;
}

Graph svm_graph(const RunOptions& o, std::ostream& err) {
  if (!o.graph.empty()) return pick_graph(o, Graph(), o.N, err);
  const auto res = search_graph(o.N, o.lambda2, o.lambda2_tol, o.seed);
  if (!res.target_met)
    err << "warning: lambda2 target " << o.lambda2 << " not reached, using best graph with lambda2 " << res.lambda2
        << "\n";
  return res.graph;
}

Blocks initial_point(const RunOptions& o, Blocks zero) {
  if (o.x0.empty()) return zero;
  Blocks x = load_blocks(o.x0);
  if (x.size() != zero.size()) throw ConfigError("x0 must hold one line per agent");
  for (size_t i = 0; i < x.size(); ++i)
    if (x[i].size() != zero[i].size()) throw ConfigError("x0: wrong length on line " + std::to_string(i + 1));
  return x;
}

OracleOptions oracle_options(const RunOptions& o) {
  OracleOptions opt;
  opt.tol = o.oracle_tol;
  return opt;
}

void require_converged(const CentralSolution& sol, std::ostream& err) {
  if (sol.dual_diverged) throw DivergedError(-1, sol.iterations);
  if (!sol.converged) err << "warning: oracle stopped at KKT residual " << sol.kkt_residual << "\n";
}

std::string sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

void write_outputs(const RunOptions& o, const RunReport& rep, const json& config,
                   const std::optional<Certificate>& cert) {
  std::filesystem::create_directories(o.out);
  save_metrics_csv(o.out + "/metrics.csv", rep);
  save_json(o.out + "/summary.json", run_summary(rep, config, o.seed, cert));
  save_blocks(o.out + "/xbar.txt", rep.xbar);
}

void print_summary(std::ostream& out, const std::string& name, const RunReport& rep) {
  const auto& m = rep.rows.back();
  out << name << ": K=" << rep.K << " comms=" << rep.comms << " objective=" << sci(m.objective)
      << " subopt=" << sci(m.subopt) << " infeas=" << sci(m.infeas_sum) << " cons_viol=" << sci(m.cons_viol)
      << " bound=" << sci(m.bound) << "\n";
}

int run_static(const RunOptions& o, const json& config, std::ostream& out, std::ostream& err) {
  std::vector<AgentProblem> problems;
  Graph g;
  if (o.problem == "toy") {
    auto s = toy_consensus();
    problems = s.problems;
    g = pick_graph(o, s.graph, 2, err);
  } else if (o.problem == "qp") {
    auto s = qp_suite_static(o.seed);
    problems = s.problems;
    g = pick_graph(o, s.graph, int(problems.size()), err);
  } else if (o.problem == "svm") {
    problems = build_svm_instance(generate_svm_data(o.seed), o.N, o.C);
    g = svm_graph(o, err);
  } else {
    throw ConfigError("run-static: problem must be toy, qp or svm");
  }
  const Blocks x0 = initial_point(o, zero_start(problems));
  const auto steps = select_stepsizes_static(problems, g, o.gamma, o.c_i);
  LogOptions log;
  if (o.oracle) {
    const auto sol = solve_consensus(problems, oracle_options(o));
    require_converged(sol, err);
    log.phi_star = sol.phi;
    log.certificate = theta1(static_saddle(sol, g), steps, x0, g);
  }
  const auto rep = dpda_s_run(problems, g, steps, x0, o.K, log);
  write_outputs(o, rep, config, log.certificate);
  print_summary(out, "run-static", rep);
  return kOk;
}

int run_dynamic(const RunOptions& o, const json& config, std::ostream& out, std::ostream& err) {
  std::vector<AgentProblem> problems;
  Graph g;
  double B = o.B;
  if (o.problem == "toy") {
    auto s = toy_consensus(10.0);
    problems = s.problems;
    g = pick_graph(o, s.graph, 2, err);
  } else if (o.problem == "qp") {
    auto s = qp_suite_dynamic(o.seed);
    problems = s.problems;
    g = pick_graph(o, s.graph, int(problems.size()), err);
  } else if (o.problem == "svm") {
    const auto data = generate_svm_data(o.seed);
    if (B <= 0.0) {
      const auto sol = solve_consensus(build_svm_instance(data, o.N, o.C), oracle_options(o));
      require_converged(sol, err);
      B = 10.0 * sol.x[0].head(3).norm();
    }
    problems = build_svm_instance(data, o.N, o.C, B);
    g = svm_graph(o, err);
  } else {
    throw ConfigError("run-dynamic: problem must be toy, qp or svm");
  }
  if (B <= 0.0) B = shared_domain_radius(problems);
  const Blocks x0 = initial_point(o, zero_start(problems));
  const auto policy = o.activation_prob >= 1.0 ? ActivationPolicy::always_full()
                                               : ActivationPolicy::bernoulli(o.activation_prob, o.T_window);
  MixingProcess process(g, policy, o.seed);
  DynamicConfig dc;
  dc.p = o.p;
  dc.B = B;
  dc.steps = select_stepsizes_dynamic(problems, o.gamma, o.c_i);
  dc.diagnostic_shadow = o.diagnostic_shadow;
  LogOptions log;
  if (o.oracle) {
    const auto sol = solve_consensus(problems, oracle_options(o));
    require_converged(sol, err);
    log.phi_star = sol.phi;
    log.certificate = theta_dynamic(dynamic_saddle(sol), dc.steps, x0, B, o.p, process_constants(process));
  }
  const auto rep = dpda_d_run(problems, process, dc, x0, o.K, log);
  write_outputs(o, rep, config, log.certificate);
  print_summary(out, "run-dynamic", rep);
  if (o.diagnostic_shadow) {
    out << "run-dynamic: max_mu_ratio=" << sci(rep.max_mu_ratio) << " max_e_ratio=" << sci(rep.max_e_ratio)
        << " bound_violations=" << rep.bound_violations << "\n";
  }
  return kOk;
}

ResourceSuite load_resource(const RunOptions& o) {
  if (o.problem == "toy-single") return toy_resource_single();
  if (o.problem == "toy-pair") return toy_resource_pair();
  if (o.problem == "qp") return qp_suite_resource(o.seed);
  throw ConfigError("problem must be toy-single, toy-pair or qp");
}

int run_resource(const RunOptions& o, const json& config, std::ostream& out, std::ostream& err) {
  ResourceSuite s = load_resource(o);
  const Graph g = pick_graph(o, s.graph, s.problem.size(), err);
  const Blocks xi0 = initial_point(o, zero_start(s.problem));
  double B_d = o.B_d;
  if (B_d <= 0.0) {
    Blocks slater = o.slater_point.empty() ? s.slater : load_blocks(o.slater_point);
    if (slater.empty()) throw ConfigError("run-resource: B_d or slater_point required for this problem");
    B_d = dual_radius(slater_certificate(s.problem, slater)) * (1.0 + 1e-6);
    if (B_d <= 0.0) throw ConfigError("run-resource: derived B_d is zero; set B_d");
  }
  const auto policy = o.activation_prob >= 1.0 ? ActivationPolicy::always_full()
                                               : ActivationPolicy::bernoulli(o.activation_prob, o.T_window);
  MixingProcess process(g, policy, o.seed);
  ResourceConfig rc;
  rc.p = o.p;
  rc.B_d = B_d;
  rc.steps = select_stepsizes_resource(s.problem, o.gamma, o.c_i);
  LogOptions log;
  if (o.oracle) {
    const auto sol = solve_resource(s.problem, oracle_options(o));
    require_converged(sol, err);
    log.phi_star = sol.phi;
    log.certificate = theta_resource(resource_saddle(sol), rc.steps, xi0, B_d, o.p, process_constants(process));
  }
  const auto rep = dpda_r_run(s.problem, process, rc, xi0, o.K, log);
  write_outputs(o, rep, config, log.certificate);
  print_summary(out, "run-resource", rep);
  return kOk;
}

int run_oracle(const RunOptions& o, std::ostream& out, std::ostream& err) {
  CentralSolution sol;
  if (o.problem == "toy") {
    sol = solve_consensus(toy_consensus().problems, oracle_options(o));
  } else if (o.problem == "qp") {
    sol = solve_consensus(qp_suite_static(o.seed).problems, oracle_options(o));
  } else if (o.problem == "qp-dynamic") {
    sol = solve_consensus(qp_suite_dynamic(o.seed).problems, oracle_options(o));
  } else if (o.problem == "svm") {
    sol = solve_consensus(build_svm_instance(generate_svm_data(o.seed), o.N, o.C), oracle_options(o));
  } else if (o.problem == "toy-single" || o.problem == "toy-pair" || o.problem == "qp-resource") {
    RunOptions r = o;
    if (o.problem == "qp-resource") r.problem = "qp";
    sol = solve_resource(load_resource(r).problem, oracle_options(o));
  } else {
    throw ConfigError("oracle: problem must be toy, qp, qp-dynamic, svm, toy-single, toy-pair or qp-resource");
  }
  std::filesystem::create_directories(o.out);
  save_json(o.out + "/solution.json", solution_to_json(sol));
  out << "oracle: converged=" << (sol.converged ? "yes" : "no") << " iterations=" << sol.iterations
      << " phi=" << sci(sol.phi) << " kkt_residual=" << sci(sol.kkt_residual)
      << " max_infeasibility=" << sci(sol.max_infeasibility) << "\n";
  if (sol.dual_diverged) {
    err << "oracle: dual iterates diverged, problem looks infeasible\n";
    return kDiverged;
  }
  return kOk;
}

struct SuiteOptions {
  SuiteConfig cfg;
  std::string out = "suite";
};

std::string tag(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

int run_suite(const SuiteOptions& so, std::ostream& out, std::ostream& err) {
  const auto res = run_experiment_suite(so.cfg, [&](const SuiteRun& r) {
    err << "  " << r.topology << " C=" << r.C << " lambda2=" << r.lambda2_target << " rep=" << r.replication
        << (r.ok ? " ok" : " FAILED: " + r.error) << "\n";
  });
  std::filesystem::create_directories(so.out + "/runs");
  for (const auto& r : res.runs) {
    if (!r.ok) continue;
    save_metrics_csv(so.out + "/runs/" + r.topology + "_C" + tag(r.C) + "_l" + tag(r.lambda2_target) + "_r" +
                         std::to_string(r.replication) + ".csv",
                     r.report);
  }
  save_json(so.out + "/suite.json", suite_summary(res));
  {
    std::ofstream os(so.out + "/boundaries.csv");
    if (!os) throw std::runtime_error("cannot write boundaries.csv");
    write_boundaries_csv(os, res.boundaries);
  }
  long ok = 0;
  for (const auto& r : res.runs) ok += r.ok;
  out << "svm-suite: runs=" << res.runs.size() << " ok=" << ok << " out=" << so.out << "\n";
  return ok == long(res.runs.size()) ? kOk : kDiverged;
}

struct CertifyOptions {
  std::string run;
  std::string oracle;
  std::string summary;
};

int run_certify(const CertifyOptions& c, std::ostream& out) {
  const auto rows = load_metrics_csv(c.run);
  const auto sol = solution_from_json(load_json(c.oracle));
  if (rows.empty()) throw ConfigError("certify: run report has no rows");
  std::optional<Certificate> cert;
  std::vector<double> weighted;
  if (!c.summary.empty()) {
    const json s = load_json(c.summary);
    if (s.contains("certificate")) cert = certificate_from_json(s["certificate"]);
    const auto& srows = s.at("rows");
    if (srows.size() != rows.size()) throw ConfigError("certify: summary and report disagree on row count");
    for (size_t i = 0; i < rows.size(); ++i) {
      if (srows[i].at("k").get<long>() != rows[i].k) throw ConfigError("certify: summary and report disagree on k");
      const auto& w = srows[i].at("weighted_infeas");
      weighted.push_back(w.is_null() ? kNaN : w.get<double>());
    }
  }
  auto fail = [&](const std::string& why) {
    out << "certify: FAIL " << why << "\n";
    return kCertFail;
  };
  double worst = 0.0;
  for (size_t i = 0; i < rows.size(); ++i) {
    const auto& m = rows[i];
    const std::string at = " at k=" + std::to_string(m.k);
    const double recomputed = std::abs(m.objective - sol.phi);
    const double slack = 2e-12 * (std::abs(m.objective) + std::abs(sol.phi)) + 1e-300;
    if (!(std::abs(m.subopt - recomputed) <= slack)) return fail("subopt column disagrees with |objective - phi*|" + at);
    if (!std::isfinite(m.bound)) return fail("no certificate value" + at);
    if (cert) {
      const double b = cert->bound(m.k);
      if (!(std::abs(b - m.bound) <= 1e-10 * std::abs(b) + 1e-300)) return fail("bound_value disagrees with certificate" + at);
    }
    if (!(recomputed <= m.bound * (1.0 + 1e-12))) return fail("suboptimality exceeds the bound" + at);
    worst = std::max(worst, recomputed / m.bound);
    if (!weighted.empty()) {
      if (!(weighted[i] <= m.bound * (1.0 + 1e-12))) return fail("weighted infeasibility exceeds the bound" + at);
      worst = std::max(worst, weighted[i] / m.bound);
    }
  }
  out << "certify: PASS rows=" << rows.size() << " max_ratio=" << sci(worst) << "\n";
  return kOk;
}

struct GenGraphOptions {
  int nodes = 10;
  double lambda2 = 1.0;
  double tol = 0.2;
  std::uint64_t seed = 0;
  std::string out = "graph.txt";
};

int run_gen_graph(const GenGraphOptions& o, std::ostream& out) {
  const auto res = search_graph(o.nodes, o.lambda2, o.tol, o.seed);
  if (!res.target_met) {
    out << "gen-graph: FAIL target lambda2=" << o.lambda2 << " not reached within " << o.tol
        << " relative; best lambda2=" << res.lambda2 << "\n";
    return kConfig;
  }
  save_graph(o.out, res.graph);
  out << "gen-graph: nodes=" << o.nodes << " edges=" << res.graph.num_edges() << " lambda2=" << res.lambda2
      << " attempts=" << res.attempts << " out=" << o.out << "\n";
  return kOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Decentralized primal-dual consensus optimization"};
  app.require_subcommand(1);

  GenGraphOptions gg;
  Command gen = make_command(app, "gen-graph", "random connected graph with a target algebraic connectivity");
  gen.settings->add("nodes", gg.nodes, "node count")->check(CLI::Range(2, 100000));
  gen.settings->add("lambda2", gg.lambda2, "target lambda2")->check(CLI::PositiveNumber);
  gen.settings->add("tol", gg.tol, "relative tolerance")->check(CLI::NonNegativeNumber);
  gen.settings->add("seed", gg.seed, "seed");
  gen.settings->add("out", gg.out, "edge-list output file");

  RunOptions so, dyn, res, orc;
  so.problem = "toy";
  so.seed = 42;
  dyn.problem = "toy";
  dyn.seed = 11;
  res.problem = "toy-single";
  res.seed = 13;
  orc.problem = "toy";
  orc.out = "oracle";
  Command st = make_command(app, "run-static", "DPDA on a static graph");
  add_common(*st.settings, so);
  add_svm(*st.settings, so);
  Command dy = make_command(app, "run-dynamic", "DPDA on a time-varying graph");
  add_common(*dy.settings, dyn);
  add_svm(*dy.settings, dyn);
  add_mixing(*dy.settings, dyn);
  dy.settings->add("B", dyn.B, "ball radius on the shared block; 0 derives it");
  dy.settings->add("diagnostic_shadow", dyn.diagnostic_shadow, "track inexactness bounds");
  Command rs = make_command(app, "run-resource", "DPDA for resource allocation via dual consensus");
  add_common(*rs.settings, res);
  add_mixing(*rs.settings, res);
  rs.settings->add("B_d", res.B_d, "dual ball radius; 0 derives it from a Slater point");
  rs.settings->add("slater_point", res.slater_point, "strictly feasible point, vector text format");
  Command oc = make_command(app, "oracle", "centralized reference solution");
  oc.settings->add("problem", orc.problem, "built-in problem");
  oc.settings->add("seed", orc.seed, "seed");
  oc.settings->add("out", orc.out, "output directory");
  oc.settings->add("oracle_tol", orc.oracle_tol, "KKT tolerance")->check(CLI::PositiveNumber);
  add_svm(*oc.settings, orc);

  SuiteOptions su;
  Command sv = make_command(app, "svm-suite", "distributed SVM benchmark");
  {
    auto& s = *sv.settings;
    s.add("seed", su.cfg.seed, "master seed");
    s.add("N", su.cfg.N, "node count")->check(CLI::PositiveNumber);
    s.add("C", su.cfg.Cs, "penalties");
    s.add("lambda2", su.cfg.lambda2s, "target algebraic connectivities");
    s.add("lambda2_tol", su.cfg.lambda2_tol, "relative tolerance on lambda2");
    s.add("topologies", su.cfg.topologies, "static and/or dynamic");
    s.add("replications", su.cfg.replications, "replications per case")->check(CLI::PositiveNumber);
    s.add("K_static", su.cfg.K_static, "iterations for static runs")->check(CLI::PositiveNumber);
    s.add("K_dynamic", su.cfg.K_dynamic, "iterations for dynamic runs")->check(CLI::PositiveNumber);
    s.add("gamma", su.cfg.gamma, "consensus step gamma")->check(CLI::PositiveNumber);
    s.add("c_i", su.cfg.c, "step-size margin")->check(CLI::PositiveNumber);
    s.add("p", su.cfg.p, "consensus schedule exponent");
    s.add("activation_prob", su.cfg.activation_prob, "edge activation probability");
    s.add("T_window", su.cfg.activation_period, "full activation period")->check(CLI::PositiveNumber);
    s.add("B_factor", su.cfg.B_factor, "B as a multiple of the oracle's (w, b) norm")->check(CLI::PositiveNumber);
    s.add("oracle_tol", su.cfg.oracle_tol, "oracle KKT tolerance")->check(CLI::PositiveNumber);
    s.add("out", su.out, "output directory");
  }

  CertifyOptions co;
  Command ce = make_command(app, "certify", "re-check a run report against its certificate");
  ce.settings->add("run", co.run, "metrics CSV of the run")->check(CLI::ExistingFile);
  ce.settings->add("oracle", co.oracle, "oracle solution JSON")->check(CLI::ExistingFile);
  ce.settings->add("summary", co.summary, "run summary JSON (certificate and weighted infeasibility)");

  Command* commands[] = {&gen, &st, &dy, &rs, &oc, &sv, &ce};
  try {
    app.parse(argc, argv);
    Command* cmd = nullptr;
    for (auto* c : commands)
      if (c->app->parsed()) cmd = c;
    if (!cmd->config_path.empty()) {
      std::ifstream is(cmd->config_path);
      if (!is) throw ConfigError("cannot read config " + cmd->config_path);
      cmd->app->parse_from_stream(is);
      app.parse(argc, argv);  // flags win over the file
    }
    if (cmd->dump_config) {
      out << cmd->settings->echo();
      return kOk;
    }
    const json config = cmd->settings->echo_json();
    if (cmd == &gen) return run_gen_graph(gg, out);
    if (cmd == &st) return run_static(so, config, out, err);
    if (cmd == &dy) return run_dynamic(dyn, config, out, err);
    if (cmd == &rs) return run_resource(res, config, out, err);
    if (cmd == &oc) return run_oracle(orc, out, err);
    if (cmd == &sv) return run_suite(su, out, err);
    return run_certify(co, out);
  } catch (const CLI::CallForHelp&) {
    const CLI::App* shown = &app;
    for (auto* c : commands)
      if (c->app->parsed()) shown = c->app;
    out << shown->help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const DivergedError& e) {
    err << "diverged: " << e.what() << "\n";
    return kDiverged;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const json::exception& e) {
    err << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kConfig;
  }
}

}  // namespace dpda
