#include "dpda/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dpda {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

double parse_real(const std::string& s) {
  if (s == "nan" || s == "-nan") return kNaN;
  size_t pos = 0;
  const double v = std::stod(s, &pos);
  require(pos == s.size(), "metrics CSV: malformed number");
  return v;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  return os;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot read " + path);
  return is;
}

// JSON has no NaN; store null.
json real(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
double real_from(const json& j) { return j.is_null() ? kNaN : j.get<double>(); }

}  // namespace

void write_metrics_csv(std::ostream& os, const RunReport& rep) {
  os << kMetricsHeader << "\n";
  for (const auto& m : rep.rows) {
    os << m.k << "," << m.comms << "," << fmt(m.objective) << "," << fmt(m.subopt) << "," << fmt(m.infeas_sum) << ","
       << fmt(m.cons_viol) << "," << fmt(m.d_ctilde) << "," << fmt(m.bound) << "\n";
  }
}

void save_metrics_csv(const std::string& path, const RunReport& rep) {
  auto os = open_out(path);
  write_metrics_csv(os, rep);
}

std::vector<IterationMetrics> read_metrics_csv(std::istream& is) {
  std::string line;
  require(bool(std::getline(is, line)) && line == kMetricsHeader, "metrics CSV: unexpected header");
  std::vector<IterationMetrics> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    require(f.size() == 8, "metrics CSV: expected 8 columns");
    IterationMetrics m;
    m.k = std::stol(f[0]);
    m.comms = std::stol(f[1]);
    m.objective = parse_real(f[2]);
    m.subopt = parse_real(f[3]);
    m.infeas_sum = parse_real(f[4]);
    m.cons_viol = parse_real(f[5]);
    m.d_ctilde = parse_real(f[6]);
    m.bound = parse_real(f[7]);
    rows.push_back(m);
  }
  return rows;
}

std::vector<IterationMetrics> load_metrics_csv(const std::string& path) {
  auto is = open_in(path);
  return read_metrics_csv(is);
}

void write_blocks(std::ostream& os, const Blocks& x) {
  for (const auto& b : x) {
    for (int i = 0; i < b.size(); ++i) os << (i ? " " : "") << fmt(b(i));
    os << "\n";
  }
}

Blocks read_blocks(std::istream& is) {
  Blocks out;
  std::string line;
  while (std::getline(is, line)) {
    std::stringstream ss(line);
    std::vector<double> vals;
    std::string tok;
    while (ss >> tok) vals.push_back(parse_real(tok));
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(Eigen::Map<Vec>(vals.data(), Eigen::Index(vals.size())));
  }
  return out;
}

Blocks load_blocks(const std::string& path) {
  auto is = open_in(path);
  return read_blocks(is);
}

void save_blocks(const std::string& path, const Blocks& x) {
  auto os = open_out(path);
  write_blocks(os, x);
}

json to_json(const Vec& v) {
  json j = json::array();
  for (int i = 0; i < v.size(); ++i) j.push_back(real(v(i)));
  return j;
}

Vec vec_from_json(const json& j) {
  Vec v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v(i) = real_from(j[i]);
  return v;
}

json to_json(const Blocks& x) {
  json j = json::array();
  for (const auto& b : x) j.push_back(to_json(b));
  return j;
}

Blocks blocks_from_json(const json& j) {
  Blocks x;
  for (const auto& b : j) x.push_back(vec_from_json(b));
  return x;
}

json to_json(const IterationMetrics& m) {
  return {{"k", m.k},
          {"comms", m.comms},
          {"objective", real(m.objective)},
          {"subopt", real(m.subopt)},
          {"infeas_sum", real(m.infeas_sum)},
          {"cons_viol", real(m.cons_viol)},
          {"d_ctilde", real(m.d_ctilde)},
          {"bound_value", real(m.bound)},
          {"weighted_infeas", real(m.weighted_infeas)},
          {"m_norm", real(m.m_norm)},
          {"e_norm", real(m.e_norm)}};
}

json to_json(const Certificate& c) {
  return {{"kind", to_string(c.kind)},
          {"constant", c.constant},
          {"prefactor", c.prefactor},
          {"a", c.a},
          {"c", c.c},
          {"p", c.p},
          {"log_alpha", std::isfinite(c.log_alpha) ? json(c.log_alpha) : json("-inf")},
          {"consensus_weight", c.consensus_weight},
          {"conic_weights", c.conic_weights}};
}

Certificate certificate_from_json(const json& j) {
  Certificate c;
  const std::string kind = j.at("kind");
  if (kind == "theta1") c.kind = CertificateKind::Theta1;
  else if (kind == "theta2_3") c.kind = CertificateKind::Theta2_3;
  else if (kind == "theta4_5") c.kind = CertificateKind::Theta4_5;
  else throw std::invalid_argument("unknown certificate kind " + kind);
  c.constant = j.at("constant");
  c.prefactor = j.at("prefactor");
  c.a = j.at("a");
  c.c = j.at("c");
  c.p = j.at("p");
  c.log_alpha = j.at("log_alpha").is_string() ? -INFINITY : j.at("log_alpha").get<double>();
  c.consensus_weight = j.at("consensus_weight");
  c.conic_weights = j.at("conic_weights").get<std::vector<double>>();
  return c;
}

json run_summary(const RunReport& rep, const json& config, std::uint64_t seed, const std::optional<Certificate>& cert) {
  json j;
  j["solver"] = rep.solver;
  j["seed"] = seed;
  j["config"] = config;
  j["K"] = rep.K;
  j["comms"] = rep.comms;
  j["rows"] = json::array();
  for (const auto& m : rep.rows) j["rows"].push_back(to_json(m));
  j["xbar"] = to_json(rep.xbar);
  if (!rep.ybar.empty()) j["ybar"] = to_json(rep.ybar);
  j["max_mu_ratio"] = rep.max_mu_ratio;
  j["max_e_ratio"] = rep.max_e_ratio;
  j["bound_violations"] = rep.bound_violations;
  if (cert) j["certificate"] = to_json(*cert);
  return j;
}

json solution_to_json(const CentralSolution& sol) {
  return {{"converged", sol.converged},
          {"dual_diverged", sol.dual_diverged},
          {"iterations", sol.iterations},
          {"kkt_residual", real(sol.kkt_residual)},
          {"phi", real(sol.phi)},
          {"max_infeasibility", real(sol.max_infeasibility)},
          {"x", to_json(sol.x)},
          {"theta", to_json(sol.theta)},
          {"stationarity", to_json(sol.stationarity)},
          {"y", to_json(sol.y)},
          {"w", to_json(sol.w)}};
}

CentralSolution solution_from_json(const json& j) {
  CentralSolution s;
  s.converged = j.at("converged");
  s.dual_diverged = j.at("dual_diverged");
  s.iterations = j.at("iterations");
  s.kkt_residual = real_from(j.at("kkt_residual"));
  s.phi = real_from(j.at("phi"));
  s.max_infeasibility = real_from(j.at("max_infeasibility"));
  s.x = blocks_from_json(j.at("x"));
  s.theta = blocks_from_json(j.at("theta"));
  s.stationarity = blocks_from_json(j.at("stationarity"));
  s.y = vec_from_json(j.at("y"));
  s.w = blocks_from_json(j.at("w"));
  return s;
}

json suite_summary(const SuiteResult& res) {
  const auto& c = res.config;
  json j;
  j["config"] = {{"seed", c.seed},
                 {"N", c.N},
                 {"Cs", c.Cs},
                 {"lambda2s", c.lambda2s},
                 {"lambda2_tol", c.lambda2_tol},
                 {"topologies", c.topologies},
                 {"replications", c.replications},
                 {"K_static", c.K_static},
                 {"K_dynamic", c.K_dynamic},
                 {"gamma", c.gamma},
                 {"c", c.c},
                 {"p", c.p},
                 {"activation_prob", c.activation_prob},
                 {"T_window", c.activation_period},
                 {"B_factor", c.B_factor}};
  j["oracles"] = json::array();
  for (const auto& o : res.oracles)
    j["oracles"].push_back({{"C", o.C},
                            {"phi", real(o.solution.phi)},
                            {"converged", o.solution.converged},
                            {"kkt_residual", real(o.solution.kkt_residual)},
                            {"w", to_json(o.classifier.w)},
                            {"b", o.classifier.b},
                            {"test_error", o.test_error},
                            {"train_error", o.train_error}});
  j["runs"] = json::array();
  for (const auto& r : res.runs) {
    json e = {{"C", r.C},
              {"lambda2_target", r.lambda2_target},
              {"lambda2_achieved", r.lambda2_achieved},
              {"target_met", r.target_met},
              {"topology", r.topology},
              {"replication", r.replication},
              {"graph_seed", r.graph_seed},
              {"ok", r.ok}};
    if (r.ok) {
      e["test_error"] = r.test_error;
      e["train_error"] = r.train_error;
      e["comms"] = r.report.comms;
      if (!r.report.rows.empty()) e["final"] = to_json(r.report.rows.back());
    } else {
      e["error"] = r.error;
    }
    j["runs"].push_back(e);
  }
  j["curves"] = json::array();
  for (const auto& cv : res.curves)
    j["curves"].push_back({{"C", cv.C},
                           {"lambda2_target", cv.lambda2_target},
                           {"topology", cv.topology},
                           {"k", cv.k},
                           {"subopt", cv.subopt},
                           {"infeas", cv.infeas},
                           {"cons_viol", cv.cons_viol},
                           {"spearman_subopt", real(cv.spearman_subopt)},
                           {"spearman_infeas", real(cv.spearman_infeas)},
                           {"spearman_cons", real(cv.spearman_cons)}});
  return j;
}

void write_boundaries_csv(std::ostream& os, const std::vector<BoundaryRow>& rows) {
  os << "method,wx,wy,b\n";
  for (const auto& r : rows) os << r.method << "," << fmt(r.wx) << "," << fmt(r.wy) << "," << fmt(r.b) << "\n";
}

json load_json(const std::string& path) {
  auto is = open_in(path);
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

void save_json(const std::string& path, const json& j) {
  auto os = open_out(path);
  os << j.dump(2) << "\n";
}

}  // namespace dpda
