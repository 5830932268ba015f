#include "dpda/experiments.hpp"

#include "dpda/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <numeric>
#include <thread>

namespace dpda {

namespace {

Mat randn(std::mt19937_64& rng, int r, int c, double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, scale);
  Mat M(r, c);
  for (int j = 0; j < c; ++j)
    for (int i = 0; i < r; ++i) M(i, j) = nd(rng);
  return M;
}

Vec uniform(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> ud(lo, hi);
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = ud(rng);
  return v;
}

Mat random_spd(std::mt19937_64& rng, int n, double shift) {
  const Mat G = randn(rng, n, n);
  return G.transpose() * G / double(n) + shift * Mat::Identity(n, n);
}

ConsensusSuite qp_suite(std::uint64_t seed, bool box) {
  constexpr int N = 5, n_s = 3, n_l = 2, m = 2;
  auto rng = make_stream(seed, "data");
  const Vec shared = box ? uniform(rng, n_s, -1.0, 1.0) : Vec(randn(rng, n_s, 1));
  ConsensusSuite s;
  s.graph = Graph::ring(N);
  for (int i = 0; i < N; ++i) {
    Vec xhat(n_s + n_l);
    xhat.head(n_s) = shared;
    xhat.tail(n_l) = box ? uniform(rng, n_l, -1.0, 1.0) : Vec(randn(rng, n_l, 1));
    const Mat Q = random_spd(rng, n_s + n_l, 0.5);
    const Vec c = randn(rng, n_s + n_l, 1, 3.0);
    const Mat A = randn(rng, m, n_s + n_l);
    const Vec b = A * xhat - Vec::Constant(m, 0.5);
    const int d = n_s + n_l;
    ProxFunction rho = box ? ProxFunction::box(Vec::Constant(d, -2.0), Vec::Constant(d, 2.0)) : ProxFunction::l1(0.1);
    s.problems.emplace_back(n_s, n_l, rho, SmoothFunction::quadratic(Q, c), A, b, Cone::nonneg(m));
  }
  return s;
}

std::string format_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

ConsensusSuite toy_consensus(double radius) {
  ConsensusSuite s;
  s.graph = Graph::complete(2);
  const double centers[2] = {1.0, 3.0};
  for (double a : centers) {
    ProxFunction rho = radius > 0.0 ? ProxFunction::box(Vec::Constant(1, -radius), Vec::Constant(1, radius))
                                    : ProxFunction::zero();
    s.problems.emplace_back(1, 0, rho, SmoothFunction::quadratic(Mat::Constant(1, 1, 2.0), Vec::Constant(1, -2.0 * a), a * a),
                            Mat::Constant(1, 1, 1.0), Vec::Constant(1, 2.5), Cone::nonneg(1));
  }
  return s;
}

ConsensusSuite qp_suite_static(std::uint64_t seed) { return qp_suite(seed, false); }

ConsensusSuite qp_suite_dynamic(std::uint64_t seed) { return qp_suite(seed, true); }

ResourceSuite toy_resource_single() {
  ResourceSuite s;
  s.graph = Graph(1, {});
  std::vector<ResourceAgent> agents;
  agents.emplace_back(ProxFunction::zero(), SmoothFunction::quadratic(Mat::Identity(1, 1), Vec::Zero(1)),
                      Mat::Identity(1, 1), Vec::Constant(1, 1.0));
  s.problem = ResourceProblem(std::move(agents), Cone::nonneg(1));
  s.slater = {Vec::Constant(1, 2.0)};
  return s;
}

ResourceSuite toy_resource_pair() {
  ResourceSuite s;
  s.graph = Graph::complete(2);
  std::vector<ResourceAgent> agents;
  for (int i = 0; i < 2; ++i)
    agents.emplace_back(ProxFunction::zero(),
                        SmoothFunction::quadratic(Mat::Constant(1, 1, 2.0), Vec::Constant(1, -4.0), 4.0),
                        Mat::Identity(1, 1), Vec::Constant(1, 1.0));
  s.problem = ResourceProblem(std::move(agents), Cone::zero(1));
  return s;
}

ResourceSuite qp_suite_resource(std::uint64_t seed) {
  constexpr int N = 4, n = 3, m = 2;
  auto rng = make_stream(seed, "data");
  ResourceSuite s;
  s.graph = Graph::ring(N);
  std::vector<ResourceAgent> agents;
  for (int i = 0; i < N; ++i) {
    const Vec xhat = uniform(rng, n, -1.0, 1.0);
    const Mat Q = random_spd(rng, n, 0.5);
    const Vec c = randn(rng, n, 1, 3.0);
    const Mat R = randn(rng, m, n);
    const Vec r = R * xhat - Vec::Constant(m, 0.25);
    agents.emplace_back(ProxFunction::box(Vec::Constant(n, -5.0), Vec::Constant(n, 5.0)),
                        SmoothFunction::quadratic(Q, c), R, r);
    s.slater.push_back(xhat);
  }
  s.problem = ResourceProblem(std::move(agents), Cone::nonneg(m));
  return s;
}

SvmDataset generate_svm_data(std::uint64_t seed) {
  auto rng = make_stream(seed, "data");
  std::bernoulli_distribution coin(0.5);
  std::normal_distribution<double> nd(0.0, 1.0);
  SvmDataset d;
  d.X.resize(kSvmSamples, 2);
  d.y.resize(kSvmSamples);
  for (int l = 0; l < kSvmSamples; ++l) {
    const double label = coin(rng) ? 1.0 : -1.0;
    const double z1 = nd(rng), z2 = nd(rng);
    d.X(l, 0) = label + z1;
    d.X(l, 1) = label + std::sqrt(2.0) * z2;
    d.y(l) = label;
    (l < kSvmTrain ? d.train : d.test).push_back(l);
  }
  return d;
}

std::vector<std::vector<int>> partition_train(const SvmDataset& data, int N) {
  const int n = int(data.train.size());
  require(N >= 1 && N <= n, "node count must lie in [1, training size]");
  std::vector<std::vector<int>> parts(N);
  int pos = 0;
  for (int i = 0; i < N; ++i) {
    const int size = n / N + (i < n % N ? 1 : 0);
    parts[i].assign(data.train.begin() + pos, data.train.begin() + pos + size);
    pos += size;
  }
  return parts;
}

std::vector<AgentProblem> build_svm_instance(const SvmDataset& data, int N, double C, std::optional<double> B) {
  require(C > 0.0, "C must be positive");
  if (B) require(*B > 0.0, "B must be positive");
  const auto parts = partition_train(data, N);
  std::vector<AgentProblem> out;
  for (const auto& S : parts) {
    const int n_l = int(S.size());
    const int dim = 3 + n_l;
    std::vector<ProxTerm> terms;
    if (B) terms.push_back({0, 3, ProxFunction::ball(Vec::Zero(3), *B)});
    terms.push_back({3, n_l, ProxFunction::linear_nonneg(Vec::Constant(n_l, N * C))});
    Mat A = Mat::Zero(n_l, dim);
    for (int r = 0; r < n_l; ++r) {
      const int l = S[r];
      A(r, 0) = data.y(l) * data.X(l, 0);
      A(r, 1) = data.y(l) * data.X(l, 1);
      A(r, 2) = data.y(l);
      A(r, 3 + r) = 1.0;
    }
    out.emplace_back(3, n_l, ProxFunction::separable(dim, std::move(terms)), SmoothFunction::half_sq_norm(dim, 0, 2),
                     std::move(A), Vec::Ones(n_l), Cone::nonneg(n_l));
  }
  return out;
}

double evaluate_classifier(const Vec& w, double b, const SvmDataset& data, Split which) {
  require(w.size() == 2, "classifier weight must be 2-dimensional");
  const auto& idx = which == Split::Train ? data.train : data.test;
  if (idx.empty()) return 0.0;
  int wrong = 0;
  for (int l : idx) {
    const double pred = data.X.row(l).dot(w) + b >= 0.0 ? 1.0 : -1.0;
    if (pred != data.y(l)) ++wrong;
  }
  return double(wrong) / double(idx.size());
}

Classifier classifier_from(const Vec& shared) {
  require(shared.size() >= 3, "classifier needs (w, b)");
  return {shared.head(2), shared(2)};
}

Classifier average_classifier(const Blocks& x) {
  require(!x.empty(), "no agents");
  Vec s = Vec::Zero(3);
  for (const auto& xi : x) s += xi.head(3);
  return classifier_from(s / double(x.size()));
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  require(a.size() == b.size() && a.size() >= 2, "spearman needs two equal-length samples");
  auto ranks = [](const std::vector<double>& v) {
    std::vector<size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](size_t i, size_t j) { return v[i] < v[j]; });
    std::vector<double> r(v.size());
    for (size_t s = 0; s < idx.size();) {
      size_t e = s;
      while (e + 1 < idx.size() && v[idx[e + 1]] == v[idx[s]]) ++e;
      const double avg = 0.5 * double(s + e) + 1.0;
      for (size_t t = s; t <= e; ++t) r[idx[t]] = avg;
      s = e + 1;
    }
    return r;
  };
  const auto ra = ranks(a), rb = ranks(b);
  const double n = double(a.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return kNaN;
  return sab / std::sqrt(saa * sbb);
}

SuiteResult run_experiment_suite(const SuiteConfig& cfg, const std::function<void(const SuiteRun&)>& progress) {
  require(cfg.replications >= 1, "replications must be >= 1");
  require(cfg.K_static >= 1 && cfg.K_dynamic >= 1, "K must be >= 1");
  for (const auto& t : cfg.topologies) require(t == "static" || t == "dynamic", "topology must be static or dynamic");
  SuiteResult res;
  res.config = cfg;
  const SvmDataset data = generate_svm_data(cfg.seed);

  OracleOptions oopt;
  oopt.tol = cfg.oracle_tol;
  for (double C : cfg.Cs) {
    OracleReference o;
    o.C = C;
    o.solution = solve_consensus(build_svm_instance(data, cfg.N, C), oopt);
    o.classifier = classifier_from(o.solution.x[0]);
    o.test_error = evaluate_classifier(o.classifier.w, o.classifier.b, data, Split::Test);
    o.train_error = evaluate_classifier(o.classifier.w, o.classifier.b, data, Split::Train);
    res.oracles.push_back(std::move(o));
  }

  std::vector<GraphSearchResult> graphs;  // per (lambda2, replication)
  for (double lam : cfg.lambda2s)
    for (int r = 0; r < cfg.replications; ++r) graphs.push_back(search_graph(cfg.N, lam, cfg.lambda2_tol, cfg.seed + r));

  for (size_t ci = 0; ci < cfg.Cs.size(); ++ci)
    for (size_t li = 0; li < cfg.lambda2s.size(); ++li)
      for (const auto& topo : cfg.topologies)
        for (int r = 0; r < cfg.replications; ++r) {
          SuiteRun run;
          run.C = cfg.Cs[ci];
          run.lambda2_target = cfg.lambda2s[li];
          run.topology = topo;
          run.replication = r;
          run.graph_seed = cfg.seed + r;
          const auto& gs = graphs[li * cfg.replications + r];
          run.lambda2_achieved = gs.lambda2;
          run.target_met = gs.target_met;
          res.runs.push_back(std::move(run));
        }

  std::atomic<size_t> next{0};
  std::mutex mu;
  auto worker = [&]() {
    for (size_t idx; (idx = next++) < res.runs.size();) {
      SuiteRun& run = res.runs[idx];
      const size_t ci = std::find(cfg.Cs.begin(), cfg.Cs.end(), run.C) - cfg.Cs.begin();
      const size_t li = std::find(cfg.lambda2s.begin(), cfg.lambda2s.end(), run.lambda2_target) - cfg.lambda2s.begin();
      const Graph& g = graphs[li * cfg.replications + run.replication].graph;
      const auto& oracle = res.oracles[ci];
      try {
        if (run.topology == "static") {
          const auto problems = build_svm_instance(data, cfg.N, run.C);
          const auto steps = select_stepsizes_static(problems, g, cfg.gamma, {cfg.c});
          LogOptions log;
          log.phi_star = oracle.solution.phi;
          run.report = dpda_s_run(problems, g, steps, zero_start(problems), cfg.K_static, log);
        } else {
          const double B = cfg.B_factor * oracle.solution.x[0].head(3).norm();
          const auto problems = build_svm_instance(data, cfg.N, run.C, B);
          MixingProcess process(g, ActivationPolicy::bernoulli(cfg.activation_prob, cfg.activation_period),
                                cfg.seed + run.replication);
          DynamicConfig dc;
          dc.p = cfg.p;
          dc.B = B;
          dc.steps = select_stepsizes_dynamic(problems, cfg.gamma, {cfg.c});
          LogOptions log;
          log.phi_star = oracle.solution.phi;
          run.report = dpda_d_run(problems, process, dc, zero_start(problems), cfg.K_dynamic, log);
        }
        const Classifier cl = average_classifier(run.report.xbar);
        run.test_error = evaluate_classifier(cl.w, cl.b, data, Split::Test);
        run.train_error = evaluate_classifier(cl.w, cl.b, data, Split::Train);
        run.ok = true;
      } catch (const std::exception& e) {
        run.ok = false;
        run.error = e.what();
      }
      if (progress) {
        std::lock_guard<std::mutex> lock(mu);
        progress(run);
      }
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), res.runs.size()));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (double C : cfg.Cs)
    for (double lam : cfg.lambda2s)
      for (const auto& topo : cfg.topologies) {
        SuiteCurve curve;
        curve.C = C;
        curve.lambda2_target = lam;
        curve.topology = topo;
        std::vector<const SuiteRun*> members;
        for (const auto& run : res.runs)
          if (run.ok && run.C == C && run.lambda2_target == lam && run.topology == topo) members.push_back(&run);
        if (members.empty()) {
          res.curves.push_back(std::move(curve));
          continue;
        }
        const auto& rows0 = members[0]->report.rows;
        for (size_t j = 0; j < rows0.size(); ++j) {
          double s = 0.0, f = 0.0, v = 0.0;
          for (const auto* m : members) {
            s += m->report.rows[j].subopt;
            f += m->report.rows[j].infeas_sum;
            v += m->report.rows[j].cons_viol;
          }
          const double n = double(members.size());
          curve.k.push_back(rows0[j].k);
          curve.subopt.push_back(s / n);
          curve.infeas.push_back(f / n);
          curve.cons_viol.push_back(v / n);
        }
        if (curve.k.size() >= 2) {
          const std::vector<double> logk(curve.k.begin(), curve.k.end());
          curve.spearman_subopt = spearman(logk, curve.subopt);
          curve.spearman_infeas = spearman(logk, curve.infeas);
          curve.spearman_cons = spearman(logk, curve.cons_viol);
        }
        res.curves.push_back(std::move(curve));
      }

  for (size_t ci = 0; ci < cfg.Cs.size(); ++ci) {
    const double C = cfg.Cs[ci];
    const std::string tag = "C=" + format_g(C);
    const auto& o = res.oracles[ci];
    res.boundaries.push_back({"centralized " + tag, o.classifier.w(0), o.classifier.w(1), o.classifier.b});
    const auto local_problem = build_svm_instance(data, cfg.N, C);
    const auto local = solve_consensus({local_problem[0]}, oopt);
    const Classifier lc = classifier_from(local.x[0]);
    res.boundaries.push_back({"local-node0 " + tag, lc.w(0), lc.w(1), lc.b});
    for (const auto& run : res.runs) {
      if (!run.ok || run.C != C || run.replication != 0) continue;
      const Classifier cl = average_classifier(run.report.xbar);
      res.boundaries.push_back({"dpda-" + run.topology + " " + tag + " lambda2=" + format_g(run.lambda2_target),
                                cl.w(0), cl.w(1), cl.b});
    }
  }
  return res;
}

}  // namespace dpda
