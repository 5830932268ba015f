#pragma once

#include "dpda/dpda_dynamic.hpp"
#include "dpda/dpda_resource.hpp"
#include "dpda/dpda_static.hpp"
#include "dpda/oracle.hpp"

#include <cstdint>
#include <string>

namespace dpda {

// Small seeded test problems.

struct ConsensusSuite {
  std::vector<AgentProblem> problems;
  Graph graph;
};

struct ResourceSuite {
  ResourceProblem problem;
  Graph graph;
  Blocks slater;  // strictly feasible point
};

// Two agents, min (x-1)^2 + (x-3)^2 s.t. x >= 2.5 at both agents. With
// radius > 0 every agent also carries the indicator of [-radius, radius].
ConsensusSuite toy_consensus(double radius = 0.0);
// Five agents on a ring, x_i in R^5 with three shared coordinates,
// strongly convex quadratics, l1 terms and two orthant rows per agent.
ConsensusSuite qp_suite_static(std::uint64_t seed = 42);
// As above on a box domain [-2, 2]^5 instead of the l1 term.
ConsensusSuite qp_suite_dynamic(std::uint64_t seed = 11);
// One agent, min xi^2 / 2 s.t. xi - 1 >= 0.
ResourceSuite toy_resource_single();
// Two agents on K_2, min (xi_1 - 2)^2 + (xi_2 - 2)^2 s.t. xi_1 + xi_2 - 2 = 0.
ResourceSuite toy_resource_pair();
// Four agents, xi_i in R^3 on [-5, 5]^3, two orthant coupling rows.
ResourceSuite qp_suite_resource(std::uint64_t seed = 13);

// Linear SVM benchmark.

struct SvmDataset {
  Mat X;  // one sample per row
  Vec y;  // +1 or -1
  std::vector<int> train;
  std::vector<int> test;
};

inline constexpr int kSvmSamples = 900;
inline constexpr int kSvmTrain = 300;

// Labels +1 for mean (1, 1), -1 for mean (-1, -1), covariance diag(1, 2).
SvmDataset generate_svm_data(std::uint64_t seed);

// Contiguous blocks of the training set; the first (size mod N) nodes get
// one extra sample.
std::vector<std::vector<int>> partition_train(const SvmDataset& data, int N);

// Shared block (w, b), local slacks; optional ball of radius B on (w, b).
std::vector<AgentProblem> build_svm_instance(const SvmDataset& data, int N, double C,
                                             std::optional<double> B = std::nullopt);

enum class Split { Train, Test };
double evaluate_classifier(const Vec& w, double b, const SvmDataset& data, Split which);

struct Classifier {
  Vec w;
  double b = 0.0;
};
Classifier classifier_from(const Vec& shared);
// Mean of the agents' shared blocks.
Classifier average_classifier(const Blocks& x);

struct SuiteConfig {
  std::uint64_t seed = 0;
  int N = 10;
  std::vector<double> Cs = {2.0, 10.0};
  std::vector<double> lambda2s = {0.05, 1.0};
  double lambda2_tol = 0.2;
  std::vector<std::string> topologies = {"static", "dynamic"};
  int replications = 5;
  long K_static = 100000;
  long K_dynamic = 100000;
  double gamma = 10.0;
  double c = 300.0;
  double p = 2.0;
  double activation_prob = 0.7;
  int activation_period = 3;
  double B_factor = 10.0;
  double oracle_tol = 1e-9;
};

struct SuiteRun {
  double C = 0.0;
  double lambda2_target = 0.0;
  double lambda2_achieved = 0.0;
  bool target_met = false;
  std::string topology;
  int replication = 0;
  std::uint64_t graph_seed = 0;
  bool ok = false;
  std::string error;
  RunReport report;
  double test_error = kNaN;
  double train_error = kNaN;
};

struct SuiteCurve {
  double C = 0.0;
  double lambda2_target = 0.0;
  std::string topology;
  std::vector<long> k;
  std::vector<double> subopt, infeas, cons_viol;
  double spearman_subopt = kNaN, spearman_infeas = kNaN, spearman_cons = kNaN;
};

struct OracleReference {
  double C = 0.0;
  CentralSolution solution;
  Classifier classifier;
  double test_error = kNaN;
  double train_error = kNaN;
};

struct BoundaryRow {
  std::string method;
  double wx = 0.0, wy = 0.0, b = 0.0;
};

struct SuiteResult {
  SuiteConfig config;
  std::vector<OracleReference> oracles;  // one per C
  std::vector<SuiteRun> runs;
  std::vector<SuiteCurve> curves;
  std::vector<BoundaryRow> boundaries;
};

// Runs every case; a failing replication is recorded and the rest go on.
SuiteResult run_experiment_suite(const SuiteConfig& cfg,
                                 const std::function<void(const SuiteRun&)>& progress = {});

// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace dpda
