#pragma once

#include "dpda/graph.hpp"

#include <random>

namespace dpda {

struct WeightedEdge {
  int i, j;
  double w;
};

// Sparse symmetric doubly stochastic matrix.
struct MixingMatrix {
  int n = 0;
  Vec self;
  std::vector<WeightedEdge> edges;

  Mat dense() const;
  // Columns of X are node values; out = X V^T.
  void apply(const Mat& X, Mat& out) const;
};

// Metropolis weights over the active edges (mask indexed like g.edges()).
MixingMatrix metropolis_matrix(const Graph& g, const std::vector<char>& active);

struct ActivationPolicy {
  enum class Kind { AlwaysFull, Bernoulli };
  Kind kind = Kind::AlwaysFull;
  double prob = 1.0;
  int period = 1;  // every period-th round is fully active

  static ActivationPolicy always_full() { return {}; }
  static ActivationPolicy bernoulli(double prob, int period);
};

class MixingProcess {
 public:
  MixingProcess(Graph g, ActivationPolicy policy, std::uint64_t seed);

  // Emits V^t and advances t. The reference stays valid until the next call.
  const MixingMatrix& next();

  long step() const { return t_; }
  const Graph& graph() const { return g_; }
  const ActivationPolicy& policy() const { return policy_; }
  // Floor on nonzero Metropolis weights.
  double zeta() const { return 1.0 / g_.nodes(); }
  // Any window of this many rounds activates the whole base graph.
  int window() const { return policy_.kind == ActivationPolicy::Kind::AlwaysFull ? 1 : policy_.period; }

 private:
  Graph g_;
  ActivationPolicy policy_;
  std::mt19937_64 rng_;
  long t_ = 0;
  std::vector<char> active_;
  MixingMatrix current_;
  bool full_cached_ = false;
  MixingMatrix full_;
};

struct MixingConstants {
  double Gamma = 0.0;
  double alpha = 0.0;
  double log_alpha = 0.0;  // kept separately, alpha rounds to 1 for tiny zeta
  int t_bar = 0;
};

MixingConstants mixing_constants(double zeta, int T, int N);
// Constants for a process; a single node mixes exactly (Gamma = 0).
MixingConstants process_constants(const MixingProcess& process);

// q mixing rounds followed by projection of every block onto the centered
// ball of the given radius.
Blocks multi_consensus(MixingProcess& process, const Blocks& x, int q, double radius);

// The exact operator being approximated: every block becomes the ball
// projection of the average.
Blocks exact_consensus(const Blocks& x, double radius);

Vec project_ball(const Vec& v, double radius);

// ceil(k^{1/p})
int consensus_schedule(long k, double p);
long total_communications(long K, double p);

}  // namespace dpda
