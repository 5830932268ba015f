#include "dpda/mixing.hpp"

#include "dpda/rng.hpp"

#include <cmath>

namespace dpda {

Mat MixingMatrix::dense() const {
  Mat V = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) V(i, i) = self(i);
  for (const auto& e : edges) {
    V(e.i, e.j) = e.w;
    V(e.j, e.i) = e.w;
  }
  return V;
}

void MixingMatrix::apply(const Mat& X, Mat& out) const {
  out.resize(X.rows(), X.cols());
  for (int i = 0; i < n; ++i) out.col(i).noalias() = self(i) * X.col(i);
  for (const auto& e : edges) {
    out.col(e.i).noalias() += e.w * X.col(e.j);
    out.col(e.j).noalias() += e.w * X.col(e.i);
  }
}

MixingMatrix metropolis_matrix(const Graph& g, const std::vector<char>& active) {
  require(int(active.size()) == g.num_edges(), "active mask must cover every edge");
  const int n = g.nodes();
  std::vector<int> deg(n, 0);
  for (int e = 0; e < g.num_edges(); ++e)
    if (active[e]) {
      ++deg[g.edges()[e].first];
      ++deg[g.edges()[e].second];
    }
  MixingMatrix V;
  V.n = n;
  V.self = Vec::Ones(n);
  for (int e = 0; e < g.num_edges(); ++e) {
    if (!active[e]) continue;
    auto [i, j] = g.edges()[e];
    const double w = 1.0 / (1.0 + std::max(deg[i], deg[j]));
    V.edges.push_back({i, j, w});
    V.self(i) -= w;
    V.self(j) -= w;
  }
  return V;
}

ActivationPolicy ActivationPolicy::bernoulli(double prob, int period) {
  require(prob >= 0.0 && prob <= 1.0, "activation probability must lie in [0, 1]");
  require(period >= 1, "forced-full period must be >= 1");
  return {Kind::Bernoulli, prob, period};
}

MixingProcess::MixingProcess(Graph g, ActivationPolicy policy, std::uint64_t seed)
    : g_(std::move(g)), policy_(policy), rng_(make_stream(seed, "activation")), active_(g_.num_edges(), 1) {
  require(g_.connected(), "mixing base graph must be connected");
}

const MixingMatrix& MixingProcess::next() {
  const bool full = policy_.kind == ActivationPolicy::Kind::AlwaysFull || t_ % policy_.period == 0;
  ++t_;
  if (full) {
    if (!full_cached_) {
      full_ = metropolis_matrix(g_, std::vector<char>(g_.num_edges(), 1));
      full_cached_ = true;
    }
    return full_;
  }
  std::bernoulli_distribution coin(policy_.prob);
  for (auto& a : active_) a = coin(rng_) ? 1 : 0;
  current_ = metropolis_matrix(g_, active_);
  return current_;
}

MixingConstants mixing_constants(double zeta, int T, int N) {
  require(zeta > 0.0 && zeta < 1.0, "zeta must lie in (0, 1)");
  require(T >= 1, "connectivity window must be >= 1");
  require(N >= 2, "mixing constants need N >= 2");
  MixingConstants c;
  c.t_bar = (N - 1) * T;
  const double zt = std::exp(c.t_bar * std::log(zeta));
  c.Gamma = 2.0 * (1.0 + 1.0 / zt) / (1.0 - zt);
  c.log_alpha = std::log1p(-zt) / c.t_bar;
  c.alpha = std::exp(c.log_alpha);
  return c;
}

MixingConstants process_constants(const MixingProcess& process) {
  if (process.graph().nodes() == 1) return MixingConstants{0.0, 0.0, -INFINITY, 0};
  return mixing_constants(process.zeta(), process.window(), process.graph().nodes());
}

Vec project_ball(const Vec& v, double radius) {
  const double n = v.norm();
  if (n <= radius) return v;
  return (radius / n) * v;
}

Blocks multi_consensus(MixingProcess& process, const Blocks& x, int q, double radius) {
  require(q >= 1, "multi-consensus needs q >= 1");
  require(radius > 0.0, "ball radius must be positive");
  const int n = process.graph().nodes();
  require(int(x.size()) == n, "multi-consensus: block count mismatch");
  const int d = x.empty() ? 0 : int(x[0].size());
  Mat X(d, n), Y(d, n);
  for (int i = 0; i < n; ++i) {
    require(x[i].size() == d, "multi-consensus: blocks differ in size");
    X.col(i) = x[i];
  }
  for (int r = 0; r < q; ++r) {
    process.next().apply(X, Y);
    X.swap(Y);
  }
  Blocks out(n);
  for (int i = 0; i < n; ++i) out[i] = project_ball(X.col(i), radius);
  return out;
}

Blocks exact_consensus(const Blocks& x, double radius) {
  require(!x.empty(), "exact consensus: no blocks");
  Vec s = Vec::Zero(x[0].size());
  for (const auto& b : x) s += b;
  const Vec avg = project_ball(s * (1.0 / double(x.size())), radius);
  return Blocks(x.size(), avg);
}

int consensus_schedule(long k, double p) {
  require(k >= 1, "schedule index must be >= 1");
  require(p >= 1.0, "schedule exponent must be >= 1");
  // smallest q with q^p >= k
  auto reaches = [&](long q) { return std::pow(static_cast<long double>(q), static_cast<long double>(p)) >= k; };
  long q = static_cast<long>(std::ceil(std::pow(static_cast<long double>(k), 1.0L / p)));
  if (q < 1) q = 1;
  while (q > 1 && reaches(q - 1)) --q;
  while (!reaches(q)) ++q;
  return int(q);
}

long total_communications(long K, double p) {
  long s = 0;
  for (long k = 1; k <= K; ++k) s += consensus_schedule(k, p);
  return s;
}

}  // namespace dpda
