#include <doctest.h>

#include "dpda/dpda_static.hpp"
#include "dpda/experiments.hpp"
#include "dpda/oracle.hpp"
#include "dpda/rng.hpp"
#include "fixtures.hpp"

using namespace dpda;
using namespace dpda::testing;

namespace {

// 1-D problem min (1/2)(x - 1)^2 s.t. x >= 0.
AgentProblem half_square_shifted() {
  return AgentProblem(1, 0, ProxFunction::zero(),
                      SmoothFunction::quadratic(Mat::Identity(1, 1), Vec::Constant(1, -1.0), 0.5),
                      Mat::Identity(1, 1), Vec::Zero(1), Cone::nonneg(1));
}

}  // namespace

TEST_CASE("static step size examples") {
  {
    auto st = select_stepsizes_static(star_problems(3, 2.0, 2.0), Graph::star(4), 0.5);
    CHECK(st.tau[0] == doctest::Approx(1.0 / 6));
    CHECK(st.kappa[0] == doctest::Approx(0.25));
    CHECK((1 / st.tau[0] - 2 - 3) / st.kappa[0] >= 4.0);
  }
  {
    auto st = select_stepsizes_static(star_problems(2, 0.0, 1.0), Graph::star(3), 1.0);
    CHECK(st.tau[0] == doctest::Approx(0.2));
    CHECK(st.kappa[0] == doctest::Approx(1.0));
  }
  {
    auto st = select_stepsizes_static(star_problems(1, 1.0, 0.0), Graph::star(2), 1.0);
    CHECK(st.tau[0] == doctest::Approx(0.25));
    CHECK(st.kappa[0] == 1.0);
  }
  CHECK_THROWS_AS(select_stepsizes_static(star_problems(1, 1.0, 1.0), Graph::star(2), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(select_stepsizes_static(star_problems(1, 1.0, 1.0), Graph::star(2), 1.0, {-1.0}),
                  std::invalid_argument);
  auto probs = star_problems(1, 1.0, 1.0);
  auto bad = select_stepsizes_static(probs, Graph::star(2), 1.0);
  bad.tau[0] *= 4;
  CHECK_THROWS_AS(check_stepsizes_static(probs, Graph::star(2), bad), std::invalid_argument);
}

TEST_CASE("static step sizes satisfy the condition on random draws") {
  auto rng = make_stream(1, "steps");
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int s = 0; s < 100; ++s) {
    double L = 10 * u(rng), sigma = 5 * u(rng), gamma = 0.01 + 10 * u(rng), c = 0.01 + 5 * u(rng);
    int d = 1 + s % 6;
    auto probs = star_problems(d, L, sigma);
    auto st = select_stepsizes_static(probs, Graph::star(d + 1), gamma, {c});
    double lhs = (1 / st.tau[0] - L - 2 * gamma * d) / st.kappa[0];
    CHECK(lhs - probs[0].sigma_max * probs[0].sigma_max >= 0.0);
    CHECK(check_stepsizes_static(probs, Graph::star(d + 1), st) >= 0.0);
  }
}

TEST_CASE("single agent converges to the unconstrained optimum") {
  std::vector<AgentProblem> probs{half_square_shifted()};
  Graph g(1, {});
  auto st = select_stepsizes_static(probs, g, 1.0);
  auto rep = dpda_s_run(probs, g, st, zero_start(probs), 1000);
  CHECK(std::abs(rep.xbar[0](0) - 1.0) < 1e-2);
  auto rep2 = dpda_s_run(probs, g, st, zero_start(probs), 100000);
  CHECK(std::abs(rep2.xbar[0](0) - 1.0) < 1e-4);
  CHECK(rep2.comms == 100000);
}

TEST_CASE("two-agent toy reaches the constrained consensus point") {
  auto s = toy_consensus();
  auto st = select_stepsizes_static(s.problems, s.graph, 1.0);
  LogOptions log;
  log.phi_star = 2.5;
  auto rep = dpda_s_run(s.problems, s.graph, st, zero_start(s.problems), 20000, log);
  for (const auto& x : rep.xbar) CHECK(std::abs(x(0) - 2.5) < 1e-3);
  CHECK(rep.rows.back().objective == doctest::Approx(2.5).epsilon(1e-3));
  CHECK(rep.rows.back().k == 20000);
  CHECK(rep.K == 20000);
}

TEST_CASE("dual iterates stay in the polar cone and the running sum matches the shadow recursion") {
  auto s = qp_suite_static(42);
  auto st = select_stepsizes_static(s.problems, s.graph, 1.0);
  Blocks x0(s.problems.size());
  auto rng = make_stream(3, "x0");
  for (size_t i = 0; i < x0.size(); ++i) x0[i] = randn(rng, s.problems[i].dim());
  const int ns = s.problems[0].n_s;

  StaticState state = init_static(s.problems, x0);
  Blocks lambda = incidence_apply(s.graph, shared_part(x0, ns));
  for (auto& l : lambda) l *= st.gamma;
  double worst_theta = 0.0, worst_lambda = 0.0;
  for (int k = 0; k < 500; ++k) {
    Blocks prev = state.x;
    dpda_s_step(state, s.problems, s.graph, st);
    Blocks d(prev.size());
    for (size_t i = 0; i < prev.size(); ++i) d[i] = (2 * state.x[i] - prev[i]).head(ns);
    auto md = incidence_apply(s.graph, d);
    for (size_t e = 0; e < lambda.size(); ++e) lambda[e] += st.gamma * md[e];
    auto ms = incidence_apply(s.graph, state.s);
    for (size_t e = 0; e < lambda.size(); ++e)
      worst_lambda = std::max(worst_lambda, (st.gamma * ms[e] - lambda[e]).norm() / (1 + lambda[e].norm()));
    for (size_t i = 0; i < s.problems.size(); ++i)
      worst_theta = std::max(worst_theta, s.problems[i].cone.project(state.theta[i]).norm());
  }
  CHECK(state.k == 500);
  CHECK(state.comms == 500);
  CHECK(worst_theta <= 1e-10);
  CHECK(worst_lambda <= 1e-10);
}

TEST_CASE("QP suite matches the centralized oracle") {
  auto s = qp_suite_static(42);
  auto sol = solve_consensus(s.problems);
  REQUIRE(sol.converged);
  auto st = select_stepsizes_static(s.problems, s.graph, 3.0, {10.0});
  LogOptions log;
  log.phi_star = sol.phi;
  log.checkpoints = {100000};
  auto rep = dpda_s_run(s.problems, s.graph, st, zero_start(s.problems), 100000, log);
  CHECK(rep.rows.back().subopt < 1e-3);
  CHECK(rep.rows.back().infeas_sum < 1e-3);
}

TEST_CASE("ergodic error halves with every doubling of K") {
  auto s = qp_suite_static(42);
  auto sol = solve_consensus(s.problems);
  REQUIRE(sol.converged);
  auto st = select_stepsizes_static(s.problems, s.graph, 1.0);
  LogOptions log;
  log.phi_star = sol.phi;
  log.checkpoints = pow2_checkpoints(7, 14);
  auto rep = dpda_s_run(s.problems, s.graph, st, zero_start(s.problems), 1L << 14, log);
  auto ratios = doubling_ratios(rep);
  REQUIRE(ratios.size() == 7);
  for (double r : ratios) CHECK(r <= 0.75);
}

TEST_CASE("certificate holds on the toy and QP suites") {
  for (int which = 0; which < 2; ++which) {
    auto s = which == 0 ? toy_consensus() : qp_suite_static(42);
    auto sol = solve_consensus(s.problems);
    REQUIRE(sol.converged);
    auto st = select_stepsizes_static(s.problems, s.graph, 1.0);
    Blocks x0 = zero_start(s.problems);
    LogOptions log;
    log.phi_star = sol.phi;
    log.certificate = theta1(static_saddle(sol, s.graph), st, x0, s.graph);
    auto rep = dpda_s_run(s.problems, s.graph, st, x0, 20000, log);
    for (const auto& m : rep.rows) {
      CAPTURE(m.k);
      CHECK(m.subopt <= m.bound);
      CHECK(m.weighted_infeas <= m.bound);
    }
  }
}

TEST_CASE("divergence is reported with the agent and step") {
  auto s = toy_consensus();
  auto st = select_stepsizes_static(s.problems, s.graph, 1.0);
  Blocks x0 = zero_start(s.problems);
  x0[1](0) = std::numeric_limits<double>::infinity();
  try {
    dpda_s_run(s.problems, s.graph, st, x0, 100);
    FAIL("expected divergence");
  } catch (const DivergedError& e) {
    CHECK(e.agent() >= 0);
    CHECK(e.step() > 0);
  }
}

TEST_CASE("static runs are deterministic") {
  auto s = qp_suite_static(42);
  auto st = select_stepsizes_static(s.problems, s.graph, 1.0);
  auto a = dpda_s_run(s.problems, s.graph, st, zero_start(s.problems), 3000);
  auto b = dpda_s_run(s.problems, s.graph, st, zero_start(s.problems), 3000);
  for (size_t i = 0; i < a.xbar.size(); ++i) CHECK(a.xbar[i] == b.xbar[i]);
}
