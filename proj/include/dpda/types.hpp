#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dpda {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// One vector per node, all owned by the caller.
using Blocks = std::vector<Vec>;

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Thrown when an iterate stops being finite.
class DivergedError : public std::runtime_error {
 public:
  DivergedError(int agent, long step)
      : std::runtime_error("non-finite iterate at agent " + std::to_string(agent) +
                           ", step " + std::to_string(step)),
        agent_(agent),
        step_(step) {}

  int agent() const { return agent_; }
  long step() const { return step_; }

 private:
  int agent_;
  long step_;
};

inline void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

inline double blocks_norm(const Blocks& x) {
  double s = 0.0;
  for (const auto& b : x) s += b.squaredNorm();
  return std::sqrt(s);
}

}  // namespace dpda
