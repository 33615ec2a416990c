#pragma once

#include <optional>
#include <vector>

#include "mixroute/equilibria.hpp"

namespace mixroute {

/// Autonomous (leader) flow committed by the central planner.
struct LeaderFlow {
  std::vector<double> path;
  std::vector<double> link;
};

/// SCALE: route alpha times the optimal total flow of every path.
/// Requires alpha in (0, 1).
LeaderFlow scale_strategy(const ClassFlow& optimal, double alpha);

struct StackelbergOutcome {
  double alpha = 0.0;
  ClassFlow optimal_flow;
  LeaderFlow leader;
  ClassFlow induced_flow;  // leader as the autonomous class, follower as the human class
  double optimal_cost = 0.0;
  double induced_cost = 0.0;
  double empirical_poa = 0.0;
  double wardrop_gap = 0.0;
  double optimum_gap = 0.0;  // block-wise relative gap of the optimum
  bool optimum_converged = false;
  bool follower_converged = false;
  // Converged optimum that no induced flow undercuts by more than kCertifySlack.
  bool optimum_certified = false;
  std::size_t refinements = 0;  // optimum restarts triggered by a cheaper induced flow

  bool converged() const { return optimum_converged && follower_converged; }
};

inline constexpr double kCertifySlack = 1e-6;

/// Solves the optimum, builds SCALE and the induced follower flow. When the
/// induced flow turns out cheaper than the optimum found, the optimum is
/// re-descended from the induced flow and the play repeated.
StackelbergOutcome play(const GameInstance& instance, const SolverConfig& config);

struct LinkRatios {
  std::optional<double> gamma;       // optimal total / induced total
  std::optional<double> beta;        // (e(s,t) - e(f*)) / e(s,t)
  std::optional<double> alpha_star;  // optimal autonomous share
  double mu = 1.0;                   // a_l / h_l
};

/// Per-link gamma, beta and optimal degree of autonomy. Ratios with a
/// denominator <= 1e-12 are left undefined.
std::vector<LinkRatios> measure_links(const StackelbergOutcome& outcome, const GameInstance& instance);

}  // namespace mixroute
