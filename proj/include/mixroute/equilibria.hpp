#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mixroute/core_model.hpp"

namespace mixroute {

struct SolverConfig {
  double relative_gap_tol = 1e-8;
  std::size_t max_iterations = 50000;
  std::size_t multistart_count = 16;
  std::uint64_t seed = 0;
  bool record_trace = false;

  /// Throws DomainError unless tol > 0 and both counts are >= 1.
  void validate() const;
};

struct EquilibriumResult {
  // For follower solves only the human class is owned by the result:
  // link_a holds the fixed leader link flows and path_a is empty.
  ClassFlow flow;
  double objective = 0.0;  // Beckmann potential (follower) or social cost (optimum)
  double relative_gap = 1.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> trace;  // objective after every sweep when record_trace is set
};

struct ShortestPath {
  std::size_t path = 0;
  double latency = 0.0;
};

/// Minimum-latency enumerated path per O/D pair; ties go to the earlier path.
std::vector<ShortestPath> shortest_paths(const GameInstance& instance, std::span<const double> link_latencies);

/// Human Wardrop flow induced by fixed leader link flows `leader`. Human
/// demand per pair is (1 - alpha_w) r_w. Minimizes the Beckmann potential
///   sum_l h_l t_l^2 / 2 + (a_l s_l + b_l) t_l
/// by pairwise conditional-gradient steps: per O/D pair, flow moves from the
/// costliest used path onto the all-or-nothing shortest path with an exact
/// line search. `initial_human_paths`, when given, must be feasible.
EquilibriumResult follower_equilibrium(const GameInstance& instance, std::span<const double> leader,
                                       const SolverConfig& config,
                                       std::optional<std::span<const double>> initial_human_paths = std::nullopt);

/// Relative gap of human path flows `human_paths` against leader link flows.
/// Zero human demand yields 0.
double wardrop_gap(const GameInstance& instance, std::span<const double> leader,
                   std::span<const double> human_paths);

/// Beckmann potential of the follower problem at human link flows.
double follower_potential(const GameInstance& instance, std::span<const double> leader,
                          std::span<const double> human_links);

/// Per-class marginal social cost d C / d f^k_l for both classes.
struct MarginalCosts {
  std::vector<double> autonomous;
  std::vector<double> human;
};
MarginalCosts marginal_costs(const GameInstance& instance, std::span<const double> link_a,
                             std::span<const double> link_h);

/// Block-wise relative gaps of a two-class flow under marginal costs.
struct BlockGap {
  double autonomous = 0.0;
  double human = 0.0;
  double max() const { return autonomous > human ? autonomous : human; }
};
BlockGap block_gap(const GameInstance& instance, const ClassFlow& flow);

/// Block-coordinate descent from a feasible two-class flow: alternating
/// pairwise conditional-gradient sweeps on the autonomous and human blocks.
/// Each block subproblem is a convex quadratic; the joint cost is not.
EquilibriumResult descend_social_cost(const GameInstance& instance, ClassFlow start, const SolverConfig& config);

/// Best local optimum of the social cost over `config.multistart_count`
/// starts: all-or-nothing, uniform split, then seeded random vertices and
/// random interior points of the flow polytope.
EquilibriumResult system_optimal(const GameInstance& instance, const SolverConfig& config);

}  // namespace mixroute
