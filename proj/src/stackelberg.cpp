#include "mixroute/stackelberg.hpp"

#include <cmath>

namespace mixroute {

namespace {
constexpr std::size_t kMaxRefinements = 8;
constexpr double kRatioFloor = 1e-12;
}  // namespace

LeaderFlow scale_strategy(const ClassFlow& optimal, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::AlphaOutOfRange, "SCALE needs alpha in (0, 1)");
  LeaderFlow s;
  s.path.resize(optimal.path_a.size());
  for (std::size_t p = 0; p < s.path.size(); ++p) s.path[p] = alpha * (optimal.path_a[p] + optimal.path_h[p]);
  s.link.resize(optimal.link_a.size());
  for (std::size_t l = 0; l < s.link.size(); ++l) s.link[l] = alpha * (optimal.link_a[l] + optimal.link_h[l]);
  return s;
}

StackelbergOutcome play(const GameInstance& instance, const SolverConfig& config) {
  const auto uniform = instance.uniform_alpha();
  if (!uniform) throw Error(ErrorCode::HeterogeneousAlpha, "Stackelberg play needs one alpha for every O/D pair");
  const double alpha = *uniform;
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::AlphaOutOfRange, "alpha must lie in (0, 1)");

  StackelbergOutcome out;
  out.alpha = alpha;
  EquilibriumResult optimum = system_optimal(instance, config);

  for (;;) {
    LeaderFlow leader = scale_strategy(optimum.flow, alpha);
    EquilibriumResult follower = follower_equilibrium(instance, leader.link, config);

    out.optimal_flow = optimum.flow;
    out.optimal_cost = optimum.objective;
    out.optimum_gap = optimum.relative_gap;
    out.optimum_converged = optimum.converged;
    out.induced_flow = ClassFlow::from_paths(instance, leader.path, follower.flow.path_h);
    out.leader = std::move(leader);
    out.induced_cost = social_cost(instance, out.induced_flow);
    out.wardrop_gap = wardrop_gap(instance, out.leader.link, out.induced_flow.path_h);
    out.follower_converged = follower.converged;

    const bool undercut = out.induced_cost < out.optimal_cost * (1.0 - kCertifySlack);
    if (!undercut || out.refinements >= kMaxRefinements) break;
    // The induced flow is feasible for the two-class problem, so it proves the
    // incumbent is not the global optimum; continue descending from it.
    EquilibriumResult again = descend_social_cost(instance, out.induced_flow, config);
    if (!(again.objective < optimum.objective)) break;
    optimum = std::move(again);
    ++out.refinements;
  }

  out.empirical_poa = out.induced_cost / out.optimal_cost;
  out.optimum_certified = out.optimum_converged && out.induced_cost >= out.optimal_cost * (1.0 - kCertifySlack);
  return out;
}

std::vector<LinkRatios> measure_links(const StackelbergOutcome& outcome, const GameInstance& instance) {
  std::vector<LinkRatios> out(instance.link_count());
  for (std::size_t l = 0; l < instance.link_count(); ++l) {
    const Link& k = instance.links()[l];
    const double fa = outcome.optimal_flow.link_a[l];
    const double fh = outcome.optimal_flow.link_h[l];
    const double s = outcome.induced_flow.link_a[l];
    const double t = outcome.induced_flow.link_h[l];
    LinkRatios& r = out[l];
    r.mu = k.asymmetry();
    if (s + t > kRatioFloor) r.gamma = (fa + fh) / (s + t);
    const double induced_latency = link_latency(k, s, t);
    if (induced_latency > kRatioFloor) r.beta = (induced_latency - link_latency(k, fa, fh)) / induced_latency;
    if (fa + fh > kRatioFloor) r.alpha_star = fa / (fa + fh);
  }
  return out;
}

}  // namespace mixroute
