#include "mixroute/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace mixroute {

void SolverConfig::validate() const {
  if (!(relative_gap_tol > 0.0)) throw Error(ErrorCode::DomainError, "relative_gap_tol must be > 0");
  if (max_iterations < 1) throw Error(ErrorCode::DomainError, "max_iterations must be >= 1");
  if (multistart_count < 1) throw Error(ErrorCode::DomainError, "multistart_count must be >= 1");
}

std::vector<ShortestPath> shortest_paths(const GameInstance& instance, std::span<const double> link_latencies) {
  if (link_latencies.size() != instance.link_count())
    throw Error(ErrorCode::DimensionMismatch, "latency vector has wrong length");
  std::vector<ShortestPath> out;
  out.reserve(instance.pair_count());
  for (std::size_t od = 0; od < instance.pair_count(); ++od) {
    ShortestPath best{0, std::numeric_limits<double>::infinity()};
    for (std::size_t p : instance.paths().of_pair(od)) {
      double c = 0.0;
      for (std::size_t l : instance.paths()[p].links) c += link_latencies[l];
      if (c < best.latency) best = {p, c};
    }
    out.push_back(best);
  }
  return out;
}

namespace {

double path_cost(const Path& path, std::span<const double> grad) {
  double c = 0.0;
  for (std::size_t l : path.links) c += grad[l];
  return c;
}

/// Relative gap of one class: (sum_p x_p c_p - sum_w D_w min_p c_p) / sum_p x_p c_p.
double relative_gap(const GameInstance& instance, std::span<const double> path_flows,
                    std::span<const double> grad, std::span<const double> demand) {
  double total = 0.0;
  double best = 0.0;
  for (std::size_t od = 0; od < instance.pair_count(); ++od) {
    double cmin = std::numeric_limits<double>::infinity();
    for (std::size_t p : instance.paths().of_pair(od)) {
      const double c = path_cost(instance.paths()[p], grad);
      total += path_flows[p] * c;
      cmin = std::min(cmin, c);
    }
    best += demand[od] * cmin;
  }
  if (!(total > 0.0)) return 0.0;
  return std::clamp((total - best) / total, 0.0, 1.0);
}

/// One class of flow being moved by pairwise steps. `grad` is this class's
/// per-link cost and `slope` its derivative in the class's own link flow.
/// When `other_grad` is set, moving flow also shifts it by `cross` per unit.
struct Block {
  std::vector<double>* path;
  std::vector<double>* link;
  std::vector<double>* grad;
  std::span<const double> slope;
  std::vector<double>* other_grad = nullptr;
  std::span<const double> cross{};
};

void shift(Block& blk, std::size_t l, double delta) {
  (*blk.link)[l] += delta;
  (*blk.grad)[l] += blk.slope[l] * delta;
  if (blk.other_grad) (*blk.other_grad)[l] += blk.cross[l] * delta;
}

/// Pairwise steps for every O/D pair of one block. Returns the number of
/// pairs that moved flow.
std::size_t pairwise_sweep(const GameInstance& instance, Block& blk) {
  const PathSet& paths = instance.paths();
  std::vector<double>& x = *blk.path;
  std::vector<double> dir(instance.link_count(), 0.0);
  std::size_t moved = 0;

  for (std::size_t od = 0; od < instance.pair_count(); ++od) {
    const auto members = paths.of_pair(od);
    if (members.size() < 2) continue;
    std::size_t pmin = members.front();
    std::size_t pmax = members.front();
    double cmin = std::numeric_limits<double>::infinity();
    double cmax = -std::numeric_limits<double>::infinity();
    for (std::size_t p : members) {
      const double c = path_cost(paths[p], *blk.grad);
      if (c < cmin) {
        cmin = c;
        pmin = p;
      }
      if (x[p] > 0.0 && c > cmax) {
        cmax = c;
        pmax = p;
      }
    }
    if (pmin == pmax || !(cmax > cmin)) continue;

    for (std::size_t l : paths[pmin].links) dir[l] += 1.0;
    for (std::size_t l : paths[pmax].links) dir[l] -= 1.0;
    double curvature = 0.0;
    for (std::size_t l : paths[pmin].links) curvature += blk.slope[l] * dir[l] * dir[l];
    for (std::size_t l : paths[pmax].links) {
      if (dir[l] != 0.0) curvature += blk.slope[l] * dir[l] * dir[l];
    }

    // exact minimizer of the quadratic along the direction, clipped to the polytope
    double step = curvature > 0.0 ? (cmax - cmin) / curvature : x[pmax];
    step = std::min(step, x[pmax]);
    if (step > 0.0) {
      x[pmin] += step;
      x[pmax] = (step == x[pmax]) ? 0.0 : x[pmax] - step;
      for (std::size_t l : paths[pmin].links) {
        if (dir[l] != 0.0) shift(blk, l, step * dir[l]);
        dir[l] = 0.0;
      }
      for (std::size_t l : paths[pmax].links) {
        if (dir[l] != 0.0) shift(blk, l, step * dir[l]);
        dir[l] = 0.0;
      }
      ++moved;
    } else {
      for (std::size_t l : paths[pmin].links) dir[l] = 0.0;
      for (std::size_t l : paths[pmax].links) dir[l] = 0.0;
    }
  }
  return moved;
}

std::vector<double> all_or_nothing(const GameInstance& instance, std::span<const double> grad,
                                   std::span<const double> demand) {
  std::vector<double> x(instance.path_count(), 0.0);
  const auto sp = shortest_paths(instance, grad);
  for (std::size_t od = 0; od < instance.pair_count(); ++od) x[sp[od].path] = demand[od];
  return x;
}

std::vector<double> human_demands(const GameInstance& instance) {
  std::vector<double> d(instance.pair_count());
  for (std::size_t od = 0; od < d.size(); ++od) d[od] = instance.human_demand(od);
  return d;
}

std::vector<double> autonomous_demands(const GameInstance& instance) {
  std::vector<double> d(instance.pair_count());
  for (std::size_t od = 0; od < d.size(); ++od) d[od] = instance.autonomous_demand(od);
  return d;
}

void check_leader(const GameInstance& instance, std::span<const double> leader) {
  if (leader.size() != instance.link_count())
    throw Error(ErrorCode::DimensionMismatch, "leader link flow vector has wrong length");
  for (double s : leader) {
    if (!(s >= 0.0)) throw Error(ErrorCode::NegativeFlow, "leader link flows must be nonnegative");
  }
}

std::vector<double> follower_latencies(const GameInstance& instance, std::span<const double> leader,
                                       std::span<const double> human_links) {
  std::vector<double> e(instance.link_count());
  for (std::size_t l = 0; l < e.size(); ++l) {
    const Link& k = instance.links()[l];
    e[l] = k.a * leader[l] + k.h * human_links[l] + k.b;
  }
  return e;
}

}  // namespace

double follower_potential(const GameInstance& instance, std::span<const double> leader,
                          std::span<const double> human_links) {
  double phi = 0.0;
  for (std::size_t l = 0; l < instance.link_count(); ++l) {
    const Link& k = instance.links()[l];
    const double t = human_links[l];
    phi += 0.5 * k.h * t * t + (k.a * leader[l] + k.b) * t;
  }
  return phi;
}

double wardrop_gap(const GameInstance& instance, std::span<const double> leader,
                   std::span<const double> human_paths) {
  check_leader(instance, leader);
  const auto demand = human_demands(instance);
  double total_demand = 0.0;
  for (double d : demand) total_demand += d;
  if (total_demand == 0.0) return 0.0;
  const auto t = aggregate_links(instance, human_paths);
  const auto e = follower_latencies(instance, leader, t);
  return relative_gap(instance, human_paths, e, demand);
}

EquilibriumResult follower_equilibrium(const GameInstance& instance, std::span<const double> leader,
                                       const SolverConfig& config,
                                       std::optional<std::span<const double>> initial_human_paths) {
  config.validate();
  check_leader(instance, leader);
  const auto demand = human_demands(instance);

  std::vector<double> x;
  if (initial_human_paths) {
    if (initial_human_paths->size() != instance.path_count())
      throw Error(ErrorCode::DimensionMismatch, "initial human flow vector has wrong length");
    x.assign(initial_human_paths->begin(), initial_human_paths->end());
  } else {
    const std::vector<double> zero(instance.link_count(), 0.0);
    x = all_or_nothing(instance, follower_latencies(instance, leader, zero), demand);
  }

  std::vector<double> slope(instance.link_count());
  for (std::size_t l = 0; l < slope.size(); ++l) slope[l] = instance.links()[l].h;

  EquilibriumResult result;
  std::vector<double> t;
  std::vector<double> e;
  Block blk{&x, &t, &e, slope};

  for (std::size_t it = 0;; ++it) {
    // resynchronize the incrementally updated link state
    t = aggregate_links(instance, x);
    e = follower_latencies(instance, leader, t);
    result.relative_gap = relative_gap(instance, x, e, demand);
    result.iterations = it;
    if (config.record_trace) result.trace.push_back(follower_potential(instance, leader, t));
    if (result.relative_gap <= config.relative_gap_tol) {
      result.converged = true;
      break;
    }
    if (it >= config.max_iterations) break;
    if (pairwise_sweep(instance, blk) == 0) {
      // no admissible move: the gap is at rounding level
      result.converged = result.relative_gap <= config.relative_gap_tol;
      break;
    }
  }

  result.flow.path_h = x;
  result.flow.link_h = t;
  result.flow.link_a.assign(leader.begin(), leader.end());
  result.objective = follower_potential(instance, leader, t);
  return result;
}

MarginalCosts marginal_costs(const GameInstance& instance, std::span<const double> link_a,
                             std::span<const double> link_h) {
  MarginalCosts g;
  g.autonomous.resize(instance.link_count());
  g.human.resize(instance.link_count());
  for (std::size_t l = 0; l < instance.link_count(); ++l) {
    const Link& k = instance.links()[l];
    g.autonomous[l] = 2.0 * k.a * link_a[l] + (k.a + k.h) * link_h[l] + k.b;
    g.human[l] = 2.0 * k.h * link_h[l] + (k.a + k.h) * link_a[l] + k.b;
  }
  return g;
}

BlockGap block_gap(const GameInstance& instance, const ClassFlow& flow) {
  const auto g = marginal_costs(instance, flow.link_a, flow.link_h);
  return {relative_gap(instance, flow.path_a, g.autonomous, autonomous_demands(instance)),
          relative_gap(instance, flow.path_h, g.human, human_demands(instance))};
}

EquilibriumResult descend_social_cost(const GameInstance& instance, ClassFlow start, const SolverConfig& config) {
  config.validate();
  const std::size_t n = instance.link_count();
  std::vector<double> slope_a(n), slope_h(n), cross(n);
  for (std::size_t l = 0; l < n; ++l) {
    const Link& k = instance.links()[l];
    slope_a[l] = 2.0 * k.a;
    slope_h[l] = 2.0 * k.h;
    cross[l] = k.a + k.h;
  }
  const auto demand_a = autonomous_demands(instance);
  const auto demand_h = human_demands(instance);

  std::vector<double> xa = std::move(start.path_a);
  std::vector<double> xh = std::move(start.path_h);
  std::vector<double> fa, fh;
  MarginalCosts g;
  Block block_a{&xa, &fa, &g.autonomous, slope_a, &g.human, cross};
  Block block_h{&xh, &fh, &g.human, slope_h, &g.autonomous, cross};

  EquilibriumResult result;
  for (std::size_t it = 0;; ++it) {
    fa = aggregate_links(instance, xa);
    fh = aggregate_links(instance, xh);
    g = marginal_costs(instance, fa, fh);
    result.relative_gap = std::max(relative_gap(instance, xa, g.autonomous, demand_a),
                                   relative_gap(instance, xh, g.human, demand_h));
    result.iterations = it;
    if (config.record_trace) result.trace.push_back(social_cost(instance, fa, fh));
    if (result.relative_gap <= config.relative_gap_tol) {
      result.converged = true;
      break;
    }
    if (it >= config.max_iterations) break;
    const std::size_t moved = pairwise_sweep(instance, block_a) + pairwise_sweep(instance, block_h);
    if (moved == 0) break;
  }

  result.flow = ClassFlow::from_paths(instance, std::move(xa), std::move(xh));
  result.objective = social_cost(instance, result.flow);
  return result;
}

namespace {

std::vector<double> uniform_split(const GameInstance& instance, std::span<const double> demand) {
  std::vector<double> x(instance.path_count(), 0.0);
  for (std::size_t od = 0; od < instance.pair_count(); ++od) {
    const auto members = instance.paths().of_pair(od);
    for (std::size_t p : members) x[p] = demand[od] / static_cast<double>(members.size());
  }
  return x;
}

std::vector<double> random_vertex(const GameInstance& instance, std::span<const double> demand,
                                  std::mt19937_64& rng) {
  std::vector<double> x(instance.path_count(), 0.0);
  for (std::size_t od = 0; od < instance.pair_count(); ++od) {
    const auto members = instance.paths().of_pair(od);
    std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
    x[members[pick(rng)]] = demand[od];
  }
  return x;
}

std::vector<double> random_interior(const GameInstance& instance, std::span<const double> demand,
                                    std::mt19937_64& rng) {
  std::vector<double> x(instance.path_count(), 0.0);
  std::exponential_distribution<double> draw(1.0);
  for (std::size_t od = 0; od < instance.pair_count(); ++od) {
    const auto members = instance.paths().of_pair(od);
    double sum = 0.0;
    for (std::size_t p : members) sum += (x[p] = draw(rng));
    for (std::size_t p : members) x[p] *= demand[od] / sum;
  }
  return x;
}

}  // namespace

EquilibriumResult system_optimal(const GameInstance& instance, const SolverConfig& config) {
  config.validate();
  const auto demand_a = autonomous_demands(instance);
  const auto demand_h = human_demands(instance);
  std::mt19937_64 rng(config.seed);

  std::optional<EquilibriumResult> best;
  auto better = [](const EquilibriumResult& x, const EquilibriumResult& y) {
    if (x.converged != y.converged) return x.converged;
    return x.objective < y.objective;
  };

  for (std::size_t k = 0; k < config.multistart_count; ++k) {
    std::vector<double> xa, xh;
    if (k == 0) {
      const std::vector<double> zero(instance.link_count(), 0.0);
      const auto g = marginal_costs(instance, zero, zero);
      xa = all_or_nothing(instance, g.autonomous, demand_a);
      xh = all_or_nothing(instance, g.human, demand_h);
    } else if (k == 1) {
      xa = uniform_split(instance, demand_a);
      xh = uniform_split(instance, demand_h);
    } else if (k % 2 == 0) {
      xa = random_vertex(instance, demand_a, rng);
      xh = random_vertex(instance, demand_h, rng);
    } else {
      xa = random_interior(instance, demand_a, rng);
      xh = random_interior(instance, demand_h, rng);
    }
    auto candidate = descend_social_cost(instance, ClassFlow::from_paths(instance, xa, xh), config);
    if (!best || better(candidate, *best)) best = std::move(candidate);
  }
  return std::move(*best);
}

}  // namespace mixroute
