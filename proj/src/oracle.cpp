#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "mixroute/validation.hpp"

namespace mixroute {

bool is_parallel_single_od(const GameInstance& instance, std::size_t max_links) {
  if (instance.pair_count() != 1 || instance.link_count() == 0 || instance.link_count() > max_links) return false;
  const OdPair& w = instance.od_pairs().front();
  for (const Link& l : instance.links()) {
    if (l.tail != w.origin || l.head != w.destination) return false;
  }
  return instance.path_count() == instance.link_count();
}

namespace {

using Objective = std::function<double(std::span<const double>)>;

void require_parallel(const GameInstance& instance, const OracleConfig& config) {
  if (!is_parallel_single_od(instance, config.max_links))
    throw Error(ErrorCode::UnsupportedTopology, "oracles need one O/D pair joined by at most " +
                                                    std::to_string(config.max_links) + " parallel links");
  if (!(config.grid_1d > 0.0) || !(config.grid_2d > 0.0) || !(config.final_resolution > 0.0))
    throw Error(ErrorCode::DomainError, "oracle resolutions must be positive");
}

/// Link carried by each path of a parallel instance.
std::vector<std::size_t> path_links(const GameInstance& instance) {
  std::vector<std::size_t> out(instance.path_count());
  for (std::size_t p = 0; p < out.size(); ++p) out[p] = instance.paths()[p].links.front();
  return out;
}

/// Exhaustive grid over the probability simplex of dimension n - 1, followed
/// by repeated 10x zooms around the incumbent.
std::vector<double> simplex_search(std::size_t n, double grid, double final_resolution, const Objective& f) {
  std::vector<double> best(n, 0.0);
  if (n == 1) {
    best[0] = 1.0;
    return best;
  }
  double best_value = std::numeric_limits<double>::infinity();
  std::vector<double> x(n, 0.0);
  auto consider = [&]() {
    const double v = f(x);
    if (v < best_value) {
      best_value = v;
      best = x;
    }
  };

  const long steps = std::lround(1.0 / grid);
  std::function<void(std::size_t, long)> coarse = [&](std::size_t k, long remaining) {
    if (k == n - 1) {
      x[k] = static_cast<double>(remaining) / static_cast<double>(steps);
      consider();
      return;
    }
    for (long i = 0; i <= remaining; ++i) {
      x[k] = static_cast<double>(i) / static_cast<double>(steps);
      coarse(k + 1, remaining - i);
    }
  };
  coarse(0, steps);

  for (double step = 1.0 / static_cast<double>(steps); step > final_resolution; step /= 10.0) {
    const double fine = step / 10.0;
    const std::vector<double> center = best;
    std::function<void(std::size_t, double)> zoom = [&](std::size_t k, double used) {
      if (k == n - 1) {
        const double last = 1.0 - used;
        if (last < -1e-15) return;
        x[k] = std::max(last, 0.0);
        consider();
        return;
      }
      for (int i = -10; i <= 10; ++i) {
        const double v = center[k] + i * fine;
        if (v < 0.0 || v > 1.0) continue;
        x[k] = v;
        zoom(k + 1, used + v);
      }
    };
    zoom(0, 0.0);
  }
  return best;
}

/// argmin sum_l (k_l/2) x_l^2 + c_l x_l subject to sum x = total, x >= 0.
std::vector<double> water_fill(std::span<const double> c, std::span<const double> k, double total) {
  const std::size_t n = c.size();
  std::vector<double> x(n, 0.0);
  if (total <= 0.0) return x;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return c[i] < c[j]; });
  double level = 0.0;
  double sum_c = 0.0;
  double sum_inv = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    sum_c += c[order[m]] / k[order[m]];
    sum_inv += 1.0 / k[order[m]];
    level = (total + sum_c) / sum_inv;
    if (m + 1 == n || level <= c[order[m + 1]]) break;
  }
  for (std::size_t i = 0; i < n; ++i) x[i] = std::max(0.0, (level - c[i]) / k[i]);
  return x;
}

}  // namespace

OracleOptimum oracle_optimal(const GameInstance& instance, const OracleConfig& config) {
  require_parallel(instance, config);
  const std::size_t n = instance.link_count();
  const auto via = path_links(instance);
  const double auto_demand = instance.autonomous_demand(0);
  const double human_demand = instance.human_demand(0);

  std::vector<double> k(n);
  for (std::size_t l = 0; l < n; ++l) k[l] = 2.0 * instance.links()[l].h;

  // Per path p: autonomous share x[p]; human block solved exactly.
  auto human_response = [&](std::span<const double> share, std::vector<double>& fa, std::vector<double>& fh) {
    fa.assign(n, 0.0);
    for (std::size_t p = 0; p < n; ++p) fa[via[p]] = auto_demand * share[p];
    std::vector<double> c(n);
    for (std::size_t l = 0; l < n; ++l) {
      const Link& e = instance.links()[l];
      c[l] = (e.a + e.h) * fa[l] + e.b;
    }
    fh = water_fill(c, k, human_demand);
  };

  std::vector<double> fa;
  std::vector<double> fh;
  const double grid = n <= 2 ? config.grid_1d : config.grid_2d;
  const auto share = simplex_search(n, auto_demand > 0.0 ? grid : 1.0, config.final_resolution,
                                    [&](std::span<const double> x) {
                                      human_response(x, fa, fh);
                                      return social_cost(instance, fa, fh);
                                    });
  human_response(share, fa, fh);

  std::vector<double> pa(n), ph(n);
  for (std::size_t p = 0; p < n; ++p) {
    pa[p] = fa[via[p]];
    ph[p] = fh[via[p]];
  }
  OracleOptimum out;
  out.flow = ClassFlow::from_paths(instance, std::move(pa), std::move(ph));
  out.cost = social_cost(instance, out.flow);
  return out;
}

OracleNash oracle_nash(const GameInstance& instance, std::span<const double> leader, const OracleConfig& config) {
  require_parallel(instance, config);
  const std::size_t n = instance.link_count();
  if (leader.size() != n) throw Error(ErrorCode::DimensionMismatch, "leader link flow vector has wrong length");
  const auto via = path_links(instance);
  const double demand = instance.human_demand(0);

  OracleNash out;
  out.human_paths.assign(n, 0.0);
  out.human_links.assign(n, 0.0);
  if (demand <= 0.0) return out;

  auto gap_at = [&](std::span<const double> share) {
    double used = 0.0;
    double cheapest = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < n; ++p) {
      const Link& e = instance.links()[via[p]];
      const double t = demand * share[p];
      const double latency = e.a * leader[via[p]] + e.h * t + e.b;
      used += t * latency;
      cheapest = std::min(cheapest, latency);
    }
    return used > 0.0 ? (used - demand * cheapest) / used : 0.0;
  };

  const double grid = n <= 2 ? config.grid_1d : config.grid_2d;
  const auto share = simplex_search(n, grid, config.final_resolution, gap_at);
  for (std::size_t p = 0; p < n; ++p) {
    out.human_paths[p] = demand * share[p];
    out.human_links[via[p]] = out.human_paths[p];
  }
  out.gap = gap_at(share);
  return out;
}

}  // namespace mixroute
