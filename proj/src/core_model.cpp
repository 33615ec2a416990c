#include "mixroute/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>
#include <unordered_map>

namespace mixroute {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveSlope: return "NonPositiveSlope";
    case ErrorCode::NegativeFreeFlow: return "NegativeFreeFlow";
    case ErrorCode::AsymmetryOutOfRange: return "AsymmetryOutOfRange";
    case ErrorCode::NoPath: return "NoPath";
    case ErrorCode::NonPositiveDemand: return "NonPositiveDemand";
    case ErrorCode::BadAlpha: return "BadAlpha";
    case ErrorCode::BadInstance: return "BadInstance";
    case ErrorCode::PathExplosion: return "PathExplosion";
    case ErrorCode::NegativeFlow: return "NegativeFlow";
    case ErrorCode::UnknownPath: return "UnknownPath";
    case ErrorCode::EmptyNetwork: return "EmptyNetwork";
    case ErrorCode::EmptyDemand: return "EmptyDemand";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorCode::HeterogeneousAlpha: return "HeterogeneousAlpha";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::InfeasibleLambda: return "InfeasibleLambda";
    case ErrorCode::UnsupportedTopology: return "UnsupportedTopology";
    case ErrorCode::GenerationFailed: return "GenerationFailed";
    case ErrorCode::BadKind: return "BadKind";
  }
  return "Unknown";
}

PathSet::PathSet(std::vector<Path> paths, std::size_t od_count)
    : paths_(std::move(paths)), by_od_(od_count) {
  for (std::size_t p = 0; p < paths_.size(); ++p) by_od_.at(paths_[p].od).push_back(p);
}

namespace {

struct Adjacency {
  // outgoing link indices per node, ordered by (head, link id)
  std::vector<std::vector<std::size_t>> out;
  std::unordered_map<std::string, std::size_t> node_index;
};

Adjacency build_adjacency(const InstanceSpec& spec) {
  Adjacency adj;
  adj.out.resize(spec.nodes.size());
  for (std::size_t n = 0; n < spec.nodes.size(); ++n) adj.node_index.emplace(spec.nodes[n], n);
  for (std::size_t l = 0; l < spec.links.size(); ++l) {
    const auto tail = adj.node_index.find(spec.links[l].tail);
    if (tail == adj.node_index.end())
      throw Error(ErrorCode::BadInstance, "link '" + spec.links[l].id + "' has undeclared tail");
    adj.out[tail->second].push_back(l);
  }
  for (auto& out : adj.out) {
    std::sort(out.begin(), out.end(), [&](std::size_t x, std::size_t y) {
      const Link& lx = spec.links[x];
      const Link& ly = spec.links[y];
      return std::tie(lx.head, lx.id) < std::tie(ly.head, ly.id);
    });
  }
  return adj;
}

}  // namespace

PathSet enumerate_paths(const InstanceSpec& spec, std::size_t cap) {
  const Adjacency adj = build_adjacency(spec);
  std::vector<Path> all;

  for (std::size_t od = 0; od < spec.od_pairs.size(); ++od) {
    const auto origin = adj.node_index.find(spec.od_pairs[od].origin);
    const auto dest = adj.node_index.find(spec.od_pairs[od].destination);
    if (origin == adj.node_index.end() || dest == adj.node_index.end())
      throw Error(ErrorCode::BadInstance, "O/D pair references an undeclared node");

    std::vector<Path> found;
    std::vector<bool> on_stack(spec.nodes.size(), false);
    std::vector<std::size_t> link_stack;

    auto dfs = [&](auto&& self, std::size_t node) -> void {
      if (node == dest->second) {
        Path p;
        p.od = od;
        p.links = link_stack;
        p.nodes.push_back(spec.nodes[origin->second]);
        for (std::size_t l : link_stack) p.nodes.push_back(spec.links[l].head);
        found.push_back(std::move(p));
        if (all.size() + found.size() > cap)
          throw Error(ErrorCode::PathExplosion,
                      "more than " + std::to_string(cap) + " simple paths");
        return;
      }
      on_stack[node] = true;
      for (std::size_t l : adj.out[node]) {
        const std::size_t next = adj.node_index.at(spec.links[l].head);
        if (on_stack[next]) continue;
        link_stack.push_back(l);
        self(self, next);
        link_stack.pop_back();
      }
      on_stack[node] = false;
    };
    dfs(dfs, origin->second);

    std::sort(found.begin(), found.end(), [&](const Path& x, const Path& y) {
      if (x.nodes != y.nodes) return x.nodes < y.nodes;
      return std::lexicographical_compare(
          x.links.begin(), x.links.end(), y.links.begin(), y.links.end(),
          [&](std::size_t lx, std::size_t ly) { return spec.links[lx].id < spec.links[ly].id; });
    });
    for (auto& p : found) all.push_back(std::move(p));
  }
  return PathSet(std::move(all), spec.od_pairs.size());
}

GameInstance validate_instance(InstanceSpec spec) {
  std::set<std::string> node_set;
  for (const auto& n : spec.nodes) {
    if (!node_set.insert(n).second) throw Error(ErrorCode::BadInstance, "duplicate node '" + n + "'");
  }

  std::set<std::string> link_ids;
  for (const Link& l : spec.links) {
    if (!link_ids.insert(l.id).second) throw Error(ErrorCode::BadInstance, "duplicate link id '" + l.id + "'");
    if (!node_set.count(l.tail) || !node_set.count(l.head))
      throw Error(ErrorCode::BadInstance, "link '" + l.id + "' has an undeclared endpoint");
    if (l.tail == l.head) throw Error(ErrorCode::BadInstance, "link '" + l.id + "' is a self-loop");
    if (!std::isfinite(l.a) || !std::isfinite(l.h) || !std::isfinite(l.b))
      throw Error(ErrorCode::BadInstance, "link '" + l.id + "' has a non-finite coefficient");
    if (l.a <= 0.0 || l.h <= 0.0)
      throw Error(ErrorCode::NonPositiveSlope, "link '" + l.id + "' needs a > 0 and h > 0");
    if (l.b < 0.0) throw Error(ErrorCode::NegativeFreeFlow, "link '" + l.id + "' has b < 0");
    if (l.a > l.h)
      throw Error(ErrorCode::AsymmetryOutOfRange, "link '" + l.id + "' has a/h > 1");
  }

  for (const OdPair& w : spec.od_pairs) {
    if (!node_set.count(w.origin) || !node_set.count(w.destination))
      throw Error(ErrorCode::BadInstance, "O/D pair references an undeclared node");
    if (w.origin == w.destination)
      throw Error(ErrorCode::BadInstance, "O/D pair with origin == destination '" + w.origin + "'");
    if (!(w.demand > 0.0) || !std::isfinite(w.demand))
      throw Error(ErrorCode::NonPositiveDemand, "O/D pair " + w.origin + "->" + w.destination);
    if (!(w.alpha >= 0.0 && w.alpha <= 1.0))
      throw Error(ErrorCode::BadAlpha, "O/D pair " + w.origin + "->" + w.destination);
  }
  if (spec.path_cap == 0) throw Error(ErrorCode::BadInstance, "path_cap must be positive");

  PathSet paths = enumerate_paths(spec, spec.path_cap);
  for (std::size_t od = 0; od < spec.od_pairs.size(); ++od) {
    if (paths.of_pair(od).empty())
      throw Error(ErrorCode::NoPath, "no path from " + spec.od_pairs[od].origin + " to " +
                                         spec.od_pairs[od].destination);
  }

  GameInstance g;
  g.nodes_ = std::move(spec.nodes);
  g.links_ = std::move(spec.links);
  g.od_pairs_ = std::move(spec.od_pairs);
  g.paths_ = std::move(paths);
  g.path_cap_ = spec.path_cap;
  return g;
}

std::optional<double> GameInstance::uniform_alpha() const {
  if (od_pairs_.empty()) return std::nullopt;
  const double alpha = od_pairs_.front().alpha;
  for (const auto& w : od_pairs_) {
    if (w.alpha != alpha) return std::nullopt;
  }
  return alpha;
}

GameInstance GameInstance::with_uniform_alpha(double alpha) const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorCode::BadAlpha, "alpha must lie in [0, 1]");
  GameInstance copy = *this;
  for (auto& w : copy.od_pairs_) w.alpha = alpha;
  return copy;
}

InstanceSpec GameInstance::spec() const { return {nodes_, links_, od_pairs_, path_cap_}; }

std::vector<double> aggregate_links(const GameInstance& instance, std::span<const double> path_flows) {
  if (path_flows.size() != instance.path_count())
    throw Error(ErrorCode::DimensionMismatch, "path flow vector has wrong length");
  std::vector<double> link(instance.link_count(), 0.0);
  const auto& paths = instance.paths();
  for (std::size_t p = 0; p < paths.size(); ++p) {
    if (path_flows[p] == 0.0) continue;
    for (std::size_t l : paths[p].links) link[l] += path_flows[p];
  }
  return link;
}

ClassFlow ClassFlow::zero(const GameInstance& instance) {
  ClassFlow f;
  f.path_a.assign(instance.path_count(), 0.0);
  f.path_h.assign(instance.path_count(), 0.0);
  f.link_a.assign(instance.link_count(), 0.0);
  f.link_h.assign(instance.link_count(), 0.0);
  return f;
}

ClassFlow ClassFlow::from_paths(const GameInstance& instance, std::vector<double> path_a,
                                std::vector<double> path_h) {
  for (const auto* v : {&path_a, &path_h}) {
    if (v->size() != instance.path_count())
      throw Error(ErrorCode::DimensionMismatch, "path flow vector has wrong length");
    for (double x : *v) {
      if (!(x >= 0.0)) throw Error(ErrorCode::NegativeFlow, "path flows must be nonnegative");
    }
  }
  ClassFlow f;
  f.link_a = aggregate_links(instance, path_a);
  f.link_h = aggregate_links(instance, path_h);
  f.path_a = std::move(path_a);
  f.path_h = std::move(path_h);
  return f;
}

std::vector<double> ClassFlow::path_total() const {
  std::vector<double> out(path_a.size());
  for (std::size_t p = 0; p < out.size(); ++p) out[p] = path_a[p] + path_h[p];
  return out;
}

std::vector<double> ClassFlow::link_totals() const {
  std::vector<double> out(link_a.size());
  for (std::size_t l = 0; l < out.size(); ++l) out[l] = link_a[l] + link_h[l];
  return out;
}

double link_latency(const Link& link, double fa, double fh) {
  if (!(fa >= 0.0) || !(fh >= 0.0)) throw Error(ErrorCode::NegativeFlow, "link '" + link.id + "'");
  return link.a * fa + link.h * fh + link.b;
}

std::vector<double> link_latencies(const GameInstance& instance, std::span<const double> link_a,
                                   std::span<const double> link_h) {
  if (link_a.size() != instance.link_count() || link_h.size() != instance.link_count())
    throw Error(ErrorCode::DimensionMismatch, "link flow vector has wrong length");
  std::vector<double> e(instance.link_count());
  for (std::size_t l = 0; l < e.size(); ++l) e[l] = link_latency(instance.links()[l], link_a[l], link_h[l]);
  return e;
}

double route_latency(const GameInstance& instance, std::span<const std::size_t> route,
                     std::span<const double> link_a, std::span<const double> link_h) {
  double total = 0.0;
  for (std::size_t l : route) {
    const double fa = link_a.empty() ? 0.0 : link_a[l];
    const double fh = link_h.empty() ? 0.0 : link_h[l];
    total += link_latency(instance.links().at(l), fa, fh);
  }
  return total;
}

double path_latency(const GameInstance& instance, std::size_t path, std::span<const double> link_a,
                    std::span<const double> link_h) {
  if (path >= instance.path_count())
    throw Error(ErrorCode::UnknownPath, "path index " + std::to_string(path));
  if ((!link_a.empty() && link_a.size() != instance.link_count()) ||
      (!link_h.empty() && link_h.size() != instance.link_count()))
    throw Error(ErrorCode::DimensionMismatch, "link flow vector has wrong length");
  return route_latency(instance, instance.paths()[path].links, link_a, link_h);
}

double social_cost(const GameInstance& instance, std::span<const double> link_a,
                   std::span<const double> link_h) {
  if (link_a.size() != instance.link_count() || link_h.size() != instance.link_count())
    throw Error(ErrorCode::DimensionMismatch, "link flow vector has wrong length");
  double cost = 0.0;
  for (std::size_t l = 0; l < instance.link_count(); ++l) {
    cost += (link_a[l] + link_h[l]) * link_latency(instance.links()[l], link_a[l], link_h[l]);
  }
  return cost;
}

double social_cost(const GameInstance& instance, const ClassFlow& flow) {
  return social_cost(instance, flow.link_a, flow.link_h);
}

FeasibilityReport check_feasibility(const GameInstance& instance, const ClassFlow& flow) {
  FeasibilityReport report;
  if (flow.path_a.size() != instance.path_count() || flow.path_h.size() != instance.path_count())
    throw Error(ErrorCode::DimensionMismatch, "path flow vector has wrong length");
  for (std::size_t p = 0; p < instance.path_count(); ++p) {
    if (flow.path_a[p] < 0.0) ++report.negative_entries;
    if (flow.path_h[p] < 0.0) ++report.negative_entries;
  }
  report.feasible = report.negative_entries == 0;
  for (std::size_t od = 0; od < instance.pair_count(); ++od) {
    PairResidual r;
    double sa = 0.0;
    double sh = 0.0;
    for (std::size_t p : instance.paths().of_pair(od)) {
      sa += flow.path_a[p];
      sh += flow.path_h[p];
    }
    r.autonomous = sa - instance.autonomous_demand(od);
    r.human = sh - instance.human_demand(od);
    if (std::abs(r.autonomous) > kFeasibilityTol || std::abs(r.human) > kFeasibilityTol) report.feasible = false;
    report.residuals.push_back(r);
  }
  return report;
}

double min_asymmetry(const GameInstance& instance) {
  if (instance.links().empty()) throw Error(ErrorCode::EmptyNetwork, "instance has no links");
  double mu = 1.0;
  for (const Link& l : instance.links()) mu = std::min(mu, l.asymmetry());
  return mu;
}

double network_autonomy_fraction(const GameInstance& instance) {
  if (instance.od_pairs().empty()) throw Error(ErrorCode::EmptyDemand, "instance has no O/D pairs");
  double autonomous = 0.0;
  double total = 0.0;
  for (const OdPair& w : instance.od_pairs()) {
    autonomous += w.alpha * w.demand;
    total += w.demand;
  }
  return autonomous / total;
}

LeaderFeasibility is_stackelberg_feasible(const GameInstance& instance,
                                          std::span<const double> leader_path_flows) {
  if (leader_path_flows.size() != instance.path_count())
    throw Error(ErrorCode::DimensionMismatch, "leader flow vector has wrong length");
  LeaderFeasibility out;
  const double alpha = network_autonomy_fraction(instance);
  bool nonnegative = true;
  double total = 0.0;
  double demand = 0.0;
  out.weak = true;
  for (std::size_t od = 0; od < instance.pair_count(); ++od) {
    double pair_total = 0.0;
    for (std::size_t p : instance.paths().of_pair(od)) {
      if (leader_path_flows[p] < 0.0) nonnegative = false;
      pair_total += leader_path_flows[p];
    }
    const double r = instance.od_pairs()[od].demand;
    if (std::abs(pair_total - alpha * r) > kFeasibilityTol) out.weak = false;
    total += pair_total;
    demand += r;
  }
  out.residual = total - alpha * demand;
  out.feasible = nonnegative && std::abs(out.residual) <= kFeasibilityTol;
  out.weak = out.weak && out.feasible;
  return out;
}

bool is_opt_restricted(const GameInstance& instance, std::span<const double> leader_link_flows,
                       const ClassFlow& optimal) {
  if (leader_link_flows.size() != instance.link_count())
    throw Error(ErrorCode::DimensionMismatch, "leader link flow vector has wrong length");
  for (std::size_t l = 0; l < instance.link_count(); ++l) {
    if (leader_link_flows[l] > optimal.link_total(l) + kFeasibilityTol) return false;
  }
  return true;
}

}  // namespace mixroute
