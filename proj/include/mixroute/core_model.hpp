#pragma once

// Mixed-autonomy routing game instances: network, affine two-class latencies,
// O/D demands, the enumerated path set, and the elementary flow quantities.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mixroute/error.hpp"

namespace mixroute {

inline constexpr std::size_t kDefaultPathCap = 10000;
inline constexpr double kFeasibilityTol = 1e-9;
inline constexpr double kAggregationTol = 1e-12;

/// Directed link with latency a*fa + h*fh + b.
struct Link {
  std::string id;
  std::string tail;
  std::string head;
  double a = 0.0;  // autonomous slope
  double h = 0.0;  // human slope
  double b = 0.0;  // free-flow latency

  /// Degree of asymmetry a/h, in (0, 1] for a validated link.
  double asymmetry() const { return a / h; }
};

struct OdPair {
  std::string origin;
  std::string destination;
  double demand = 0.0;
  double alpha = 0.0;  // autonomous share of this pair's demand
};

/// Unvalidated instance description, as read from an instance file.
struct InstanceSpec {
  std::vector<std::string> nodes;
  std::vector<Link> links;
  std::vector<OdPair> od_pairs;
  std::size_t path_cap = kDefaultPathCap;
};

struct Path {
  std::size_t od = 0;
  std::vector<std::size_t> links;   // link indices in travel order
  std::vector<std::string> nodes;   // origin first, destination last
};

/// All simple paths of every O/D pair. Global path indices are grouped by O/D
/// pair; within a pair paths are sorted by node sequence, then link ids.
class PathSet {
 public:
  PathSet() = default;
  PathSet(std::vector<Path> paths, std::size_t od_count);

  std::size_t size() const { return paths_.size(); }
  const Path& operator[](std::size_t p) const { return paths_[p]; }
  const std::vector<Path>& all() const { return paths_; }
  std::span<const std::size_t> of_pair(std::size_t od) const { return by_od_[od]; }
  std::size_t pair_count() const { return by_od_.size(); }

 private:
  std::vector<Path> paths_;
  std::vector<std::vector<std::size_t>> by_od_;
};

/// Enumerates simple directed paths for every O/D pair of `spec`. Node and
/// link references must already be resolvable. Throws PathExplosion once the
/// running total exceeds `cap`.
PathSet enumerate_paths(const InstanceSpec& spec, std::size_t cap);

class GameInstance {
 public:
  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::vector<Link>& links() const { return links_; }
  const std::vector<OdPair>& od_pairs() const { return od_pairs_; }
  const PathSet& paths() const { return paths_; }
  std::size_t path_cap() const { return path_cap_; }

  std::size_t link_count() const { return links_.size(); }
  std::size_t path_count() const { return paths_.size(); }
  std::size_t pair_count() const { return od_pairs_.size(); }

  double autonomous_demand(std::size_t od) const { return od_pairs_[od].alpha * od_pairs_[od].demand; }
  double human_demand(std::size_t od) const { return (1.0 - od_pairs_[od].alpha) * od_pairs_[od].demand; }

  /// The common alpha_w, if every pair shares one (exact comparison).
  std::optional<double> uniform_alpha() const;

  /// Copy of this instance with every alpha_w replaced by `alpha`.
  GameInstance with_uniform_alpha(double alpha) const;

  InstanceSpec spec() const;

 private:
  friend GameInstance validate_instance(InstanceSpec spec);

  std::vector<std::string> nodes_;
  std::vector<Link> links_;
  std::vector<OdPair> od_pairs_;
  PathSet paths_;
  std::size_t path_cap_ = kDefaultPathCap;
};

/// Checks coefficients, demands and connectivity and enumerates paths.
GameInstance validate_instance(InstanceSpec spec);

/// Paired per-path and per-link flows for the autonomous (a) and human (h)
/// classes. Link vectors are always the aggregation of the path vectors.
struct ClassFlow {
  std::vector<double> path_a;
  std::vector<double> path_h;
  std::vector<double> link_a;
  std::vector<double> link_h;

  static ClassFlow zero(const GameInstance& instance);
  static ClassFlow from_paths(const GameInstance& instance, std::vector<double> path_a,
                              std::vector<double> path_h);

  double link_total(std::size_t l) const { return link_a[l] + link_h[l]; }
  std::vector<double> path_total() const;
  std::vector<double> link_totals() const;
};

/// Link flows from path flows: f_l = sum of f_p over paths containing l.
std::vector<double> aggregate_links(const GameInstance& instance, std::span<const double> path_flows);

double link_latency(const Link& link, double fa, double fh);

std::vector<double> link_latencies(const GameInstance& instance, std::span<const double> link_a,
                                   std::span<const double> link_h);

/// Latency of an arbitrary link sequence under the given link flows.
double route_latency(const GameInstance& instance, std::span<const std::size_t> route,
                     std::span<const double> link_a, std::span<const double> link_h);

double path_latency(const GameInstance& instance, std::size_t path, std::span<const double> link_a,
                    std::span<const double> link_h);

double social_cost(const GameInstance& instance, std::span<const double> link_a,
                   std::span<const double> link_h);
double social_cost(const GameInstance& instance, const ClassFlow& flow);

struct PairResidual {
  double autonomous = 0.0;  // sum f^a_p - alpha_w r_w
  double human = 0.0;       // sum f^h_p - (1 - alpha_w) r_w
};

struct FeasibilityReport {
  bool feasible = true;
  std::vector<PairResidual> residuals;
  std::size_t negative_entries = 0;
};

FeasibilityReport check_feasibility(const GameInstance& instance, const ClassFlow& flow);

double min_asymmetry(const GameInstance& instance);

double network_autonomy_fraction(const GameInstance& instance);

struct LeaderFeasibility {
  bool feasible = false;  // network total equals alpha * total demand
  bool weak = false;      // every pair carries alpha * r_w
  double residual = 0.0;
};

LeaderFeasibility is_stackelberg_feasible(const GameInstance& instance,
                                          std::span<const double> leader_path_flows);

bool is_opt_restricted(const GameInstance& instance, std::span<const double> leader_link_flows,
                       const ClassFlow& optimal);

}  // namespace mixroute
