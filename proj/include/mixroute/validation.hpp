#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mixroute/poa_bounds.hpp"
#include "mixroute/stackelberg.hpp"

namespace mixroute {

// ---------------------------------------------------------------------------
// Brute-force oracles for single-O/D parallel-link instances.

struct OracleConfig {
  double grid_2d = 1e-3;           // split step when the searched simplex is 2-D
  double grid_1d = 1e-4;           // split step when it is 1-D
  double final_resolution = 1e-9;  // zoom refinement stops below this step
  std::size_t max_links = 3;
};

/// One O/D pair whose every path is a single origin->destination link.
bool is_parallel_single_od(const GameInstance& instance, std::size_t max_links = 3);

struct OracleOptimum {
  ClassFlow flow;
  double cost = 0.0;
};

/// Grid search over the autonomous split with the human split solved
/// exactly (water-filling on the convex human block), then zoom refinement
/// around the incumbent. Throws UnsupportedTopology.
OracleOptimum oracle_optimal(const GameInstance& instance, const OracleConfig& config);

struct OracleNash {
  std::vector<double> human_paths;
  std::vector<double> human_links;
  double gap = 0.0;
};

/// Grid point (refined by zooming) minimizing the Wardrop gap of the human
/// split against fixed leader link flows. Throws UnsupportedTopology.
OracleNash oracle_nash(const GameInstance& instance, std::span<const double> leader, const OracleConfig& config);

// ---------------------------------------------------------------------------
// Random instances.

struct ShapeConfig {
  enum class Kind { General, Parallel };
  Kind kind = Kind::General;
  std::size_t max_nodes = 6;
  std::size_t max_links = 10;
  std::size_t max_pairs = 2;
  std::size_t min_parallel_links = 2;
  std::size_t max_parallel_links = 3;
  double mu_min = 0.3;
  double alpha = 0.5;
  double demand_min = 0.5;
  double demand_max = 2.0;
  double h_min = 0.2;
  double h_max = 2.0;
  double b_max = 2.0;
  std::size_t retry_budget = 200;
};

/// Reproducible from `seed`; always a validated instance with uniform alpha
/// and every mu_l in [mu_min, 1]. Throws GenerationFailed.
GameInstance random_instance(std::uint64_t seed, const ShapeConfig& shape);

// ---------------------------------------------------------------------------
// Batch verification of the closed-form bound against solved games.

enum class VerifyStatus { Pass, Fail, Vacuous, Uncertified, Error };
std::string_view to_string(VerifyStatus status);

struct VerificationEntry {
  std::uint64_t seed = 0;
  double alpha = 0.0;
  double mu = 1.0;
  double poa_emp = 0.0;
  double poa_bound = 0.0;
  Region region = Region::LambdaPlus;
  double margin = 0.0;  // poa_bound - poa_emp
  bool certified = false;
  bool oracle_checked = false;
  VerifyStatus status = VerifyStatus::Error;
  double wardrop_gap = 0.0;
  bool follower_converged = false;
  std::size_t beta_links = 0;       // links with defined gamma, beta, alpha*
  std::size_t beta_violations = 0;  // measured beta above a beta bound
  std::string detail;
};

struct VerificationReport {
  std::vector<VerificationEntry> entries;  // ordered by seed
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t vacuous = 0;
  std::size_t uncertified = 0;
  std::size_t errors = 0;
  double min_margin = 0.0;  // over passing entries
  double max_wardrop_gap = 0.0;
};

struct BatchConfig {
  std::uint64_t first_seed = 0;
  std::size_t count = 200;
  ShapeConfig shape;
  SolverConfig solver;
  OracleConfig oracle;
  bool oracle_check = true;
  std::size_t jobs = 1;
};

inline constexpr double kBoundSlack = 1e-6;
inline constexpr double kBetaSlack = 1e-8;

VerificationReport verify_bounds(const BatchConfig& config);

// ---------------------------------------------------------------------------
// Figure data.

enum class CurveKind { OmegaVsGamma, OmegaVsLambda, ConstraintSets, PoaBounds };
CurveKind parse_curve_kind(std::string_view name);

struct CurvePoint {
  std::string series;
  double x = 0.0;
  double y = 0.0;
};

struct CurveTable {
  std::vector<CurvePoint> rows;
};

struct CurveParams {
  double alpha = 0.5;
  double mu = 0.5;
  double lambda = 0.9;
  double step = 1e-3;
  std::vector<double> mus;  // poa-bounds families; empty selects the default three panels
};

/// Default mu families of the three poa-bounds panels.
std::vector<double> default_poa_mus();

CurveTable curve_tables(CurveKind kind, const CurveParams& params);

/// "%.12g" with inf/-inf/nan spelled out.
std::string format_number(double x);

std::string to_csv(const CurveTable& table);
std::string to_csv(const VerificationReport& report);

}  // namespace mixroute
