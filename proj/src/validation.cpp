#include "mixroute/validation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <thread>
#include <utility>

namespace mixroute {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// Random instances

namespace {

Link random_link(std::string id, std::string tail, std::string head, const ShapeConfig& shape,
                 std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Link l;
  l.id = std::move(id);
  l.tail = std::move(tail);
  l.head = std::move(head);
  l.h = shape.h_min + (shape.h_max - shape.h_min) * unit(rng);
  const double mu = shape.mu_min + (1.0 - shape.mu_min) * unit(rng);
  l.a = std::min(mu * l.h, l.h);
  while (l.a / l.h < shape.mu_min) l.a = std::nextafter(l.a, l.h);
  l.b = unit(rng) < 0.2 ? 0.0 : shape.b_max * unit(rng);
  return l;
}

double random_demand(const ShapeConfig& shape, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(shape.demand_min, shape.demand_max);
  return d(rng);
}

InstanceSpec random_parallel(const ShapeConfig& shape, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> count(shape.min_parallel_links, shape.max_parallel_links);
  InstanceSpec spec;
  spec.nodes = {"d", "o"};
  const std::size_t m = count(rng);
  for (std::size_t i = 0; i < m; ++i) spec.links.push_back(random_link("e" + std::to_string(i), "o", "d", shape, rng));
  spec.od_pairs.push_back({"o", "d", random_demand(shape, rng), shape.alpha});
  return spec;
}

InstanceSpec random_general(const ShapeConfig& shape, std::mt19937_64& rng) {
  const std::size_t max_nodes = std::max<std::size_t>(shape.max_nodes, 2);
  std::uniform_int_distribution<std::size_t> node_count(std::min<std::size_t>(3, max_nodes), max_nodes);
  const std::size_t n = node_count(rng);
  const std::size_t max_links = std::min(shape.max_links, n * (n - 1));
  std::uniform_int_distribution<std::size_t> link_count(std::min(n, max_links), max_links);
  const std::size_t m = link_count(rng);

  InstanceSpec spec;
  for (std::size_t i = 0; i < n; ++i) spec.nodes.push_back("n" + std::to_string(i));

  std::uniform_int_distribution<std::size_t> node(0, n - 1);
  std::set<std::pair<std::size_t, std::size_t>> used;
  while (spec.links.size() < m) {
    const std::size_t u = node(rng);
    const std::size_t v = node(rng);
    if (u == v || !used.emplace(u, v).second) continue;
    spec.links.push_back(random_link("e" + std::to_string(spec.links.size()), spec.nodes[u], spec.nodes[v], shape, rng));
  }

  std::uniform_int_distribution<std::size_t> pair_count(1, std::max<std::size_t>(shape.max_pairs, 1));
  const std::size_t k = pair_count(rng);
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  while (pairs.size() < k) {
    const std::size_t o = node(rng);
    const std::size_t d = node(rng);
    if (o == d || !pairs.emplace(o, d).second) continue;
    spec.od_pairs.push_back({spec.nodes[o], spec.nodes[d], random_demand(shape, rng), shape.alpha});
  }
  return spec;
}

}  // namespace

GameInstance random_instance(std::uint64_t seed, const ShapeConfig& shape) {
  if (!(shape.mu_min > 0.0 && shape.mu_min <= 1.0)) throw Error(ErrorCode::DomainError, "mu_min must lie in (0, 1]");
  if (!(shape.alpha >= 0.0 && shape.alpha <= 1.0)) throw Error(ErrorCode::BadAlpha, "alpha must lie in [0, 1]");
  if (shape.min_parallel_links < 1 || shape.min_parallel_links > shape.max_parallel_links)
    throw Error(ErrorCode::DomainError, "bad parallel link range");
  if (!(shape.demand_min > 0.0 && shape.demand_min <= shape.demand_max))
    throw Error(ErrorCode::DomainError, "bad demand range");
  if (!(shape.h_min > 0.0 && shape.h_min <= shape.h_max) || shape.b_max < 0.0)
    throw Error(ErrorCode::DomainError, "bad coefficient range");

  std::mt19937_64 rng(seed);
  for (std::size_t attempt = 0; attempt < shape.retry_budget; ++attempt) {
    InstanceSpec spec = shape.kind == ShapeConfig::Kind::Parallel ? random_parallel(shape, rng)
                                                                   : random_general(shape, rng);
    try {
      GameInstance g = validate_instance(std::move(spec));
      // a game where no pair has a route choice is not worth solving
      if (shape.kind == ShapeConfig::Kind::General && g.path_count() == g.pair_count()) continue;
      return g;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoPath) throw;
    }
  }
  throw Error(ErrorCode::GenerationFailed, "retry budget exhausted for seed " + std::to_string(seed));
}

// ---------------------------------------------------------------------------
// Batch verification

std::string_view to_string(VerifyStatus status) {
  switch (status) {
    case VerifyStatus::Pass: return "pass";
    case VerifyStatus::Fail: return "fail";
    case VerifyStatus::Vacuous: return "vacuous";
    case VerifyStatus::Uncertified: return "uncertified";
    case VerifyStatus::Error: return "error";
  }
  return "?";
}

namespace {

VerificationEntry verify_one(std::uint64_t seed, const BatchConfig& config) {
  VerificationEntry entry;
  entry.seed = seed;
  try {
    const GameInstance instance = random_instance(seed, config.shape);
    SolverConfig solver = config.solver;
    solver.seed = seed;
    const StackelbergOutcome outcome = play(instance, solver);

    entry.alpha = outcome.alpha;
    entry.mu = min_asymmetry(instance);
    entry.poa_emp = outcome.empirical_poa;
    entry.wardrop_gap = outcome.wardrop_gap;
    entry.follower_converged = outcome.follower_converged;
    const BoundResult bound = poa_bound(entry.alpha, entry.mu);
    entry.poa_bound = bound.bound;
    entry.region = bound.region;
    entry.margin = bound.bound - entry.poa_emp;
    entry.certified = outcome.optimum_certified && outcome.follower_converged;

    if (config.oracle_check && is_parallel_single_od(instance, config.oracle.max_links)) {
      entry.oracle_checked = true;
      const OracleOptimum oracle = oracle_optimal(instance, config.oracle);
      if (outcome.optimal_cost > oracle.cost * (1.0 + kCertifySlack)) {
        entry.certified = false;
        entry.detail = "oracle optimum is cheaper than the solver's";
      }
    }

    for (const LinkRatios& r : measure_links(outcome, instance)) {
      if (!r.gamma || !r.beta || !r.alpha_star) continue;
      ++entry.beta_links;
      const double exact = beta_bound(*r.gamma, entry.alpha, r.mu, *r.alpha_star);
      const double relaxed = beta_bound_relaxed(*r.gamma, entry.alpha, r.mu);
      if (*r.beta > exact + kBetaSlack || exact > relaxed + kBetaSlack) ++entry.beta_violations;
    }

    if (entry.region == Region::A0) {
      entry.status = VerifyStatus::Vacuous;
      entry.detail = "bound infinite - vacuous";
    } else if (!entry.certified) {
      entry.status = VerifyStatus::Uncertified;
      if (entry.detail.empty()) entry.detail = "optimum or follower not certified";
    } else if (entry.poa_emp < 1.0 - kBoundSlack || entry.poa_emp > entry.poa_bound + kBoundSlack) {
      entry.status = VerifyStatus::Fail;
      entry.detail = "empirical price of anarchy outside [1, bound]";
    } else {
      entry.status = VerifyStatus::Pass;
    }
    if (entry.beta_violations > 0 && entry.status != VerifyStatus::Uncertified) {
      entry.status = VerifyStatus::Fail;
      entry.detail = "measured beta exceeds its bound on " + std::to_string(entry.beta_violations) + " link(s)";
    }
  } catch (const Error& e) {
    entry.status = VerifyStatus::Error;
    entry.detail = e.what();
  }
  return entry;
}

}  // namespace

VerificationReport verify_bounds(const BatchConfig& config) {
  VerificationReport report;
  report.entries.resize(config.count);

  const std::size_t jobs = std::max<std::size_t>(1, std::min(config.jobs, config.count));
  if (jobs == 1) {
    for (std::size_t i = 0; i < config.count; ++i) report.entries[i] = verify_one(config.first_seed + i, config);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < jobs; ++j) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < config.count; i = next++)
          report.entries[i] = verify_one(config.first_seed + i, config);
      });
    }
    for (auto& t : pool) t.join();
  }

  report.min_margin = kInf;
  for (const auto& e : report.entries) {
    switch (e.status) {
      case VerifyStatus::Pass:
        ++report.passed;
        report.min_margin = std::min(report.min_margin, e.margin);
        break;
      case VerifyStatus::Fail: ++report.failed; break;
      case VerifyStatus::Vacuous: ++report.vacuous; break;
      case VerifyStatus::Uncertified: ++report.uncertified; break;
      case VerifyStatus::Error: ++report.errors; break;
    }
    if (e.follower_converged) report.max_wardrop_gap = std::max(report.max_wardrop_gap, e.wardrop_gap);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Curves

CurveKind parse_curve_kind(std::string_view name) {
  if (name == "omega-vs-gamma") return CurveKind::OmegaVsGamma;
  if (name == "omega-vs-lambda") return CurveKind::OmegaVsLambda;
  if (name == "constraint-sets") return CurveKind::ConstraintSets;
  if (name == "poa-bounds") return CurveKind::PoaBounds;
  throw Error(ErrorCode::BadKind, "unknown curve kind '" + std::string(name) + "'");
}

std::vector<double> default_poa_mus() {
  return {0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
}

namespace {

std::size_t grid_steps(double step) {
  if (!(step > 0.0 && step <= 0.5)) throw Error(ErrorCode::DomainError, "grid step must lie in (0, 0.5]");
  return static_cast<std::size_t>(std::lround(1.0 / step));
}

void omega_vs_gamma(const CurveParams& p, CurveTable& out) {
  const double eps = 1.0 - p.mu;
  const double gamma_plus = 1.0 / (p.alpha * eps + p.mu);
  const double gamma_max = 1.0 / p.alpha;
  const std::size_t n = grid_steps(p.step);
  for (std::size_t i = 1; i <= n; ++i) {
    const double g = gamma_max * static_cast<double>(i) / static_cast<double>(n);
    if (g < gamma_plus) {
      out.rows.push_back({"omega1", g, g * (1.0 - p.mu * p.lambda / (1.0 / g - p.alpha * eps))});
    } else {
      out.rows.push_back({"omega2", g, g * (1.0 - p.lambda)});
    }
  }
  if (eps >= kUnitAsymmetryEps && p.lambda > 0.0) {
    const double gamma_star = (1.0 - delta(p.lambda, p.alpha, p.mu)) / (p.alpha * eps);
    if (gamma_star > 0.0 && gamma_star < gamma_plus)
      out.rows.push_back({"gamma_star", gamma_star, omega_at_gamma(p.lambda, gamma_star, p.alpha, p.mu)});
  }
  out.rows.push_back({"gamma_plus", gamma_plus, gamma_plus * (1.0 - p.lambda)});
}

void omega_vs_lambda(const CurveParams& p, CurveTable& out) {
  const LambdaThresholds t = lambda_thresholds(p.alpha, p.mu);
  const std::size_t n = grid_steps(p.step);
  for (std::size_t i = 1; i <= n; ++i) {
    const double lambda = static_cast<double>(i) / static_cast<double>(n);
    out.rows.push_back({"omega1", lambda, omega1_sup(lambda, p.alpha, p.mu)});
    out.rows.push_back({"omega1_interior", lambda, omega1(lambda, p.alpha, p.mu)});
    out.rows.push_back({"omega2", lambda, omega2(lambda, p.alpha)});
    out.rows.push_back({"omega", lambda, omega(lambda, p.alpha, p.mu)});
  }
  out.rows.push_back({"lambda_minus", t.minus, omega2(t.minus, p.alpha)});
  out.rows.push_back({"lambda_plus", t.plus, omega2(t.plus, p.alpha)});
}

void constraint_sets(const CurveParams& p, CurveTable& out) {
  const std::size_t n = grid_steps(p.step);
  const Region regions[] = {Region::A0, Region::A1, Region::LambdaStar, Region::LambdaPlus};
  for (std::size_t i = 1; i <= n; ++i) {
    const double mu = static_cast<double>(i) / static_cast<double>(n);
    const AlphaThresholds t = alpha_thresholds(mu);
    const std::pair<const char*, const Threshold*> named[] = {
        {"alpha0", &t.alpha0}, {"alpha1", &t.alpha1}, {"alpha2", &t.alpha2}, {"alpha_tilde", &t.alpha_tilde}};
    for (const auto& [name, th] : named) {
      if (th->in_range) out.rows.push_back({name, mu, th->value});
    }
    // Regions in classification order; each starts where the previous ends.
    const double cut[] = {t.alpha0.clamped, t.alpha1.clamped, t.alpha2.clamped, 1.0};
    double lower = 0.0;
    for (std::size_t r = 0; r < 4; ++r) {
      const double upper = std::max(lower, cut[r]);
      if (upper > lower) {
        const std::string label(to_string(regions[r]));
        out.rows.push_back({label + ".lower", mu, lower});
        out.rows.push_back({label + ".upper", mu, upper});
      }
      lower = upper;
    }
  }
}

void poa_bounds(const CurveParams& p, CurveTable& out) {
  const std::vector<double> mus = p.mus.empty() ? default_poa_mus() : p.mus;
  const std::size_t n = grid_steps(p.step);
  for (double mu : mus) {
    const std::string series = "mu=" + format_number(mu);
    std::vector<double> alphas;
    for (std::size_t i = 1; i < n; ++i) alphas.push_back(static_cast<double>(i) / static_cast<double>(n));
    const Threshold a0 = alpha_thresholds(mu).alpha0;
    if (a0.value >= 0.0 && a0.value < 1.0) {
      for (double offset : {1e-6, 1e-5, 1e-4}) alphas.push_back(a0.value + offset);
      std::sort(alphas.begin(), alphas.end());
      out.rows.push_back({"alpha0:" + series, a0.value, kInf});
    }
    for (double alpha : alphas) out.rows.push_back({series, alpha, poa_bound(alpha, mu).bound});
  }
}

}  // namespace

CurveTable curve_tables(CurveKind kind, const CurveParams& params) {
  CurveTable out;
  switch (kind) {
    case CurveKind::OmegaVsGamma:
      lambda_thresholds(params.alpha, params.mu);  // validates alpha and mu
      omega_vs_gamma(params, out);
      break;
    case CurveKind::OmegaVsLambda: omega_vs_lambda(params, out); break;
    case CurveKind::ConstraintSets: constraint_sets(params, out); break;
    case CurveKind::PoaBounds: poa_bounds(params, out); break;
  }
  return out;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string to_csv(const CurveTable& table) {
  std::ostringstream os;
  os << "series,x,y\n";
  for (const auto& r : table.rows) os << r.series << ',' << format_number(r.x) << ',' << format_number(r.y) << '\n';
  return os.str();
}

std::string to_csv(const VerificationReport& report) {
  std::ostringstream os;
  os << "seed,alpha,mu,poa_emp,poa_bound,region,margin,certified,status\n";
  for (const auto& e : report.entries) {
    os << e.seed << ',' << format_number(e.alpha) << ',' << format_number(e.mu) << ',' << format_number(e.poa_emp)
       << ',' << format_number(e.poa_bound) << ',' << to_string(e.region) << ',' << format_number(e.margin) << ','
       << (e.certified ? "true" : "false") << ',' << to_string(e.status) << '\n';
  }
  return os.str();
}

}  // namespace mixroute
