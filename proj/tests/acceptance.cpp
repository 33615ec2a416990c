// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "mixroute/validation.hpp"

using namespace mixroute;

namespace {

struct Verdict {
  bool ok = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double budget_seconds, const std::function<Verdict()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = elapsed < budget_seconds;
  const bool ok = v.ok && in_time;
  if (!ok) ++failures;
  std::printf("%s %2d %-32s %s [%.2fs of %.0fs]%s\n", ok ? "PASS" : "FAIL", id, name, v.detail.c_str(), elapsed,
              budget_seconds, in_time ? "" : " over budget");
  std::fflush(stdout);
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double grid_min_poa(double alpha, double mu, double lower) {
  double best = std::numeric_limits<double>::infinity();
  const long n = 1000000;
  for (long k = n; k >= 0; --k) {
    const double lambda = static_cast<double>(k) / static_cast<double>(n);
    if (lambda <= lower) break;
    const double w = omega(lambda, alpha, mu);
    if (w >= 1.0) continue;
    best = std::min(best, lambda / (1.0 - w));
  }
  return best;
}

double gamma_grid_sup(double lambda, double alpha, double mu) {
  const double top = 1.0 / alpha;
  const long n = static_cast<long>(std::ceil(top / 1e-4));
  double best = 0.0;
  for (long k = 0; k <= n; ++k) {
    const double gamma = std::min(top, static_cast<double>(k) * 1e-4);
    best = std::max(best, omega_at_gamma(lambda, gamma, alpha, mu));
  }
  return best;
}

struct Batch {
  std::vector<GameInstance> instances;
  std::vector<StackelbergOutcome> outcomes;
  VerificationReport report;
};

Batch& general_batch() {
  static Batch batch = [] {
    Batch b;
    BatchConfig c;
    c.count = 200;
    c.shape.max_nodes = 6;
    c.shape.max_links = 10;
    c.shape.mu_min = 0.3;
    c.shape.alpha = 0.5;
    b.report = verify_bounds(c);
    for (std::uint64_t seed = 0; seed < c.count; ++seed) {
      b.instances.push_back(random_instance(seed, c.shape));
      SolverConfig s;
      s.seed = seed;
      b.outcomes.push_back(play(b.instances.back(), s));
    }
    return b;
  }();
  return batch;
}

struct WardropTally {
  std::size_t checked = 0;
  double worst = 0.0;
  void add(const GameInstance& g, std::span<const double> leader, std::span<const double> human, bool converged) {
    if (!converged) return;
    ++checked;
    worst = std::max(worst, wardrop_gap(g, leader, human));
  }
};

WardropTally wardrop;

}  // namespace

int main() {
  const std::vector<double> alphas99 = [] {
    std::vector<double> v;
    for (int i = 1; i <= 99; ++i) v.push_back(i / 100.0);
    return v;
  }();

  criterion(1, "single-class recovery", 1, [&] {
    double worst = 0.0;
    for (double a : alphas99) worst = std::max(worst, std::abs(poa_bound(a, 1.0).bound - poa_bound_single_class(a)));
    return Verdict{worst <= 1e-12, "max diff " + fmt("%.3g", worst)};
  });

  criterion(2, "zero-autonomy limit", 1, [&] {
    double worst = 0.0;
    bool below = true;
    for (double mu : {0.3, 0.4, 0.5, 0.8, 1.0}) {
      const double selfish = poa_bound_selfish(mu);
      worst = std::max(worst, std::abs(poa_bound(1e-9, mu).bound - selfish));
      for (int i = 1; i <= 9; ++i) below = below && poa_bound(i / 10.0, mu).bound < selfish;
    }
    return Verdict{worst <= 1e-6 && below,
                   "max diff " + fmt("%.3g", worst) + (below ? ", strictly below" : ", NOT strictly below")};
  });

  criterion(3, "full-autonomy limit", 1, [&] {
    double worst = 0.0;
    for (double mu : {0.1, 1.0 / 3.0, 0.5, 1.0}) worst = std::max(worst, std::abs(poa_bound(1.0 - 1e-9, mu).bound - 1.0));
    return Verdict{worst <= 1e-6, "max diff " + fmt("%.3g", worst)};
  });

  criterion(4, "region structure", 5, [&] {
    std::size_t bad = 0;
    for (int j = 1; j <= 1000; ++j) {
      const double mu = j / 1000.0;
      for (int i = 1; i < 1000; ++i) {
        const Region r = classify_region(i / 1000.0, mu);
        if ((r == Region::A1 || r == Region::LambdaStar) && mu >= 0.5) ++bad;
        if (r == Region::A0 && mu > 0.25) ++bad;
        if (mu >= 0.5 && r != Region::LambdaPlus) ++bad;
      }
    }
    return Verdict{bad == 0, std::to_string(bad) + " misplaced grid points"};
  });

  criterion(5, "boundary continuity", 1, [&] {
    double worst = 0.0;
    for (double mu : {0.3, 1.0 / 3.0, 0.45}) {
      const AlphaThresholds t = alpha_thresholds(mu);
      for (double a : {t.alpha1.value, t.alpha2.value}) {
        if (!(a - 1e-9 > 0.0 && a + 1e-9 < 1.0)) continue;
        worst = std::max(worst, std::abs(poa_bound(a - 1e-9, mu).bound - poa_bound(a + 1e-9, mu).bound));
      }
    }
    const double mu = 1.0 / 3.0;
    const double a1 = alpha_thresholds(mu).alpha1.value;
    const double at_one = poa_at_one(a1, mu);
    const double at_star = poa_at_lambda_star(a1, mu);
    const bool value_ok = std::abs(at_one - 2.30278) <= 1e-4 && std::abs(at_star - 2.30278) <= 1e-4;
    return Verdict{worst <= 1e-6 && value_ok,
                   "max jump " + fmt("%.3g", worst) + ", value at alpha1(1/3) " + fmt("%.6f", at_one) + " / " +
                       fmt("%.6f", at_star)};
  });

  criterion(6, "lambda-approach consistency", 60, [&] {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    int done = 0;
    while (done < 100) {
      const double alpha = 0.01 + 0.98 * u(rng);
      const double mu = 0.01 + 0.99 * u(rng);
      const auto interval = feasible_lambda_interval(alpha, mu);
      if (!interval) continue;
      ++done;
      const double grid = grid_min_poa(alpha, mu, interval->lower);
      worst = std::max(worst, std::abs(grid - poa_bound(alpha, mu).bound));
    }
    return Verdict{worst <= 1e-5, "100 draws, max diff " + fmt("%.3g", worst)};
  });

  criterion(7, "omega maximizer", 30, [&] {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const double alpha = 0.05 + 0.9 * u(rng);
      const double mu = 0.01 + 0.99 * u(rng);
      const double lambda = 0.01 + 0.99 * u(rng);
      worst = std::max(worst, std::abs(omega(lambda, alpha, mu) - gamma_grid_sup(lambda, alpha, mu)));
    }
    return Verdict{worst <= 1e-3, "200 draws, max diff " + fmt("%.3g", worst)};
  });

  criterion(8, "beta-bound dominance", 120, [&] {
    const Batch& b = general_batch();
    std::size_t links = 0;
    std::size_t violations = 0;
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < b.outcomes.size(); ++i) {
      const StackelbergOutcome& r = b.outcomes[i];
      for (const LinkRatios& m : measure_links(r, b.instances[i])) {
        if (!m.gamma || !m.beta || !m.alpha_star) continue;
        ++links;
        const double exact = beta_bound(*m.gamma, r.alpha, m.mu, *m.alpha_star);
        const double relaxed = beta_bound_relaxed(*m.gamma, r.alpha, m.mu);
        worst = std::max({worst, *m.beta - exact, exact - relaxed});
        if (*m.beta > exact + 1e-8 || exact > relaxed + 1e-8) ++violations;
      }
    }
    return Verdict{violations == 0 && links > 0, std::to_string(links) + " links, " + std::to_string(violations) +
                                                     " violations, worst excess " + fmt("%.3g", worst)};
  });

  criterion(9, "bound dominance end-to-end", 300, [&] {
    const Batch& b = general_batch();
    std::size_t checked = 0;
    std::size_t bad = 0;
    for (const auto& e : b.report.entries) {
      if (!e.certified || !std::isfinite(e.poa_bound)) continue;
      ++checked;
      if (e.poa_emp < 1.0 - 1e-6 || e.poa_emp > e.poa_bound + 1e-6) ++bad;
    }
    for (std::size_t i = 0; i < b.outcomes.size(); ++i)
      wardrop.add(b.instances[i], b.outcomes[i].leader.link, b.outcomes[i].induced_flow.path_h,
                  b.outcomes[i].follower_converged);
    const auto& r = b.report;
    return Verdict{bad == 0 && r.failed == 0 && checked > 0,
                   std::to_string(checked) + " certified finite, " + std::to_string(bad) + " outside [1, bound]; pass " +
                       std::to_string(r.passed) + " fail " + std::to_string(r.failed) + " vacuous " +
                       std::to_string(r.vacuous) + " uncertified " + std::to_string(r.uncertified) + " error " +
                       std::to_string(r.errors) + ", min margin " + fmt("%.4g", r.min_margin)};
  });

  criterion(10, "oracle equivalence", 120, [&] {
    ShapeConfig shape;
    shape.kind = ShapeConfig::Kind::Parallel;
    shape.min_parallel_links = 2;
    shape.max_parallel_links = 3;
    const OracleConfig oc;
    double worst_opt = 0.0;
    double worst_nash = 0.0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const GameInstance g = random_instance(seed, shape);
      SolverConfig s;
      s.seed = seed;
      const EquilibriumResult opt = system_optimal(g, s);
      const OracleOptimum oracle = oracle_optimal(g, oc);
      for (std::size_t l = 0; l < g.link_count(); ++l) {
        worst_opt = std::max(worst_opt, std::abs(opt.flow.link_a[l] - oracle.flow.link_a[l]));
        worst_opt = std::max(worst_opt, std::abs(opt.flow.link_h[l] - oracle.flow.link_h[l]));
      }
      const StackelbergOutcome r = play(g, s);
      const EquilibriumResult fol = follower_equilibrium(g, r.leader.link, s);
      wardrop.add(g, r.leader.link, fol.flow.path_h, fol.converged);
      wardrop.add(g, r.leader.link, r.induced_flow.path_h, r.follower_converged);
      const OracleNash nash = oracle_nash(g, r.leader.link, oc);
      for (std::size_t l = 0; l < g.link_count(); ++l)
        worst_nash = std::max(worst_nash, std::abs(fol.flow.link_h[l] - nash.human_links[l]));
    }
    const StackelbergOutcome p = play(fixtures::pigou(0.5), SolverConfig{});
    const bool pigou_ok = std::abs(p.optimal_cost - 0.75) <= 2e-2 && std::abs(p.induced_cost - 0.8125) <= 2e-2 &&
                          std::abs(p.empirical_poa - 1.083) <= 2e-2;
    return Verdict{worst_opt <= 1e-3 && worst_nash <= 1e-3 && pigou_ok,
                   "max link diff optimum " + fmt("%.3g", worst_opt) + ", follower " + fmt("%.3g", worst_nash) +
                       "; Pigou " + fmt("%.4f", p.optimal_cost) + " / " + fmt("%.4f", p.induced_cost) + " / " +
                       fmt("%.4f", p.empirical_poa)};
  });

  criterion(11, "Wardrop certificate", 1, [&] {
    return Verdict{wardrop.checked > 0 && wardrop.worst <= 1e-8,
                   std::to_string(wardrop.checked) + " converged solves, worst gap " + fmt("%.3g", wardrop.worst)};
  });

  criterion(12, "figure reproduction", 5, [&] {
    CurveParams p;
    p.mus = {0.5, 0.7, 1.0};
    p.mus.insert(p.mus.end(), {0.05, 0.1, 0.15, 0.2, 0.25});
    const CurveTable table = curve_tables(CurveKind::PoaBounds, p);
    const std::string csv = to_csv(table);

    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    struct Series {
      std::vector<std::pair<double, double>> pts;
    };
    std::vector<std::pair<std::string, Series>> series;
    while (std::getline(in, line)) {
      const auto c1 = line.find(',');
      const auto c2 = line.find(',', c1 + 1);
      const std::string name = line.substr(0, c1);
      const double x = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
      const double y = std::stod(line.substr(c2 + 1));
      auto it = std::find_if(series.begin(), series.end(), [&](const auto& s) { return s.first == name; });
      if (it == series.end()) it = series.insert(series.end(), {name, Series{}});
      it->second.pts.emplace_back(x, y);
    }
    auto find = [&](const std::string& name) -> const Series* {
      for (const auto& s : series)
        if (s.first == name) return &s.second;
      return nullptr;
    };

    bool monotone = true;
    for (const char* name : {"mu=0.5", "mu=0.7", "mu=1"}) {
      const Series* s = find(name);
      if (!s) return Verdict{false, std::string("missing series ") + name};
      for (std::size_t i = 1; i < s->pts.size(); ++i) monotone = monotone && s->pts[i].second <= s->pts[i - 1].second;
    }
    double worst = 0.0;
    for (const CurvePoint& r : table.rows)
      if (r.series == "mu=1") worst = std::max(worst, std::abs(r.y - poa_bound_single_class(r.x)));

    bool diverge = true;
    double smallest = std::numeric_limits<double>::infinity();
    for (double mu : {0.05, 0.1, 0.15, 0.2, 0.25}) {
      const Series* s = find("mu=" + format_number(mu));
      if (!s) return Verdict{false, "missing series mu=" + format_number(mu)};
      const double target = alpha_thresholds(mu).alpha0.value + 1e-6;
      bool seen = false;
      for (const auto& [x, y] : s->pts) {
        if (std::abs(x - target) > 1e-11) continue;
        seen = true;
        smallest = std::min(smallest, y);
        diverge = diverge && y > 1e3 && std::isfinite(y);
      }
      diverge = diverge && seen;
    }
    return Verdict{monotone && worst <= 1e-12 && diverge,
                   std::string(monotone ? "monotone" : "NOT monotone") + ", mu=1 max diff " + fmt("%.3g", worst) +
                       ", smallest value at alpha0+1e-6 " + fmt("%.4g", smallest)};
  });

  std::printf("%s: %d criteria failed\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
