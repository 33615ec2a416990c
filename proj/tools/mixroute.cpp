#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mixroute/instance_io.hpp"
#include "mixroute/validation.hpp"

using namespace mixroute;

namespace {

enum Exit { kOk = 0, kInvalid = 1, kNotConverged = 2, kVerifyFailed = 3, kUsage = 64 };

struct Options {
  std::string instance;
  std::string out;
  std::string kind;
  std::string shape = "general";
  double alpha = -1.0;
  double mu = -1.0;
  double lambda = 0.9;
  double grid = 1e-3;
  double tol = 1e-8;
  std::size_t max_iter = 50000;
  std::size_t multistart = 16;
  std::uint64_t seed = 0;
  std::size_t count = 200;
  std::size_t jobs = 1;
  bool no_oracle = false;
};

std::string num(double x) { return format_number(x); }

SolverConfig solver_config(const Options& o) {
  SolverConfig c;
  c.relative_gap_tol = o.tol;
  c.max_iterations = o.max_iter;
  c.multistart_count = o.multistart;
  c.seed = o.seed;
  c.validate();
  return c;
}

GameInstance instance_for(const Options& o) {
  GameInstance g = load_instance(o.instance);
  if (o.alpha >= 0.0) g = g.with_uniform_alpha(o.alpha);
  return g;
}

void write_out(const Options& o, const std::string& content) {
  if (o.out.empty()) return;
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw Error(ErrorCode::BadInstance, "cannot write '" + o.out + "'");
  f << content;
}

std::string link_csv(const GameInstance& g, const ClassFlow& flow) {
  std::ostringstream os;
  os << "link,flow_a,flow_h,total,latency\n";
  for (std::size_t l = 0; l < g.link_count(); ++l) {
    os << g.links()[l].id << ',' << num(flow.link_a[l]) << ',' << num(flow.link_h[l]) << ','
       << num(flow.link_total(l)) << ',' << num(link_latency(g.links()[l], flow.link_a[l], flow.link_h[l])) << '\n';
  }
  return os.str();
}

void print_links(const GameInstance& g, const ClassFlow& flow) {
  for (std::size_t l = 0; l < g.link_count(); ++l)
    std::cout << "  " << g.links()[l].id << "  a=" << num(flow.link_a[l]) << "  h=" << num(flow.link_h[l])
              << "  total=" << num(flow.link_total(l)) << '\n';
}

int cmd_validate(const Options& o) {
  const GameInstance g = load_instance(o.instance);
  std::cout << "valid instance: " << g.nodes().size() << " nodes, " << g.link_count() << " links, "
            << g.pair_count() << " od pairs, " << g.path_count() << " paths\n";
  std::cout << "min asymmetry: " << num(min_asymmetry(g)) << '\n';
  std::cout << "autonomy fraction: " << num(network_autonomy_fraction(g)) << '\n';
  if (auto a = g.uniform_alpha()) std::cout << "uniform alpha: " << num(*a) << '\n';
  return kOk;
}

int cmd_solve_optimal(const Options& o) {
  const GameInstance g = instance_for(o);
  const EquilibriumResult r = system_optimal(g, solver_config(o));
  std::cout << "optimal cost: " << num(r.objective) << '\n';
  std::cout << "relative gap: " << num(r.relative_gap) << (r.converged ? "" : " (not converged)") << '\n';
  print_links(g, r.flow);
  write_out(o, link_csv(g, r.flow));
  return r.converged ? kOk : kNotConverged;
}

int cmd_solve_nash(const Options& o) {
  const GameInstance g = instance_for(o);
  const std::vector<double> leader(g.link_count(), 0.0);
  const EquilibriumResult r = follower_equilibrium(g, leader, solver_config(o));
  const double gap = wardrop_gap(g, leader, r.flow.path_h);
  std::cout << "equilibrium cost: " << num(social_cost(g, r.flow.link_a, r.flow.link_h)) << '\n';
  std::cout << "wardrop gap: " << num(gap) << (r.converged ? "" : " (not converged)") << '\n';
  print_links(g, r.flow);
  write_out(o, link_csv(g, r.flow));
  return r.converged ? kOk : kNotConverged;
}

int cmd_play(const Options& o) {
  const GameInstance g = instance_for(o);
  const StackelbergOutcome r = play(g, solver_config(o));
  std::cout << "alpha: " << num(r.alpha) << '\n';
  std::cout << "optimal cost: " << num(r.optimal_cost) << '\n';
  std::cout << "induced cost: " << num(r.induced_cost) << '\n';
  std::cout << "empirical poa: " << num(r.empirical_poa) << '\n';
  std::cout << "wardrop gap: " << num(r.wardrop_gap) << '\n';
  std::cout << "optimum certified: " << (r.optimum_certified ? "yes" : "no") << '\n';
  const double mu = min_asymmetry(g);
  const BoundResult b = poa_bound(r.alpha, mu);
  std::cout << "bound: " << num(b.bound) << " (region " << to_string(b.region) << ", mu " << num(mu) << ")\n";
  std::cout << "induced flow:\n";
  print_links(g, r.induced_flow);
  write_out(o, link_csv(g, r.induced_flow));
  return r.converged() ? kOk : kNotConverged;
}

int cmd_bound(const Options& o) {
  const BoundResult b = poa_bound(o.alpha, o.mu);
  std::cout << "region: " << to_string(b.region) << '\n';
  std::cout << "expression: " << to_string(b.expression) << '\n';
  std::cout << "bound: " << num(b.bound) << '\n';
  std::cout << "alpha0: " << num(b.thresholds.alpha0.value) << '\n';
  std::cout << "alpha1: " << num(b.thresholds.alpha1.value) << '\n';
  std::cout << "alpha1 (alternative form, not used): " << num(b.thresholds.alpha1_alternative.value) << '\n';
  std::cout << "alpha2: " << num(b.thresholds.alpha2.value) << '\n';
  std::cout << "lambda+: " << num(b.lambdas.plus) << '\n';
  std::cout << "lambda*: " << num(b.lambdas.star) << '\n';
  std::ostringstream os;
  os << "alpha,mu,region,bound\n"
     << num(b.alpha) << ',' << num(b.mu) << ',' << to_string(b.region) << ',' << num(b.bound) << '\n';
  write_out(o, os.str());
  return kOk;
}

int cmd_curves(const Options& o) {
  CurveParams p;
  if (o.alpha >= 0.0) p.alpha = o.alpha;
  if (o.mu >= 0.0) {
    p.mu = o.mu;
    p.mus = {o.mu};
  }
  p.lambda = o.lambda;
  p.step = o.grid;
  const std::string csv = to_csv(curve_tables(parse_curve_kind(o.kind), p));
  if (o.out.empty()) {
    std::cout << csv;
  } else {
    write_out(o, csv);
    std::cout << "wrote " << o.out << '\n';
  }
  return kOk;
}

int cmd_verify(const Options& o) {
  BatchConfig c;
  c.first_seed = o.seed;
  c.count = o.count;
  c.jobs = o.jobs;
  c.solver = solver_config(o);
  c.oracle_check = !o.no_oracle;
  if (o.alpha >= 0.0) c.shape.alpha = o.alpha;
  if (o.mu >= 0.0) c.shape.mu_min = o.mu;
  c.shape.kind = o.shape == "parallel" ? ShapeConfig::Kind::Parallel : ShapeConfig::Kind::General;
  const VerificationReport r = verify_bounds(c);
  std::cout << "instances: " << r.entries.size() << '\n';
  std::cout << "passed: " << r.passed << "  failed: " << r.failed << "  vacuous: " << r.vacuous
            << "  uncertified: " << r.uncertified << "  errors: " << r.errors << '\n';
  std::cout << "min margin: " << num(r.min_margin) << '\n';
  std::cout << "max wardrop gap: " << num(r.max_wardrop_gap) << '\n';
  for (const auto& e : r.entries) {
    if (e.status == VerifyStatus::Fail || e.status == VerifyStatus::Error)
      std::cout << "seed " << e.seed << ": " << to_string(e.status) << ": " << e.detail << '\n';
  }
  write_out(o, to_csv(r));
  return r.failed == 0 ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed-autonomy Stackelberg routing games and price-of-anarchy bounds"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  Options o;

  auto add_solver = [&](CLI::App* c) {
    c->add_option("--tol", o.tol, "relative gap tolerance")->check(CLI::PositiveNumber);
    c->add_option("--max-iter", o.max_iter, "iteration cap")->check(CLI::PositiveNumber);
    c->add_option("--multistart", o.multistart, "optimum restarts")->check(CLI::PositiveNumber);
    c->add_option("--seed", o.seed, "random seed");
  };
  auto add_instance = [&](CLI::App* c) { c->add_option("--instance", o.instance, "instance file")->required(); };
  auto add_out = [&](CLI::App* c) { c->add_option("--out", o.out, "output file"); };

  auto* validate = app.add_subcommand("validate", "check an instance file");
  add_instance(validate);

  auto* optimal = app.add_subcommand("solve-optimal", "system-optimal two-class flow");
  add_instance(optimal);
  optimal->add_option("--alpha", o.alpha, "override every alpha_w")->check(CLI::Range(0.0, 1.0));
  add_solver(optimal);
  add_out(optimal);

  auto* nash = app.add_subcommand("solve-nash", "human Wardrop flow without leader");
  add_instance(nash);
  nash->add_option("--alpha", o.alpha, "override every alpha_w")->check(CLI::Range(0.0, 1.0));
  add_solver(nash);
  add_out(nash);

  auto* playc = app.add_subcommand("play", "SCALE strategy and induced equilibrium");
  add_instance(playc);
  playc->add_option("--alpha", o.alpha, "override every alpha_w")->check(CLI::Range(0.0, 1.0));
  add_solver(playc);
  add_out(playc);

  auto* bound = app.add_subcommand("bound", "closed-form price-of-anarchy bound");
  bound->add_option("--alpha", o.alpha, "network autonomy fraction")->required();
  bound->add_option("--mu", o.mu, "minimum degree of asymmetry")->required();
  add_out(bound);

  auto* curves = app.add_subcommand("curves", "figure data as CSV");
  curves->add_option("--kind", o.kind, "omega-vs-gamma | omega-vs-lambda | constraint-sets | poa-bounds")
      ->required();
  curves->add_option("--alpha", o.alpha, "autonomy fraction");
  curves->add_option("--mu", o.mu, "degree of asymmetry (poa-bounds: a single family)");
  curves->add_option("--lambda", o.lambda, "lambda for omega-vs-gamma");
  curves->add_option("--grid", o.grid, "grid step");
  add_out(curves);

  auto* verify = app.add_subcommand("verify", "check the bound on random solved games");
  verify->add_option("--seed", o.seed, "first seed");
  verify->add_option("--count", o.count, "number of instances");
  verify->add_option("--alpha", o.alpha, "autonomy fraction")->check(CLI::Range(0.0, 1.0));
  verify->add_option("--mu", o.mu, "minimum degree of asymmetry");
  verify->add_option("--shape", o.shape, "general | parallel")->check(CLI::IsMember({"general", "parallel"}));
  verify->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
  verify->add_option("--tol", o.tol, "relative gap tolerance")->check(CLI::PositiveNumber);
  verify->add_option("--max-iter", o.max_iter, "iteration cap")->check(CLI::PositiveNumber);
  verify->add_flag("--no-oracle", o.no_oracle, "skip oracle certification");
  add_out(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*validate) return cmd_validate(o);
    if (*optimal) return cmd_solve_optimal(o);
    if (*nash) return cmd_solve_nash(o);
    if (*playc) return cmd_play(o);
    if (*bound) return cmd_bound(o);
    if (*curves) return cmd_curves(o);
    if (*verify) return cmd_verify(o);
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    if (e.code() == ErrorCode::BadKind) {
      std::cerr << curves->help();
      return kUsage;
    }
    return kInvalid;
  }
  return kUsage;
}
