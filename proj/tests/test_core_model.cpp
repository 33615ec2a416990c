#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "mixroute/core_model.hpp"

using namespace mixroute;
using fixtures::braess;
using fixtures::parallel;
using fixtures::parallel_spec;

namespace {

ErrorCode code_of(const InstanceSpec& spec) {
  try {
    validate_instance(spec);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("instance unexpectedly valid");
  return ErrorCode::BadInstance;
}

std::vector<std::string> nodes_of(const Path& p) { return p.nodes; }

}  // namespace

TEST_CASE("validate rejects bad coefficients, demands and topology") {
  CHECK(code_of(parallel_spec({{1.2, 1.0, 0.0}})) == ErrorCode::AsymmetryOutOfRange);
  CHECK(code_of(parallel_spec({{0.0, 1.0, 0.0}})) == ErrorCode::NonPositiveSlope);
  CHECK(code_of(parallel_spec({{0.5, -1.0, 0.0}})) == ErrorCode::NonPositiveSlope);
  CHECK(code_of(parallel_spec({{0.5, 1.0, -0.1}})) == ErrorCode::NegativeFreeFlow);
  CHECK(code_of(parallel_spec({{0.5, 1.0, 0.0}}, 0.0)) == ErrorCode::NonPositiveDemand);
  CHECK(code_of(parallel_spec({{0.5, 1.0, 0.0}}, 1.0, 1.5)) == ErrorCode::BadAlpha);
  CHECK(code_of(parallel_spec({{0.5, 1.0, 0.0}}, 1.0, -0.1)) == ErrorCode::BadAlpha);

  InstanceSpec unreachable = parallel_spec({{0.5, 1.0, 0.0}});
  unreachable.od_pairs[0] = {"d", "o", 1.0, 0.5};
  CHECK(code_of(unreachable) == ErrorCode::NoPath);

  InstanceSpec loop = parallel_spec({{0.5, 1.0, 0.0}});
  loop.links.push_back({"self", "o", "o", 1.0, 1.0, 0.0});
  CHECK(code_of(loop) == ErrorCode::BadInstance);

  InstanceSpec undeclared = parallel_spec({{0.5, 1.0, 0.0}});
  undeclared.links[0].head = "x";
  CHECK(code_of(undeclared) == ErrorCode::BadInstance);
}

TEST_CASE("b = 0 and mu = 1 are accepted") {
  const GameInstance g = parallel({{1.0, 1.0, 0.0}});
  CHECK(g.link_count() == 1);
  CHECK(g.path_count() == 1);
}

TEST_CASE("Braess topology has three paths in lexicographic node order") {
  const GameInstance g = braess();
  REQUIRE(g.path_count() == 3);
  CHECK(nodes_of(g.paths()[0]) == std::vector<std::string>{"1", "2", "3", "4"});
  CHECK(nodes_of(g.paths()[1]) == std::vector<std::string>{"1", "2", "4"});
  CHECK(nodes_of(g.paths()[2]) == std::vector<std::string>{"1", "3", "4"});
  for (const Path& p : g.paths().all()) {
    CHECK(p.nodes.front() == "1");
    CHECK(p.nodes.back() == "4");
    CHECK(p.links.size() + 1 == p.nodes.size());
  }
}

TEST_CASE("two parallel links give two paths ordered by link id") {
  const GameInstance g = parallel({{1, 1, 0}, {1, 1, 1}});
  REQUIRE(g.path_count() == 2);
  CHECK(g.paths()[0].links == std::vector<std::size_t>{0});
  CHECK(g.paths()[1].links == std::vector<std::size_t>{1});
}

TEST_CASE("complete digraph on 8 nodes overflows a cap of 100") {
  InstanceSpec s;
  for (int i = 0; i < 8; ++i) s.nodes.push_back("n" + std::to_string(i));
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      if (i != j) s.links.push_back({"e" + std::to_string(i) + std::to_string(j), s.nodes[i], s.nodes[j], 1, 1, 0});
  s.od_pairs.push_back({"n0", "n7", 1.0, 0.5});
  try {
    enumerate_paths(s, 100);
    FAIL("expected PathExplosion");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PathExplosion);
  }
  s.path_cap = 100;
  CHECK(code_of(s) == ErrorCode::PathExplosion);
}

TEST_CASE("link latency") {
  CHECK(link_latency({"l", "o", "d", 1, 1, 0}, 0.5, 0.5) == doctest::Approx(1.0));
  CHECK(link_latency({"l", "o", "d", 0.5, 1, 2}, 0, 0) == doctest::Approx(2.0));
  CHECK(link_latency({"l", "o", "d", 0.5, 1, 2}, 2, 1) == doctest::Approx(4.0));
  CHECK_THROWS_AS(link_latency({"l", "o", "d", 1, 1, 0}, -1.0, 0.0), Error);
}

TEST_CASE("path latency") {
  const GameInstance g = braess({1, 1, 0, 1, 1});
  const std::vector<double> fa{0.1, 0.2, 0.3, 0.4, 0.5};
  const std::vector<double> fh{0.5, 0.4, 0.3, 0.2, 0.1};
  const auto e = link_latencies(g, fa, fh);
  CHECK(path_latency(g, 0, fa, fh) == doctest::Approx(e[0] + e[2] + e[4]));
  const std::vector<double> zero(5, 0.0);
  CHECK(path_latency(g, 0, zero, zero) == doctest::Approx(2.0));
  CHECK(path_latency(g, 1, zero, zero) == doctest::Approx(2.0));

  const GameInstance single = parallel({{0.5, 1, 2}});
  const std::vector<double> a{2.0}, h{1.0};
  CHECK(path_latency(single, 0, a, h) == doctest::Approx(4.0));
  CHECK_THROWS_AS(path_latency(single, 5, a, h), Error);
}

TEST_CASE("social cost") {
  const GameInstance one = parallel({{1, 1, 0}});
  CHECK(social_cost(one, ClassFlow::zero(one)) == 0.0);
  const ClassFlow half = ClassFlow::from_paths(one, {0.5}, {0.5});
  CHECK(social_cost(one, half) == doctest::Approx(1.0));
}

TEST_CASE("feasibility report") {
  const GameInstance g = parallel({{1, 1, 0}, {1, 1, 0}});
  const FeasibilityReport zero = check_feasibility(g, ClassFlow::zero(g));
  CHECK_FALSE(zero.feasible);
  CHECK(zero.residuals[0].autonomous == doctest::Approx(-0.5));
  CHECK(zero.residuals[0].human == doctest::Approx(-0.5));
  const FeasibilityReport split = check_feasibility(g, ClassFlow::from_paths(g, {0.25, 0.25}, {0.25, 0.25}));
  CHECK(split.feasible);
  CHECK_THROWS_AS(ClassFlow::from_paths(g, {-0.1, 0.6}, {0.25, 0.25}), Error);
  CHECK_THROWS_AS(ClassFlow::from_paths(g, {0.5}, {0.25, 0.25}), Error);
}

TEST_CASE("minimum asymmetry") {
  CHECK(min_asymmetry(parallel({{0.5, 1, 0}, {0.8, 1, 0}, {1, 1, 0}})) == doctest::Approx(0.5));
  CHECK(min_asymmetry(parallel({{2, 2, 0}, {3, 3, 0}})) == 1.0);
  CHECK(min_asymmetry(parallel({{0.3, 0.9, 0}})) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("network autonomy fraction") {
  CHECK(network_autonomy_fraction(parallel({{1, 1, 0}}, 1.0, 0.4)) == doctest::Approx(0.4));

  InstanceSpec s = fixtures::braess_spec();
  s.od_pairs = {{"1", "4", 1.0, 0.0}, {"2", "4", 1.0, 1.0}};
  CHECK(network_autonomy_fraction(validate_instance(s)) == doctest::Approx(0.5));
  s.od_pairs = {{"1", "4", 3.0, 1.0}, {"2", "4", 1.0, 0.0}};
  CHECK(network_autonomy_fraction(validate_instance(s)) == doctest::Approx(0.75));
}

TEST_CASE("stackelberg feasibility") {
  const GameInstance g = parallel({{1, 1, 0}, {1, 1, 1}});
  const std::vector<double> zero{0.0, 0.0};
  CHECK_FALSE(is_stackelberg_feasible(g, zero).feasible);
  const std::vector<double> ok{0.3, 0.2};
  CHECK(is_stackelberg_feasible(g, ok).feasible);
  CHECK(is_stackelberg_feasible(g, ok).weak);

  InstanceSpec s = fixtures::braess_spec();
  s.od_pairs = {{"1", "4", 1.0, 0.5}, {"2", "4", 1.0, 0.5}};
  const GameInstance two = validate_instance(s);
  std::vector<double> leader(two.path_count(), 0.0);
  leader[two.paths().of_pair(0)[0]] = 1.0;
  const LeaderFeasibility f = is_stackelberg_feasible(two, leader);
  CHECK(f.feasible);
  CHECK_FALSE(f.weak);
}

TEST_CASE("opt restriction") {
  const GameInstance g = parallel({{1, 1, 0}, {1, 1, 1}});
  const ClassFlow opt = ClassFlow::from_paths(g, {0.3, 0.2}, {0.3, 0.2});
  CHECK(is_opt_restricted(g, std::vector<double>{0.0, 0.0}, opt));
  CHECK(is_opt_restricted(g, std::vector<double>{0.3, 0.2}, opt));
  CHECK_FALSE(is_opt_restricted(g, std::vector<double>{1.2, 0.0}, opt));
}

TEST_CASE("property: link aggregation equals incidence product") {
  const GameInstance g = braess();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> pf(g.path_count());
    for (double& x : pf) x = u(rng);
    const auto links = aggregate_links(g, pf);
    for (std::size_t l = 0; l < g.link_count(); ++l) {
      double expect = 0.0;
      for (std::size_t p = 0; p < g.path_count(); ++p) {
        for (std::size_t k : g.paths()[p].links) {
          if (k == l) expect += pf[p];
        }
      }
      CHECK(std::abs(links[l] - expect) <= kAggregationTol);
    }
  }
}

TEST_CASE("property: social cost is nonnegative and grows under scaling") {
  const GameInstance g = braess({1, 0.5, 0, 2, 0.3}, 0.4, 1.2);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_real_distribution<double> k(1.0, 4.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> pa(g.path_count()), ph(g.path_count());
    for (double& x : pa) x = u(rng);
    for (double& x : ph) x = u(rng);
    const double base = social_cost(g, ClassFlow::from_paths(g, pa, ph));
    const double s = k(rng);
    for (double& x : pa) x *= s;
    for (double& x : ph) x *= s;
    const double scaled = social_cost(g, ClassFlow::from_paths(g, pa, ph));
    CHECK(base >= 0.0);
    CHECK(scaled >= base);
  }
}

TEST_CASE("property: latency of a concatenation is the sum of its segments") {
  const GameInstance g = braess({1, 2, 0.5, 1.5, 1});
  const std::vector<double> fa{0.3, 0.1, 0.7, 0.2, 0.4};
  const std::vector<double> fh{0.1, 0.6, 0.2, 0.9, 0.3};
  const Path& p = g.paths()[0];
  for (std::size_t cut = 0; cut <= p.links.size(); ++cut) {
    const std::span<const std::size_t> all(p.links);
    const double head = route_latency(g, all.first(cut), fa, fh);
    const double tail = route_latency(g, all.subspan(cut), fa, fh);
    CHECK(head + tail == doctest::Approx(path_latency(g, 0, fa, fh)).epsilon(1e-14));
  }
}

TEST_CASE("property: minimum asymmetry bounds every link and enumeration is deterministic") {
  const GameInstance g = braess({1, 1, 0, 1, 1}, 0.7, 1.0);
  for (const Link& l : g.links()) CHECK(min_asymmetry(g) <= l.asymmetry());
  const PathSet again = enumerate_paths(fixtures::braess_spec({1, 1, 0, 1, 1}, 0.7, 1.0), kDefaultPathCap);
  REQUIRE(again.size() == g.path_count());
  for (std::size_t p = 0; p < again.size(); ++p) CHECK(again[p].links == g.paths()[p].links);
}
