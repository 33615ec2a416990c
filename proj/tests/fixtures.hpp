#pragma once

#include <string>
#include <vector>

#include "mixroute/core_model.hpp"

namespace fixtures {

using mixroute::GameInstance;
using mixroute::InstanceSpec;
using mixroute::Link;

struct Coeffs {
  double a, h, b;
};

inline InstanceSpec parallel_spec(const std::vector<Coeffs>& links, double demand = 1.0, double alpha = 0.5) {
  InstanceSpec s;
  s.nodes = {"d", "o"};
  for (std::size_t i = 0; i < links.size(); ++i)
    s.links.push_back({"L" + std::to_string(i + 1), "o", "d", links[i].a, links[i].h, links[i].b});
  s.od_pairs.push_back({"o", "d", demand, alpha});
  return s;
}

inline GameInstance parallel(const std::vector<Coeffs>& links, double demand = 1.0, double alpha = 0.5) {
  return mixroute::validate_instance(parallel_spec(links, demand, alpha));
}

inline GameInstance pigou(double alpha = 0.5) { return parallel({{1.0, 1.0, 0.0}, {1e-3, 1e-3, 1.0}}, 1.0, alpha); }

/// Links 1->2, 1->3, 2->3, 2->4, 3->4 in that order.
inline InstanceSpec braess_spec(std::vector<double> b = {1, 1, 0, 1, 1}, double a = 1.0, double h = 1.0,
                                double alpha = 0.5) {
  InstanceSpec s;
  s.nodes = {"1", "2", "3", "4"};
  const char* ends[5][2] = {{"1", "2"}, {"1", "3"}, {"2", "3"}, {"2", "4"}, {"3", "4"}};
  for (int i = 0; i < 5; ++i)
    s.links.push_back({std::string("e") + ends[i][0] + ends[i][1], ends[i][0], ends[i][1], a, h, b[i]});
  s.od_pairs.push_back({"1", "4", 1.0, alpha});
  return s;
}

inline GameInstance braess(std::vector<double> b = {1, 1, 0, 1, 1}, double a = 1.0, double h = 1.0,
                           double alpha = 0.5) {
  return mixroute::validate_instance(braess_spec(std::move(b), a, h, alpha));
}

}  // namespace fixtures
