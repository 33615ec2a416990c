#include "mixroute/instance_io.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

namespace mixroute {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::BadInstance, what); }

void require_fields(const json& j, const std::string& where, std::initializer_list<const char*> required,
                    std::initializer_list<const char*> optional = {}) {
  if (!j.is_object()) bad(where + " must be an object");
  for (const char* key : required) {
    if (!j.contains(key)) bad(where + " is missing field '" + key + "'");
  }
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* key : required) known = known || item.key() == key;
    for (const char* key : optional) known = known || item.key() == key;
    if (!known) bad(where + " has unknown field '" + item.key() + "'");
  }
}

std::string text(const json& j, const std::string& where) {
  if (!j.is_string()) bad(where + " must be a string");
  return j.get<std::string>();
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) bad(where + " must be a number");
  return j.get<double>();
}

const json& list(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_array()) bad(std::string("'") + key + "' must be a list");
  return v;
}

}  // namespace

InstanceSpec parse_instance(std::istream& in) {
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    bad(std::string("malformed instance: ") + e.what());
  }
  require_fields(root, "instance", {"nodes", "links", "od_pairs"}, {"path_cap"});

  InstanceSpec spec;
  for (const auto& n : list(root, "nodes")) spec.nodes.push_back(text(n, "node"));

  std::size_t i = 0;
  for (const auto& l : list(root, "links")) {
    const std::string where = "links[" + std::to_string(i++) + "]";
    require_fields(l, where, {"id", "tail", "head", "a", "h", "b"});
    spec.links.push_back({text(l["id"], where + ".id"), text(l["tail"], where + ".tail"),
                          text(l["head"], where + ".head"), number(l["a"], where + ".a"),
                          number(l["h"], where + ".h"), number(l["b"], where + ".b")});
  }

  i = 0;
  for (const auto& w : list(root, "od_pairs")) {
    const std::string where = "od_pairs[" + std::to_string(i++) + "]";
    require_fields(w, where, {"origin", "destination", "demand", "alpha"});
    spec.od_pairs.push_back({text(w["origin"], where + ".origin"), text(w["destination"], where + ".destination"),
                             number(w["demand"], where + ".demand"), number(w["alpha"], where + ".alpha")});
  }

  if (root.contains("path_cap")) {
    const json& cap = root["path_cap"];
    if (!cap.is_number_integer() || cap.get<long long>() < 1) bad("path_cap must be a positive integer");
    spec.path_cap = cap.get<std::size_t>();
  }
  return spec;
}

InstanceSpec parse_instance(const std::string& text) {
  std::istringstream in(text);
  return parse_instance(in);
}

GameInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open '" + path + "'");
  return validate_instance(parse_instance(in));
}

std::string dump_instance(const InstanceSpec& spec) {
  json root;
  root["nodes"] = spec.nodes;
  root["links"] = json::array();
  for (const Link& l : spec.links)
    root["links"].push_back({{"id", l.id}, {"tail", l.tail}, {"head", l.head}, {"a", l.a}, {"h", l.h}, {"b", l.b}});
  root["od_pairs"] = json::array();
  for (const OdPair& w : spec.od_pairs)
    root["od_pairs"].push_back(
        {{"origin", w.origin}, {"destination", w.destination}, {"demand", w.demand}, {"alpha", w.alpha}});
  if (spec.path_cap != kDefaultPathCap) root["path_cap"] = spec.path_cap;
  return root.dump(2) + "\n";
}

}  // namespace mixroute
