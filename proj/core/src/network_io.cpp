#include "forest/network_io.hpp"

#include <fstream>
#include <stdexcept>

namespace forest {

namespace {

const nlohmann::json& member(const nlohmann::json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw std::invalid_argument(std::string("missing field \"") + key + "\"");
  return *it;
}

}  // namespace

Network network_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("network must be an object");
  const auto& nodes = member(doc, "nodes");
  const auto& branches = member(doc, "branches");
  if (!nodes.is_array() || !branches.is_array())
    throw std::invalid_argument("\"nodes\" and \"branches\" must be arrays");

  std::vector<std::string> names;
  for (const auto& node : nodes) {
    if (!node.is_string()) throw std::invalid_argument("node ids must be strings");
    names.push_back(node.get<std::string>());
  }
  std::vector<BranchSpec> specs;
  for (const auto& b : branches) {
    if (!b.is_object()) throw std::invalid_argument("branch must be an object");
    const auto& u = member(b, "u");
    const auto& v = member(b, "v");
    const auto& g = member(b, "g");
    if (!u.is_string() || !v.is_string())
      throw std::invalid_argument("branch endpoints must be strings");
    if (!g.is_number()) throw std::invalid_argument("branch \"g\" must be a number");
    specs.push_back(BranchSpec{u.get<std::string>(), v.get<std::string>(),
                               g.get<double>()});
  }
  return Network::build(std::move(names), specs);
}

nlohmann::json network_to_json(const Network& net) {
  nlohmann::json doc;
  doc["nodes"] = net.node_names();
  doc["branches"] = nlohmann::json::array();
  for (const Branch& b : net.branches())
    doc["branches"].push_back(
        {{"u", net.name(b.u)}, {"v", net.name(b.v)}, {"g", b.g}});
  return doc;
}

Network load_network(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
  return network_from_json(doc);
}

}  // namespace forest
