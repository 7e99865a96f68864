#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "forest/network.hpp"

namespace forest {

// {"nodes": ["<id>", ...], "branches": [{"u": "<id>", "v": "<id>", "g": <number>}, ...]}
// Branch order in the document is branch id order.

/// Schema violations throw std::invalid_argument; network validation failures
/// throw forest::Error.
Network network_from_json(const nlohmann::json& doc);
nlohmann::json network_to_json(const Network& net);

Network load_network(const std::filesystem::path& path);

}  // namespace forest
