#pragma once

#include <json.hpp>

#include "sumform/maps.hpp"

namespace sumform {

// Shared between maps.cpp and families.cpp so bundle serialization reuses the
// function-spec schema without exposing nlohmann types in public headers.
IntervalFunction function_from_json_node(const nlohmann::ordered_json& j, const std::string& path);
nlohmann::ordered_json function_to_json_node(const IntervalFunction& f);

} // namespace sumform
