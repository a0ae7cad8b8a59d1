#pragma once

#include "cpack/engine.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace cpack {

// exact scalars as canonical strings "(a+b*sqrt(d))/q", floats as numbers
nlohmann::json scalar_to_json(const Scalar& s);
Scalar scalar_from_json(const nlohmann::json& j, const std::string& field);

nlohmann::json circle_to_json(const Circle& c);
Circle circle_from_json(const nlohmann::json& j, const std::string& field);

nlohmann::json window_to_json(const Window& w);
Window window_from_json(const nlohmann::json& j, const std::string& field);

nlohmann::json config_json(const Configuration& c);
Configuration config_from_json_value(const nlohmann::json& j);

nlohmann::json packing_json(const Packing& p);
Packing packing_from_json_value(const nlohmann::json& j);

// serialized documents; parse and schema errors throw std::invalid_argument
// naming the offending field or the line of a syntax error
std::string to_json(const Configuration& c);
std::string to_json(const Packing& p);
Configuration config_from_json(const std::string& text);
Packing packing_from_json(const std::string& text);

}  // namespace cpack
