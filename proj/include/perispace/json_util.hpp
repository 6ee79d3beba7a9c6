#pragma once

// Typed field access over nlohmann::json with path-qualified ParseErrors.

#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"
#include "perispace/geometry.hpp"

namespace perispace::jsonutil {

// Parses text; syntax errors become ParseError("line L, column C: ...").
nlohmann::json parse_document(std::string_view text);

void expect_object(const nlohmann::json& j, const std::string& path);
const nlohmann::json& require(const nlohmann::json& j, const char* key, const std::string& path);

double read_number(const nlohmann::json& j, const char* key, const std::string& path);
double read_number(const nlohmann::json& j, const char* key, const std::string& path, double fallback);
long long read_integer(const nlohmann::json& j, const char* key, const std::string& path);
std::string read_string(const nlohmann::json& j, const char* key, const std::string& path);
bool read_bool(const nlohmann::json& j, const char* key, const std::string& path, bool fallback);
Vec3 to_vec3(const nlohmann::json& j, const std::string& path);
Vec3 read_vec3(const nlohmann::json& j, const char* key, const std::string& path);
Vec2 read_vec2(const nlohmann::json& j, const char* key, const std::string& path);
// Quaternion as [w, x, y, z]; normalized when within 1e-3 of unit length.
Quat read_quat(const nlohmann::json& j, const char* key, const std::string& path);
// {"position": [...], "orientation": [w, x, y, z]}; orientation optional.
Pose read_pose(const nlohmann::json& j, const std::string& path);

std::string join_path(const std::string& path, std::string_view key);

}  // namespace perispace::jsonutil
