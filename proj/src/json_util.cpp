#include "perispace/json_util.hpp"

#include <cmath>

#include "perispace/error.hpp"

namespace perispace::jsonutil {

using json = nlohmann::json;

std::string join_path(const std::string& path, std::string_view key) {
  if (path.empty()) return std::string(key);
  return path + "." + std::string(key);
}

json parse_document(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + e.what());
  }
}

void expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ParseError((path.empty() ? std::string("document") : path) + ": expected an object");
}

const json& require(const json& j, const char* key, const std::string& path) {
  expect_object(j, path);
  const auto it = j.find(key);
  if (it == j.end()) throw ParseError(join_path(path, key) + ": missing required field");
  return *it;
}

double read_number(const json& j, const char* key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_number()) throw ParseError(join_path(path, key) + ": expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ParseError(join_path(path, key) + ": expected a finite number");
  return d;
}

double read_number(const json& j, const char* key, const std::string& path, double fallback) {
  if (!j.contains(key)) return fallback;
  return read_number(j, key, path);
}

long long read_integer(const json& j, const char* key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_number_integer()) throw ParseError(join_path(path, key) + ": expected an integer");
  return v.get<long long>();
}

std::string read_string(const json& j, const char* key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_string()) throw ParseError(join_path(path, key) + ": expected a string");
  return v.get<std::string>();
}

bool read_bool(const json& j, const char* key, const std::string& path, bool fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_boolean()) throw ParseError(join_path(path, key) + ": expected true or false");
  return v.get<bool>();
}

Vec3 to_vec3(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 3) throw ParseError(path + ": expected an array of 3 numbers");
  Vec3 out;
  for (int i = 0; i < 3; ++i) {
    if (!v[i].is_number()) throw ParseError(path + ": expected an array of 3 numbers");
    out[i] = v[i].get<double>();
  }
  return out;
}

Vec3 read_vec3(const json& j, const char* key, const std::string& path) {
  return to_vec3(require(j, key, path), join_path(path, key));
}

Vec2 read_vec2(const json& j, const char* key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw ParseError(join_path(path, key) + ": expected an array of 2 numbers");
  return {v[0].get<double>(), v[1].get<double>()};
}

Quat read_quat(const json& j, const char* key, const std::string& path) {
  const json& v = require(j, key, path);
  const std::string here = join_path(path, key);
  if (!v.is_array() || v.size() != 4) throw ParseError(here + ": expected [w, x, y, z]");
  double c[4];
  for (int i = 0; i < 4; ++i) {
    if (!v[i].is_number()) throw ParseError(here + ": expected [w, x, y, z]");
    c[i] = v[i].get<double>();
  }
  Quat q(c[0], c[1], c[2], c[3]);
  if (std::abs(q.norm() - 1.0) > 1e-3) throw ConfigError(here + ": quaternion is not unit length");
  q.normalize();
  return q;
}

Pose read_pose(const json& j, const std::string& path) {
  expect_object(j, path);
  Pose p;
  p.position = read_vec3(j, "position", path);
  if (j.contains("orientation")) p.orientation = read_quat(j, "orientation", path);
  return p;
}

}  // namespace perispace::jsonutil
