// Copyright 2026 The Getup Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "getup/json_util.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "getup/error.h"

namespace getup {

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return Json::parse(buffer.str());
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what(), path.string());
  }
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("short write to " + path.string());
}

const Json& require(const Json& object, std::string_view key, const std::string& path) {
  if (!object.is_object()) throw ConfigError("expected an object", path);
  auto it = object.find(key);
  if (it == object.end()) throw ConfigError("missing field", path + "." + std::string(key));
  return *it;
}

double require_number(const Json& object, std::string_view key, const std::string& path) {
  const Json& value = require(object, key, path);
  if (!value.is_number()) throw ConfigError("expected a number", path + "." + std::string(key));
  return value.get<double>();
}

std::string require_string(const Json& object, std::string_view key, const std::string& path) {
  const Json& value = require(object, key, path);
  if (!value.is_string()) throw ConfigError("expected a string", path + "." + std::string(key));
  return value.get<std::string>();
}

void throw_config_type_error(const std::string& path, const std::string& what) {
  throw ConfigError(std::string("wrong type: ") + what, path);
}

uint64_t fnv1a64(std::string_view text) {
  uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

std::string hex64(uint64_t value) {
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(value));
  return buffer;
}

}  // namespace getup
