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

#ifndef GETUP_JSON_UTIL_H_
#define GETUP_JSON_UTIL_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"

namespace getup {

using Json = nlohmann::json;

// Parses a JSON document from disk. Missing file -> IoError; malformed -> ConfigError.
Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

// Field access with error paths of the form "joints[3].torque_limit".
const Json& require(const Json& object, std::string_view key, const std::string& path);
double require_number(const Json& object, std::string_view key, const std::string& path);
std::string require_string(const Json& object, std::string_view key, const std::string& path);

[[noreturn]] void throw_config_type_error(const std::string& path, const std::string& what);

// Overwrites `target` when `object` has `key`; type mismatch -> ConfigError.
template <typename T>
void read_optional(const Json& object, std::string_view key, const std::string& path, T& target) {
  auto it = object.find(key);
  if (it == object.end()) return;
  try {
    target = it->template get<T>();
  } catch (const Json::exception& e) {
    throw_config_type_error(path + "." + std::string(key), e.what());
  }
}

// 64-bit FNV-1a over the bytes of `text`.
uint64_t fnv1a64(std::string_view text);
std::string hex64(uint64_t value);

}  // namespace getup

#endif  // GETUP_JSON_UTIL_H_
