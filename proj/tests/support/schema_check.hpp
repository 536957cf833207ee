// Copyright 2026 The Rdgai Authors
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

#ifndef RDGAI_TESTS_SUPPORT_SCHEMA_CHECK_HPP_
#define RDGAI_TESTS_SUPPORT_SCHEMA_CHECK_HPP_

// Checks a JSON value against the subset of JSON Schema used by
// docs/api-schema.json: type, required, properties, items and local $ref.

#include <string>
#include <vector>

#include <json.hpp>

namespace rdgai::testing {

class SchemaChecker {
 public:
  explicit SchemaChecker(nlohmann::json root) : root_(std::move(root)) {}

  // Returns one message per violation; empty when `value` conforms.
  std::vector<std::string> check(const nlohmann::json& value, const std::string& def) const {
    std::vector<std::string> problems;
    walk(value, root_["$defs"][def], "$", problems);
    return problems;
  }

 private:
  static bool has_type(const nlohmann::json& v, const std::string& t) {
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "string") return v.is_string();
    if (t == "integer") return v.is_number_integer();
    if (t == "number") return v.is_number();
    if (t == "boolean") return v.is_boolean();
    if (t == "null") return v.is_null();
    return false;
  }

  void walk(const nlohmann::json& v, const nlohmann::json& schema, const std::string& at,
            std::vector<std::string>& problems) const {
    if (schema.contains("$ref")) {
      std::string ref = schema["$ref"];
      walk(v, root_["$defs"][ref.substr(ref.rfind('/') + 1)], at, problems);
      return;
    }
    if (schema.contains("type")) {
      std::vector<std::string> types;
      if (schema["type"].is_array()) {
        for (const auto& t : schema["type"]) types.push_back(t);
      } else {
        types.push_back(schema["type"]);
      }
      bool ok = false;
      for (const auto& t : types) ok = ok || has_type(v, t);
      if (!ok) {
        problems.push_back(at + ": expected " + schema["type"].dump());
        return;
      }
    }
    if (v.is_object()) {
      for (const auto& r : schema.value("required", nlohmann::json::array())) {
        if (!v.contains(r.get<std::string>())) problems.push_back(at + ": missing " + r.get<std::string>());
      }
      const auto props = schema.value("properties", nlohmann::json::object());
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!props.contains(it.key())) {
          problems.push_back(at + ": unexpected " + it.key());
          continue;
        }
        walk(it.value(), props[it.key()], at + "." + it.key(), problems);
      }
    }
    if (v.is_array() && schema.contains("items")) {
      for (std::size_t i = 0; i < v.size(); ++i) walk(v[i], schema["items"], at + "[" + std::to_string(i) + "]", problems);
    }
  }

  nlohmann::json root_;
};

}  // namespace rdgai::testing

#endif  // RDGAI_TESTS_SUPPORT_SCHEMA_CHECK_HPP_
