/* Copyright (C) 2026 pajscc contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef PAJSCC_TESTS_MINISCHEMA_HPP
#define PAJSCC_TESTS_MINISCHEMA_HPP

// Test-support interpreter for the subset of JSON Schema that
// docs/summary.schema.json uses: type, required, properties,
// additionalProperties (false or a schema), items, minItems, minProperties.
// Any other validation keyword is reported as a problem, so the published
// schema cannot grow constraints this checker silently skips.

#include <string>
#include <vector>

#include <json.hpp>

namespace minischema {

inline bool type_matches(const std::string& type, const nlohmann::json& value) {
    if (type == "object") return value.is_object();
    if (type == "array") return value.is_array();
    if (type == "string") return value.is_string();
    if (type == "boolean") return value.is_boolean();
    if (type == "integer") return value.is_number_integer() || value.is_number_unsigned();
    if (type == "number") return value.is_number();
    if (type == "null") return value.is_null();
    return false;
}

inline void check(const nlohmann::json& schema, const nlohmann::json& value,
                  const std::string& where, std::vector<std::string>& problems) {
    static const char* kAnnotations[] = {"$schema", "title", "description"};
    static const char* kSupported[] = {"type",  "required", "properties", "additionalProperties",
                                       "items", "minItems", "minProperties"};
    for (const auto& [key, body] : schema.items()) {
        (void)body;
        bool known = false;
        for (const char* a : kAnnotations) known = known || key == a;
        for (const char* s : kSupported) known = known || key == s;
        if (!known) problems.push_back(where + ": unsupported schema keyword '" + key + "'");
    }

    if (schema.contains("type")) {
        const std::string type = schema["type"].get<std::string>();
        if (!type_matches(type, value)) {
            problems.push_back(where + ": expected " + type + ", got " +
                               std::string(value.type_name()));
            return; // structural keywords below assume the right shape
        }
    }

    if (schema.contains("required")) {
        for (const auto& name : schema["required"]) {
            if (!value.contains(name.get<std::string>())) {
                problems.push_back(where + ": missing required key '" +
                                   name.get<std::string>() + "'");
            }
        }
    }

    const auto* props = schema.contains("properties") ? &schema["properties"] : nullptr;
    if (value.is_object()) {
        if (schema.contains("minProperties") &&
            value.size() < schema["minProperties"].get<std::size_t>()) {
            problems.push_back(where + ": fewer than minProperties entries");
        }
        for (const auto& [key, member] : value.items()) {
            if (props != nullptr && props->contains(key)) {
                check((*props)[key], member, where + "." + key, problems);
            } else if (schema.contains("additionalProperties")) {
                const auto& extra = schema["additionalProperties"];
                if (extra.is_boolean() && !extra.get<bool>()) {
                    problems.push_back(where + ": unexpected key '" + key + "'");
                } else if (extra.is_object()) {
                    check(extra, member, where + "." + key, problems);
                }
            }
        }
    }

    if (value.is_array()) {
        if (schema.contains("minItems") && value.size() < schema["minItems"].get<std::size_t>()) {
            problems.push_back(where + ": fewer than minItems elements");
        }
        if (schema.contains("items")) {
            for (std::size_t i = 0; i < value.size(); ++i) {
                check(schema["items"], value[i], where + "[" + std::to_string(i) + "]", problems);
            }
        }
    }
}

inline std::vector<std::string> validate(const nlohmann::json& schema,
                                         const nlohmann::json& value) {
    std::vector<std::string> problems;
    check(schema, value, "$", problems);
    return problems;
}

} // namespace minischema

#endif // PAJSCC_TESTS_MINISCHEMA_HPP
