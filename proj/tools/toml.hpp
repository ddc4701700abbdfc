/*
   Copyright 2026 The omegatr Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

// Reader for the TOML subset used by workspace files: [dotted.headers],
// key = value with strings, integers, booleans, arrays and inline tables.

#ifndef OMEGATR_TOOLS_TOML_HPP
#define OMEGATR_TOOLS_TOML_HPP

#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace omegatr::toml {

struct Value;
using Array = std::vector<Value>;
using Table = std::vector<std::pair<std::string, Value>>;

struct Value {
    std::variant<std::string, long, bool, Array, std::shared_ptr<Table>> data;
    int line = 0;

    bool is_string() const { return std::holds_alternative<std::string>(data); }
    bool is_integer() const { return std::holds_alternative<long>(data); }
    bool is_bool() const { return std::holds_alternative<bool>(data); }
    bool is_array() const { return std::holds_alternative<Array>(data); }
    bool is_table() const { return std::holds_alternative<std::shared_ptr<Table>>(data); }

    // Accessors raise ParseError naming the line on a type mismatch.
    const std::string& as_string() const;
    long as_integer() const;
    bool as_bool() const;
    const Array& as_array() const;
    const Table& as_table() const;
};

/// Value under `key` in a table, or nullptr.
const Value* find(const Table& table, const std::string& key);
/// Value under `key`; ParseError mentioning `where` when missing.
const Value& require(const Table& table, const std::string& key, const std::string& where);

/// Parses a document; the root table holds nested tables for headers.
Table parse(const std::string& text);

}  // namespace omegatr::toml

#endif
