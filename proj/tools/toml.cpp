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

#include "toml.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "omegatr/error.hpp"

namespace omegatr::toml {

namespace {

[[noreturn]] void fail(int line, const std::string& message) {
    raise(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + message);
}

const char* type_name(const Value& v) {
    if (v.is_string()) return "string";
    if (v.is_integer()) return "integer";
    if (v.is_bool()) return "boolean";
    if (v.is_array()) return "array";
    return "table";
}

class Parser {
public:
    explicit Parser(const std::string& text) : s_(text) {}

    Table document() {
        Table root;
        Table* current = &root;
        for (;;) {
            skip_blank_lines();
            if (at_end()) break;
            if (peek() == '[') {
                ++pos_;
                std::vector<std::string> path = dotted_key();
                skip_spaces();
                expect(']');
                current = &open_table(root, path);
                end_of_line();
            } else {
                std::vector<std::string> path = dotted_key();
                skip_spaces();
                expect('=');
                skip_spaces();
                Value v = value();
                Table* t = current;
                for (std::size_t i = 0; i + 1 < path.size(); ++i) t = &open_table(*t, {path[i]}, true);
                insert(*t, path.back(), std::move(v));
                end_of_line();
            }
        }
        return root;
    }

private:
    bool at_end() const { return pos_ >= s_.size(); }
    char peek() const { return at_end() ? '\0' : s_[pos_]; }

    void advance() {
        if (peek() == '\n') ++line_;
        ++pos_;
    }

    void skip_spaces() {
        while (peek() == ' ' || peek() == '\t' || peek() == '\r') ++pos_;
    }

    void skip_comment() {
        if (peek() == '#')
            while (!at_end() && peek() != '\n') ++pos_;
    }

    void skip_blank_lines() {
        for (;;) {
            skip_spaces();
            skip_comment();
            if (peek() != '\n') return;
            advance();
        }
    }

    // Whitespace, comments and newlines inside arrays.
    void skip_all() {
        for (;;) {
            skip_spaces();
            skip_comment();
            if (peek() != '\n') return;
            advance();
        }
    }

    void expect(char c) {
        if (peek() != c) fail(line_, std::string("expected '") + c + "'");
        advance();
    }

    void end_of_line() {
        skip_spaces();
        skip_comment();
        if (at_end()) return;
        if (peek() != '\n') fail(line_, std::string("unexpected '") + peek() + "' after value");
        advance();
    }

    std::string key() {
        if (peek() == '"') return basic_string();
        std::string k;
        while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-') k += s_[pos_++];
        if (k.empty()) fail(line_, "expected a key");
        return k;
    }

    std::vector<std::string> dotted_key() {
        std::vector<std::string> parts{key()};
        for (;;) {
            skip_spaces();
            if (peek() != '.') return parts;
            ++pos_;
            skip_spaces();
            parts.push_back(key());
        }
    }

    std::string basic_string() {
        expect('"');
        std::string out;
        for (;;) {
            if (at_end() || peek() == '\n') fail(line_, "unterminated string");
            char c = s_[pos_++];
            if (c == '"') return out;
            if (c == '\\') {
                char e = peek();
                ++pos_;
                switch (e) {
                    case 'n': out += '\n'; break;
                    case 't': out += '\t'; break;
                    case '"': out += '"'; break;
                    case '\\': out += '\\'; break;
                    default: fail(line_, std::string("unknown escape \\") + e);
                }
            } else {
                out += c;
            }
        }
    }

    Value value() {
        Value v;
        v.line = line_;
        char c = peek();
        if (c == '"') {
            v.data = basic_string();
        } else if (c == '[') {
            advance();
            Array a;
            skip_all();
            while (peek() != ']') {
                a.push_back(value());
                skip_all();
                if (peek() == ',') {
                    advance();
                    skip_all();
                } else if (peek() != ']') {
                    fail(line_, "expected ',' or ']' in array");
                }
            }
            advance();
            v.data = std::move(a);
        } else if (c == '{') {
            advance();
            auto t = std::make_shared<Table>();
            skip_spaces();
            while (peek() != '}') {
                std::vector<std::string> path = dotted_key();
                if (path.size() != 1) fail(line_, "dotted keys are not supported in inline tables");
                skip_spaces();
                expect('=');
                skip_spaces();
                insert(*t, path[0], value());
                skip_spaces();
                if (peek() == ',') {
                    ++pos_;
                    skip_spaces();
                } else if (peek() != '}') {
                    fail(line_, "expected ',' or '}' in inline table");
                }
            }
            advance();
            v.data = std::move(t);
        } else if (s_.compare(pos_, 4, "true") == 0) {
            pos_ += 4;
            v.data = true;
        } else if (s_.compare(pos_, 5, "false") == 0) {
            pos_ += 5;
            v.data = false;
        } else if (c == '-' || c == '+' || std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            if (c == '-' || c == '+') ++pos_;
            while (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '_') ++pos_;
            std::string digits;
            for (std::size_t i = start; i < pos_; ++i)
                if (s_[i] != '_') digits += s_[i];
            try {
                v.data = std::stol(digits);
            } catch (const std::exception&) {
                fail(line_, "invalid integer '" + digits + "'");
            }
        } else {
            fail(line_, "expected a value");
        }
        return v;
    }

    void insert(Table& t, const std::string& k, Value v) {
        if (find(t, k)) fail(v.line, "duplicate key '" + k + "'");
        t.emplace_back(k, std::move(v));
    }

    Table& open_table(Table& root, const std::vector<std::string>& path, bool implicit = false) {
        Table* t = &root;
        for (std::size_t i = 0; i < path.size(); ++i) {
            auto it = std::find_if(t->begin(), t->end(), [&](const auto& kv) { return kv.first == path[i]; });
            if (it == t->end()) {
                Value v;
                v.line = line_;
                v.data = std::make_shared<Table>();
                t->emplace_back(path[i], std::move(v));
                it = std::prev(t->end());
            } else if (!it->second.is_table()) {
                fail(line_, "'" + path[i] + "' is not a table");
            } else if (i + 1 == path.size() && !implicit && defined_.count(std::get<std::shared_ptr<Table>>(it->second.data).get())) {
                fail(line_, "table '" + path[i] + "' defined twice");
            }
            t = std::get<std::shared_ptr<Table>>(it->second.data).get();
        }
        if (!implicit) defined_.insert(t);
        return *t;
    }

    const std::string& s_;
    std::size_t pos_ = 0;
    int line_ = 1;
    std::set<const Table*> defined_;
};

}  // namespace

const std::string& Value::as_string() const {
    if (!is_string()) fail(line, std::string("expected a string, found ") + type_name(*this));
    return std::get<std::string>(data);
}

long Value::as_integer() const {
    if (!is_integer()) fail(line, std::string("expected an integer, found ") + type_name(*this));
    return std::get<long>(data);
}

bool Value::as_bool() const {
    if (!is_bool()) fail(line, std::string("expected a boolean, found ") + type_name(*this));
    return std::get<bool>(data);
}

const Array& Value::as_array() const {
    if (!is_array()) fail(line, std::string("expected an array, found ") + type_name(*this));
    return std::get<Array>(data);
}

const Table& Value::as_table() const {
    if (!is_table()) fail(line, std::string("expected a table, found ") + type_name(*this));
    return *std::get<std::shared_ptr<Table>>(data);
}

const Value* find(const Table& table, const std::string& key) {
    for (const auto& [k, v] : table)
        if (k == key) return &v;
    return nullptr;
}

const Value& require(const Table& table, const std::string& key, const std::string& where) {
    if (const Value* v = find(table, key)) return *v;
    raise(ErrorKind::ParseError, where + ": missing key '" + key + "'");
}

Table parse(const std::string& text) { return Parser(text).document(); }

}  // namespace omegatr::toml
