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

#include "omegatr/parse.hpp"

#include <cctype>

#include "omegatr/error.hpp"

namespace omegatr::parse {

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : s_(text) {}

    NodePtr run() {
        auto e = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        raise(ErrorKind::ParseError, what + " at column " + std::to_string(pos_ + 1) + " in \"" +
                                         std::string(s_) + "\"");
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    static NodePtr binary(Node::Kind k, NodePtr a, NodePtr b) {
        auto n = std::make_shared<Node>();
        n->kind = k;
        n->children = {std::move(a), std::move(b)};
        return n;
    }

    NodePtr expr() {
        auto lhs = term();
        for (;;) {
            if (accept('+'))
                lhs = binary(Node::Kind::Add, lhs, term());
            else if (accept('-'))
                lhs = binary(Node::Kind::Sub, lhs, term());
            else
                return lhs;
        }
    }

    NodePtr term() {
        auto lhs = unary();
        for (;;) {
            if (accept('*'))
                lhs = binary(Node::Kind::Mul, lhs, unary());
            else if (accept('/'))
                lhs = binary(Node::Kind::Div, lhs, unary());
            else
                return lhs;
        }
    }

    NodePtr unary() {
        if (accept('-')) {
            auto n = std::make_shared<Node>();
            n->kind = Node::Kind::Neg;
            n->children = {unary()};
            return n;
        }
        return power();
    }

    NodePtr power() {
        auto base = primary();
        while (accept('^')) {
            skip();
            if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                std::size_t start = pos_;
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
                std::string digits(s_.substr(start, pos_ - start));
                if (digits.size() > 6) fail("exponent too large");
                auto n = std::make_shared<Node>();
                n->kind = Node::Kind::Pow;
                n->exponent = std::stoul(digits);
                n->children = {base};
                base = n;
            } else {
                base = binary(Node::Kind::Wedge, base, primary());
            }
        }
        return base;
    }

    static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
    static bool ident_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '\'';
    }

    std::string identifier() {
        std::size_t start = pos_;
        while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
        return std::string(s_.substr(start, pos_ - start));
    }

    NodePtr primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            auto e = expr();
            if (!accept(')')) fail("expected ')'");
            return e;
        }
        auto n = std::make_shared<Node>();
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            n->kind = Node::Kind::Integer;
            n->text = std::string(s_.substr(start, pos_ - start));
            return n;
        }
        if (ident_start(c)) {
            std::string name = identifier();
            std::size_t save = pos_;
            if (name == "d" && accept('(')) {
                skip();
                if (pos_ >= s_.size() || !ident_start(s_[pos_])) fail("expected variable inside d( )");
                n->kind = Node::Kind::Differential;
                n->text = identifier();
                if (!accept(')')) fail("expected ')' after differential");
                return n;
            }
            pos_ = save;
            n->kind = Node::Kind::Identifier;
            n->text = std::move(name);
            return n;
        }
        fail("unexpected character '" + std::string(1, c) + "'");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace

NodePtr parse_expression(std::string_view text) { return Parser(text).run(); }

}  // namespace omegatr::parse
