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

/* Expression grammar shared by scalars, polynomials and differential forms:

     expr    := term (('+' | '-') term)*
     term    := unary (('*' | '/') unary)*
     unary   := '-' unary | power
     power   := primary ('^' (integer | primary))*
     primary := integer | identifier | 'd(' identifier ')' | '(' expr ')'

   `a ^ n` with an integer literal n is a power, otherwise `^` is the wedge
   product. There is no implicit multiplication. */

#ifndef OMEGATR_PARSE_HPP
#define OMEGATR_PARSE_HPP

#include <gmpxx.h>

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace omegatr::parse {

struct Node {
    enum class Kind { Integer, Identifier, Differential, Add, Sub, Mul, Div, Neg, Pow, Wedge };

    Kind kind;
    std::string text;   // identifier name or integer digits
    unsigned long exponent = 0;  // Pow only
    std::vector<std::shared_ptr<const Node>> children;
};

using NodePtr = std::shared_ptr<const Node>;

/// Throws Error(ParseError) with the column of the offending character.
NodePtr parse_expression(std::string_view text);

/// Fold an AST with a visitor exposing the arithmetic of some value type V.
/// The visitor must provide integer, identifier, differential, add, sub, mul,
/// div, neg, pow and wedge.
template <class Visitor>
auto evaluate(const Node& node, Visitor& v) -> decltype(v.integer(mpz_class{})) {
    using K = Node::Kind;
    switch (node.kind) {
        case K::Integer: return v.integer(mpz_class(node.text));
        case K::Identifier: return v.identifier(node.text);
        case K::Differential: return v.differential(node.text);
        case K::Neg: return v.neg(evaluate(*node.children[0], v));
        case K::Pow: return v.pow(evaluate(*node.children[0], v), node.exponent);
        default: break;
    }
    auto lhs = evaluate(*node.children[0], v);
    auto rhs = evaluate(*node.children[1], v);
    switch (node.kind) {
        case K::Add: return v.add(lhs, rhs);
        case K::Sub: return v.sub(lhs, rhs);
        case K::Mul: return v.mul(lhs, rhs);
        case K::Div: return v.div(lhs, rhs);
        default: return v.wedge(lhs, rhs);
    }
}

}  // namespace omegatr::parse

#endif
