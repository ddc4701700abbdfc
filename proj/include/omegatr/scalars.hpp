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

/* Exact coefficient fields: Q and simple extensions Q[w]/(m(w)). */

#ifndef OMEGATR_SCALARS_HPP
#define OMEGATR_SCALARS_HPP

#include <gmpxx.h>

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "omegatr/error.hpp"

namespace omegatr {

using Rational = mpq_class;

/// Raw coefficient: residue class representative c_0 + c_1 w + ... with
/// trailing zeros trimmed, so zero is the empty vector and rationals have
/// length at most one. Interpreted relative to a FieldDescriptor.
using Scalar = std::vector<Rational>;

class FieldDescriptor;
using Field = std::shared_ptr<const FieldDescriptor>;

class FieldDescriptor {
public:
    static Field rationals();

    /// Simple extension Q[gen]/(minpoly); coefficients low degree first.
    /// Throws NotMonic, ReducibleMinpoly, InvalidArgument.
    static Field make_extension(std::vector<Rational> minpoly, std::string generator = "w");

    int degree() const noexcept { return minpoly_.empty() ? 1 : static_cast<int>(minpoly_.size()) - 1; }
    bool is_rationals() const noexcept { return minpoly_.empty(); }
    const std::vector<Rational>& minpoly() const noexcept { return minpoly_; }
    const std::string& generator() const noexcept { return generator_; }
    /// Set when irreducibility could not be proved (user assertion governs).
    const std::optional<std::string>& warning() const noexcept { return warning_; }

    bool same_as(const FieldDescriptor& other) const;

    // Arithmetic on raw scalars of this field.
    Scalar add(const Scalar& a, const Scalar& b) const;
    Scalar sub(const Scalar& a, const Scalar& b) const;
    Scalar mul(const Scalar& a, const Scalar& b) const;
    Scalar neg(const Scalar& a) const;
    Scalar inv(const Scalar& a) const;
    Scalar div(const Scalar& a, const Scalar& b) const { return mul(a, inv(b)); }
    Scalar pow(const Scalar& a, unsigned long e) const;
    /// Reduce an arbitrary polynomial in the generator modulo the minimal polynomial.
    Scalar reduce(std::vector<Rational> poly) const;

    Scalar from_rational(const Rational& q) const;
    Scalar generator_element() const;

    /// Canonical text: rationals as `a/b`, extension elements as polynomials in the generator.
    std::string format(const Scalar& a) const;
    std::string describe() const;

private:
    FieldDescriptor() = default;

    std::vector<Rational> minpoly_;  // empty for Q
    std::string generator_ = "w";
    std::optional<std::string> warning_;
};

inline bool is_zero(const Scalar& a) noexcept { return a.empty(); }
bool is_one(const Scalar& a);
/// Leading rational is negative and the element is a single term c*w^k.
bool is_negative_monomial(const Scalar& a);
/// Element is c * w^k for a single k.
bool is_single_term(const Scalar& a);
void trim(Scalar& a);

/// Value-semantic scalar bound to its field.
class FieldElement {
public:
    FieldElement(Field field, Scalar value);
    static FieldElement rational(Field field, const Rational& q);

    const Field& field() const noexcept { return field_; }
    const Scalar& value() const noexcept { return value_; }
    bool is_zero() const noexcept { return value_.empty(); }

    FieldElement operator+(const FieldElement& o) const;
    FieldElement operator-(const FieldElement& o) const;
    FieldElement operator*(const FieldElement& o) const;
    FieldElement operator/(const FieldElement& o) const;
    FieldElement operator-() const;
    FieldElement inverse() const;

    bool operator==(const FieldElement& o) const;
    std::string to_string() const { return field_->format(value_); }

private:
    void require_same_field(const FieldElement& o) const;

    Field field_;
    Scalar value_;
};

/// Parse a scalar in the field's text syntax (`a/b`, integers, polynomials in the generator).
FieldElement parse_scalar(const Field& field, const std::string& text);

namespace detail {
// Shape of the factorization of an integer polynomial modulo a prime: the
// multiset of irreducible factor degrees, or nullopt if not squarefree mod p.
std::optional<std::vector<int>> factor_degrees_mod_p(const std::vector<mpz_class>& poly, long p);
}  // namespace detail

}  // namespace omegatr

#endif
