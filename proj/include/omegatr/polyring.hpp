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

/* Multivariate polynomials over a coefficient field, coordinate rings
   k[x]/I with cached Groebner bases, and ring homomorphisms between them. */

#ifndef OMEGATR_POLYRING_HPP
#define OMEGATR_POLYRING_HPP

#include <boost/container/small_vector.hpp>

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "omegatr/scalars.hpp"

namespace omegatr {

namespace gb {
struct ModTerm;
}

/// Degrevlex or lex, optionally refined into a block order: the first
/// `block` variables are compared first (degrevlex), then the rest by `kind`.
struct MonomialOrder {
    enum class Kind { DegRevLex, Lex };
    Kind kind = Kind::DegRevLex;
    std::uint32_t block = 0;

    static MonomialOrder degrevlex() { return {Kind::DegRevLex, 0}; }
    static MonomialOrder lex() { return {Kind::Lex, 0}; }
    static MonomialOrder elimination(std::uint32_t first_block) { return {Kind::DegRevLex, first_block}; }

    bool operator==(const MonomialOrder&) const = default;
    std::string describe() const;
};

class Monomial {
public:
    using Storage = boost::container::small_vector<std::uint16_t, 10>;

    Monomial() = default;
    explicit Monomial(std::size_t nvars) : e_(nvars, 0) {}
    explicit Monomial(const std::vector<unsigned>& exps);

    std::size_t size() const noexcept { return e_.size(); }
    std::uint16_t operator[](std::size_t i) const noexcept { return e_[i]; }
    void set(std::size_t i, unsigned value);
    unsigned long degree() const noexcept;
    bool is_one() const noexcept;

    bool divides(const Monomial& other) const noexcept;
    bool coprime(const Monomial& other) const noexcept;
    Monomial operator*(const Monomial& other) const;
    /// Requires divides(other).
    Monomial quotient_of(const Monomial& other) const;
    Monomial lcm(const Monomial& other) const;

    bool operator==(const Monomial& other) const noexcept { return e_ == other.e_; }

private:
    Storage e_;
};

/// Three-way comparison: positive when a > b in the order.
int compare(const Monomial& a, const Monomial& b, const MonomialOrder& order) noexcept;

class PolyRing;
using Ring = std::shared_ptr<const PolyRing>;

class PolyRing {
public:
    static Ring make(Field field, std::vector<std::string> vars, MonomialOrder order = MonomialOrder::degrevlex());

    const Field& field() const noexcept { return field_; }
    std::size_t nvars() const noexcept { return vars_.size(); }
    const std::vector<std::string>& vars() const noexcept { return vars_; }
    const std::string& var(std::size_t i) const { return vars_.at(i); }
    std::optional<std::size_t> index_of(std::string_view name) const;
    const MonomialOrder& order() const noexcept { return order_; }

    bool same_as(const PolyRing& other) const;
    Ring with_order(MonomialOrder order) const;
    std::string describe() const;

private:
    PolyRing() = default;
    Field field_;
    std::vector<std::string> vars_;
    MonomialOrder order_;
};

struct Term {
    Monomial mono;
    Scalar coeff;
};

class MvPolynomial {
public:
    explicit MvPolynomial(Ring ring) : ring_(std::move(ring)) {}

    static MvPolynomial constant(const Ring& ring, Scalar c);
    static MvPolynomial constant(const Ring& ring, const Rational& q) {
        return constant(ring, ring->field()->from_rational(q));
    }
    static MvPolynomial variable(const Ring& ring, std::size_t i);
    static MvPolynomial monomial(const Ring& ring, Monomial m, Scalar c);
    /// Sorts and combines arbitrary terms.
    static MvPolynomial from_terms(const Ring& ring, std::vector<Term> terms);

    const Ring& ring() const noexcept { return ring_; }
    const std::vector<Term>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_constant() const noexcept;
    /// Constant term's value if the polynomial is constant.
    std::optional<Scalar> constant_value() const;
    const Term& leading_term() const { return terms_.front(); }
    unsigned long total_degree() const noexcept;
    /// True if some term involves variable i.
    bool involves(std::size_t i) const noexcept;

    MvPolynomial operator+(const MvPolynomial& o) const;
    MvPolynomial operator-(const MvPolynomial& o) const;
    MvPolynomial operator*(const MvPolynomial& o) const;
    MvPolynomial operator-() const;
    MvPolynomial& operator+=(const MvPolynomial& o) { return *this = *this + o; }
    MvPolynomial& operator-=(const MvPolynomial& o) { return *this = *this - o; }
    MvPolynomial scaled(const Scalar& c) const;
    MvPolynomial times_term(const Monomial& m, const Scalar& c) const;
    MvPolynomial pow(unsigned long e) const;
    MvPolynomial monic() const;

    MvPolynomial derivative(std::size_t var) const;
    /// Substitute images[i] for variable i; all images live in `target`
    /// (defaults to the ring of the first image).
    MvPolynomial substitute(const std::vector<MvPolynomial>& images, const Ring& target = nullptr) const;
    /// Re-express in another ring with the same variable names (any order).
    MvPolynomial in_ring(const Ring& target) const;

    bool operator==(const MvPolynomial& o) const;
    std::string to_string() const;

private:
    void require_same_ring(const MvPolynomial& o) const;

    Ring ring_;
    std::vector<Term> terms_;  // strictly descending in ring order, no zero coefficients
};

MvPolynomial parse_polynomial(const Ring& ring, std::string_view text);

/// Coefficient text used inside products: parenthesised when it has several terms.
std::string format_coefficient(const FieldDescriptor& field, const Scalar& c);

// ---------------------------------------------------------------------------
// Ideals and Groebner bases.

struct Ideal {
    Ring ring;
    std::vector<MvPolynomial> generators;
};

class GroebnerBasis {
public:
    GroebnerBasis(Ring ring, std::vector<MvPolynomial> reduced);

    const Ring& ring() const noexcept { return ring_; }
    const MonomialOrder& order() const noexcept { return ring_->order(); }
    const std::vector<MvPolynomial>& polys() const noexcept { return polys_; }
    bool is_unit() const;

    /// Throws OrderMismatch if p's ring order differs from the basis order.
    MvPolynomial normal_form(const MvPolynomial& p) const;
    bool contains(const MvPolynomial& p) const { return normal_form(p).is_zero(); }

    /// Number of monomials in `vars` not divisible by the `vars`-part of any
    /// leading monomial; nullopt when infinite. Only meaningful for block
    /// orders whose first block is `vars` (or for all variables).
    std::optional<std::size_t> standard_monomial_count(const std::vector<std::size_t>& vars) const;

    std::string to_string() const;

private:
    Ring ring_;
    std::vector<MvPolynomial> polys_;
    std::shared_ptr<const std::vector<std::vector<gb::ModTerm>>> sparse_;
};

/// Reduced Groebner basis with respect to `order` (default: the ring's own
/// order). When the order differs, the basis lives in a copy of the ring
/// carrying that order.
GroebnerBasis groebner(const Ideal& ideal, std::optional<MonomialOrder> order = std::nullopt);
MvPolynomial normal_form(const MvPolynomial& p, const GroebnerBasis& gb);

// ---------------------------------------------------------------------------
// Coordinate rings and homomorphisms.

class CoordinateRing;
using Quotient = std::shared_ptr<const CoordinateRing>;

/// k[x_1..x_n]/I. The reduced Groebner basis of I is computed on construction.
class CoordinateRing {
public:
    static Quotient make(Ring ring, std::vector<MvPolynomial> relations);
    static Quotient polynomial(Ring ring) { return make(std::move(ring), {}); }

    const Ring& ring() const noexcept { return ring_; }
    const Field& field() const noexcept { return ring_->field(); }
    std::size_t nvars() const noexcept { return ring_->nvars(); }
    const std::vector<MvPolynomial>& relations() const noexcept { return relations_; }
    const GroebnerBasis& gb() const noexcept { return gb_; }

    MvPolynomial reduce(const MvPolynomial& p) const { return gb_.normal_form(p); }
    bool is_zero(const MvPolynomial& p) const { return gb_.contains(p); }
    bool equal(const MvPolynomial& a, const MvPolynomial& b) const { return is_zero(a - b); }
    MvPolynomial var(std::size_t i) const { return MvPolynomial::variable(ring_, i); }
    MvPolynomial parse(std::string_view text) const { return reduce(parse_polynomial(ring_, text)); }

    /// A maximal independent set of variables modulo I of largest size (the
    /// first such set in lexicographic index order among `candidates`, or
    /// among all variables).
    std::vector<std::size_t> independent_set(const std::vector<std::size_t>& candidates = {}) const;
    std::size_t dimension() const { return independent_set().size(); }

    std::string describe() const;

private:
    CoordinateRing(Ring ring, std::vector<MvPolynomial> relations, GroebnerBasis gb)
        : ring_(std::move(ring)), relations_(std::move(relations)), gb_(std::move(gb)) {}

    Ring ring_;
    std::vector<MvPolynomial> relations_;
    GroebnerBasis gb_;
};

struct CombinedRing;

/// Algebra map source -> target given by the images of the source variables.
class RingHom {
public:
    RingHom(Quotient source, Quotient target, std::vector<MvPolynomial> images);
    static RingHom identity(const Quotient& ring);

    const Quotient& source() const noexcept { return source_; }
    const Quotient& target() const noexcept { return target_; }
    const std::vector<MvPolynomial>& images() const noexcept { return images_; }
    bool verified() const noexcept { return verified_; }

    /// Image of a source-ambient polynomial, reduced in the target.
    MvPolynomial apply(const MvPolynomial& p) const;
    /// this o first: source(first) -> target(this).
    RingHom after(const RingHom& first) const;
    /// Images agree modulo the target ideal.
    bool equals(const RingHom& other) const;

    std::string to_string() const;

private:
    friend RingHom check_hom(const RingHom&, const std::optional<std::pair<RingHom, RingHom>>&);
    friend CombinedRing combine(const RingHom&);
    struct Cache;

    Quotient source_, target_;
    std::vector<MvPolynomial> images_;
    bool verified_ = false;
    std::shared_ptr<Cache> cache_;
};

/// Confirms every source relation maps into the target ideal (NotAHomomorphism
/// otherwise). With `base = (i, j)`, also requires h o i == j on the base
/// variables (NotOverBase).
RingHom check_hom(const RingHom& h, const std::optional<std::pair<RingHom, RingHom>>& base = std::nullopt);

/// A -> B presented inside one ring: variables of B first, then those of A,
/// modulo I_B + (a - h(a)). The order eliminates B's variables. Cached per hom.
struct CombinedRing {
    Quotient ring;
    std::size_t nb = 0;
    std::size_t na = 0;
    MvPolynomial from_target(const MvPolynomial& b) const;
    MvPolynomial from_source(const MvPolynomial& a) const;
    /// Inverse of from_source for polynomials only involving A's variables.
    MvPolynomial to_source(const MvPolynomial& p, const Quotient& source) const;
    /// Inverse of from_target for polynomials only involving B's variables.
    MvPolynomial to_target(const MvPolynomial& p, const Quotient& target) const;
};
CombinedRing combine(const RingHom& h);

/// If b (in the target of h) lies in the image of h, a preimage in the source.
std::optional<MvPolynomial> preimage(const RingHom& h, const MvPolynomial& b);

/// Whether h has zero kernel.
bool is_injective(const RingHom& h);

enum class RankStrategy { Exact, Specialization };

struct RankOptions {
    RankStrategy strategy = RankStrategy::Exact;
    std::uint64_t seed = 0;
    int trials = 5;
};

/// dim over Frac(A) of B (x)_A Frac(A) for h: A -> B, both domains.
/// Throws NotModuleFinite or DegenerateSpecialization.
long generic_rank(const RingHom& h, const RankOptions& options = {});

/// Adds a fresh variable s with relation s*f - 1. Throws ZeroDenominator.
Quotient localize(const Quotient& ring, const MvPolynomial& f, const std::string& var_name = "");

}  // namespace omegatr

#endif
