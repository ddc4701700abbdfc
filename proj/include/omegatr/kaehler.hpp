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

/* Kaehler differentials of affine varieties.

   Forms are stored over the ambient coordinates: a p-form is a map from
   ascending index sets I to coefficients in the fraction field, meaning
   sum c_I dx_I. Whether two forms agree in Omega^p(X) is decided in the
   presented module; whether they agree at the generic point is decided by
   coordinates in a frame, i.e. a basis of Omega^1 of the function field. */

#ifndef OMEGATR_KAEHLER_HPP
#define OMEGATR_KAEHLER_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "omegatr/modules.hpp"

namespace omegatr {

struct VarietyFlags {
    bool irreducible = true;
    bool normal = false;
    bool smooth = false;
};

class AffineVariety;
using Variety = std::shared_ptr<const AffineVariety>;

class AffineVariety {
public:
    /// `base` (A -> this ring) makes relative differentials available.
    static Variety make(std::string name, Quotient ring, VarietyFlags flags = {}, std::optional<RingHom> base = std::nullopt);

    const std::string& name() const noexcept { return name_; }
    const Quotient& ring() const noexcept { return ring_; }
    const VarietyFlags& flags() const noexcept { return flags_; }
    const std::optional<RingHom>& base() const noexcept { return base_; }
    std::size_t dimension() const { return ring_->dimension(); }

    /// Jacobian criterion: the ideal of maximal minors together with I is the unit ideal.
    bool smooth_verified() const;
    /// Set when smoothness is asserted but the Jacobian check fails.
    std::optional<std::string> smoothness_warning() const;

private:
    AffineVariety() = default;
    std::string name_;
    Quotient ring_;
    VarietyFlags flags_;
    std::optional<RingHom> base_;
    std::shared_ptr<std::optional<bool>> smooth_cache_;
};

struct Fraction {
    MvPolynomial num, den;
};

/// Frac(R) for a domain R = P/I; zero testing is ideal membership.
class FractionField {
public:
    explicit FractionField(Quotient ring) : ring_(std::move(ring)) {}

    const Quotient& ring() const noexcept { return ring_; }
    /// Normalized: reduced modulo I, denominator monic, constant denominators folded.
    Fraction make(const MvPolynomial& num, const MvPolynomial& den) const;
    Fraction make(const MvPolynomial& num) const;
    Fraction zero() const;
    Fraction one() const;

    Fraction add(const Fraction& a, const Fraction& b) const;
    Fraction sub(const Fraction& a, const Fraction& b) const;
    Fraction mul(const Fraction& a, const Fraction& b) const;
    Fraction div(const Fraction& a, const Fraction& b) const;
    Fraction neg(const Fraction& a) const;
    bool is_zero(const Fraction& a) const { return a.num.is_zero(); }
    bool equal(const Fraction& a, const Fraction& b) const;
    bool is_polynomial(const Fraction& a) const { return a.den.is_constant(); }
    std::string to_string(const Fraction& a) const;

private:
    Quotient ring_;
};

class PForm {
public:
    using Index = std::vector<std::uint32_t>;

    PForm(Quotient ring, int degree);
    static PForm function(const Quotient& ring, Fraction f);
    static PForm function(const Quotient& ring, const MvPolynomial& f);
    static PForm differential(const Quotient& ring, std::size_t var);

    const Quotient& ring() const noexcept { return ring_; }
    int degree() const noexcept { return degree_; }
    const std::map<Index, Fraction>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_polynomial() const;
    FractionField field() const { return FractionField(ring_); }

    /// Adds c * dx_I, sorting I with the wedge sign; repeated indices vanish.
    void add_term(Index index, const Fraction& c);

    PForm operator+(const PForm& o) const;
    PForm operator-(const PForm& o) const;
    PForm operator-() const;
    PForm scaled(const Fraction& c) const;
    PForm scaled(const MvPolynomial& c) const;
    PForm wedge(const PForm& o) const;

    /// Same ambient coefficients after normalization.
    bool same_as(const PForm& o) const;
    std::string to_string() const;

private:
    void require_compatible(const PForm& o) const;

    Quotient ring_;
    int degree_;
    std::map<Index, Fraction> terms_;
};

/// Some solution of M v = rhs over Frac(R) (free unknowns set to 0), or
/// nullopt if the system is inconsistent.
std::optional<std::vector<Fraction>> solve_linear(const FractionField& F, std::vector<std::vector<Fraction>> M,
                                                  std::vector<Fraction> rhs);

/// Whether a fraction lies in R itself.
bool is_regular_function(const Fraction& f, const Quotient& ring);

/// Parses `c * d(x) ^ d(y) + ...`; `*` between forms is the wedge product.
/// With `degree`, a zero result takes that degree and others must match it.
PForm parse_form(const Quotient& ring, std::string_view text, std::optional<int> degree = std::nullopt);

/// Omega^p(X) with the index set (over ambient variables) of each generator.
struct OmegaModule {
    PresentedModule module;
    std::vector<PForm::Index> index_sets;
    int degree;
    Quotient ring;
    bool relative;
    std::vector<std::uint32_t> killed;  // ambient variables whose differential is 0

    /// Coefficient vector of a polynomial form. Throws NonRegularCoefficient.
    Vector to_vector(const PForm& w) const;
    PForm to_form(const Vector& v) const;
    bool equal(const PForm& a, const PForm& b) const { return module.equal(to_vector(a), to_vector(b)); }
    /// Representative of w modulo the relations, canonical for the presentation.
    PForm canonical(const PForm& w) const { return to_form(module.reduce(to_vector(w))); }
};

/// Presentation of Omega^p; `relative` uses the variety's base (da = 0).
OmegaModule omega(const AffineVariety& X, int p, bool relative = false);
inline PresentedModule omega_p(const AffineVariety& X, int p, bool relative = false) {
    return omega(X, p, relative).module;
}

/// Exterior derivative of a form with polynomial coefficients.
PForm de_rham_d(const PForm& w);

/// h^* w for h: B -> C, where w lives over B.
PForm pullback(const RingHom& h, const PForm& w);

struct RegularityResult {
    bool regular = false;
    Ideal denominators;
    std::optional<PForm> certificate;  // polynomial representative when regular
};

/// Tests whether w lies in the image of Omega^p(X) in Omega^p of the function field.
RegularityResult regularity(const PForm& w, const AffineVariety& X);

/// A basis of Omega^1 of the function field: every ambient dx_j equals
/// sum_s rows[j][s] * basis[s].
struct Frame {
    Quotient ring;
    std::vector<PForm> basis;
    std::vector<std::vector<Fraction>> rows;
};

/// Basis dx_S for a transcendence basis S of the variety's coordinates.
Frame absolute_frame(const AffineVariety& W);
/// Basis f^*(dx_T) for T a transcendence basis of the base of f: A -> B = O(W).
Frame relative_frame(const RingHom& f, const AffineVariety& W);

using FrameCoordinates = std::map<PForm::Index, Fraction>;
FrameCoordinates coordinates(const PForm& w, const Frame& frame);
bool generic_equal(const PForm& a, const PForm& b, const Frame& frame);

struct EqualizerReport {
    bool image_in_kernel = false;
    bool kernel_in_image = false;
    bool injective = false;
    std::size_t kernel_generators = 0;
    bool holds() const { return image_in_kernel && kernel_in_image && injective; }
};

/// Exactness of Omega^1(A) -> Omega^1(B) => Omega^1(B (x)_A B) for a finite
/// etale A -> B with A-module generators of B. Throws NotEtale.
EqualizerReport equalizer_check(const RingHom& cover, const std::vector<MvPolynomial>& generators);

}  // namespace omegatr

#endif
