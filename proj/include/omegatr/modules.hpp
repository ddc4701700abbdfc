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

/* Finitely presented modules R^g / (relations) over a coordinate ring R,
   maps between them (optionally semilinear along a ring homomorphism), and
   the derived constructions: kernels, Hom, duals and biduals, invariants of a
   finite group acting over a subring, and colon ideals. */

#ifndef OMEGATR_MODULES_HPP
#define OMEGATR_MODULES_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "omegatr/polyring.hpp"

namespace omegatr {

/// Element of the ambient free module R^g, entries in the ambient polynomial ring.
using Vector = std::vector<MvPolynomial>;

Vector zero_vector(const Ring& ring, std::size_t n);
Vector unit_vector(const Ring& ring, std::size_t n, std::size_t i);
Vector add(const Vector& a, const Vector& b);
Vector sub(const Vector& a, const Vector& b);
Vector scale(const MvPolynomial& c, const Vector& v);
bool is_zero(const Vector& v);

/// Solves linear systems sum_j c_j u_j = w modulo a submodule N of R^n and
/// computes the syzygies of (u_j) modulo N. With `restrict`, R must carry a
/// block order (as produced by `combine`) and the coefficients c_j are
/// confined to the variables outside the first block, i.e. to the subring.
class LinearSystem {
public:
    LinearSystem(Quotient ring, std::size_t n, std::vector<Vector> generators, std::vector<Vector> relations,
                 bool restrict = false);

    std::size_t rank() const noexcept { return n_; }
    std::size_t size() const noexcept { return m_; }

    /// Generators of {c : sum c_j u_j in N} (entries reduced, zeros dropped).
    std::vector<Vector> syzygies() const;
    /// Some c with sum c_j u_j = w mod N, or nullopt.
    std::optional<Vector> lift(const Vector& w) const;
    bool in_span(const Vector& w) const;
    /// Representative of w modulo span(u) + N (canonical given the system).
    Vector normal_form(const Vector& w) const;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
    Quotient ring_;
    std::size_t n_, m_;
    bool restrict_;
};

class PresentedModule {
public:
    PresentedModule(Quotient ring, std::size_t ngens, std::vector<Vector> relations, std::vector<std::string> names = {});
    static PresentedModule free(Quotient ring, std::size_t n, std::vector<std::string> names = {});

    const Quotient& ring() const noexcept { return ring_; }
    std::size_t ngens() const noexcept { return ngens_; }
    const std::vector<Vector>& relations() const noexcept { return relations_; }
    const std::vector<std::string>& names() const noexcept { return names_; }
    bool is_free() const noexcept { return relations_.empty(); }

    Vector zero() const { return zero_vector(ring_->ring(), ngens_); }
    Vector generator(std::size_t i) const { return unit_vector(ring_->ring(), ngens_, i); }

    bool is_zero(const Vector& v) const;
    bool equal(const Vector& a, const Vector& b) const { return is_zero(sub(a, b)); }
    /// Canonical representative of v modulo the relations.
    Vector reduce(const Vector& v) const;
    bool is_zero_module() const;

    std::string format(const Vector& v) const;
    /// "generators: ...; relations: ..." in canonical order.
    std::string to_string() const;

private:
    const LinearSystem& system() const;

    Quotient ring_;
    std::size_t ngens_;
    std::vector<Vector> relations_;
    std::vector<std::string> names_;
    std::shared_ptr<std::shared_ptr<const LinearSystem>> system_;
};

/// source -> target given by the images of the source generators. With a
/// twist s the map is s-semilinear: f(r * e_i) = s(r) * f(e_i).
class ModuleMap {
public:
    /// Verifies that every source relation maps into the target relations.
    ModuleMap(PresentedModule source, PresentedModule target, std::vector<Vector> images,
              std::optional<RingHom> twist = std::nullopt);

    const PresentedModule& source() const noexcept { return source_; }
    const PresentedModule& target() const noexcept { return target_; }
    const std::vector<Vector>& images() const noexcept { return images_; }
    const std::optional<RingHom>& twist() const noexcept { return twist_; }
    bool is_linear() const noexcept { return !twist_.has_value(); }

    Vector apply(const Vector& v) const;
    /// this o first; twists must chain (TwistMismatch otherwise).
    ModuleMap after(const ModuleMap& first) const;
    bool is_zero() const;
    bool is_surjective() const;
    bool is_injective() const;

private:
    PresentedModule source_, target_;
    std::vector<Vector> images_;
    std::optional<RingHom> twist_;
};

struct Submodule {
    PresentedModule module;
    std::vector<Vector> elements;  // generators inside the ambient module
};

/// Kernel of a linear map, with its generators as elements of the source.
Submodule kernel(const ModuleMap& map);

/// Presentation of span(elements) in M.
Submodule submodule(const PresentedModule& M, std::vector<Vector> elements, const std::string& prefix = "k");

struct HomModule {
    PresentedModule module;
    /// Generator l of the module is the map e_i -> maps[l][i] (vectors of N).
    std::vector<std::vector<Vector>> maps;
    PresentedModule source, target;
    ModuleMap decode(std::size_t l) const;
};

HomModule hom_module(const PresentedModule& M, const PresentedModule& N);

struct BidualData {
    PresentedModule dual;
    std::vector<Vector> functionals;  // dual generator j as a row in R^g
    PresentedModule bidual;
    std::vector<Vector> bifunctionals;  // bidual generator l as a row in R^{#dual gens}
    ModuleMap nat;
};

BidualData bidual_data(const PresentedModule& M);

struct InvariantModule {
    PresentedModule module;        // over the base ring A
    std::vector<Vector> elements;  // generator s decoded as an element of M
};

/// Elements of M (over B) fixed by every action map, as an A-module via
/// `base`: A -> B, using the A-module generators of B.
InvariantModule invariants(const PresentedModule& M, const std::vector<ModuleMap>& action, const RingHom& base,
                           const std::vector<MvPolynomial>& generators);

/// {f in R : f * (numerators / denominator) lies in M}, computed as the colon
/// ideal (denominator * R^g + relations : numerators).
Ideal denominator_ideal(const Vector& numerators, const MvPolynomial& denominator, const PresentedModule& M);

/// The A-span of given elements of a B-module, A -> B given by `base`.
class RestrictedSpan {
public:
    RestrictedSpan(const RingHom& base, const PresentedModule& M, std::vector<Vector> elements);

    /// Coefficients over A (in A's ambient ring) expressing w, or nullopt.
    std::optional<Vector> lift(const Vector& w) const;
    bool contains(const Vector& w) const { return lift(w).has_value(); }
    /// A-linear relations among the elements.
    std::vector<Vector> relations() const;

private:
    RingHom base_;
    CombinedRing combined_;
    std::size_t m_;
    std::shared_ptr<const LinearSystem> system_;
};

}  // namespace omegatr

#endif
