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

/* Galois covers W -> X given with their group, averaging of forms over the
   group and descent of invariant forms to the base. */

#ifndef OMEGATR_DESCENT_HPP
#define OMEGATR_DESCENT_HPP

#include <string>
#include <vector>

#include "omegatr/kaehler.hpp"

namespace omegatr {

struct GaloisCoverDatum {
    Variety base;                       // X = Spec A
    Variety total;                      // W = Spec B
    RingHom inclusion;                  // A -> B
    std::vector<RingHom> group;         // A-algebra automorphisms of B, identity included
    std::vector<MvPolynomial> generators;  // A-module generators of B
};

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct CoverReport {
    std::vector<CheckResult> checks;
    long rank = 0;
    bool passed() const;
};

/// Verifies homomorphisms, the base condition, closure under composition,
/// #G = generic rank and the generating set. Throws GroupNotClosed,
/// RankMismatch, HomNotOverBase or NotModuleFinite.
CoverReport verify_cover(const GaloisCoverDatum& d, const RankOptions& options = {});

/// Datum with every map checked; shorthand for the constructors of callers.
GaloisCoverDatum make_cover(Variety base, Variety total, RingHom inclusion, std::vector<RingHom> group,
                            std::vector<MvPolynomial> generators, const RankOptions& options = {});

/// (1/#G) sum_g g^* w.
PForm average(const PForm& w, const GaloisCoverDatum& d);

/// Writes an invariant fraction of K(W) as a fraction of K(X). Throws NotDescendable.
Fraction descend_function(const Fraction& f, const GaloisCoverDatum& d);

/// Descends the average of w to a generic form on X, without regularity test.
PForm descend_generic(const PForm& w, const GaloisCoverDatum& d);

/// The regular form on X whose pullback is the average of w. Throws
/// NotDescendable or NotRegular.
PForm descend(const PForm& w, const GaloisCoverDatum& d);

/// G-invariants of Omega^p(W) (relative to X when asked) as an A-module.
InvariantModule invariant_forms(const GaloisCoverDatum& d, int p, bool relative);

struct BidualReport {
    std::size_t base_generators = 0;       // generators of the bidual on X
    std::size_t invariant_generators = 0;  // A-generators of the G-invariant bidual on W
    bool into_invariants = false;          // pullback lands in the invariant bidual
    bool onto_invariants = false;          // every invariant bidual element descends
    bool holds() const { return into_invariants && onto_invariants; }
};

/// Compares the bidual of Omega^p(X) with the invariant part of the bidual
/// of Omega^p(W) inside Omega^p of the function field of W. Throws
/// CheckFailed naming a witness when either inclusion fails.
BidualReport bidual_descent_check(const GaloisCoverDatum& d, int p);

}  // namespace omegatr

#endif
