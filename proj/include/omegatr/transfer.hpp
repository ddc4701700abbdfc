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

/* Finite correspondences between affine varieties, given together with the
   witness data that makes their transfer on forms computable: a Galois cover
   of the source dominating the component and the list of its maps into the
   component over the source. */

#ifndef OMEGATR_TRANSFER_HPP
#define OMEGATR_TRANSFER_HPP

#include <string>
#include <utility>
#include <vector>

#include "omegatr/descent.hpp"

namespace omegatr {

/// Z inside X1 x X2, finite and surjective over X1.
struct PrimeCorrespondence {
    Variety source;            // X1
    Variety target;            // X2
    Variety component;         // Z
    RingHom to_source;         // O(X1) -> O(Z)
    RingHom to_target;         // O(X2) -> O(Z)
    GaloisCoverDatum witness;  // W -> X1
    std::vector<RingHom> homs; // O(Z) -> O(W) over O(X1)
};

/// Checks the maps and the witness: homs over X1, pairwise distinct, as many
/// as the degree of Z over X1. Throws WitnessInvalid.
PrimeCorrespondence make_prime(Variety source, Variety target, Variety component, RingHom to_source, RingHom to_target,
                               GaloisCoverDatum witness, std::vector<RingHom> homs, const RankOptions& options = {});

/// Graph of the morphism X1 -> X2 with comorphism f: O(X2) -> O(X1).
PrimeCorrespondence graph(Variety source, Variety target, const RingHom& f);

/// Reduced Groebner basis of the ideal of Z in X1 x X2, as text.
std::string component_ideal(const PrimeCorrespondence& c);

struct CycleCorrespondence {
    std::vector<std::pair<long, PrimeCorrespondence>> terms;  // sorted by component ideal
    std::string to_string() const;
};

/// Sums multiplicities of equal components. Throws InvalidArgument on
/// non-positive multiplicities or mismatched source/target.
CycleCorrespondence make_cycle(std::vector<std::pair<long, PrimeCorrespondence>> terms);

PForm transfer_prime(const PrimeCorrespondence& c, const PForm& w);
PForm transfer_cycle(const CycleCorrespondence& z, const PForm& w);

struct PushTerm {
    long multiplicity;
    RingHom map;      // O(image) -> O(component)
    std::string key;  // identifies the image; empty means the image ring itself
};

struct PushedTerm {
    long multiplicity;
    std::size_t first;  // index of the first input term with this image
    std::string key;
};

/// Multiplies each multiplicity by the generic degree of its map and merges
/// equal images. Throws RankFailure.
std::vector<PushedTerm> pushforward(const std::vector<PushTerm>& terms, const RankOptions& options = {});

/// One irreducible component Z_i of Z x_{X2} Z'.
struct FiberComponent {
    long multiplicity;
    Quotient ring;
    RingHom from_first;           // O(Z) -> O(Z_i)
    RingHom from_second;          // O(Z') -> O(Z_i)
    PrimeCorrespondence image;    // the image of Z_i in X1 x X3
    RingHom to_image;             // O(image component) -> O(Z_i)
};

/// parts[i][j] lists the components for term i of z and term j of z'.
struct FiberWitness {
    std::vector<std::vector<std::vector<FiberComponent>>> parts;
};

/// z' o z, for z: X1 -> X2 and z': X2 -> X3. Throws ComponentNotContained or
/// WitnessDegreeMismatch.
CycleCorrespondence compose_cycles(const CycleCorrespondence& z, const CycleCorrespondence& z2,
                                   const FiberWitness& witness, const RankOptions& options = {});

struct SampleCheck {
    std::string form, left, right;
    bool equal = false;
};

struct CompositionReport {
    std::string composite;
    std::vector<SampleCheck> samples;
    bool passed() const;
};

/// T_z(T_z'(w)) against T_{z' o z}(w) for each sample w on X3.
CompositionReport verify_composition(const CycleCorrespondence& z, const CycleCorrespondence& z2,
                                     const FiberWitness& witness, const std::vector<PForm>& samples,
                                     const RankOptions& options = {});

/// A second witness W1 -> X1 for the same component, dominating the first.
struct AlternativeWitness {
    GaloisCoverDatum cover;
    std::vector<RingHom> homs;  // O(Z) -> O(W1)
    RingHom dominating;         // O(W) -> O(W1), over X1
};

struct WellDefinednessReport {
    bool bijection = false;
    std::vector<SampleCheck> samples;
    bool passed() const;
};

/// Checks that q -> q o f is a bijection of the hom lists and that both
/// witnesses give the same transfers. Throws BijectionFailure or ValueMismatch.
WellDefinednessReport verify_well_definedness(const PrimeCorrespondence& c, const AlternativeWitness& alt,
                                              const std::vector<PForm>& samples);

}  // namespace omegatr

#endif
