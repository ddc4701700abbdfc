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

/* Buchberger's algorithm for submodules of free modules P^r over a
   polynomial ring P. Ideals are the case r = 1.

   Module terms are compared by the key

       (is target component, first variable block, component, monomial)

   where components below `target` dominate every other component. Placing the
   image of a map in the target components and a tag vector in the others
   turns a Groebner basis computation into a syzygy/kernel computation (the
   basis elements with zero target part generate the kernel). With
   `block_first` the first block of ring variables is eliminated as well,
   which restricts coefficients to the subring on the remaining variables. */

#ifndef OMEGATR_GROEBNER_HPP
#define OMEGATR_GROEBNER_HPP

#include <cstdint>
#include <vector>

#include "omegatr/polyring.hpp"

namespace omegatr::gb {

struct ModuleOrder {
    MonomialOrder mono;
    std::uint32_t target = 0;
    bool pot = true;          // position over term (after the block part)
    bool block_first = false;  // compare mono.block variables before positions

    int compare(std::uint32_t ca, const Monomial& a, std::uint32_t cb, const Monomial& b) const noexcept;
};

struct ModTerm {
    std::uint32_t comp;
    Monomial mono;
    Scalar coeff;
};

/// Terms strictly descending in the module order, no zero coefficients.
using ModVec = std::vector<ModTerm>;

struct Context {
    Field field;
    std::size_t nvars;
    ModuleOrder order;
};

/// Sort, combine and drop zeros.
ModVec normalize(const Context& ctx, ModVec v);

/// Reduced Groebner basis (monic, sorted by ascending leading term).
std::vector<ModVec> groebner(const Context& ctx, std::vector<ModVec> generators);

/// Full reduction of v modulo a Groebner basis.
ModVec reduce(const Context& ctx, ModVec v, const std::vector<ModVec>& basis);

// Conversions between dense component vectors and sparse module vectors.
ModVec from_polys(const Context& ctx, const std::vector<MvPolynomial>& comps, std::uint32_t offset = 0);
std::vector<MvPolynomial> to_polys(const ModVec& v, const Ring& ring, std::uint32_t first, std::uint32_t count);

}  // namespace omegatr::gb

#endif
