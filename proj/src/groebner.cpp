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

#include "omegatr/groebner.hpp"

#include <algorithm>
#include <set>

namespace omegatr::gb {

namespace {

int compare_block(const Monomial& a, const Monomial& b, std::uint32_t block) noexcept {
    unsigned long da = 0, db = 0;
    for (std::uint32_t i = 0; i < block; ++i) {
        da += a[i];
        db += b[i];
    }
    if (da != db) return da > db ? 1 : -1;
    for (std::uint32_t i = block; i-- > 0;) {
        if (a[i] != b[i]) return a[i] < b[i] ? 1 : -1;
    }
    return 0;
}

}  // namespace

int ModuleOrder::compare(std::uint32_t ca, const Monomial& a, std::uint32_t cb, const Monomial& b) const noexcept {
    if (target) {
        bool ta = ca < target, tb = cb < target;
        if (ta != tb) return ta ? 1 : -1;
    }
    if (block_first && mono.block) {
        int c = compare_block(a, b, mono.block);
        if (c) return c;
    }
    if (pot) {
        if (ca != cb) return ca < cb ? 1 : -1;
        return omegatr::compare(a, b, mono);
    }
    int c = omegatr::compare(a, b, mono);
    if (c) return c;
    if (ca != cb) return ca < cb ? 1 : -1;
    return 0;
}

ModVec normalize(const Context& ctx, ModVec v) {
    std::sort(v.begin(), v.end(), [&](const ModTerm& x, const ModTerm& y) {
        return ctx.order.compare(x.comp, x.mono, y.comp, y.mono) > 0;
    });
    ModVec out;
    out.reserve(v.size());
    for (auto& t : v) {
        if (!out.empty() && out.back().comp == t.comp && out.back().mono == t.mono) {
            out.back().coeff = ctx.field->add(out.back().coeff, t.coeff);
        } else {
            out.push_back(std::move(t));
        }
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](const ModTerm& t) { return is_zero(t.coeff); }), out.end());
    return out;
}

namespace {

// f[from..] - c * m * g
ModVec sub_mul(const Context& ctx, const ModVec& f, std::size_t from, const Scalar& c, const Monomial& m,
               const ModVec& g) {
    ModVec out;
    out.reserve(f.size() - from + g.size());
    std::size_t i = from, j = 0;
    const Field& k = ctx.field;
    Monomial gm;
    bool have = false;
    while (i < f.size() || j < g.size()) {
        if (j < g.size() && !have) {
            gm = g[j].mono * m;
            have = true;
        }
        int cmp;
        if (i >= f.size())
            cmp = -1;
        else if (j >= g.size())
            cmp = 1;
        else
            cmp = ctx.order.compare(f[i].comp, f[i].mono, g[j].comp, gm);
        if (cmp > 0) {
            out.push_back(f[i++]);
        } else if (cmp < 0) {
            out.push_back(ModTerm{g[j].comp, std::move(gm), k->neg(k->mul(c, g[j].coeff))});
            ++j;
            have = false;
        } else {
            Scalar s = k->sub(f[i].coeff, k->mul(c, g[j].coeff));
            if (!is_zero(s)) out.push_back(ModTerm{f[i].comp, f[i].mono, std::move(s)});
            ++i;
            ++j;
            have = false;
        }
    }
    return out;
}

void make_monic(const Context& ctx, ModVec& v) {
    if (v.empty() || is_one(v.front().coeff)) return;
    Scalar inv = ctx.field->inv(v.front().coeff);
    for (auto& t : v) t.coeff = ctx.field->mul(t.coeff, inv);
}

const ModVec* find_reducer(const ModTerm& t, const std::vector<ModVec>& basis, std::size_t skip = SIZE_MAX) {
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (i == skip) continue;
        const ModTerm& lt = basis[i].front();
        if (lt.comp == t.comp && lt.mono.divides(t.mono)) return &basis[i];
    }
    return nullptr;
}

ModVec reduce_impl(const Context& ctx, ModVec v, const std::vector<ModVec>& basis, std::size_t skip) {
    ModVec result;
    std::size_t head = 0;
    while (head < v.size()) {
        const ModTerm& t = v[head];
        const ModVec* g = find_reducer(t, basis, skip);
        if (!g) {
            result.push_back(t);
            ++head;
            continue;
        }
        Scalar c = ctx.field->div(t.coeff, g->front().coeff);
        Monomial m = g->front().mono.quotient_of(t.mono);
        v = sub_mul(ctx, v, head, c, m, *g);
        head = 0;
    }
    return result;
}

}  // namespace

ModVec reduce(const Context& ctx, ModVec v, const std::vector<ModVec>& basis) {
    return reduce_impl(ctx, std::move(v), basis, SIZE_MAX);
}

namespace {

struct Pair {
    std::size_t i, j;
    std::uint32_t comp;
    Monomial lcm;
};

}  // namespace

std::vector<ModVec> groebner(const Context& ctx, std::vector<ModVec> generators) {
    std::vector<ModVec> basis;
    for (auto& g : generators) {
        ModVec v = normalize(ctx, std::move(g));
        if (v.empty()) continue;
        make_monic(ctx, v);
        basis.push_back(std::move(v));
    }
    const bool ideal_case = std::all_of(basis.begin(), basis.end(), [](const ModVec& v) {
        return std::all_of(v.begin(), v.end(), [](const ModTerm& t) { return t.comp == 0; });
    });

    auto pair_less = [&](const Pair& a, const Pair& b) {
        int c = ctx.order.compare(a.comp, a.lcm, b.comp, b.lcm);
        if (c) return c < 0;
        if (a.j != b.j) return a.j < b.j;
        return a.i < b.i;
    };
    std::set<Pair, decltype(pair_less)> queue(pair_less);
    std::vector<std::vector<char>> pending;

    auto add_pairs = [&](std::size_t n) {
        pending.resize(n + 1);
        for (auto& row : pending) row.resize(n + 1, 0);
        const ModTerm& ln = basis[n].front();
        for (std::size_t i = 0; i < n; ++i) {
            const ModTerm& li = basis[i].front();
            if (li.comp != ln.comp) continue;
            queue.insert(Pair{i, n, ln.comp, li.mono.lcm(ln.mono)});
            pending[i][n] = pending[n][i] = 1;
        }
    };
    for (std::size_t n = 0; n < basis.size(); ++n) add_pairs(n);

    while (!queue.empty()) {
        Pair p = *queue.begin();
        queue.erase(queue.begin());
        pending[p.i][p.j] = pending[p.j][p.i] = 0;

        const ModTerm& lti = basis[p.i].front();
        const ModTerm& ltj = basis[p.j].front();
        if (ideal_case && lti.mono.coprime(ltj.mono)) continue;
        bool chain = false;
        for (std::size_t k = 0; k < basis.size() && !chain; ++k) {
            if (k == p.i || k == p.j) continue;
            const ModTerm& ltk = basis[k].front();
            if (ltk.comp != p.comp || !ltk.mono.divides(p.lcm)) continue;
            if (!pending[p.i][k] && !pending[p.j][k]) chain = true;
        }
        if (chain) continue;

        // S-vector; both leading coefficients are one.
        Monomial mi = lti.mono.quotient_of(p.lcm);
        Monomial mj = ltj.mono.quotient_of(p.lcm);
        ModVec si;
        si.reserve(basis[p.i].size());
        for (const auto& t : basis[p.i]) si.push_back(ModTerm{t.comp, t.mono * mi, t.coeff});
        ModVec s = sub_mul(ctx, si, 0, Scalar{Rational(1)}, mj, basis[p.j]);
        s = reduce_impl(ctx, std::move(s), basis, SIZE_MAX);
        if (s.empty()) continue;
        make_monic(ctx, s);
        basis.push_back(std::move(s));
        add_pairs(basis.size() - 1);
    }

    // Minimalize then interreduce.
    std::vector<ModVec> minimal;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        bool redundant = false;
        for (std::size_t j = 0; j < basis.size() && !redundant; ++j) {
            if (i == j) continue;
            const ModTerm& a = basis[i].front();
            const ModTerm& b = basis[j].front();
            if (a.comp != b.comp || !b.mono.divides(a.mono)) continue;
            redundant = !(a.mono == b.mono) || j < i;
        }
        if (!redundant) minimal.push_back(basis[i]);
    }
    std::vector<ModVec> reduced;
    reduced.reserve(minimal.size());
    for (std::size_t i = 0; i < minimal.size(); ++i) {
        ModVec head{minimal[i].front()};
        ModVec tail(minimal[i].begin() + 1, minimal[i].end());
        ModVec r = reduce_impl(ctx, std::move(tail), minimal, i);
        head.insert(head.end(), r.begin(), r.end());
        reduced.push_back(std::move(head));
    }
    std::sort(reduced.begin(), reduced.end(), [&](const ModVec& a, const ModVec& b) {
        return ctx.order.compare(a.front().comp, a.front().mono, b.front().comp, b.front().mono) < 0;
    });
    return reduced;
}

ModVec from_polys(const Context& ctx, const std::vector<MvPolynomial>& comps, std::uint32_t offset) {
    ModVec v;
    for (std::size_t c = 0; c < comps.size(); ++c)
        for (const auto& t : comps[c].terms()) v.push_back(ModTerm{static_cast<std::uint32_t>(c + offset), t.mono, t.coeff});
    return normalize(ctx, std::move(v));
}

std::vector<MvPolynomial> to_polys(const ModVec& v, const Ring& ring, std::uint32_t first, std::uint32_t count) {
    std::vector<std::vector<Term>> parts(count);
    for (const auto& t : v) {
        if (t.comp < first || t.comp >= first + count) continue;
        parts[t.comp - first].push_back(Term{t.mono, t.coeff});
    }
    std::vector<MvPolynomial> out;
    out.reserve(count);
    for (auto& p : parts) out.push_back(MvPolynomial::from_terms(ring, std::move(p)));
    return out;
}

}  // namespace omegatr::gb
