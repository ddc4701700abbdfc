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

#include "omegatr/modules.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "omegatr/groebner.hpp"

namespace omegatr {

Vector zero_vector(const Ring& ring, std::size_t n) { return Vector(n, MvPolynomial(ring)); }

Vector unit_vector(const Ring& ring, std::size_t n, std::size_t i) {
    Vector v = zero_vector(ring, n);
    v.at(i) = MvPolynomial::constant(ring, Rational(1));
    return v;
}

Vector add(const Vector& a, const Vector& b) {
    Vector r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += b.at(i);
    return r;
}

Vector sub(const Vector& a, const Vector& b) {
    Vector r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b.at(i);
    return r;
}

Vector scale(const MvPolynomial& c, const Vector& v) {
    Vector r;
    r.reserve(v.size());
    for (const auto& x : v) r.push_back(c * x);
    return r;
}

bool is_zero(const Vector& v) {
    return std::all_of(v.begin(), v.end(), [](const MvPolynomial& p) { return p.is_zero(); });
}

namespace {

Vector reduce_entries(const Quotient& ring, const Vector& v) {
    Vector r;
    r.reserve(v.size());
    for (const auto& x : v) r.push_back(ring->reduce(x.in_ring(ring->ring())));
    return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Linear systems

struct LinearSystem::Impl {
    gb::Context ctx;
    std::vector<gb::ModVec> basis;
};

LinearSystem::LinearSystem(Quotient ring, std::size_t n, std::vector<Vector> generators, std::vector<Vector> relations,
                           bool restrict)
    : ring_(std::move(ring)), n_(n), m_(generators.size()), restrict_(restrict) {
    const Ring& r = ring_->ring();
    gb::ModuleOrder order{r->order(), static_cast<std::uint32_t>(n), true, restrict};
    gb::Context ctx{r->field(), r->nvars(), order};
    std::vector<gb::ModVec> gens;
    for (std::size_t j = 0; j < m_; ++j) {
        if (generators[j].size() != n) raise(ErrorKind::InvalidArgument, "generator has the wrong length");
        auto v = gb::from_polys(ctx, reduce_entries(ring_, generators[j]));
        v.push_back(gb::ModTerm{static_cast<std::uint32_t>(n + j), Monomial(r->nvars()), Scalar{Rational(1)}});
        gens.push_back(gb::normalize(ctx, std::move(v)));
    }
    for (const auto& rel : relations) {
        if (rel.size() != n) raise(ErrorKind::InvalidArgument, "relation has the wrong length");
        gens.push_back(gb::from_polys(ctx, reduce_entries(ring_, rel)));
    }
    for (const auto& p : ring_->gb().polys())
        for (std::size_t c = 0; c < n + m_; ++c) {
            gb::ModVec v;
            for (const auto& t : p.terms()) v.push_back(gb::ModTerm{static_cast<std::uint32_t>(c), t.mono, t.coeff});
            gens.push_back(std::move(v));
        }
    auto impl = std::make_shared<Impl>(Impl{ctx, {}});
    impl->basis = gb::groebner(ctx, std::move(gens));
    impl_ = std::move(impl);
}

namespace {

bool free_of_block(const gb::ModVec& v, std::uint32_t block) {
    for (const auto& t : v)
        for (std::uint32_t i = 0; i < block; ++i)
            if (t.mono[i]) return false;
    return true;
}

}  // namespace

std::vector<Vector> LinearSystem::syzygies() const {
    const Ring& r = ring_->ring();
    const std::uint32_t block = restrict_ ? r->order().block : 0;
    std::vector<Vector> out;
    for (const auto& v : impl_->basis) {
        if (v.front().comp < n_) continue;
        if (block && !free_of_block(v, block)) continue;
        Vector c = reduce_entries(ring_, gb::to_polys(v, r, static_cast<std::uint32_t>(n_), static_cast<std::uint32_t>(m_)));
        if (!omegatr::is_zero(c)) out.push_back(std::move(c));
    }
    return out;
}

std::optional<Vector> LinearSystem::lift(const Vector& w) const {
    const Ring& r = ring_->ring();
    auto rem = gb::reduce(impl_->ctx, gb::from_polys(impl_->ctx, reduce_entries(ring_, w)), impl_->basis);
    for (const auto& t : rem)
        if (t.comp < n_) return std::nullopt;
    if (restrict_ && !free_of_block(rem, r->order().block)) return std::nullopt;
    Vector c = gb::to_polys(rem, r, static_cast<std::uint32_t>(n_), static_cast<std::uint32_t>(m_));
    for (auto& x : c) x = ring_->reduce(-x);
    return c;
}

bool LinearSystem::in_span(const Vector& w) const {
    auto rem = gb::reduce(impl_->ctx, gb::from_polys(impl_->ctx, reduce_entries(ring_, w)), impl_->basis);
    for (const auto& t : rem)
        if (t.comp < n_) return false;
    return true;
}

Vector LinearSystem::normal_form(const Vector& w) const {
    auto rem = gb::reduce(impl_->ctx, gb::from_polys(impl_->ctx, reduce_entries(ring_, w)), impl_->basis);
    return gb::to_polys(rem, ring_->ring(), 0, static_cast<std::uint32_t>(n_));
}

// ---------------------------------------------------------------------------
// Presented modules

PresentedModule::PresentedModule(Quotient ring, std::size_t ngens, std::vector<Vector> relations,
                                 std::vector<std::string> names)
    : ring_(std::move(ring)), ngens_(ngens), names_(std::move(names)),
      system_(std::make_shared<std::shared_ptr<const LinearSystem>>()) {
    if (names_.empty())
        for (std::size_t i = 0; i < ngens_; ++i) names_.push_back("e" + std::to_string(i + 1));
    if (names_.size() != ngens_) raise(ErrorKind::InvalidArgument, "generator names do not match the rank");
    std::vector<std::pair<std::string, Vector>> rows;
    for (auto& rel : relations) {
        if (rel.size() != ngens_) raise(ErrorKind::InvalidArgument, "relation has the wrong length");
        Vector v = reduce_entries(ring_, rel);
        if (omegatr::is_zero(v)) continue;
        rows.emplace_back(format(v), std::move(v));
    }
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    rows.erase(std::unique(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first == b.first; }),
               rows.end());
    for (auto& r : rows) relations_.push_back(std::move(r.second));
}

PresentedModule PresentedModule::free(Quotient ring, std::size_t n, std::vector<std::string> names) {
    return PresentedModule(std::move(ring), n, {}, std::move(names));
}

const LinearSystem& PresentedModule::system() const {
    static std::mutex mutex;
    std::lock_guard lock(mutex);
    if (!*system_) *system_ = std::make_shared<const LinearSystem>(ring_, ngens_, std::vector<Vector>{}, relations_);
    return **system_;
}

bool PresentedModule::is_zero(const Vector& v) const {
    Vector r = reduce_entries(ring_, v);
    if (omegatr::is_zero(r)) return true;
    if (relations_.empty()) return false;
    return system().in_span(r);
}

Vector PresentedModule::reduce(const Vector& v) const {
    if (relations_.empty()) return reduce_entries(ring_, v);
    return reduce_entries(ring_, system().normal_form(v));
}

bool PresentedModule::is_zero_module() const {
    for (std::size_t i = 0; i < ngens_; ++i)
        if (!is_zero(generator(i))) return false;
    return true;
}

std::string PresentedModule::format(const Vector& v) const {
    std::string out;
    const auto& k = *ring_->field();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const MvPolynomial& c = v[i];
        if (c.is_zero()) continue;
        bool single = c.terms().size() == 1;
        bool negative = single && is_negative_monomial(c.terms()[0].coeff);
        if (out.empty())
            out += negative ? "-" : "";
        else
            out += negative ? " - " : " + ";
        MvPolynomial a = negative ? -c : c;
        std::string text = a.to_string();
        if (!single) {
            out += "(" + text + ")*" + names_[i];
        } else if (a.is_constant() && is_one(a.terms()[0].coeff)) {
            out += names_[i];
        } else {
            out += text + "*" + names_[i];
        }
    }
    (void)k;
    return out.empty() ? "0" : out;
}

std::string PresentedModule::to_string() const {
    std::string s = "generators: ";
    for (std::size_t i = 0; i < ngens_; ++i) s += (i ? ", " : "") + names_[i];
    if (ngens_ == 0) s += "none";
    s += "; relations: ";
    for (std::size_t i = 0; i < relations_.size(); ++i) s += (i ? ", " : "") + format(relations_[i]);
    if (relations_.empty()) s += "none";
    return s;
}

// ---------------------------------------------------------------------------
// Maps

ModuleMap::ModuleMap(PresentedModule source, PresentedModule target, std::vector<Vector> images,
                     std::optional<RingHom> twist)
    : source_(std::move(source)), target_(std::move(target)), twist_(std::move(twist)) {
    if (images.size() != source_.ngens()) raise(ErrorKind::InvalidArgument, "one image per source generator required");
    if (twist_) {
        if (!twist_->verified()) raise(ErrorKind::ActionNotVerified, "twisting homomorphism is not verified");
        if (!twist_->source()->ring()->same_as(*source_.ring()->ring()) ||
            !twist_->target()->ring()->same_as(*target_.ring()->ring()))
            raise(ErrorKind::TwistMismatch, "twist does not connect the module rings");
    } else if (!source_.ring()->ring()->same_as(*target_.ring()->ring())) {
        raise(ErrorKind::RingMismatch, "linear map between modules over different rings");
    }
    for (auto& im : images) {
        if (im.size() != target_.ngens()) raise(ErrorKind::InvalidArgument, "image has the wrong length");
        images_.push_back(reduce_entries(target_.ring(), im));
    }
    for (const auto& rel : source_.relations()) {
        Vector im = apply(rel);
        if (!target_.is_zero(im))
            raise(ErrorKind::InvalidArgument, "map is not well defined: relation " + source_.format(rel) + " maps to " +
                                                  target_.format(im));
    }
}

Vector ModuleMap::apply(const Vector& v) const {
    const Ring& tr = target_.ring()->ring();
    Vector out = zero_vector(tr, target_.ngens());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i].is_zero()) continue;
        MvPolynomial c = twist_ ? twist_->apply(v[i]) : v[i].in_ring(tr);
        out = add(out, scale(c, images_[i]));
    }
    return reduce_entries(target_.ring(), out);
}

ModuleMap ModuleMap::after(const ModuleMap& first) const {
    if (first.target_.ngens() != source_.ngens() ||
        !first.target_.ring()->ring()->same_as(*source_.ring()->ring()))
        raise(ErrorKind::TwistMismatch, "maps do not compose");
    std::optional<RingHom> tw;
    if (twist_ && first.twist_) {
        tw = twist_->after(*first.twist_);
    } else if (twist_ || first.twist_) {
        const RingHom& t = twist_ ? *twist_ : *first.twist_;
        tw = t;
    }
    std::vector<Vector> images;
    for (const auto& im : first.images_) images.push_back(apply(im));
    return ModuleMap(first.source_, target_, std::move(images), std::move(tw));
}

bool ModuleMap::is_zero() const {
    return std::all_of(images_.begin(), images_.end(), [&](const Vector& v) { return target_.is_zero(v); });
}

bool ModuleMap::is_surjective() const {
    if (!is_linear()) raise(ErrorKind::TwistMismatch, "surjectivity test needs a linear map");
    LinearSystem sys(target_.ring(), target_.ngens(), images_, target_.relations());
    for (std::size_t i = 0; i < target_.ngens(); ++i)
        if (!sys.in_span(target_.generator(i))) return false;
    return true;
}

bool ModuleMap::is_injective() const {
    Submodule k = kernel(*this);
    return std::all_of(k.elements.begin(), k.elements.end(), [&](const Vector& v) { return source_.is_zero(v); });
}

// ---------------------------------------------------------------------------
// Kernels, Hom, biduals

namespace {

// Drops elements that are zero or lie in the span of the others.
std::vector<Vector> prune(const PresentedModule& M, std::vector<Vector> elements) {
    std::vector<Vector> kept;
    for (auto& e : elements) {
        if (M.is_zero(e)) continue;
        bool dup = std::any_of(kept.begin(), kept.end(), [&](const Vector& k) { return M.equal(k, e); });
        if (!dup) kept.push_back(std::move(e));
    }
    if (kept.size() > 40) return kept;
    for (std::size_t i = kept.size(); i-- > 0;) {
        std::vector<Vector> others;
        for (std::size_t j = 0; j < kept.size(); ++j)
            if (j != i) others.push_back(kept[j]);
        LinearSystem sys(M.ring(), M.ngens(), others, M.relations());
        if (sys.in_span(kept[i])) kept.erase(kept.begin() + static_cast<long>(i));
    }
    return kept;
}

std::vector<std::string> numbered(const std::string& prefix, std::size_t n) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back(prefix + std::to_string(i + 1));
    return names;
}

}  // namespace

Submodule submodule(const PresentedModule& M, std::vector<Vector> elements, const std::string& prefix) {
    std::vector<Vector> kept = prune(M, std::move(elements));
    for (auto& v : kept) v = M.reduce(v);
    LinearSystem sys(M.ring(), M.ngens(), kept, M.relations());
    PresentedModule module(M.ring(), kept.size(), sys.syzygies(), numbered(prefix, kept.size()));
    return Submodule{std::move(module), std::move(kept)};
}

Submodule kernel(const ModuleMap& map) {
    if (!map.is_linear()) raise(ErrorKind::TwistMismatch, "kernel of a semilinear map");
    LinearSystem sys(map.target().ring(), map.target().ngens(), map.images(), map.target().relations());
    return submodule(map.source(), sys.syzygies(), "k");
}

ModuleMap HomModule::decode(std::size_t l) const { return ModuleMap(source, target, maps.at(l)); }

HomModule hom_module(const PresentedModule& M, const PresentedModule& N) {
    if (!M.ring()->ring()->same_as(*N.ring()->ring())) raise(ErrorKind::RingMismatch, "Hom between different rings");
    const Quotient& R = M.ring();
    const Ring& P = R->ring();
    const std::size_t g = M.ngens(), k = N.ngens(), L = M.relations().size();

    // Unknown phi in N^g, flattened as (i, a) -> i*k + a; condition: the image
    // of every relation of M lies in the relations of N.
    std::vector<Vector> gens;
    for (std::size_t i = 0; i < g; ++i)
        for (std::size_t a = 0; a < k; ++a) {
            Vector v = zero_vector(P, k * L);
            for (std::size_t l = 0; l < L; ++l) v[l * k + a] = M.relations()[l][i];
            gens.push_back(std::move(v));
        }
    std::vector<Vector> target_rels, ambient_rels;
    for (std::size_t l = 0; l < L; ++l)
        for (const auto& rel : N.relations()) {
            Vector v = zero_vector(P, k * L);
            for (std::size_t a = 0; a < k; ++a) v[l * k + a] = rel[a];
            target_rels.push_back(std::move(v));
        }
    for (std::size_t i = 0; i < g; ++i)
        for (const auto& rel : N.relations()) {
            Vector v = zero_vector(P, k * g);
            for (std::size_t a = 0; a < k; ++a) v[i * k + a] = rel[a];
            ambient_rels.push_back(std::move(v));
        }
    std::vector<Vector> syz;
    if (L == 0) {
        for (std::size_t j = 0; j < g * k; ++j) syz.push_back(unit_vector(P, g * k, j));
    } else {
        syz = LinearSystem(R, k * L, gens, target_rels).syzygies();
    }
    PresentedModule ambient(R, g * k, ambient_rels);
    Submodule sub = submodule(ambient, std::move(syz), "phi");
    std::vector<std::vector<Vector>> maps;
    for (const auto& v : sub.elements) {
        std::vector<Vector> images;
        for (std::size_t i = 0; i < g; ++i) images.emplace_back(v.begin() + static_cast<long>(i * k), v.begin() + static_cast<long>((i + 1) * k));
        maps.push_back(std::move(images));
    }
    return HomModule{std::move(sub.module), std::move(maps), M, N};
}

BidualData bidual_data(const PresentedModule& M) {
    const Quotient& R = M.ring();
    const Ring& P = R->ring();
    auto one = PresentedModule::free(R, 1, {"1"});
    HomModule dual = hom_module(M, one);
    std::vector<Vector> functionals;
    for (const auto& m : dual.maps) {
        Vector row;
        for (const auto& im : m) row.push_back(im[0]);
        functionals.push_back(std::move(row));
    }
    PresentedModule dmod(R, dual.module.ngens(), dual.module.relations(), numbered("phi", dual.module.ngens()));
    HomModule bi = hom_module(dmod, one);
    std::vector<Vector> bifunctionals;
    for (const auto& m : bi.maps) {
        Vector row;
        for (const auto& im : m) row.push_back(im[0]);
        bifunctionals.push_back(std::move(row));
    }
    PresentedModule bmod(R, bi.module.ngens(), bi.module.relations(), numbered("psi", bi.module.ngens()));

    // nat(e_i) = (phi_j(e_i))_j, written in the bidual generators.
    const std::size_t s = functionals.size();
    LinearSystem span(R, s, bifunctionals, {});
    std::vector<Vector> images;
    for (std::size_t i = 0; i < M.ngens(); ++i) {
        Vector ev(s, MvPolynomial(P));
        for (std::size_t j = 0; j < s; ++j) ev[j] = functionals[j][i];
        auto c = span.lift(ev);
        if (!c) raise(ErrorKind::CheckFailed, "evaluation at " + M.names()[i] + " is not in the bidual");
        images.push_back(std::move(*c));
    }
    ModuleMap nat(M, bmod, std::move(images));
    return BidualData{std::move(dmod), std::move(functionals), std::move(bmod), std::move(bifunctionals), std::move(nat)};
}

// ---------------------------------------------------------------------------
// Restriction of scalars

RestrictedSpan::RestrictedSpan(const RingHom& base, const PresentedModule& M, std::vector<Vector> elements)
    : base_(base), combined_(combine(base)), m_(elements.size()) {
    if (!M.ring()->ring()->same_as(*base.target()->ring()))
        raise(ErrorKind::RingMismatch, "module is not over the target of the base map");
    auto embed = [&](const Vector& v) {
        Vector r;
        for (const auto& x : v) r.push_back(combined_.from_target(x.in_ring(base.target()->ring())));
        return r;
    };
    std::vector<Vector> gens, rels;
    for (const auto& e : elements) gens.push_back(embed(e));
    for (const auto& r : M.relations()) rels.push_back(embed(r));
    system_ = std::make_shared<const LinearSystem>(combined_.ring, M.ngens(), std::move(gens), std::move(rels), true);
}

std::optional<Vector> RestrictedSpan::lift(const Vector& w) const {
    Vector e;
    for (const auto& x : w) e.push_back(combined_.from_target(x.in_ring(base_.target()->ring())));
    auto c = system_->lift(e);
    if (!c) return std::nullopt;
    Vector out;
    for (const auto& x : *c) out.push_back(combined_.to_source(x, base_.source()));
    return out;
}

std::vector<Vector> RestrictedSpan::relations() const {
    std::vector<Vector> out;
    for (const auto& s : system_->syzygies()) {
        Vector r;
        for (const auto& x : s) r.push_back(combined_.to_source(x, base_.source()));
        if (!omegatr::is_zero(r)) out.push_back(std::move(r));
    }
    return out;
}

InvariantModule invariants(const PresentedModule& M, const std::vector<ModuleMap>& action, const RingHom& base,
                           const std::vector<MvPolynomial>& generators) {
    if (generators.empty()) raise(ErrorKind::NotModuleFinite, "no module generators over the base were supplied");
    const Quotient& B = M.ring();
    const Ring& PB = B->ring();
    for (const auto& g : action) {
        if (!g.twist() || !g.twist()->verified())
            raise(ErrorKind::ActionNotVerified, "action map without a verified twist");
        if (g.source().ngens() != M.ngens() || g.target().ngens() != M.ngens())
            raise(ErrorKind::ActionNotVerified, "action map does not act on the module");
        if (!g.twist()->after(base).equals(base))
            raise(ErrorKind::ActionNotVerified, "group element " + g.twist()->to_string() + " is not over the base");
    }
    const std::size_t gn = M.ngens(), G = action.size();
    CombinedRing C = combine(base);
    auto embed = [&](const Vector& v) {
        Vector r;
        for (const auto& x : v) r.push_back(C.from_target(x.in_ring(PB)));
        return r;
    };
    std::vector<Vector> gens;
    for (const auto& b : generators)
        for (std::size_t j = 0; j < gn; ++j) {
            Vector v;
            for (const auto& g : action) {
                Vector d = sub(scale(g.twist()->apply(b), g.images()[j]), scale(B->reduce(b.in_ring(PB)), M.generator(j)));
                v.insert(v.end(), d.begin(), d.end());
            }
            gens.push_back(embed(v));
        }
    std::vector<Vector> rels;
    for (std::size_t gi = 0; gi < G; ++gi)
        for (const auto& rel : M.relations()) {
            Vector v = zero_vector(PB, gn * G);
            for (std::size_t a = 0; a < gn; ++a) v[gi * gn + a] = rel[a];
            rels.push_back(embed(v));
        }
    std::vector<Vector> elements;
    if (G == 0) {
        for (const auto& b : generators)
            for (std::size_t j = 0; j < gn; ++j) elements.push_back(scale(B->reduce(b.in_ring(PB)), M.generator(j)));
    } else {
        LinearSystem sys(C.ring, gn * G, std::move(gens), std::move(rels), true);
        for (const auto& c : sys.syzygies()) {
            Vector e = M.zero();
            std::size_t idx = 0;
            for (const auto& b : generators)
                for (std::size_t j = 0; j < gn; ++j, ++idx) {
                    MvPolynomial coeff = base.apply(C.to_source(c[idx], base.source())) * B->reduce(b.in_ring(PB));
                    e[j] += coeff;
                }
            elements.push_back(M.reduce(e));
        }
    }
    // Prune over A: drop zeros and members of the span of the rest.
    std::vector<Vector> kept;
    for (auto& e : elements)
        if (!M.is_zero(e)) kept.push_back(std::move(e));
    for (std::size_t i = kept.size(); i-- > 0 && kept.size() <= 40;) {
        std::vector<Vector> others;
        for (std::size_t j = 0; j < kept.size(); ++j)
            if (j != i) others.push_back(kept[j]);
        if (!others.empty() && RestrictedSpan(base, M, others).contains(kept[i]))
            kept.erase(kept.begin() + static_cast<long>(i));
    }
    RestrictedSpan span(base, M, kept);
    PresentedModule module(base.source(), kept.size(), span.relations(), numbered("v", kept.size()));
    return InvariantModule{std::move(module), std::move(kept)};
}

Ideal denominator_ideal(const Vector& numerators, const MvPolynomial& denominator, const PresentedModule& M) {
    const Quotient& R = M.ring();
    const Ring& P = R->ring();
    MvPolynomial h = denominator.in_ring(P);
    if (R->is_zero(h)) raise(ErrorKind::ZeroDenominator, "denominator " + denominator.to_string() + " is zero");
    std::vector<Vector> rels = M.relations();
    for (std::size_t i = 0; i < M.ngens(); ++i) rels.push_back(scale(h, M.generator(i)));
    LinearSystem sys(R, M.ngens(), {numerators}, rels);
    std::vector<MvPolynomial> gens;
    for (const auto& s : sys.syzygies()) gens.push_back(s[0]);
    for (const auto& p : R->relations()) gens.push_back(p);
    auto gb = groebner(Ideal{P, gens});
    return Ideal{P, gb.polys()};
}

}  // namespace omegatr
