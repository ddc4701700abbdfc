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

#include "omegatr/descent.hpp"

#include <algorithm>

namespace omegatr {

bool CoverReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

namespace {

std::size_t identity_position(const GaloisCoverDatum& d) {
    auto id = RingHom::identity(d.total->ring());
    for (std::size_t i = 0; i < d.group.size(); ++i)
        if (d.group[i].equals(id)) return i;
    raise(ErrorKind::GroupNotClosed, "the identity is not among the listed automorphisms");
}

}  // namespace

CoverReport verify_cover(const GaloisCoverDatum& d, const RankOptions& options) {
    CoverReport report;
    const Quotient& A = d.base->ring();
    const Quotient& B = d.total->ring();
    if (!d.inclusion.source()->ring()->same_as(*A->ring()) || !d.inclusion.target()->ring()->same_as(*B->ring()))
        raise(ErrorKind::RingMismatch, "inclusion does not map " + d.base->name() + " to " + d.total->name());
    RingHom inc = check_hom(d.inclusion);
    report.checks.push_back({"inclusion", true, inc.to_string()});

    for (std::size_t i = 0; i < d.group.size(); ++i) {
        const RingHom& g = d.group[i];
        check_hom(g);
        if (!g.after(inc).equals(inc))
            raise(ErrorKind::HomNotOverBase, "automorphism " + std::to_string(i) + " (" + g.to_string() +
                                                 ") moves the base");
    }
    report.checks.push_back({"automorphisms over base", true, std::to_string(d.group.size()) + " maps"});

    identity_position(d);
    for (std::size_t i = 0; i < d.group.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (d.group[i].equals(d.group[j]))
                raise(ErrorKind::GroupNotClosed, "automorphisms " + std::to_string(j) + " and " + std::to_string(i) +
                                                     " coincide");
    for (std::size_t i = 0; i < d.group.size(); ++i)
        for (std::size_t j = 0; j < d.group.size(); ++j) {
            RingHom c = d.group[i].after(d.group[j]);
            bool found = std::any_of(d.group.begin(), d.group.end(), [&](const RingHom& g) { return g.equals(c); });
            if (!found)
                raise(ErrorKind::GroupNotClosed, "composite of automorphisms " + std::to_string(i) + " and " +
                                                     std::to_string(j) + " (" + c.to_string() + ") is not listed");
        }
    report.checks.push_back({"group closed", true, "order " + std::to_string(d.group.size())});

    report.rank = generic_rank(inc, options);
    if (report.rank != static_cast<long>(d.group.size()))
        raise(ErrorKind::RankMismatch, "group of order " + std::to_string(d.group.size()) + " but generic rank " +
                                           std::to_string(report.rank));
    report.checks.push_back({"order equals rank", true, "rank " + std::to_string(report.rank)});

    const Ring& PB = B->ring();
    std::vector<Vector> gens;
    for (const auto& b : d.generators) gens.push_back({b.in_ring(PB)});
    RestrictedSpan span(inc, PresentedModule::free(B, 1), gens);
    std::vector<MvPolynomial> targets{MvPolynomial::constant(PB, Rational(1))};
    for (std::size_t j = 0; j < B->nvars(); ++j) targets.push_back(B->var(j));
    for (const auto& t : targets)
        if (!span.contains({t}))
            raise(ErrorKind::NotModuleFinite, t.to_string() + " is not in the span of the given generators");
    report.checks.push_back({"generators span", true, std::to_string(d.generators.size()) + " generators"});
    return report;
}

GaloisCoverDatum make_cover(Variety base, Variety total, RingHom inclusion, std::vector<RingHom> group,
                            std::vector<MvPolynomial> generators, const RankOptions& options) {
    GaloisCoverDatum d{std::move(base), std::move(total), std::move(inclusion), std::move(group), std::move(generators)};
    verify_cover(d, options);
    d.inclusion = check_hom(d.inclusion);
    for (auto& g : d.group) g = check_hom(g);
    if (!d.total->base()) d.total = AffineVariety::make(d.total->name(), d.total->ring(), d.total->flags(), d.inclusion);
    return d;
}

PForm average(const PForm& w, const GaloisCoverDatum& d) {
    PForm sum(w.ring(), w.degree());
    for (const auto& g : d.group) sum = sum + pullback(g, w);
    const Ring& P = w.ring()->ring();
    return sum.scaled(MvPolynomial::constant(P, Rational(1, static_cast<long>(d.group.size()))));
}

Fraction descend_function(const Fraction& f, const GaloisCoverDatum& d) {
    const Quotient& B = d.total->ring();
    const Quotient& A = d.base->ring();
    MvPolynomial num = f.num, den = f.den;
    if (!den.is_constant()) {
        // Multiply through by the conjugates of the denominator to make it invariant.
        std::size_t id = identity_position(d);
        for (std::size_t i = 0; i < d.group.size(); ++i) {
            if (i == id) continue;
            MvPolynomial c = d.group[i].apply(f.den);
            num = B->reduce(num * c);
            den = B->reduce(den * c);
        }
    }
    auto a = preimage(d.inclusion, num);
    auto b = preimage(d.inclusion, den);
    if (!a || !b)
        raise(ErrorKind::NotDescendable, "(" + f.num.to_string() + ")/(" + f.den.to_string() +
                                             ") is not a function on " + d.base->name());
    return FractionField(A).make(*a, *b);
}

namespace {

// An invariant generic form on W written over X.
PForm descend_invariant(const PForm& avg, const GaloisCoverDatum& d, const Frame& frame) {
    const Quotient& A = d.base->ring();
    std::vector<std::size_t> T = A->independent_set();
    PForm out(A, avg.degree());
    for (const auto& [J, c] : coordinates(avg, frame)) {
        PForm::Index I;
        for (auto j : J) I.push_back(static_cast<std::uint32_t>(T[j]));
        out.add_term(I, descend_function(c, d));
    }
    return out;
}

}  // namespace

PForm descend_generic(const PForm& w, const GaloisCoverDatum& d) {
    return descend_invariant(average(w, d), d, relative_frame(d.inclusion, *d.total));
}

PForm descend(const PForm& w, const GaloisCoverDatum& d) {
    PForm v = descend_generic(w, d);
    auto r = regularity(v, *d.base);
    if (!r.regular) {
        std::string ideal;
        for (const auto& g : r.denominators.generators) ideal += (ideal.empty() ? "" : ", ") + g.to_string();
        raise(ErrorKind::NotRegular, "descended form " + v.to_string() + " has denominator ideal (" + ideal + ")");
    }
    return *r.certificate;
}

InvariantModule invariant_forms(const GaloisCoverDatum& d, int p, bool relative) {
    Variety W = d.total;
    if (relative && !W->base()) W = AffineVariety::make(W->name(), W->ring(), W->flags(), d.inclusion);
    OmegaModule om = omega(*W, p, relative);
    std::vector<ModuleMap> action;
    for (const auto& g : d.group) {
        RingHom gv = g.verified() ? g : check_hom(g);
        std::vector<Vector> images;
        for (std::size_t i = 0; i < om.module.ngens(); ++i)
            images.push_back(om.to_vector(pullback(gv, om.to_form(om.module.generator(i)))));
        action.emplace_back(om.module, om.module, std::move(images), gv);
    }
    RingHom inc = d.inclusion.verified() ? d.inclusion : check_hom(d.inclusion);
    return invariants(om.module, action, inc, d.generators);
}

namespace {

// Generic forms representing the bidual generators: psi(phi_j) = phi_j(v).
std::vector<PForm> bidual_representatives(const OmegaModule& om, const BidualData& bd) {
    FractionField F(om.ring);
    std::vector<std::vector<Fraction>> M;
    for (const auto& phi : bd.functionals) {
        std::vector<Fraction> row;
        for (const auto& e : phi) row.push_back(F.make(e));
        M.push_back(std::move(row));
    }
    std::vector<PForm> out;
    for (const auto& psi : bd.bifunctionals) {
        std::vector<Fraction> rhs;
        for (const auto& e : psi) rhs.push_back(F.make(e));
        auto v = M.empty() ? std::optional<std::vector<Fraction>>(std::vector<Fraction>(om.module.ngens(), F.zero()))
                           : solve_linear(F, M, rhs);
        if (!v) raise(ErrorKind::CheckFailed, "bidual element without a generic representative");
        PForm w(om.ring, om.degree);
        for (std::size_t i = 0; i < v->size(); ++i) w.add_term(om.index_sets[i], (*v)[i]);
        out.push_back(std::move(w));
    }
    return out;
}

// First functional taking a non-regular value on w, if any.
std::optional<std::string> outside_bidual(const PForm& w, const OmegaModule& om, const BidualData& bd) {
    FractionField F(om.ring);
    for (std::size_t k = 0; k < bd.functionals.size(); ++k) {
        Fraction value = F.zero();
        for (const auto& [I, c] : w.terms()) {
            auto it = std::find(om.index_sets.begin(), om.index_sets.end(), I);
            auto pos = static_cast<std::size_t>(it - om.index_sets.begin());
            value = F.add(value, F.mul(F.make(bd.functionals[k][pos]), c));
        }
        if (!is_regular_function(value, om.ring))
            return bd.dual.names()[k] + " takes the value " + F.to_string(value);
    }
    return std::nullopt;
}

}  // namespace

BidualReport bidual_descent_check(const GaloisCoverDatum& d, int p) {
    BidualReport report;
    OmegaModule oX = omega(*d.base, p), oW = omega(*d.total, p);
    BidualData bX = bidual_data(oX.module), bW = bidual_data(oW.module);
    std::vector<PForm> repX = bidual_representatives(oX, bX), repW = bidual_representatives(oW, bW);
    report.base_generators = repX.size();

    for (const auto& v : repX) {
        PForm u = pullback(d.inclusion, v);
        if (auto bad = outside_bidual(u, oW, bW))
            raise(ErrorKind::CheckFailed, "pullback of " + v.to_string() + " leaves the bidual on " +
                                              d.total->name() + ": " + *bad);
    }
    report.into_invariants = true;

    Frame frame = relative_frame(d.inclusion, *d.total);
    for (const auto& b : d.generators)
        for (const auto& w : repW) {
            PForm avg = average(w.scaled(b.in_ring(d.total->ring()->ring())), d);
            if (avg.is_zero()) continue;
            ++report.invariant_generators;
            PForm v = descend_invariant(avg, d, frame);
            if (auto bad = outside_bidual(v, oX, bX))
                raise(ErrorKind::CheckFailed, "invariant element " + avg.to_string() + " descends to " +
                                                  v.to_string() + " outside the bidual on " + d.base->name() + ": " +
                                                  *bad);
        }
    report.onto_invariants = true;
    return report;
}

}  // namespace omegatr
