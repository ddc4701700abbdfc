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

#include "omegatr/transfer.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace omegatr {

namespace {

void require_same(const Quotient& a, const Quotient& b, const std::string& what) {
    if (!a->ring()->same_as(*b->ring())) raise(ErrorKind::RingMismatch, what);
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
    return out;
}

std::string ring_key(const Quotient& R) {
    std::vector<std::string> polys;
    for (const auto& p : R->gb().polys()) polys.push_back(p.to_string());
    return "[" + join(R->ring()->vars(), ", ") + " | " + join(polys, ", ") + "]";
}

PForm regular_representative(const PForm& w, const Variety& X) {
    if (w.is_polynomial()) return w;
    auto r = regularity(w, *X);
    if (!r.regular) raise(ErrorKind::NotRegular, w.to_string() + " is not regular on " + X->name());
    return *r.certificate;
}

}  // namespace

PrimeCorrespondence make_prime(Variety source, Variety target, Variety component, RingHom to_source, RingHom to_target,
                               GaloisCoverDatum witness, std::vector<RingHom> homs, const RankOptions& options) {
    require_same(to_source.source(), source->ring(), "first projection does not start at " + source->name());
    require_same(to_source.target(), component->ring(), "first projection does not land in " + component->name());
    require_same(to_target.source(), target->ring(), "second projection does not start at " + target->name());
    require_same(to_target.target(), component->ring(), "second projection does not land in " + component->name());
    require_same(witness.base->ring(), source->ring(), "witness cover is not over " + source->name());
    PrimeCorrespondence c{std::move(source),          std::move(target),  std::move(component),
                          check_hom(to_source),       check_hom(to_target), std::move(witness), {}};
    for (std::size_t i = 0; i < homs.size(); ++i) {
        const RingHom& q = homs[i];
        if (!q.source()->ring()->same_as(*c.component->ring()->ring()) ||
            !q.target()->ring()->same_as(*c.witness.total->ring()->ring()))
            raise(ErrorKind::WitnessInvalid, "witness map " + std::to_string(i) + " does not go from " +
                                                 c.component->name() + " to the cover");
        RingHom checked = [&] {
            try {
                return check_hom(q);
            } catch (const Error& e) {
                raise(ErrorKind::WitnessInvalid, "witness map " + std::to_string(i) + ": " + e.what());
            }
        }();
        if (!checked.after(c.to_source).equals(c.witness.inclusion))
            raise(ErrorKind::WitnessInvalid, "witness map " + std::to_string(i) + " (" + q.to_string() +
                                                 ") is not over " + c.source->name());
        for (std::size_t j = 0; j < c.homs.size(); ++j)
            if (c.homs[j].equals(checked))
                raise(ErrorKind::WitnessInvalid, "witness maps " + std::to_string(j) + " and " + std::to_string(i) +
                                                     " coincide");
        c.homs.push_back(std::move(checked));
    }
    long degree = generic_rank(c.to_source, options);
    if (degree != static_cast<long>(c.homs.size()))
        raise(ErrorKind::WitnessInvalid, std::to_string(c.homs.size()) + " witness maps but " + c.component->name() +
                                             " has degree " + std::to_string(degree) + " over " + c.source->name());
    return c;
}

PrimeCorrespondence graph(Variety source, Variety target, const RingHom& f) {
    const Quotient& A = source->ring();
    auto id = RingHom::identity(A);
    auto cover = make_cover(source, source, id, {id}, {MvPolynomial::constant(A->ring(), Rational(1))});
    return make_prime(source, std::move(target), source, id, f, std::move(cover), {id});
}

std::string component_ideal(const PrimeCorrespondence& c) {
    const Quotient& A1 = c.source->ring();
    const Quotient& A2 = c.target->ring();
    std::vector<std::string> names = A1->ring()->vars();
    std::set<std::string> taken(names.begin(), names.end());
    for (auto v : A2->ring()->vars()) {
        while (taken.count(v)) v += "'";
        taken.insert(v);
        names.push_back(v);
    }
    Ring P = PolyRing::make(A1->field(), names);
    std::vector<MvPolynomial> first, second;
    for (std::size_t i = 0; i < A1->nvars(); ++i) first.push_back(MvPolynomial::variable(P, i));
    for (std::size_t j = 0; j < A2->nvars(); ++j) second.push_back(MvPolynomial::variable(P, A1->nvars() + j));
    std::vector<MvPolynomial> rels;
    for (const auto& f : A1->relations()) rels.push_back(f.substitute(first, P));
    for (const auto& f : A2->relations()) rels.push_back(f.substitute(second, P));
    Quotient product = CoordinateRing::make(P, rels);
    std::vector<MvPolynomial> images = c.to_source.images();
    images.insert(images.end(), c.to_target.images().begin(), c.to_target.images().end());
    CombinedRing cr = combine(RingHom(product, c.component->ring(), images));
    std::vector<std::string> gens;
    for (const auto& g : cr.ring->gb().polys()) {
        bool eliminated = true;
        for (std::size_t i = 0; i < cr.nb; ++i) eliminated = eliminated && !g.involves(i);
        if (eliminated) gens.push_back(cr.to_source(g, product).to_string());
    }
    return "(" + join(gens, ", ") + ")";
}

std::string CycleCorrespondence::to_string() const {
    if (terms.empty()) return "0";
    std::vector<std::string> parts;
    for (const auto& [n, c] : terms) parts.push_back(std::to_string(n) + "*[" + component_ideal(c) + "]");
    return join(parts, " + ");
}

CycleCorrespondence make_cycle(std::vector<std::pair<long, PrimeCorrespondence>> terms) {
    std::map<std::string, std::pair<long, std::size_t>> merged;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const auto& [n, c] = terms[i];
        if (n < 1) raise(ErrorKind::InvalidArgument, "multiplicity " + std::to_string(n) + " is not positive");
        if (i > 0 && (!c.source->ring()->ring()->same_as(*terms[0].second.source->ring()->ring()) ||
                      !c.target->ring()->ring()->same_as(*terms[0].second.target->ring()->ring())))
            raise(ErrorKind::InvalidArgument, "components of a cycle must share source and target");
        auto [it, fresh] = merged.try_emplace(component_ideal(c), n, i);
        if (!fresh) it->second.first += n;
    }
    CycleCorrespondence z;
    for (const auto& [key, v] : merged) z.terms.emplace_back(v.first, terms[v.second].second);
    return z;
}

PForm transfer_prime(const PrimeCorrespondence& c, const PForm& w) {
    PForm regular = regular_representative(w, c.target);
    PForm onZ = pullback(c.to_target, regular);
    PForm sum(c.witness.total->ring(), w.degree());
    for (const auto& q : c.homs) sum = sum + pullback(q, onZ);
    return descend(sum, c.witness);
}

PForm transfer_cycle(const CycleCorrespondence& z, const PForm& w) {
    if (z.terms.empty()) raise(ErrorKind::InvalidArgument, "transfer along the empty cycle has no source variety");
    PForm out(z.terms[0].second.source->ring(), w.degree());
    for (const auto& [n, c] : z.terms)
        out = out + transfer_prime(c, w).scaled(MvPolynomial::constant(out.ring()->ring(), Rational(n)));
    return out;
}

std::vector<PushedTerm> pushforward(const std::vector<PushTerm>& terms, const RankOptions& options) {
    std::map<std::string, std::pair<long, std::size_t>> merged;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const auto& t = terms[i];
        long d = 0;
        try {
            d = generic_rank(check_hom(t.map), options);
        } catch (const Error& e) {
            raise(ErrorKind::RankFailure, "component " + std::to_string(i) + " does not map finitely onto its image: " +
                                              e.what());
        }
        std::string key = t.key.empty() ? ring_key(t.map.source()) : t.key;
        auto [it, fresh] = merged.try_emplace(key, 0, i);
        it->second.first += t.multiplicity * d;
    }
    std::vector<PushedTerm> out;
    for (const auto& [key, v] : merged) out.push_back(PushedTerm{v.first, v.second, key});
    return out;
}

CycleCorrespondence compose_cycles(const CycleCorrespondence& z, const CycleCorrespondence& z2,
                                   const FiberWitness& witness, const RankOptions& options) {
    if (witness.parts.size() != z.terms.size())
        raise(ErrorKind::WitnessInvalid, "fiber witness has " + std::to_string(witness.parts.size()) +
                                             " rows for " + std::to_string(z.terms.size()) + " components");
    std::vector<PushTerm> push;
    std::vector<const PrimeCorrespondence*> images;
    for (std::size_t i = 0; i < z.terms.size(); ++i) {
        const auto& [n1, c1] = z.terms[i];
        if (witness.parts[i].size() != z2.terms.size())
            raise(ErrorKind::WitnessInvalid, "fiber witness row " + std::to_string(i) + " has the wrong length");
        for (std::size_t j = 0; j < z2.terms.size(); ++j) {
            const auto& [n2, c2] = z2.terms[j];
            require_same(c1.target->ring(), c2.source->ring(), "cycles do not compose: middle varieties differ");
            long total = 0;
            for (std::size_t k = 0; k < witness.parts[i][j].size(); ++k) {
                const FiberComponent& f = witness.parts[i][j][k];
                std::string where = "component " + std::to_string(k) + " over (" + std::to_string(i) + ", " +
                                    std::to_string(j) + ")";
                if (f.multiplicity < 1) raise(ErrorKind::WitnessInvalid, where + " has non-positive multiplicity");
                RingHom a = check_hom(f.from_first), b = check_hom(f.from_second), e = check_hom(f.to_image);
                if (!a.after(c1.to_target).equals(b.after(c2.to_source)))
                    raise(ErrorKind::ComponentNotContained, where + " does not lie over the fiber product");
                if (!e.after(f.image.to_source).equals(a.after(c1.to_source)) ||
                    !e.after(f.image.to_target).equals(b.after(c2.to_target)))
                    raise(ErrorKind::ComponentNotContained, where + " does not map onto its stated image");
                total += f.multiplicity * generic_rank(a, options);
                push.push_back(PushTerm{n1 * n2 * f.multiplicity, e, component_ideal(f.image)});
                images.push_back(&f.image);
            }
            long expected = generic_rank(c2.to_source, options);
            if (total != expected)
                raise(ErrorKind::WitnessDegreeMismatch, "components over (" + std::to_string(i) + ", " +
                                                            std::to_string(j) + ") have total degree " +
                                                            std::to_string(total) + ", expected " +
                                                            std::to_string(expected));
        }
    }
    std::vector<std::pair<long, PrimeCorrespondence>> terms;
    for (const auto& p : pushforward(push, options)) terms.emplace_back(p.multiplicity, *images[p.first]);
    return make_cycle(std::move(terms));
}

bool CompositionReport::passed() const {
    return std::all_of(samples.begin(), samples.end(), [](const SampleCheck& s) { return s.equal; });
}

CompositionReport verify_composition(const CycleCorrespondence& z, const CycleCorrespondence& z2,
                                     const FiberWitness& witness, const std::vector<PForm>& samples,
                                     const RankOptions& options) {
    CycleCorrespondence composite = compose_cycles(z, z2, witness, options);
    CompositionReport report{composite.to_string(), {}};
    for (const auto& w : samples) {
        PForm left = transfer_cycle(z, transfer_cycle(z2, w));
        PForm right = transfer_cycle(composite, w);
        OmegaModule om = omega(*z.terms[0].second.source, w.degree());
        report.samples.push_back(SampleCheck{w.to_string(), om.canonical(left).to_string(),
                                             om.canonical(right).to_string(), om.equal(left, right)});
    }
    return report;
}

bool WellDefinednessReport::passed() const {
    return bijection && std::all_of(samples.begin(), samples.end(), [](const SampleCheck& s) { return s.equal; });
}

WellDefinednessReport verify_well_definedness(const PrimeCorrespondence& c, const AlternativeWitness& alt,
                                              const std::vector<PForm>& samples) {
    RingHom f = check_hom(alt.dominating);
    require_same(f.source(), c.witness.total->ring(), "dominating map does not start at the first witness");
    require_same(f.target(), alt.cover.total->ring(), "dominating map does not land in the second witness");
    if (!f.after(c.witness.inclusion).equals(alt.cover.inclusion))
        raise(ErrorKind::BijectionFailure, "dominating map " + f.to_string() + " is not over " + c.source->name());
    PrimeCorrespondence other = make_prime(c.source, c.target, c.component, c.to_source, c.to_target, alt.cover, alt.homs);

    std::vector<bool> hit(other.homs.size(), false);
    for (std::size_t i = 0; i < c.homs.size(); ++i) {
        RingHom composed = f.after(c.homs[i]);
        auto it = std::find_if(other.homs.begin(), other.homs.end(), [&](const RingHom& q) { return q.equals(composed); });
        if (it == other.homs.end())
            raise(ErrorKind::BijectionFailure, "q o f for witness map " + std::to_string(i) + " (" +
                                                   composed.to_string() + ") is not among the second witness maps");
        auto pos = static_cast<std::size_t>(it - other.homs.begin());
        if (hit[pos]) raise(ErrorKind::BijectionFailure, "two witness maps compose to the same map");
        hit[pos] = true;
    }
    if (std::find(hit.begin(), hit.end(), false) != hit.end())
        raise(ErrorKind::BijectionFailure, "q -> q o f misses some of the second witness maps");

    WellDefinednessReport report{true, {}};
    for (const auto& w : samples) {
        PForm a = transfer_prime(c, w), b = transfer_prime(other, w);
        OmegaModule om = omega(*c.source, w.degree());
        SampleCheck s{w.to_string(), om.canonical(a).to_string(), om.canonical(b).to_string(), om.equal(a, b)};
        if (!s.equal)
            raise(ErrorKind::ValueMismatch, "transfers of " + s.form + " differ: " + s.left + " vs " + s.right);
        report.samples.push_back(std::move(s));
    }
    return report;
}

}  // namespace omegatr
