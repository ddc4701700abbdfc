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

#include "workspace.hpp"

#include <fstream>
#include <sstream>

namespace omegatr::cli {

namespace {

[[noreturn]] void input_error(const std::string& message) { raise(ErrorKind::ParseError, message); }

std::string at(const toml::Value& v) { return "line " + std::to_string(v.line); }

// Wraps parse failures of embedded expressions with the line of the value.
template <typename F>
auto with_line(const toml::Value& v, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::ParseError) input_error(at(v) + ": " + e.message());
        throw;
    }
}

MvPolynomial polynomial(const toml::Value& v, const Quotient& ring) {
    return with_line(v, [&] { return ring->parse(v.as_string()); });
}

std::vector<std::string> strings(const toml::Value& v) {
    std::vector<std::string> out;
    for (const auto& e : v.as_array()) out.push_back(e.as_string());
    return out;
}

Field parse_field(const std::string& text, const std::string& generator) {
    if (text == "Q" || text.empty()) return FieldDescriptor::rationals();
    Ring r = PolyRing::make(FieldDescriptor::rationals(), {generator});
    MvPolynomial p = parse_polynomial(r, text);
    if (p.is_zero()) input_error("minimal polynomial is zero");
    std::vector<Rational> coeffs(p.total_degree() + 1, Rational(0));
    for (const auto& t : p.terms()) coeffs[t.mono[0]] = t.coeff.empty() ? Rational(0) : t.coeff[0];
    return FieldDescriptor::make_extension(coeffs, generator);
}

}  // namespace

Workspace::Workspace(const std::string& text, LoadOptions options) : root_(toml::parse(text)), options_(std::move(options)) {
    std::string generator = "w", minpoly = "Q";
    if (const auto* f = toml::find(root_, "field")) {
        const auto& t = f->as_table();
        if (const auto* g = toml::find(t, "generator")) generator = g->as_string();
        if (const auto* m = toml::find(t, "minpoly")) minpoly = m->as_string();
    }
    if (options_.field) minpoly = *options_.field;
    field_ = parse_field(minpoly, generator);
    for (const auto& [k, v] : root_) {
        static const std::vector<std::string> known{"field", "variety", "cover", "correspondence", "form", "fiberwitness", "welldef"};
        if (std::find(known.begin(), known.end(), k) == known.end()) input_error(at(v) + ": unknown section '" + k + "'");
        if (!v.is_table()) input_error(at(v) + ": '" + k + "' must be a section");
    }
}

Workspace Workspace::load_file(const std::string& path, LoadOptions options) {
    std::ifstream in(path);
    if (!in) raise(ErrorKind::InvalidArgument, "cannot open " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return Workspace(buffer.str(), std::move(options));
}

std::vector<std::string> Workspace::names(const std::string& kind) const {
    std::vector<std::string> out;
    if (const auto* s = toml::find(root_, kind))
        for (const auto& [k, v] : s->as_table()) out.push_back(k);
    return out;
}

const toml::Table& Workspace::section(const std::string& kind, const std::string& name) const {
    const auto* s = toml::find(root_, kind);
    const toml::Value* v = s ? toml::find(s->as_table(), name) : nullptr;
    if (!v) input_error("no [" + kind + "." + name + "] section");
    return v->as_table();
}

std::string Workspace::ref(const toml::Value& v, const std::string& kind) const {
    const std::string& name = v.as_string();
    const auto* s = toml::find(root_, kind);
    if (!s || !toml::find(s->as_table(), name)) input_error(at(v) + ": no [" + kind + "." + name + "] section");
    return name;
}

Variety Workspace::variety(const std::string& name) const {
    if (auto it = varieties_.find(name); it != varieties_.end()) {
        if (!it->second) input_error("variety " + name + " refers to itself through its base");
        return it->second;
    }
    varieties_[name] = nullptr;
    const auto& t = section("variety", name);
    const std::string where = "[variety." + name + "]";
    std::vector<std::string> vars = strings(toml::require(t, "vars", where));
    Ring P = with_line(toml::require(t, "vars", where), [&] { return PolyRing::make(field_, vars, options_.order); });
    std::vector<MvPolynomial> rels;
    if (const auto* r = toml::find(t, "relations"))
        for (const auto& e : r->as_array()) rels.push_back(with_line(e, [&] { return parse_polynomial(P, e.as_string()); }));
    Quotient R = CoordinateRing::make(P, rels);
    VarietyFlags flags{false, false, false};
    if (const auto* f = toml::find(t, "flags")) {
        for (const auto& e : f->as_array()) {
            const std::string& s = e.as_string();
            if (s == "irreducible") flags.irreducible = true;
            else if (s == "normal") flags.normal = true;
            else if (s == "smooth") flags.smooth = true;
            else input_error(at(e) + ": unknown flag '" + s + "'");
        }
    }
    std::optional<RingHom> base;
    if (const auto* b = toml::find(t, "base")) {
        Quotient A = ring_of(ref(*b, "variety"));
        base = hom_from(toml::require(t, "base_map", where), A, R, where + " base_map");
    }
    Variety v = AffineVariety::make(name, R, flags, base);
    varieties_[name] = v;
    return v;
}

Quotient Workspace::ring_of(const std::string& name) const { return variety(name)->ring(); }

RingHom Workspace::hom_from(const toml::Value& v, const Quotient& source, const Quotient& target,
                            const std::string& where) const {
    std::vector<MvPolynomial> images;
    const auto& sv = source->ring()->vars();
    if (v.is_array()) {
        const auto& a = v.as_array();
        if (a.size() != sv.size())
            input_error(at(v) + ": " + where + " lists " + std::to_string(a.size()) + " images for " +
                        std::to_string(sv.size()) + " variables");
        for (const auto& e : a) images.push_back(polynomial(e, target));
    } else {
        const auto& t = v.as_table();
        for (const auto& [k, e] : t)
            if (std::find(sv.begin(), sv.end(), k) == sv.end())
                input_error(at(e) + ": " + where + " maps unknown variable '" + k + "'");
        for (const auto& name : sv) {
            if (const auto* e = toml::find(t, name)) {
                images.push_back(polynomial(*e, target));
            } else if (auto i = target->ring()->index_of(name)) {
                images.push_back(target->var(*i));
            } else {
                input_error(at(v) + ": " + where + " gives no image for '" + name + "'");
            }
        }
    }
    return RingHom(source, target, std::move(images));
}

std::vector<PForm> Workspace::forms_from(const toml::Table& t, const std::string& where) const {
    std::vector<PForm> out;
    if (const auto* s = toml::find(t, "samples"))
        for (const auto& e : s->as_array()) out.push_back(form(ref(e, "form")));
    (void)where;
    return out;
}

CoverSection Workspace::cover(const std::string& name) const {
    const auto& t = section("cover", name);
    const std::string where = "[cover." + name + "]";
    Variety X = variety(ref(toml::require(t, "base", where), "variety"));
    Variety W = variety(ref(toml::require(t, "total", where), "variety"));
    RingHom inc = hom_from(toml::require(t, "inclusion", where), X->ring(), W->ring(), where + " inclusion");
    std::vector<RingHom> group;
    if (const auto* g = toml::find(t, "group"))
        for (const auto& e : g->as_array()) group.push_back(hom_from(e, W->ring(), W->ring(), where + " group"));
    std::vector<MvPolynomial> gens;
    if (const auto* g = toml::find(t, "generators"))
        for (const auto& e : g->as_array()) gens.push_back(polynomial(e, W->ring()));
    if (!W->base()) W = AffineVariety::make(W->name(), W->ring(), W->flags(), inc);
    CoverSection c{GaloisCoverDatum{X, W, inc, group, gens}, std::nullopt, std::nullopt, forms_from(t, where)};
    if (const auto* p = toml::find(t, "primitive")) c.primitive = p->as_string();
    if (const auto* f = toml::find(t, "invariant_form"))
        c.invariant_form = with_line(*f, [&] { return parse_form(W->ring(), f->as_string(), 1); });
    return c;
}

GaloisCoverDatum Workspace::verified_cover(const std::string& name) const {
    GaloisCoverDatum d = cover(name).datum;
    return make_cover(d.base, d.total, d.inclusion, d.group, d.generators, options_.rank);
}

PrimeCorrespondence Workspace::prime_from(const toml::Table& t, const Variety& source, const Variety& target,
                                          const std::string& where) const {
    if (const auto* g = toml::find(t, "graph"))
        return graph(source, target, check_hom(hom_from(*g, target->ring(), source->ring(), where + " graph")));
    Variety Z = variety(ref(toml::require(t, "variety", where), "variety"));
    RingHom p1 = hom_from(toml::require(t, "to_source", where), source->ring(), Z->ring(), where + " to_source");
    RingHom p2 = hom_from(toml::require(t, "to_target", where), target->ring(), Z->ring(), where + " to_target");
    GaloisCoverDatum w = verified_cover(ref(toml::require(t, "cover", where), "cover"));
    std::vector<RingHom> homs;
    for (const auto& e : toml::require(t, "homs", where).as_array())
        homs.push_back(hom_from(e, Z->ring(), w.total->ring(), where + " homs"));
    return make_prime(source, target, Z, p1, p2, w, homs, options_.rank);
}

CycleCorrespondence Workspace::correspondence(const std::string& name) const {
    const auto& t = section("correspondence", name);
    const std::string where = "[correspondence." + name + "]";
    Variety X1 = variety(ref(toml::require(t, "source", where), "variety"));
    Variety X2 = variety(ref(toml::require(t, "target", where), "variety"));
    std::vector<std::pair<long, PrimeCorrespondence>> terms;
    for (const auto& c : toml::require(t, "components", where).as_array()) {
        const auto& ct = c.as_table();
        long n = 1;
        if (const auto* m = toml::find(ct, "multiplicity")) n = m->as_integer();
        terms.emplace_back(n, prime_from(ct, X1, X2, where + " component at " + at(c)));
    }
    return make_cycle(std::move(terms));
}

PForm Workspace::form(const std::string& name) const {
    const auto& t = section("form", name);
    const std::string where = "[form." + name + "]";
    Quotient R = ring_of(ref(toml::require(t, "variety", where), "variety"));
    std::optional<int> degree;
    if (const auto* d = toml::find(t, "degree")) degree = static_cast<int>(d->as_integer());
    const auto& e = toml::require(t, "expression", where);
    return with_line(e, [&] { return parse_form(R, e.as_string(), degree); });
}

namespace {

std::size_t term_index(const CycleCorrespondence& z, const toml::Table& t, const std::string& key, const std::string& where) {
    const auto* v = toml::find(t, key);
    if (!v) {
        if (z.terms.size() == 1) return 0;
        input_error(where + ": '" + key + "' is needed to pick a component");
    }
    for (std::size_t i = 0; i < z.terms.size(); ++i)
        if (z.terms[i].second.component->name() == v->as_string()) return i;
    input_error(at(*v) + ": no component on variety '" + v->as_string() + "'");
}

}  // namespace

FiberSection Workspace::fiber_witness(const std::string& name) const {
    const auto& t = section("fiberwitness", name);
    const std::string where = "[fiberwitness." + name + "]";
    FiberSection f{correspondence(ref(toml::require(t, "first", where), "correspondence")),
                   correspondence(ref(toml::require(t, "second", where), "correspondence")), {}, forms_from(t, where)};
    f.witness.parts.assign(f.first.terms.size(), std::vector<std::vector<FiberComponent>>(f.second.terms.size()));
    for (const auto& c : toml::require(t, "components", where).as_array()) {
        const auto& ct = c.as_table();
        const std::string cw = where + " component at " + at(c);
        std::size_t i = term_index(f.first, ct, "over_first", cw), j = term_index(f.second, ct, "over_second", cw);
        Variety Zi = variety(ref(toml::require(ct, "variety", cw), "variety"));
        long n = 1;
        if (const auto* m = toml::find(ct, "multiplicity")) n = m->as_integer();
        CycleCorrespondence image = correspondence(ref(toml::require(ct, "image", cw), "correspondence"));
        if (image.terms.size() != 1) input_error(cw + ": the image correspondence must have one component");
        const PrimeCorrespondence& im = image.terms[0].second;
        f.witness.parts[i][j].push_back(FiberComponent{
            n, Zi->ring(),
            hom_from(toml::require(ct, "from_first", cw), f.first.terms[i].second.component->ring(), Zi->ring(),
                     cw + " from_first"),
            hom_from(toml::require(ct, "from_second", cw), f.second.terms[j].second.component->ring(), Zi->ring(),
                     cw + " from_second"),
            im, hom_from(toml::require(ct, "to_image", cw), im.component->ring(), Zi->ring(), cw + " to_image")});
    }
    return f;
}

WellDefSection Workspace::well_definedness(const std::string& name) const {
    const auto& t = section("welldef", name);
    const std::string where = "[welldef." + name + "]";
    CycleCorrespondence z = correspondence(ref(toml::require(t, "correspondence", where), "correspondence"));
    const PrimeCorrespondence& c = z.terms.at(0).second;
    GaloisCoverDatum alt = verified_cover(ref(toml::require(t, "cover", where), "cover"));
    std::vector<RingHom> homs;
    for (const auto& e : toml::require(t, "homs", where).as_array())
        homs.push_back(hom_from(e, c.component->ring(), alt.total->ring(), where + " homs"));
    RingHom dom = hom_from(toml::require(t, "dominating", where), c.witness.total->ring(), alt.total->ring(),
                           where + " dominating");
    return WellDefSection{c, AlternativeWitness{alt, homs, dom}, forms_from(t, where)};
}

std::vector<std::string> Workspace::warnings() const {
    std::vector<std::string> out;
    if (field_->warning()) out.push_back(*field_->warning());
    for (const auto& [name, v] : varieties_)
        if (v)
            if (auto w = v->smoothness_warning()) out.push_back(*w);
    return out;
}

}  // namespace omegatr::cli
