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

#include "omegatr/kaehler.hpp"

#include <algorithm>
#include <set>

#include "omegatr/parse.hpp"

namespace omegatr {

namespace {

// All k-subsets of `items`, each ascending, in lexicographic order.
std::vector<std::vector<std::uint32_t>> subsets(const std::vector<std::uint32_t>& items, std::size_t k) {
    std::vector<std::vector<std::uint32_t>> out;
    if (k > items.size()) return out;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
        std::vector<std::uint32_t> s;
        for (auto i : idx) s.push_back(items[i]);
        out.push_back(std::move(s));
        std::size_t j = k;
        while (j > 0 && idx[j - 1] == items.size() - k + j - 1) --j;
        if (j == 0) break;
        ++idx[j - 1];
        for (std::size_t l = j; l < k; ++l) idx[l] = idx[l - 1] + 1;
    }
    return out;
}

std::vector<std::uint32_t> range(std::size_t n) {
    std::vector<std::uint32_t> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = static_cast<std::uint32_t>(i);
    return r;
}

MvPolynomial determinant(std::vector<std::vector<MvPolynomial>> m, const Ring& ring) {
    const std::size_t n = m.size();
    if (n == 0) return MvPolynomial::constant(ring, Rational(1));
    if (n == 1) return m[0][0];
    MvPolynomial det(ring);
    for (std::size_t c = 0; c < n; ++c) {
        if (m[0][c].is_zero()) continue;
        std::vector<std::vector<MvPolynomial>> minor;
        for (std::size_t r = 1; r < n; ++r) {
            std::vector<MvPolynomial> row;
            for (std::size_t k = 0; k < n; ++k)
                if (k != c) row.push_back(m[r][k]);
            minor.push_back(std::move(row));
        }
        MvPolynomial t = m[0][c] * determinant(std::move(minor), ring);
        det = (c % 2) ? det - t : det + t;
    }
    return det;
}

}  // namespace

// ---------------------------------------------------------------------------
// Varieties

Variety AffineVariety::make(std::string name, Quotient ring, VarietyFlags flags, std::optional<RingHom> base) {
    if (base && !base->target()->ring()->same_as(*ring->ring()))
        raise(ErrorKind::RingMismatch, "base map of " + name + " does not land in its coordinate ring");
    auto v = std::shared_ptr<AffineVariety>(new AffineVariety());
    v->name_ = std::move(name);
    v->ring_ = std::move(ring);
    v->flags_ = flags;
    v->base_ = std::move(base);
    v->smooth_cache_ = std::make_shared<std::optional<bool>>();
    return v;
}

bool AffineVariety::smooth_verified() const {
    if (smooth_cache_->has_value()) return **smooth_cache_;
    const Ring& P = ring_->ring();
    const auto& rels = ring_->relations();
    bool smooth;
    if (ring_->gb().is_unit()) {
        smooth = false;
    } else if (rels.empty()) {
        smooth = true;
    } else {
        const std::size_t n = ring_->nvars(), c = n - dimension();
        std::vector<MvPolynomial> gens = rels;
        auto rows = subsets(range(rels.size()), c);
        auto cols = subsets(range(n), c);
        for (const auto& r : rows)
            for (const auto& cl : cols) {
                std::vector<std::vector<MvPolynomial>> m;
                for (auto i : r) {
                    std::vector<MvPolynomial> row;
                    for (auto j : cl) row.push_back(rels[i].derivative(j));
                    m.push_back(std::move(row));
                }
                auto det = ring_->reduce(determinant(std::move(m), P));
                if (!det.is_zero()) gens.push_back(det);
            }
        smooth = groebner(Ideal{P, gens}).is_unit();
    }
    *smooth_cache_ = smooth;
    return smooth;
}

std::optional<std::string> AffineVariety::smoothness_warning() const {
    if (flags_.smooth && !smooth_verified())
        return "smoothness of " + name_ + " is asserted but the Jacobian criterion fails";
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Fractions

namespace {

// Division by a single polynomial: (quotient, remainder).
std::pair<MvPolynomial, MvPolynomial> divide(MvPolynomial p, const MvPolynomial& d) {
    const Ring& ring = p.ring();
    const auto& k = ring->field();
    MvPolynomial q(ring), r(ring);
    const Term& lt = d.leading_term();
    while (!p.is_zero()) {
        const Term& t = p.leading_term();
        if (lt.mono.divides(t.mono)) {
            auto m = lt.mono.quotient_of(t.mono);
            auto c = k->div(t.coeff, lt.coeff);
            q += MvPolynomial::monomial(ring, m, c);
            p -= d.times_term(m, c);
        } else {
            auto head = MvPolynomial::monomial(ring, t.mono, t.coeff);
            r += head;
            p -= head;
        }
    }
    return {q, r};
}

MvPolynomial strip_monomial(const MvPolynomial& p, const Monomial& g) {
    std::vector<Term> terms;
    for (const auto& t : p.terms()) terms.push_back(Term{g.quotient_of(t.mono), t.coeff});
    return MvPolynomial::from_terms(p.ring(), std::move(terms));
}

}  // namespace

Fraction FractionField::make(const MvPolynomial& num, const MvPolynomial& den) const {
    const Ring& P = ring_->ring();
    MvPolynomial n = ring_->reduce(num.in_ring(P));
    MvPolynomial d = ring_->reduce(den.in_ring(P));
    if (d.is_zero()) raise(ErrorKind::ZeroDenominator, "denominator " + den.to_string() + " vanishes");
    if (n.is_zero()) return zero();
    const auto& k = P->field();
    if (d.is_constant()) return Fraction{n.scaled(k->inv(*d.constant_value())), MvPolynomial::constant(P, Rational(1))};
    // Cancel the common monomial factor.
    Monomial g = d.leading_term().mono;
    auto meet = [&](const Monomial& m) {
        for (std::size_t i = 0; i < g.size(); ++i) g.set(i, std::min(g[i], m[i]));
    };
    for (const auto& t : d.terms()) meet(t.mono);
    for (const auto& t : n.terms()) meet(t.mono);
    if (!g.is_one()) {
        n = ring_->reduce(strip_monomial(n, g));
        d = ring_->reduce(strip_monomial(d, g));
        if (d.is_constant())
            return Fraction{n.scaled(k->inv(*d.constant_value())), MvPolynomial::constant(P, Rational(1))};
    }
    auto lc = k->inv(d.leading_term().coeff);
    n = n.scaled(lc);
    d = d.scaled(lc);
    auto [q, r] = divide(n, d);
    if (r.is_zero()) return Fraction{ring_->reduce(q), MvPolynomial::constant(P, Rational(1))};
    return Fraction{std::move(n), std::move(d)};
}

Fraction FractionField::make(const MvPolynomial& num) const {
    return make(num, MvPolynomial::constant(ring_->ring(), Rational(1)));
}

Fraction FractionField::zero() const {
    const Ring& P = ring_->ring();
    return Fraction{MvPolynomial(P), MvPolynomial::constant(P, Rational(1))};
}

Fraction FractionField::one() const {
    const Ring& P = ring_->ring();
    return Fraction{MvPolynomial::constant(P, Rational(1)), MvPolynomial::constant(P, Rational(1))};
}

Fraction FractionField::add(const Fraction& a, const Fraction& b) const {
    if (a.num.is_zero()) return b;
    if (b.num.is_zero()) return a;
    if (a.den == b.den) return make(a.num + b.num, a.den);
    return make(a.num * b.den + b.num * a.den, a.den * b.den);
}

Fraction FractionField::sub(const Fraction& a, const Fraction& b) const { return add(a, neg(b)); }

Fraction FractionField::mul(const Fraction& a, const Fraction& b) const {
    if (a.num.is_zero() || b.num.is_zero()) return zero();
    return make(a.num * b.num, a.den * b.den);
}

Fraction FractionField::div(const Fraction& a, const Fraction& b) const {
    if (b.num.is_zero()) raise(ErrorKind::DivisionByZero, "division by the zero function");
    return make(a.num * b.den, a.den * b.num);
}

Fraction FractionField::neg(const Fraction& a) const { return Fraction{-a.num, a.den}; }

bool FractionField::equal(const Fraction& a, const Fraction& b) const {
    return ring_->is_zero(a.num * b.den - b.num * a.den);
}

std::string FractionField::to_string(const Fraction& a) const {
    if (a.den.is_constant()) return a.num.to_string();
    return "(" + a.num.to_string() + ")/(" + a.den.to_string() + ")";
}

// ---------------------------------------------------------------------------
// Forms

PForm::PForm(Quotient ring, int degree) : ring_(std::move(ring)), degree_(degree) {
    if (degree < 0) raise(ErrorKind::NegativeDegree, "form degree " + std::to_string(degree));
}

PForm PForm::function(const Quotient& ring, Fraction f) {
    PForm w(ring, 0);
    w.add_term({}, f);
    return w;
}

PForm PForm::function(const Quotient& ring, const MvPolynomial& f) {
    return function(ring, FractionField(ring).make(f));
}

PForm PForm::differential(const Quotient& ring, std::size_t var) {
    PForm w(ring, 1);
    w.add_term({static_cast<std::uint32_t>(var)}, FractionField(ring).one());
    return w;
}

bool PForm::is_polynomial() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.second.den.is_constant(); });
}

void PForm::add_term(Index index, const Fraction& c) {
    if (c.num.is_zero()) return;
    if (static_cast<int>(index.size()) != degree_)
        raise(ErrorKind::InvalidArgument, "term of degree " + std::to_string(index.size()) + " in a " +
                                              std::to_string(degree_) + "-form");
    bool odd = false;
    for (std::size_t i = 0; i < index.size(); ++i)
        for (std::size_t j = 0; j + 1 < index.size() - i; ++j)
            if (index[j] > index[j + 1]) {
                std::swap(index[j], index[j + 1]);
                odd = !odd;
            }
    for (std::size_t i = 0; i + 1 < index.size(); ++i)
        if (index[i] == index[i + 1]) return;
    FractionField F(ring_);
    Fraction v = odd ? F.neg(c) : c;
    auto it = terms_.find(index);
    if (it == terms_.end()) {
        terms_.emplace(std::move(index), F.make(v.num, v.den));
        return;
    }
    it->second = F.add(it->second, v);
    if (it->second.num.is_zero()) terms_.erase(it);
}

void PForm::require_compatible(const PForm& o) const {
    if (!ring_->ring()->same_as(*o.ring_->ring()))
        raise(ErrorKind::RingMismatch, "forms over " + ring_->describe() + " and " + o.ring_->describe());
}

PForm PForm::operator+(const PForm& o) const {
    require_compatible(o);
    if (o.is_zero() && o.degree_ != degree_) return *this;
    if (is_zero() && o.degree_ != degree_) return o;
    if (o.degree_ != degree_)
        raise(ErrorKind::InvalidArgument, "adding forms of degrees " + std::to_string(degree_) + " and " +
                                              std::to_string(o.degree_));
    PForm r = *this;
    for (const auto& [i, c] : o.terms_) r.add_term(i, c);
    return r;
}

PForm PForm::operator-(const PForm& o) const { return *this + (-o); }

PForm PForm::operator-() const {
    PForm r(ring_, degree_);
    for (const auto& [i, c] : terms_) r.terms_.emplace(i, Fraction{-c.num, c.den});
    return r;
}

PForm PForm::scaled(const Fraction& c) const {
    FractionField F(ring_);
    PForm r(ring_, degree_);
    for (const auto& [i, a] : terms_) r.add_term(i, F.mul(a, c));
    return r;
}

PForm PForm::scaled(const MvPolynomial& c) const { return scaled(FractionField(ring_).make(c)); }

PForm PForm::wedge(const PForm& o) const {
    require_compatible(o);
    FractionField F(ring_);
    PForm r(ring_, degree_ + o.degree_);
    for (const auto& [i, a] : terms_)
        for (const auto& [j, b] : o.terms_) {
            Index k = i;
            k.insert(k.end(), j.begin(), j.end());
            r.add_term(std::move(k), F.mul(a, b));
        }
    return r;
}

bool PForm::same_as(const PForm& o) const {
    if (degree_ != o.degree_ && !(is_zero() && o.is_zero())) return false;
    PForm d = *this - o;
    return d.is_zero();
}

std::string PForm::to_string() const {
    if (terms_.empty()) return "0";
    FractionField F(ring_);
    const Ring& P = ring_->ring();
    std::string out;
    bool first = true;
    for (const auto& [index, c] : terms_) {
        bool negative = c.den.is_constant() && c.num.terms().size() == 1 && is_negative_monomial(c.num.terms()[0].coeff);
        Fraction a = negative ? F.neg(c) : c;
        if (first)
            out += negative ? "-" : "";
        else
            out += negative ? " - " : " + ";
        first = false;
        std::string coeff = F.to_string(a);
        if (degree_ == 0) {
            out += (a.den.is_constant() && a.num.terms().size() > 1 && terms_.size() > 1) ? "(" + coeff + ")" : coeff;
            continue;
        }
        if (a.den.is_constant() && a.num.terms().size() > 1) coeff = "(" + coeff + ")";
        out += coeff + " * ";
        for (std::size_t k = 0; k < index.size(); ++k) out += (k ? " ^ d(" : "d(") + P->var(index[k]) + ")";
    }
    return out;
}

namespace {

struct FormVisitor {
    const Quotient& ring;

    PForm integer(const mpz_class& z) { return PForm::function(ring, MvPolynomial::constant(ring->ring(), Rational(z))); }
    PForm identifier(const std::string& name) {
        const Ring& P = ring->ring();
        if (auto i = P->index_of(name)) return PForm::function(ring, MvPolynomial::variable(P, *i));
        const auto& k = P->field();
        if (!k->is_rationals() && name == k->generator())
            return PForm::function(ring, MvPolynomial::constant(P, k->generator_element()));
        raise(ErrorKind::ParseError, "unknown variable '" + name + "' for " + ring->describe());
    }
    PForm differential(const std::string& name) {
        auto i = ring->ring()->index_of(name);
        if (!i) raise(ErrorKind::ParseError, "d(" + name + ") refers to an unknown variable");
        return PForm::differential(ring, *i);
    }
    PForm add(const PForm& a, const PForm& b) { return a + b; }
    PForm sub(const PForm& a, const PForm& b) { return a - b; }
    PForm mul(const PForm& a, const PForm& b) { return a.wedge(b); }
    PForm div(const PForm& a, const PForm& b) {
        if (b.degree() != 0) raise(ErrorKind::ParseError, "division by a form of positive degree");
        if (b.is_zero()) raise(ErrorKind::DivisionByZero, "division by zero in a form");
        FractionField F(ring);
        const Fraction& c = b.terms().begin()->second;
        return a.scaled(F.div(F.one(), c));
    }
    PForm neg(const PForm& a) { return -a; }
    PForm pow(const PForm& a, unsigned long e) {
        if (a.degree() != 0) raise(ErrorKind::ParseError, "power of a form of positive degree");
        PForm r = PForm::function(ring, MvPolynomial::constant(ring->ring(), Rational(1)));
        for (unsigned long i = 0; i < e; ++i) r = r.wedge(a);
        return r;
    }
    PForm wedge(const PForm& a, const PForm& b) { return a.wedge(b); }
};

}  // namespace

PForm parse_form(const Quotient& ring, std::string_view text, std::optional<int> degree) {
    auto ast = parse::parse_expression(text);
    FormVisitor v{ring};
    PForm w = parse::evaluate(*ast, v);
    if (degree) {
        if (w.is_zero()) return PForm(ring, *degree);
        if (w.degree() != *degree)
            raise(ErrorKind::ParseError, "expected a " + std::to_string(*degree) + "-form, got degree " +
                                             std::to_string(w.degree()) + " in \"" + std::string(text) + "\"");
    }
    return w;
}

// ---------------------------------------------------------------------------
// Omega^p

Vector OmegaModule::to_vector(const PForm& w) const {
    if (!w.ring()->ring()->same_as(*ring->ring())) raise(ErrorKind::RingMismatch, "form over another ring");
    if (!w.is_zero() && w.degree() != degree)
        raise(ErrorKind::InvalidArgument, "form of degree " + std::to_string(w.degree()) + " in Omega^" +
                                              std::to_string(degree));
    Vector v = module.zero();
    for (const auto& [index, c] : w.terms()) {
        if (!c.den.is_constant())
            raise(ErrorKind::NonRegularCoefficient, "coefficient " + FractionField(ring).to_string(c) + " is not polynomial");
        bool dead = std::any_of(index.begin(), index.end(), [&](std::uint32_t i) {
            return std::find(killed.begin(), killed.end(), i) != killed.end();
        });
        if (dead) continue;
        auto it = std::find(index_sets.begin(), index_sets.end(), index);
        v[static_cast<std::size_t>(it - index_sets.begin())] += c.num;
    }
    return v;
}

PForm OmegaModule::to_form(const Vector& v) const {
    FractionField F(ring);
    PForm w(ring, degree);
    for (std::size_t i = 0; i < v.size(); ++i) w.add_term(index_sets[i], F.make(v[i]));
    return w;
}

OmegaModule omega(const AffineVariety& X, int p, bool relative) {
    if (p < 0) raise(ErrorKind::NegativeDegree, "Omega^" + std::to_string(p));
    const Quotient& R = X.ring();
    const Ring& P = R->ring();
    const std::size_t n = R->nvars();
    std::vector<std::uint32_t> killed;
    std::vector<Vector> rows;  // Omega^1 relations over all ambient differentials
    auto jacobian_row = [&](const MvPolynomial& f) {
        Vector row;
        for (std::size_t j = 0; j < n; ++j) row.push_back(f.derivative(j));
        return row;
    };
    if (relative) {
        if (!X.base()) raise(ErrorKind::InvalidArgument, X.name() + " has no base for relative differentials");
        for (const auto& im : X.base()->images()) {
            bool plain = im.terms().size() == 1 && is_one(im.terms()[0].coeff) && im.total_degree() == 1;
            if (plain) {
                std::uint32_t j = 0;
                while (!im.involves(j)) ++j;
                if (std::find(killed.begin(), killed.end(), j) == killed.end()) {
                    killed.push_back(j);
                    continue;
                }
            }
            rows.push_back(jacobian_row(im));
        }
        std::sort(killed.begin(), killed.end());
    }
    for (const auto& f : R->relations()) rows.push_back(jacobian_row(f));
    std::vector<std::uint32_t> kept;
    for (std::uint32_t j = 0; j < n; ++j)
        if (std::find(killed.begin(), killed.end(), j) == killed.end()) kept.push_back(j);

    auto index_sets = subsets(kept, static_cast<std::size_t>(p));
    std::vector<std::string> names;
    for (const auto& I : index_sets) {
        if (I.empty()) {
            names.push_back("1");
            continue;
        }
        std::string s;
        for (std::size_t k = 0; k < I.size(); ++k) s += (k ? "^d(" : "d(") + P->var(I[k]) + ")";
        names.push_back(s);
    }
    std::vector<Vector> relations;
    if (p >= 1) {
        for (const auto& row : rows)
            for (const auto& J : subsets(kept, static_cast<std::size_t>(p - 1))) {
                Vector rel = zero_vector(P, index_sets.size());
                for (auto i : kept) {
                    if (row[i].is_zero() || std::find(J.begin(), J.end(), i) != J.end()) continue;
                    std::size_t below = static_cast<std::size_t>(std::count_if(J.begin(), J.end(), [&](auto j) { return j < i; }));
                    PForm::Index I = J;
                    I.insert(I.begin() + static_cast<long>(below), i);
                    auto pos = static_cast<std::size_t>(std::find(index_sets.begin(), index_sets.end(), I) - index_sets.begin());
                    rel[pos] += (below % 2) ? -row[i] : row[i];
                }
                relations.push_back(std::move(rel));
            }
    }
    PresentedModule module(R, index_sets.size(), std::move(relations), std::move(names));
    return OmegaModule{std::move(module), std::move(index_sets), p, R, relative, std::move(killed)};
}

// ---------------------------------------------------------------------------
// d and pullback

PForm de_rham_d(const PForm& w) {
    const Quotient& R = w.ring();
    FractionField F(R);
    PForm out(R, w.degree() + 1);
    for (const auto& [index, c] : w.terms()) {
        if (!c.den.is_constant())
            raise(ErrorKind::NonRegularCoefficient, "d of the non-polynomial coefficient " + F.to_string(c) +
                                                        "; clear denominators first");
        for (std::size_t j = 0; j < R->nvars(); ++j) {
            MvPolynomial dc = c.num.derivative(j);
            if (dc.is_zero()) continue;
            PForm::Index I{static_cast<std::uint32_t>(j)};
            I.insert(I.end(), index.begin(), index.end());
            out.add_term(std::move(I), F.make(dc));
        }
    }
    return out;
}

PForm pullback(const RingHom& h, const PForm& w) {
    if (!w.ring()->ring()->same_as(*h.source()->ring()))
        raise(ErrorKind::RingMismatch, "form does not live on the source of " + h.to_string());
    const Quotient& C = h.target();
    FractionField F(C);
    std::vector<std::optional<PForm>> dimages(h.source()->nvars());
    auto dimage = [&](std::uint32_t i) -> const PForm& {
        if (!dimages[i]) {
            PForm d(C, 1);
            const MvPolynomial& im = h.images()[i];
            for (std::size_t j = 0; j < C->nvars(); ++j) {
                auto dj = im.derivative(j);
                if (!dj.is_zero()) d.add_term({static_cast<std::uint32_t>(j)}, F.make(dj));
            }
            dimages[i] = std::move(d);
        }
        return *dimages[i];
    };
    PForm out(C, w.degree());
    for (const auto& [index, c] : w.terms()) {
        MvPolynomial den = h.apply(c.den);
        if (den.is_zero())
            raise(ErrorKind::ZeroDenominator, "denominator " + c.den.to_string() + " pulls back to zero");
        PForm t = PForm::function(C, F.make(h.apply(c.num), den));
        for (auto i : index) t = t.wedge(dimage(i));
        out = out + t;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Regularity

RegularityResult regularity(const PForm& w, const AffineVariety& X) {
    OmegaModule om = omega(X, w.degree());
    const Quotient& R = X.ring();
    const Ring& P = R->ring();
    if (w.is_zero())
        return RegularityResult{true, Ideal{P, {MvPolynomial::constant(P, Rational(1))}}, PForm(R, w.degree())};
    std::vector<MvPolynomial> dens;
    for (const auto& [i, c] : w.terms())
        if (std::none_of(dens.begin(), dens.end(), [&](const MvPolynomial& d) { return d == c.den; }))
            dens.push_back(c.den);
    MvPolynomial h = MvPolynomial::constant(P, Rational(1));
    for (const auto& d : dens) h = h * d;
    Vector c = om.module.zero();
    for (const auto& [index, f] : w.terms()) {
        MvPolynomial num = f.num;
        for (const auto& d : dens)
            if (!(d == f.den)) num = num * d;
        auto it = std::find(om.index_sets.begin(), om.index_sets.end(), index);
        c[static_cast<std::size_t>(it - om.index_sets.begin())] += num;
    }
    Ideal den_ideal = denominator_ideal(c, h, om.module);
    bool regular = den_ideal.generators.size() == 1 && den_ideal.generators[0].is_constant();
    RegularityResult result{regular, den_ideal, std::nullopt};
    if (regular) {
        std::vector<Vector> gens;
        for (std::size_t i = 0; i < om.module.ngens(); ++i) gens.push_back(scale(h, om.module.generator(i)));
        LinearSystem sys(R, om.module.ngens(), gens, om.module.relations());
        auto v = sys.lift(c);
        if (!v) raise(ErrorKind::CheckFailed, "regular form without a polynomial representative");
        result.certificate = om.to_form(om.module.reduce(*v));
    }
    return result;
}

// ---------------------------------------------------------------------------
// Frames

namespace {

using FMatrix = std::vector<std::vector<Fraction>>;

// Solves M X = Rhs over the fraction field by Gauss-Jordan elimination; M has
// full column rank or nullopt is returned.
std::optional<FMatrix> solve(const FractionField& F, FMatrix M, FMatrix rhs) {
    const std::size_t rows = M.size(), cols = rows ? M[0].size() : 0, k = rows ? rhs[0].size() : 0;
    std::size_t r = 0;
    std::vector<std::size_t> pivot_row(cols);
    for (std::size_t c = 0; c < cols; ++c) {
        std::size_t p = r;
        while (p < rows && F.is_zero(M[p][c])) ++p;
        if (p == rows) return std::nullopt;
        std::swap(M[p], M[r]);
        std::swap(rhs[p], rhs[r]);
        Fraction inv = F.div(F.one(), M[r][c]);
        for (auto& x : M[r]) x = F.mul(x, inv);
        for (auto& x : rhs[r]) x = F.mul(x, inv);
        for (std::size_t q = 0; q < rows; ++q) {
            if (q == r || F.is_zero(M[q][c])) continue;
            Fraction f = M[q][c];
            for (std::size_t j = 0; j < cols; ++j) M[q][j] = F.sub(M[q][j], F.mul(f, M[r][j]));
            for (std::size_t j = 0; j < k; ++j) rhs[q][j] = F.sub(rhs[q][j], F.mul(f, rhs[r][j]));
        }
        pivot_row[c] = r++;
    }
    FMatrix X(cols);
    for (std::size_t c = 0; c < cols; ++c) X[c] = rhs[pivot_row[c]];
    return X;
}

}  // namespace

std::optional<std::vector<Fraction>> solve_linear(const FractionField& F, FMatrix M, std::vector<Fraction> rhs) {
    const std::size_t rows = M.size(), cols = rows ? M[0].size() : 0;
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && F.is_zero(M[p][c])) ++p;
        if (p == rows) continue;
        std::swap(M[p], M[r]);
        std::swap(rhs[p], rhs[r]);
        Fraction inv = F.div(F.one(), M[r][c]);
        for (auto& x : M[r]) x = F.mul(x, inv);
        rhs[r] = F.mul(rhs[r], inv);
        for (std::size_t q = 0; q < rows; ++q) {
            if (q == r || F.is_zero(M[q][c])) continue;
            Fraction f = M[q][c];
            for (std::size_t j = c; j < cols; ++j) M[q][j] = F.sub(M[q][j], F.mul(f, M[r][j]));
            rhs[q] = F.sub(rhs[q], F.mul(f, rhs[r]));
        }
        pivots.push_back(c);
        ++r;
    }
    for (std::size_t q = r; q < rows; ++q)
        if (!F.is_zero(rhs[q])) return std::nullopt;
    std::vector<Fraction> v(cols, F.zero());
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = rhs[i];
    return v;
}

bool is_regular_function(const Fraction& f, const Quotient& ring) {
    if (f.den.is_constant()) return true;
    auto I = denominator_ideal({f.num}, f.den, PresentedModule::free(ring, 1));
    return I.generators.size() == 1 && I.generators[0].is_constant();
}

namespace {

Fraction fdet(const FractionField& F, const FMatrix& m) {
    const std::size_t n = m.size();
    if (n == 0) return F.one();
    if (n == 1) return m[0][0];
    Fraction det = F.zero();
    for (std::size_t c = 0; c < n; ++c) {
        if (F.is_zero(m[0][c])) continue;
        FMatrix minor;
        for (std::size_t r = 1; r < n; ++r) {
            std::vector<Fraction> row;
            for (std::size_t k = 0; k < n; ++k)
                if (k != c) row.push_back(m[r][k]);
            minor.push_back(std::move(row));
        }
        Fraction t = F.mul(m[0][c], fdet(F, minor));
        det = (c % 2) ? F.sub(det, t) : F.add(det, t);
    }
    return det;
}

}  // namespace

Frame absolute_frame(const AffineVariety& W) {
    const Quotient& R = W.ring();
    FractionField F(R);
    const std::size_t n = R->nvars();
    std::vector<std::size_t> S = R->independent_set();
    std::vector<std::size_t> U;
    for (std::size_t j = 0; j < n; ++j)
        if (std::find(S.begin(), S.end(), j) == S.end()) U.push_back(j);
    Frame frame{R, {}, FMatrix(n, std::vector<Fraction>(S.size(), F.zero()))};
    for (std::size_t s = 0; s < S.size(); ++s) {
        frame.basis.push_back(PForm::differential(R, S[s]));
        frame.rows[S[s]][s] = F.one();
    }
    if (U.empty()) return frame;
    FMatrix M, rhs;
    for (const auto& f : R->relations()) {
        std::vector<Fraction> row, r;
        for (auto j : U) row.push_back(F.make(f.derivative(j)));
        for (auto s : S) r.push_back(F.neg(F.make(f.derivative(s))));
        M.push_back(std::move(row));
        rhs.push_back(std::move(r));
    }
    auto X = M.empty() ? std::nullopt : solve(F, std::move(M), std::move(rhs));
    if (!X)
        raise(ErrorKind::InvalidArgument, "the Jacobian of " + W.name() +
                                              " has deficient rank at the generic point; the ring must be reduced");
    for (std::size_t u = 0; u < U.size(); ++u) frame.rows[U[u]] = (*X)[u];
    return frame;
}

Frame relative_frame(const RingHom& f, const AffineVariety& W) {
    const Quotient& R = W.ring();
    FractionField F(R);
    Frame abs = absolute_frame(W);
    std::vector<std::size_t> T = f.source()->independent_set();
    const std::size_t d = abs.basis.size();
    if (T.size() != d)
        raise(ErrorKind::NotModuleFinite, "base of dimension " + std::to_string(T.size()) + " under " + W.name() +
                                              " of dimension " + std::to_string(d));
    // Fm[t][s]: f^*dx_t in the absolute basis.
    FMatrix Fm(d, std::vector<Fraction>(d, F.zero()));
    Frame frame{R, {}, {}};
    for (std::size_t t = 0; t < d; ++t) {
        const MvPolynomial& im = f.images()[T[t]];
        PForm b(R, 1);
        for (std::size_t j = 0; j < R->nvars(); ++j) {
            auto dj = im.derivative(j);
            if (dj.is_zero()) continue;
            Fraction c = F.make(dj);
            b.add_term({static_cast<std::uint32_t>(j)}, c);
            for (std::size_t s = 0; s < d; ++s) Fm[t][s] = F.add(Fm[t][s], F.mul(c, abs.rows[j][s]));
        }
        frame.basis.push_back(std::move(b));
    }
    // dx_S = Fm^{-1} f^*dx_T, so rows' = rows * Fm^{-1}; solve Fm^T Y = I for Y = (Fm^{-1})^T.
    FMatrix FmT(d, std::vector<Fraction>(d, F.zero())), I(d, std::vector<Fraction>(d, F.zero()));
    for (std::size_t a = 0; a < d; ++a) {
        I[a][a] = F.one();
        for (std::size_t b = 0; b < d; ++b) FmT[a][b] = Fm[b][a];
    }
    auto Y = solve(F, FmT, I);
    if (!Y) raise(ErrorKind::NotEtale, W.name() + " is not generically etale over its base");
    frame.rows.assign(R->nvars(), std::vector<Fraction>(d, F.zero()));
    for (std::size_t j = 0; j < R->nvars(); ++j)
        for (std::size_t t = 0; t < d; ++t)
            for (std::size_t s = 0; s < d; ++s)
                frame.rows[j][t] = F.add(frame.rows[j][t], F.mul(abs.rows[j][s], (*Y)[t][s]));
    return frame;
}

FrameCoordinates coordinates(const PForm& w, const Frame& frame) {
    FractionField F(frame.ring);
    const std::size_t d = frame.basis.size();
    FrameCoordinates out;
    auto Js = subsets(range(d), static_cast<std::size_t>(w.degree()));
    for (const auto& J : Js) out.emplace(J, F.zero());
    for (const auto& [I, c] : w.terms()) {
        for (const auto& J : Js) {
            FMatrix m;
            for (auto i : I) {
                std::vector<Fraction> row;
                for (auto j : J) row.push_back(frame.rows[i][j]);
                m.push_back(std::move(row));
            }
            Fraction det = fdet(F, m);
            if (!F.is_zero(det)) out.at(J) = F.add(out.at(J), F.mul(c, det));
        }
    }
    for (auto it = out.begin(); it != out.end();) it = F.is_zero(it->second) ? out.erase(it) : std::next(it);
    return out;
}

bool generic_equal(const PForm& a, const PForm& b, const Frame& frame) {
    return coordinates(a - b, frame).empty();
}

// ---------------------------------------------------------------------------
// Equalizer

EqualizerReport equalizer_check(const RingHom& cover, const std::vector<MvPolynomial>& generators) {
    const Quotient& A = cover.source();
    const Quotient& B = cover.target();
    const Ring& PB = B->ring();
    auto Bv = AffineVariety::make("B", B, {}, cover);
    auto rel = omega(*Bv, 1, true);
    if (!rel.module.is_zero_module())
        raise(ErrorKind::NotEtale, "relative differentials do not vanish: " + rel.module.to_string());

    RestrictedSpan gen_span(cover, PresentedModule::free(B, 1), [&] {
        std::vector<Vector> g;
        for (const auto& b : generators) g.push_back({b.in_ring(PB)});
        return g;
    }());
    for (std::size_t j = 0; j < B->nvars(); ++j)
        if (!gen_span.contains({B->var(j)}))
            raise(ErrorKind::NotModuleFinite, "the given elements do not generate " + PB->var(j) + " over the base");
    if (!gen_span.contains({MvPolynomial::constant(PB, Rational(1))}))
        raise(ErrorKind::NotModuleFinite, "the given elements do not generate 1 over the base");

    // B (x)_A B: a second copy of B's variables, glued along the base.
    std::vector<std::string> names = PB->vars();
    std::set<std::string> taken(names.begin(), names.end());
    for (const auto& v : PB->vars()) {
        std::string s = v + "'";
        while (taken.count(s)) s += "'";
        taken.insert(s);
        names.push_back(s);
    }
    const std::size_t nb = B->nvars();
    Ring PBB = PolyRing::make(B->field(), names);
    std::vector<MvPolynomial> first, second;
    for (std::size_t j = 0; j < nb; ++j) {
        first.push_back(MvPolynomial::variable(PBB, j));
        second.push_back(MvPolynomial::variable(PBB, nb + j));
    }
    std::vector<MvPolynomial> rels;
    for (const auto& f : B->relations()) {
        rels.push_back(f.in_ring(PB).substitute(first, PBB));
        rels.push_back(f.in_ring(PB).substitute(second, PBB));
    }
    for (const auto& im : cover.images()) rels.push_back(im.substitute(first, PBB) - im.substitute(second, PBB));
    Quotient BB = CoordinateRing::make(PBB, rels);
    RingHom p1 = check_hom(RingHom(B, BB, first));
    RingHom p2 = check_hom(RingHom(B, BB, second));
    RingHom q = p1.after(cover);

    auto Av = AffineVariety::make("A", A);
    auto BBv = AffineVariety::make("BB", BB);
    OmegaModule oA = omega(*Av, 1), oB = omega(*Bv, 1), oBB = omega(*BBv, 1);

    EqualizerReport report;
    std::vector<Vector> image;
    report.image_in_kernel = true;
    for (std::size_t i = 0; i < A->nvars(); ++i) {
        PForm da = pullback(cover, PForm::differential(A, i));
        image.push_back(oB.to_vector(da));
        if (!oBB.equal(pullback(p1, da), pullback(p2, da))) report.image_in_kernel = false;
    }

    std::vector<Vector> diffs;
    std::vector<PForm> sources;
    for (const auto& b : generators)
        for (std::size_t j = 0; j < nb; ++j) {
            PForm w = PForm::differential(B, j).scaled(b.in_ring(PB));
            sources.push_back(w);
            diffs.push_back(oBB.to_vector(pullback(p1, w) - pullback(p2, w)));
        }
    RestrictedSpan kernel_system(q, oBB.module, diffs);
    RestrictedSpan image_span(cover, oB.module, image);
    report.kernel_in_image = true;
    for (const auto& c : kernel_system.relations()) {
        PForm w(B, 1);
        for (std::size_t k = 0; k < c.size(); ++k)
            if (!c[k].is_zero()) w = w + sources[k].scaled(cover.apply(c[k]));
        if (oB.module.is_zero(oB.to_vector(w))) continue;
        ++report.kernel_generators;
        if (!image_span.contains(oB.to_vector(w))) report.kernel_in_image = false;
    }
    report.injective = true;
    for (const auto& c : image_span.relations()) {
        Vector v = oA.module.zero();
        for (std::size_t i = 0; i < c.size(); ++i) v = add(v, scale(c[i], oA.module.generator(i)));
        if (!oA.module.is_zero(v)) report.injective = false;
    }
    return report;
}

}  // namespace omegatr
