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

#include "omegatr/polyring.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <unordered_map>

#include "omegatr/groebner.hpp"
#include "omegatr/parse.hpp"

namespace omegatr {

std::string MonomialOrder::describe() const {
    std::string base = kind == Kind::Lex ? "lex" : "degrevlex";
    if (block) return "block(" + std::to_string(block) + ")/" + base;
    return base;
}

// ---------------------------------------------------------------------------
// Monomials

Monomial::Monomial(const std::vector<unsigned>& exps) : e_(exps.size(), 0) {
    for (std::size_t i = 0; i < exps.size(); ++i) set(i, exps[i]);
}

void Monomial::set(std::size_t i, unsigned value) {
    if (value > 0xFFFFu) raise(ErrorKind::InvalidArgument, "exponent exceeds 65535");
    e_[i] = static_cast<std::uint16_t>(value);
}

unsigned long Monomial::degree() const noexcept {
    unsigned long d = 0;
    for (auto x : e_) d += x;
    return d;
}

bool Monomial::is_one() const noexcept {
    return std::all_of(e_.begin(), e_.end(), [](std::uint16_t x) { return x == 0; });
}

bool Monomial::divides(const Monomial& other) const noexcept {
    for (std::size_t i = 0; i < e_.size(); ++i)
        if (e_[i] > other.e_[i]) return false;
    return true;
}

bool Monomial::coprime(const Monomial& other) const noexcept {
    for (std::size_t i = 0; i < e_.size(); ++i)
        if (e_[i] && other.e_[i]) return false;
    return true;
}

Monomial Monomial::operator*(const Monomial& other) const {
    Monomial r(e_.size());
    for (std::size_t i = 0; i < e_.size(); ++i) r.set(i, unsigned(e_[i]) + other.e_[i]);
    return r;
}

Monomial Monomial::quotient_of(const Monomial& other) const {
    Monomial r(e_.size());
    for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = static_cast<std::uint16_t>(other.e_[i] - e_[i]);
    return r;
}

Monomial Monomial::lcm(const Monomial& other) const {
    Monomial r(e_.size());
    for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = std::max(e_[i], other.e_[i]);
    return r;
}

namespace {

int grevlex_range(const Monomial& a, const Monomial& b, std::size_t lo, std::size_t hi) noexcept {
    unsigned long da = 0, db = 0;
    for (std::size_t i = lo; i < hi; ++i) {
        da += a[i];
        db += b[i];
    }
    if (da != db) return da > db ? 1 : -1;
    for (std::size_t i = hi; i-- > lo;)
        if (a[i] != b[i]) return a[i] < b[i] ? 1 : -1;
    return 0;
}

int lex_range(const Monomial& a, const Monomial& b, std::size_t lo, std::size_t hi) noexcept {
    for (std::size_t i = lo; i < hi; ++i)
        if (a[i] != b[i]) return a[i] > b[i] ? 1 : -1;
    return 0;
}

}  // namespace

int compare(const Monomial& a, const Monomial& b, const MonomialOrder& order) noexcept {
    const std::size_t n = std::min(a.size(), b.size());
    const std::size_t blk = std::min<std::size_t>(order.block, n);
    if (blk) {
        int c = grevlex_range(a, b, 0, blk);
        if (c) return c;
    }
    return order.kind == MonomialOrder::Kind::Lex ? lex_range(a, b, blk, n) : grevlex_range(a, b, blk, n);
}

// ---------------------------------------------------------------------------
// Rings

Ring PolyRing::make(Field field, std::vector<std::string> vars, MonomialOrder order) {
    std::set<std::string> seen;
    for (const auto& v : vars) {
        if (v.empty() || v == "d") raise(ErrorKind::InvalidArgument, "invalid variable name '" + v + "'");
        if (!seen.insert(v).second) raise(ErrorKind::InvalidArgument, "duplicate variable '" + v + "'");
    }
    auto r = std::shared_ptr<PolyRing>(new PolyRing());
    r->field_ = std::move(field);
    r->vars_ = std::move(vars);
    r->order_ = order;
    return r;
}

std::optional<std::size_t> PolyRing::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == name) return i;
    return std::nullopt;
}

bool PolyRing::same_as(const PolyRing& other) const {
    return this == &other || (field_->same_as(*other.field_) && vars_ == other.vars_ && order_ == other.order_);
}

Ring PolyRing::with_order(MonomialOrder order) const { return make(field_, vars_, order); }

std::string PolyRing::describe() const {
    std::string s = field_->describe() + "[";
    for (std::size_t i = 0; i < vars_.size(); ++i) s += (i ? ", " : "") + vars_[i];
    return s + "]";
}

// ---------------------------------------------------------------------------
// Polynomials

MvPolynomial MvPolynomial::constant(const Ring& ring, Scalar c) {
    MvPolynomial p(ring);
    if (!omegatr::is_zero(c)) p.terms_.push_back(Term{Monomial(ring->nvars()), std::move(c)});
    return p;
}

MvPolynomial MvPolynomial::variable(const Ring& ring, std::size_t i) {
    Monomial m(ring->nvars());
    m.set(i, 1);
    return monomial(ring, std::move(m), Scalar{Rational(1)});
}

MvPolynomial MvPolynomial::monomial(const Ring& ring, Monomial m, Scalar c) {
    MvPolynomial p(ring);
    if (!omegatr::is_zero(c)) p.terms_.push_back(Term{std::move(m), std::move(c)});
    return p;
}

MvPolynomial MvPolynomial::from_terms(const Ring& ring, std::vector<Term> terms) {
    const auto& order = ring->order();
    std::sort(terms.begin(), terms.end(),
              [&](const Term& a, const Term& b) { return compare(a.mono, b.mono, order) > 0; });
    MvPolynomial p(ring);
    for (auto& t : terms) {
        if (!p.terms_.empty() && p.terms_.back().mono == t.mono)
            p.terms_.back().coeff = ring->field()->add(p.terms_.back().coeff, t.coeff);
        else
            p.terms_.push_back(std::move(t));
    }
    std::erase_if(p.terms_, [](const Term& t) { return omegatr::is_zero(t.coeff); });
    return p;
}

bool MvPolynomial::is_constant() const noexcept { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one()); }

std::optional<Scalar> MvPolynomial::constant_value() const {
    if (!is_constant()) return std::nullopt;
    return terms_.empty() ? Scalar{} : terms_[0].coeff;
}

unsigned long MvPolynomial::total_degree() const noexcept {
    unsigned long d = 0;
    for (const auto& t : terms_) d = std::max(d, t.mono.degree());
    return d;
}

bool MvPolynomial::involves(std::size_t i) const noexcept {
    return std::any_of(terms_.begin(), terms_.end(), [&](const Term& t) { return t.mono[i] != 0; });
}

void MvPolynomial::require_same_ring(const MvPolynomial& o) const {
    if (!ring_->same_as(*o.ring_)) raise(ErrorKind::RingMismatch, ring_->describe() + " vs " + o.ring_->describe());
}

namespace {

std::vector<Term> merge_terms(const Ring& ring, const std::vector<Term>& a, const std::vector<Term>& b, bool subtract) {
    const auto& k = ring->field();
    const auto& order = ring->order();
    std::vector<Term> out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        int c = i >= a.size() ? -1 : j >= b.size() ? 1 : compare(a[i].mono, b[j].mono, order);
        if (c > 0) {
            out.push_back(a[i++]);
        } else if (c < 0) {
            out.push_back(Term{b[j].mono, subtract ? k->neg(b[j].coeff) : b[j].coeff});
            ++j;
        } else {
            Scalar s = subtract ? k->sub(a[i].coeff, b[j].coeff) : k->add(a[i].coeff, b[j].coeff);
            if (!is_zero(s)) out.push_back(Term{a[i].mono, std::move(s)});
            ++i;
            ++j;
        }
    }
    return out;
}

}  // namespace

MvPolynomial MvPolynomial::operator+(const MvPolynomial& o) const {
    require_same_ring(o);
    MvPolynomial r(ring_);
    r.terms_ = merge_terms(ring_, terms_, o.terms_, false);
    return r;
}

MvPolynomial MvPolynomial::operator-(const MvPolynomial& o) const {
    require_same_ring(o);
    MvPolynomial r(ring_);
    r.terms_ = merge_terms(ring_, terms_, o.terms_, true);
    return r;
}

MvPolynomial MvPolynomial::operator*(const MvPolynomial& o) const {
    require_same_ring(o);
    if (is_zero() || o.is_zero()) return MvPolynomial(ring_);
    const auto& k = ring_->field();
    std::vector<Term> prod;
    prod.reserve(terms_.size() * o.terms_.size());
    for (const auto& a : terms_)
        for (const auto& b : o.terms_) prod.push_back(Term{a.mono * b.mono, k->mul(a.coeff, b.coeff)});
    return from_terms(ring_, std::move(prod));
}

MvPolynomial MvPolynomial::operator-() const {
    MvPolynomial r(ring_);
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back(Term{t.mono, ring_->field()->neg(t.coeff)});
    return r;
}

MvPolynomial MvPolynomial::scaled(const Scalar& c) const {
    MvPolynomial r(ring_);
    if (omegatr::is_zero(c)) return r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back(Term{t.mono, ring_->field()->mul(t.coeff, c)});
    return r;
}

MvPolynomial MvPolynomial::times_term(const Monomial& m, const Scalar& c) const {
    MvPolynomial r(ring_);
    if (omegatr::is_zero(c)) return r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back(Term{t.mono * m, ring_->field()->mul(t.coeff, c)});
    return r;
}

MvPolynomial MvPolynomial::pow(unsigned long e) const {
    MvPolynomial result = constant(ring_, Rational(1));
    MvPolynomial base = *this;
    while (e) {
        if (e & 1) result = result * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return result;
}

MvPolynomial MvPolynomial::monic() const {
    if (is_zero()) return *this;
    return scaled(ring_->field()->inv(terms_.front().coeff));
}

MvPolynomial MvPolynomial::derivative(std::size_t var) const {
    std::vector<Term> out;
    for (const auto& t : terms_) {
        unsigned e = t.mono[var];
        if (!e) continue;
        Monomial m = t.mono;
        m.set(var, e - 1);
        out.push_back(Term{std::move(m), ring_->field()->mul(t.coeff, ring_->field()->from_rational(Rational(e)))});
    }
    return from_terms(ring_, std::move(out));
}

MvPolynomial MvPolynomial::substitute(const std::vector<MvPolynomial>& images, const Ring& target) const {
    if (images.size() != ring_->nvars())
        raise(ErrorKind::InvalidArgument, "substitution needs " + std::to_string(ring_->nvars()) + " images");
    Ring tr = target ? target : (images.empty() ? ring_ : images.front().ring());
    MvPolynomial result(tr);
    std::vector<std::vector<MvPolynomial>> powers(images.size());
    auto power = [&](std::size_t i, unsigned e) -> const MvPolynomial& {
        auto& cache = powers[i];
        if (cache.empty()) cache.push_back(MvPolynomial::constant(tr, Rational(1)));
        while (cache.size() <= e) cache.push_back(cache.back() * images[i]);
        return cache[e];
    };
    for (const auto& t : terms_) {
        MvPolynomial term = MvPolynomial::constant(tr, t.coeff);
        for (std::size_t i = 0; i < images.size() && !term.is_zero(); ++i)
            if (t.mono[i]) term = term * power(i, t.mono[i]);
        result += term;
    }
    return result;
}

MvPolynomial MvPolynomial::in_ring(const Ring& target) const {
    if (target.get() == ring_.get()) return *this;
    if (!target->field()->same_as(*ring_->field()))
        raise(ErrorKind::FieldMismatch, ring_->describe() + " vs " + target->describe());
    std::vector<std::size_t> map(ring_->nvars());
    for (std::size_t i = 0; i < ring_->nvars(); ++i) {
        auto j = target->index_of(ring_->var(i));
        if (!j) {
            if (!involves(i)) {
                map[i] = SIZE_MAX;
                continue;
            }
            raise(ErrorKind::RingMismatch, "variable " + ring_->var(i) + " missing from " + target->describe());
        }
        map[i] = *j;
    }
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
        Monomial m(target->nvars());
        for (std::size_t i = 0; i < ring_->nvars(); ++i)
            if (t.mono[i]) m.set(map[i], t.mono[i]);
        out.push_back(Term{std::move(m), t.coeff});
    }
    return from_terms(target, std::move(out));
}

bool MvPolynomial::operator==(const MvPolynomial& o) const {
    if (!ring_->same_as(*o.ring_) || terms_.size() != o.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i)
        if (!(terms_[i].mono == o.terms_[i].mono) || terms_[i].coeff != o.terms_[i].coeff) return false;
    return true;
}

std::string format_coefficient(const FieldDescriptor& field, const Scalar& c) {
    if (is_single_term(c)) return field.format(c);
    return "(" + field.format(c) + ")";
}

std::string MvPolynomial::to_string() const {
    if (terms_.empty()) return "0";
    const auto& k = *ring_->field();
    std::string out;
    for (std::size_t n = 0; n < terms_.size(); ++n) {
        const Term& t = terms_[n];
        Scalar c = t.coeff;
        bool negative = is_negative_monomial(c);
        if (n == 0) {
            if (negative) out += "-";
        } else {
            out += negative ? " - " : " + ";
        }
        if (negative) c = k.neg(c);
        std::string mono;
        for (std::size_t i = 0; i < t.mono.size(); ++i) {
            if (!t.mono[i]) continue;
            if (!mono.empty()) mono += "*";
            mono += ring_->var(i);
            if (t.mono[i] > 1) mono += "^" + std::to_string(t.mono[i]);
        }
        if (mono.empty())
            out += terms_.size() > 1 ? format_coefficient(k, c) : k.format(c);
        else if (is_one(c))
            out += mono;
        else
            out += format_coefficient(k, c) + "*" + mono;
    }
    return out;
}

namespace {

struct PolyVisitor {
    const Ring& ring;

    MvPolynomial integer(const mpz_class& z) { return MvPolynomial::constant(ring, Rational(z)); }
    MvPolynomial identifier(const std::string& name) {
        if (auto i = ring->index_of(name)) return MvPolynomial::variable(ring, *i);
        const auto& k = ring->field();
        if (!k->is_rationals() && name == k->generator()) return MvPolynomial::constant(ring, k->generator_element());
        raise(ErrorKind::ParseError, "unknown variable '" + name + "' for " + ring->describe());
    }
    MvPolynomial differential(const std::string&) { raise(ErrorKind::ParseError, "differential in polynomial"); }
    MvPolynomial add(const MvPolynomial& a, const MvPolynomial& b) { return a + b; }
    MvPolynomial sub(const MvPolynomial& a, const MvPolynomial& b) { return a - b; }
    MvPolynomial mul(const MvPolynomial& a, const MvPolynomial& b) { return a * b; }
    MvPolynomial div(const MvPolynomial& a, const MvPolynomial& b) {
        auto c = b.constant_value();
        if (!c) raise(ErrorKind::ParseError, "division by a non-constant polynomial");
        if (is_zero(*c)) raise(ErrorKind::DivisionByZero, "division by zero in polynomial");
        return a.scaled(ring->field()->inv(*c));
    }
    MvPolynomial neg(const MvPolynomial& a) { return -a; }
    MvPolynomial pow(const MvPolynomial& a, unsigned long e) { return a.pow(e); }
    MvPolynomial wedge(const MvPolynomial&, const MvPolynomial&) {
        raise(ErrorKind::ParseError, "wedge product in polynomial");
    }
};

}  // namespace

MvPolynomial parse_polynomial(const Ring& ring, std::string_view text) {
    auto ast = parse::parse_expression(text);
    PolyVisitor v{ring};
    return parse::evaluate(*ast, v);
}

// ---------------------------------------------------------------------------
// Groebner bases

namespace {

gb::Context ideal_context(const Ring& ring) {
    return gb::Context{ring->field(), ring->nvars(), gb::ModuleOrder{ring->order()}};
}

gb::ModVec to_modvec(const MvPolynomial& p) {
    gb::ModVec v;
    v.reserve(p.terms().size());
    for (const auto& t : p.terms()) v.push_back(gb::ModTerm{0, t.mono, t.coeff});
    return v;
}

MvPolynomial from_modvec(const Ring& ring, const gb::ModVec& v) {
    std::vector<Term> terms;
    terms.reserve(v.size());
    for (const auto& t : v) terms.push_back(Term{t.mono, t.coeff});
    return MvPolynomial::from_terms(ring, std::move(terms));
}

}  // namespace

GroebnerBasis::GroebnerBasis(Ring ring, std::vector<MvPolynomial> reduced) : ring_(std::move(ring)), polys_(std::move(reduced)) {
    auto sparse = std::make_shared<std::vector<gb::ModVec>>();
    for (const auto& p : polys_) sparse->push_back(to_modvec(p));
    sparse_ = std::move(sparse);
}

bool GroebnerBasis::is_unit() const {
    return std::any_of(polys_.begin(), polys_.end(), [](const MvPolynomial& p) { return p.is_constant() && !p.is_zero(); });
}

MvPolynomial GroebnerBasis::normal_form(const MvPolynomial& p) const {
    const PolyRing& r = *p.ring();
    if (!(r.order() == ring_->order())) {
        if (r.vars() == ring_->vars())
            raise(ErrorKind::OrderMismatch, r.order().describe() + " vs " + ring_->order().describe());
    }
    if (!r.same_as(*ring_)) raise(ErrorKind::RingMismatch, r.describe() + " vs " + ring_->describe());
    if (p.is_zero() || polys_.empty()) return p;
    auto ctx = ideal_context(ring_);
    return from_modvec(p.ring(), gb::reduce(ctx, to_modvec(p), *sparse_));
}

std::optional<std::size_t> GroebnerBasis::standard_monomial_count(const std::vector<std::size_t>& vars) const {
    // Restrict leading monomials to `vars`; the quotient's standard monomials
    // form an order ideal, enumerated breadth first.
    std::vector<std::vector<unsigned>> leads;
    for (const auto& p : polys_) {
        std::vector<unsigned> e(vars.size());
        for (std::size_t k = 0; k < vars.size(); ++k) e[k] = p.leading_term().mono[vars[k]];
        leads.push_back(std::move(e));
    }
    auto divisible = [&](const std::vector<unsigned>& m) {
        for (const auto& l : leads) {
            bool d = true;
            for (std::size_t k = 0; k < m.size() && d; ++k) d = l[k] <= m[k];
            if (d) return true;
        }
        return false;
    };
    // Finite iff every variable has a pure power among the leading monomials.
    for (std::size_t k = 0; k < vars.size(); ++k) {
        bool found = false;
        for (const auto& l : leads) {
            bool pure = l[k] > 0;
            for (std::size_t j = 0; j < l.size() && pure; ++j)
                if (j != k && l[j]) pure = false;
            if (pure || std::all_of(l.begin(), l.end(), [](unsigned x) { return x == 0; })) found = true;
        }
        if (!found) return std::nullopt;
    }
    std::set<std::vector<unsigned>> seen;
    std::deque<std::vector<unsigned>> queue;
    std::vector<unsigned> one(vars.size(), 0);
    if (divisible(one)) return 0;
    seen.insert(one);
    queue.push_back(one);
    while (!queue.empty()) {
        auto m = queue.front();
        queue.pop_front();
        for (std::size_t k = 0; k < vars.size(); ++k) {
            auto n = m;
            ++n[k];
            if (seen.count(n) || divisible(n)) continue;
            seen.insert(n);
            queue.push_back(std::move(n));
        }
    }
    return seen.size();
}

std::string GroebnerBasis::to_string() const {
    std::string s = "{";
    for (std::size_t i = 0; i < polys_.size(); ++i) s += (i ? ", " : "") + polys_[i].to_string();
    return s + "}";
}

GroebnerBasis groebner(const Ideal& ideal, std::optional<MonomialOrder> order) {
    Ring ring = order && !(*order == ideal.ring->order()) ? ideal.ring->with_order(*order) : ideal.ring;
    auto ctx = ideal_context(ring);
    std::vector<gb::ModVec> gens;
    for (const auto& g : ideal.generators) gens.push_back(to_modvec(g.in_ring(ring)));
    auto basis = gb::groebner(ctx, std::move(gens));
    std::vector<MvPolynomial> polys;
    polys.reserve(basis.size());
    for (const auto& v : basis) polys.push_back(from_modvec(ring, v));
    return GroebnerBasis(ring, std::move(polys));
}

MvPolynomial normal_form(const MvPolynomial& p, const GroebnerBasis& gb) { return gb.normal_form(p); }

// ---------------------------------------------------------------------------
// Coordinate rings

Quotient CoordinateRing::make(Ring ring, std::vector<MvPolynomial> relations) {
    for (auto& r : relations) r = r.in_ring(ring);
    auto gb = groebner(Ideal{ring, relations});
    return Quotient(new CoordinateRing(std::move(ring), std::move(relations), std::move(gb)));
}

std::vector<std::size_t> CoordinateRing::independent_set(const std::vector<std::size_t>& candidates) const {
    std::vector<std::size_t> cand = candidates;
    if (cand.empty())
        for (std::size_t i = 0; i < nvars(); ++i) cand.push_back(i);
    if (gb_.is_unit()) return {};
    std::vector<Monomial> leads;
    for (const auto& p : gb_.polys()) leads.push_back(p.leading_term().mono);
    auto independent = [&](const std::vector<std::size_t>& s) {
        for (const auto& m : leads) {
            bool inside = true;
            for (std::size_t i = 0; i < m.size() && inside; ++i)
                if (m[i] && std::find(s.begin(), s.end(), i) == s.end()) inside = false;
            if (inside) return false;
        }
        return true;
    };
    const std::size_t n = cand.size();
    for (std::size_t size = n + 1; size-- > 0;) {
        // Combinations of `size` out of n in lexicographic order.
        std::vector<std::size_t> idx(size);
        for (std::size_t i = 0; i < size; ++i) idx[i] = i;
        for (;;) {
            std::vector<std::size_t> s;
            for (auto i : idx) s.push_back(cand[i]);
            if (independent(s)) return s;
            std::size_t k = size;
            while (k > 0 && idx[k - 1] == n - size + k - 1) --k;
            if (k == 0) break;
            ++idx[k - 1];
            for (std::size_t j = k; j < size; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    return {};
}

std::string CoordinateRing::describe() const {
    std::string s = ring_->describe();
    if (relations_.empty()) return s;
    s += "/(";
    for (std::size_t i = 0; i < relations_.size(); ++i) s += (i ? ", " : "") + relations_[i].to_string();
    return s + ")";
}

// ---------------------------------------------------------------------------
// Homomorphisms

struct RingHom::Cache {
    std::mutex mutex;
    std::shared_ptr<const CombinedRing> combined;
};

RingHom::RingHom(Quotient source, Quotient target, std::vector<MvPolynomial> images)
    : source_(std::move(source)), target_(std::move(target)), cache_(std::make_shared<Cache>()) {
    if (images.size() != source_->nvars())
        raise(ErrorKind::InvalidArgument, "homomorphism needs " + std::to_string(source_->nvars()) + " images, got " +
                                              std::to_string(images.size()));
    if (!source_->field()->same_as(*target_->field()))
        raise(ErrorKind::FieldMismatch, source_->ring()->describe() + " vs " + target_->ring()->describe());
    images_.reserve(images.size());
    for (auto& im : images) images_.push_back(target_->reduce(im.in_ring(target_->ring())));
}

RingHom RingHom::identity(const Quotient& ring) {
    std::vector<MvPolynomial> images;
    for (std::size_t i = 0; i < ring->nvars(); ++i) images.push_back(ring->var(i));
    RingHom h(ring, ring, std::move(images));
    h.verified_ = true;
    return h;
}

MvPolynomial RingHom::apply(const MvPolynomial& p) const {
    MvPolynomial q = p.in_ring(source_->ring());
    return target_->reduce(q.substitute(images_, target_->ring()));
}

RingHom RingHom::after(const RingHom& first) const {
    std::vector<MvPolynomial> images;
    images.reserve(first.images_.size());
    for (const auto& im : first.images_) images.push_back(apply(im));
    RingHom h(first.source_, target_, std::move(images));
    h.verified_ = verified_ && first.verified_;
    return h;
}

bool RingHom::equals(const RingHom& other) const {
    if (images_.size() != other.images_.size()) return false;
    for (std::size_t i = 0; i < images_.size(); ++i)
        if (!target_->equal(images_[i], other.images_[i].in_ring(target_->ring()))) return false;
    return true;
}

std::string RingHom::to_string() const {
    std::string s;
    for (std::size_t i = 0; i < images_.size(); ++i)
        s += (i ? ", " : "") + source_->ring()->var(i) + " -> " + images_[i].to_string();
    return s;
}

RingHom check_hom(const RingHom& h, const std::optional<std::pair<RingHom, RingHom>>& base) {
    for (const auto& r : h.source()->relations()) {
        MvPolynomial im = h.apply(r);
        if (!im.is_zero())
            raise(ErrorKind::NotAHomomorphism,
                  "relation " + r.to_string() + " maps to " + im.to_string() + ", which is nonzero in the target");
    }
    if (base) {
        const auto& [into_source, into_target] = *base;
        for (std::size_t k = 0; k < into_source.images().size(); ++k) {
            MvPolynomial lhs = h.apply(into_source.images()[k]);
            if (!h.target()->equal(lhs, into_target.images()[k].in_ring(h.target()->ring())))
                raise(ErrorKind::NotOverBase, "base variable " + into_source.source()->ring()->var(k) + " maps to " +
                                                  lhs.to_string() + " instead of " +
                                                  into_target.images()[k].to_string());
        }
    }
    RingHom out = h;
    out.verified_ = true;
    return out;
}

// ---------------------------------------------------------------------------
// Combined rings

namespace {

MvPolynomial shift_into(const MvPolynomial& p, const Ring& target, std::size_t offset) {
    std::vector<Term> terms;
    terms.reserve(p.terms().size());
    for (const auto& t : p.terms()) {
        Monomial m(target->nvars());
        for (std::size_t i = 0; i < t.mono.size(); ++i)
            if (t.mono[i]) m.set(i + offset, t.mono[i]);
        terms.push_back(Term{std::move(m), t.coeff});
    }
    return MvPolynomial::from_terms(target, std::move(terms));
}

MvPolynomial extract(const MvPolynomial& p, const Ring& target, std::size_t offset) {
    std::vector<Term> terms;
    terms.reserve(p.terms().size());
    for (const auto& t : p.terms()) {
        Monomial m(target->nvars());
        for (std::size_t i = 0; i < t.mono.size(); ++i) {
            if (!t.mono[i]) continue;
            if (i < offset || i >= offset + target->nvars())
                raise(ErrorKind::InvalidArgument, "polynomial " + p.to_string() + " involves foreign variables");
            m.set(i - offset, t.mono[i]);
        }
        terms.push_back(Term{std::move(m), t.coeff});
    }
    return MvPolynomial::from_terms(target, std::move(terms));
}

std::string fresh_name(std::string base, const std::set<std::string>& taken) {
    while (taken.count(base)) base += "'";
    return base;
}

}  // namespace

MvPolynomial CombinedRing::from_target(const MvPolynomial& b) const { return shift_into(b, ring->ring(), 0); }
MvPolynomial CombinedRing::from_source(const MvPolynomial& a) const { return shift_into(a, ring->ring(), nb); }
MvPolynomial CombinedRing::to_source(const MvPolynomial& p, const Quotient& source) const {
    return source->reduce(extract(p, source->ring(), nb));
}
MvPolynomial CombinedRing::to_target(const MvPolynomial& p, const Quotient& target) const {
    return target->reduce(extract(p, target->ring(), 0));
}

CombinedRing combine(const RingHom& h) {
    {
        std::lock_guard lock(h.cache_->mutex);
        if (h.cache_->combined) return *h.cache_->combined;
    }
    const auto& B = h.target();
    const auto& A = h.source();
    std::vector<std::string> names = B->ring()->vars();
    std::set<std::string> taken(names.begin(), names.end());
    for (const auto& v : A->ring()->vars()) {
        names.push_back(fresh_name(v, taken));
        taken.insert(names.back());
    }
    const std::size_t nb = B->nvars(), na = A->nvars();
    Ring ring = PolyRing::make(B->field(), names, MonomialOrder::elimination(static_cast<std::uint32_t>(nb)));
    std::vector<MvPolynomial> rels;
    for (const auto& r : B->relations()) rels.push_back(shift_into(r.in_ring(B->ring()), ring, 0));
    for (std::size_t k = 0; k < na; ++k)
        rels.push_back(MvPolynomial::variable(ring, nb + k) - shift_into(h.images()[k], ring, 0));
    auto combined = std::make_shared<CombinedRing>(CombinedRing{CoordinateRing::make(ring, std::move(rels)), nb, na});
    std::lock_guard lock(h.cache_->mutex);
    if (!h.cache_->combined) h.cache_->combined = combined;
    return *h.cache_->combined;
}

std::optional<MvPolynomial> preimage(const RingHom& h, const MvPolynomial& b) {
    CombinedRing c = combine(h);
    MvPolynomial nf = c.ring->reduce(c.from_target(b.in_ring(h.target()->ring())));
    for (std::size_t i = 0; i < c.nb; ++i)
        if (nf.involves(i)) return std::nullopt;
    return c.to_source(nf, h.source());
}

bool is_injective(const RingHom& h) {
    CombinedRing c = combine(h);
    for (const auto& g : c.ring->gb().polys()) {
        bool eliminated = true;
        for (std::size_t i = 0; i < c.nb; ++i) eliminated = eliminated && !g.involves(i);
        if (eliminated && !h.source()->is_zero(c.to_source(g, h.source()))) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Generic rank

namespace {

// Degree over k(U) of the quotient ring, U a subset of its variables given by
// index: block order with the other variables first.
std::optional<std::size_t> degree_over(const Quotient& q, const std::vector<std::size_t>& u) {
    std::vector<std::string> names;
    std::vector<std::size_t> first;
    for (std::size_t i = 0; i < q->nvars(); ++i)
        if (std::find(u.begin(), u.end(), i) == u.end()) names.push_back(q->ring()->var(i));
    for (std::size_t i = 0; i < names.size(); ++i) first.push_back(i);
    for (auto i : u) names.push_back(q->ring()->var(i));
    Ring ring = PolyRing::make(q->field(), names, MonomialOrder::elimination(static_cast<std::uint32_t>(first.size())));
    auto gb = groebner(Ideal{ring, [&] {
                                 std::vector<MvPolynomial> g;
                                 for (const auto& p : q->gb().polys()) g.push_back(p.in_ring(ring));
                                 return g;
                             }()});
    return gb.standard_monomial_count(first);
}

std::optional<std::size_t> specialized_degree(const Quotient& q, const std::vector<std::size_t>& u,
                                              const std::vector<long>& values) {
    const Ring& ring = q->ring();
    std::vector<MvPolynomial> images;
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < q->nvars(); ++i) {
        auto it = std::find(u.begin(), u.end(), i);
        if (it == u.end()) {
            images.push_back(MvPolynomial::variable(ring, i));
            rest.push_back(i);
        } else {
            images.push_back(MvPolynomial::constant(ring, Rational(values[it - u.begin()])));
        }
    }
    std::vector<MvPolynomial> gens;
    for (const auto& p : q->gb().polys()) gens.push_back(p.substitute(images, ring));
    auto gb = groebner(Ideal{ring, std::move(gens)}, MonomialOrder::degrevlex());
    return gb.standard_monomial_count(rest);
}

}  // namespace

long generic_rank(const RingHom& h, const RankOptions& options) {
    CombinedRing c = combine(h);
    const auto& A = h.source();
    if (!is_injective(h)) raise(ErrorKind::InvalidArgument, h.to_string() + " is not injective");
    std::vector<std::size_t> ua = A->independent_set();
    std::vector<std::size_t> uc;
    for (auto i : ua) uc.push_back(c.nb + i);

    if (options.strategy == RankStrategy::Exact) {
        auto db = degree_over(c.ring, uc);
        auto da = degree_over(A, ua);
        if (!db) raise(ErrorKind::NotModuleFinite, "generic fiber of " + A->describe() + " -> " + h.target()->describe() + " is infinite");
        if (!da || *da == 0) raise(ErrorKind::InvalidArgument, "base ring is not a domain of the expected dimension");
        if (*db % *da != 0) raise(ErrorKind::InvalidArgument, "degrees " + std::to_string(*db) + " and " + std::to_string(*da) + " are incompatible; rings must be domains");
        return static_cast<long>(*db / *da);
    }

    std::mt19937_64 rng(options.seed);
    auto draw = [&] { return static_cast<long>(rng() % 20001) - 10000; };
    const int wanted = std::max(3, options.trials);
    std::map<long, int> votes;  // -1 encodes an infinite fiber
    int good = 0;
    for (int attempt = 0; attempt < wanted * 4 && good < wanted; ++attempt) {
        std::vector<long> values(ua.size());
        for (auto& v : values) v = draw();
        auto da = specialized_degree(A, ua, values);
        if (!da || *da == 0) continue;
        auto db = specialized_degree(c.ring, uc, values);
        if (db && (*db == 0 || *db % *da != 0)) continue;
        ++good;
        ++votes[db ? static_cast<long>(*db / *da) : -1];
    }
    if (good == 0) raise(ErrorKind::DegenerateSpecialization, "every specialization was degenerate");
    auto best = std::max_element(votes.begin(), votes.end(),
                                 [](const auto& a, const auto& b) { return a.second < b.second; });
    if (best->first < 0) raise(ErrorKind::NotModuleFinite, "specialized fibers are infinite");
    return best->first;
}

Quotient localize(const Quotient& ring, const MvPolynomial& f, const std::string& var_name) {
    MvPolynomial g = f.in_ring(ring->ring());
    if (ring->is_zero(g)) raise(ErrorKind::ZeroDenominator, "cannot localize at " + f.to_string() + ", which is zero");
    std::set<std::string> taken(ring->ring()->vars().begin(), ring->ring()->vars().end());
    std::string name = var_name;
    if (name.empty()) {
        name = "s";
        for (int k = 1; taken.count(name); ++k) name = "s" + std::to_string(k);
    } else if (taken.count(name)) {
        raise(ErrorKind::InvalidArgument, "variable " + name + " already exists");
    }
    auto vars = ring->ring()->vars();
    vars.push_back(name);
    Ring r = PolyRing::make(ring->field(), vars, ring->ring()->order());
    std::vector<MvPolynomial> rels;
    for (const auto& p : ring->relations()) rels.push_back(p.in_ring(r));
    rels.push_back(MvPolynomial::variable(r, vars.size() - 1) * g.in_ring(r) - MvPolynomial::constant(r, Rational(1)));
    return CoordinateRing::make(r, std::move(rels));
}

}  // namespace omegatr
