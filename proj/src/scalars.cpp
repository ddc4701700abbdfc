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

#include "omegatr/scalars.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "omegatr/parse.hpp"

namespace omegatr {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::DivisionByZero: return "DivisionByZero";
        case ErrorKind::FieldMismatch: return "FieldMismatch";
        case ErrorKind::ReducibleMinpoly: return "ReducibleMinpoly";
        case ErrorKind::NotMonic: return "NotMonic";
        case ErrorKind::OrderMismatch: return "OrderMismatch";
        case ErrorKind::RingMismatch: return "RingMismatch";
        case ErrorKind::NotAHomomorphism: return "NotAHomomorphism";
        case ErrorKind::NotOverBase: return "NotOverBase";
        case ErrorKind::DegenerateSpecialization: return "DegenerateSpecialization";
        case ErrorKind::NotModuleFinite: return "NotModuleFinite";
        case ErrorKind::ZeroDenominator: return "ZeroDenominator";
        case ErrorKind::ActionNotVerified: return "ActionNotVerified";
        case ErrorKind::TwistMismatch: return "TwistMismatch";
        case ErrorKind::NegativeDegree: return "NegativeDegree";
        case ErrorKind::NonRegularCoefficient: return "NonRegularCoefficient";
        case ErrorKind::NotEtale: return "NotEtale";
        case ErrorKind::GroupNotClosed: return "GroupNotClosed";
        case ErrorKind::RankMismatch: return "RankMismatch";
        case ErrorKind::HomNotOverBase: return "HomNotOverBase";
        case ErrorKind::NotDescendable: return "NotDescendable";
        case ErrorKind::NotRegular: return "NotRegular";
        case ErrorKind::CheckFailed: return "CheckFailed";
        case ErrorKind::WitnessInvalid: return "WitnessInvalid";
        case ErrorKind::RankFailure: return "RankFailure";
        case ErrorKind::WitnessDegreeMismatch: return "WitnessDegreeMismatch";
        case ErrorKind::ComponentNotContained: return "ComponentNotContained";
        case ErrorKind::BijectionFailure: return "BijectionFailure";
        case ErrorKind::ValueMismatch: return "ValueMismatch";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

void trim(Scalar& a) {
    while (!a.empty() && sgn(a.back()) == 0) a.pop_back();
}

bool is_one(const Scalar& a) { return a.size() == 1 && a[0] == 1; }

bool is_single_term(const Scalar& a) {
    return std::count_if(a.begin(), a.end(), [](const Rational& q) { return sgn(q) != 0; }) == 1;
}

bool is_negative_monomial(const Scalar& a) { return is_single_term(a) && sgn(a.back()) < 0; }

// ---------------------------------------------------------------------------
// Irreducibility heuristics.

namespace detail {

namespace {

using PolyP = std::vector<long>;  // coefficients mod p, low degree first

void trim_p(PolyP& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

long inv_mod(long a, long p) {
    long t = 0, nt = 1, r = p, nr = ((a % p) + p) % p;
    while (nr != 0) {
        long q = r / nr;
        std::tie(t, nt) = std::make_pair(nt, t - q * nt);
        std::tie(r, nr) = std::make_pair(nr, r - q * nr);
    }
    return ((t % p) + p) % p;
}

PolyP rem_p(PolyP a, const PolyP& b, long p) {
    trim_p(a);
    long lead_inv = inv_mod(b.back(), p);
    while (a.size() >= b.size()) {
        long c = a.back() * lead_inv % p;
        std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] = ((a[shift + i] - c * b[i]) % p + p) % p;
        trim_p(a);
    }
    return a;
}

PolyP quo_p(PolyP a, const PolyP& b, long p) {
    trim_p(a);
    PolyP q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, 0);
    long lead_inv = inv_mod(b.back(), p);
    while (a.size() >= b.size()) {
        long c = a.back() * lead_inv % p;
        std::size_t shift = a.size() - b.size();
        q[shift] = c;
        for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] = ((a[shift + i] - c * b[i]) % p + p) % p;
        trim_p(a);
    }
    trim_p(q);
    return q;
}

PolyP gcd_p(PolyP a, PolyP b, long p) {
    trim_p(a);
    trim_p(b);
    while (!b.empty()) {
        PolyP r = rem_p(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        long li = inv_mod(a.back(), p);
        for (auto& c : a) c = c * li % p;
    }
    return a;
}

PolyP mulmod_p(const PolyP& a, const PolyP& b, const PolyP& f, long p) {
    if (a.empty() || b.empty()) return {};
    PolyP r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    return rem_p(std::move(r), f, p);
}

PolyP powmod_p(PolyP base, long e, const PolyP& f, long p) {
    PolyP result{1};
    base = rem_p(std::move(base), f, p);
    while (e > 0) {
        if (e & 1) result = mulmod_p(result, base, f, p);
        base = mulmod_p(base, base, f, p);
        e >>= 1;
    }
    return result;
}

}  // namespace

std::optional<std::vector<int>> factor_degrees_mod_p(const std::vector<mpz_class>& poly, long p) {
    PolyP f;
    for (const auto& c : poly) {
        mpz_class r = c % p;
        if (r < 0) r += p;
        f.push_back(r.get_si());
    }
    trim_p(f);
    if (f.size() != poly.size()) return std::nullopt;  // leading coefficient vanishes mod p
    long li = inv_mod(f.back(), p);
    for (auto& c : f) c = c * li % p;
    PolyP df;
    for (std::size_t i = 1; i < f.size(); ++i) df.push_back(static_cast<long>(i % p) * f[i] % p);
    trim_p(df);
    if (df.empty() || gcd_p(f, df, p).size() != 1) return std::nullopt;

    std::vector<int> degrees;
    PolyP x{0, 1};
    PolyP h = x;
    int d = 0;
    while (f.size() > 1) {
        ++d;
        if (static_cast<int>(f.size()) - 1 < 2 * d) {
            degrees.push_back(static_cast<int>(f.size()) - 1);
            break;
        }
        h = powmod_p(h, p, f, p);
        PolyP hx = h;
        hx.resize(std::max<std::size_t>(hx.size(), 2), 0);
        hx[1] = ((hx[1] - 1) % p + p) % p;
        trim_p(hx);
        PolyP g = gcd_p(f, hx, p);
        int gdeg = static_cast<int>(g.size()) - 1;
        if (gdeg > 0) {
            for (int k = 0; k < gdeg / d; ++k) degrees.push_back(d);
            f = quo_p(f, g, p);
            h = rem_p(h, f, p);
        }
    }
    std::sort(degrees.begin(), degrees.end());
    return degrees;
}

}  // namespace detail

namespace {

std::vector<mpz_class> divisors(mpz_class n) {
    n = abs(n);
    std::vector<mpz_class> primes;
    std::vector<int> mult;
    mpz_class m = n;
    for (mpz_class d = 2; d * d <= m && d < 1000000; ++d) {
        if (m % d == 0) {
            primes.push_back(d);
            mult.push_back(0);
            while (m % d == 0) {
                m /= d;
                ++mult.back();
            }
        }
    }
    if (m > 1) {
        primes.push_back(m);
        mult.push_back(1);
    }
    std::vector<mpz_class> out{1};
    for (std::size_t i = 0; i < primes.size(); ++i) {
        std::size_t sz = out.size();
        mpz_class pk = 1;
        for (int k = 1; k <= mult[i]; ++k) {
            pk *= primes[i];
            for (std::size_t j = 0; j < sz; ++j) out.push_back(out[j] * pk);
        }
    }
    return out;
}

bool has_rational_root(const std::vector<mpz_class>& f) {
    if (f.front() == 0) return true;
    for (const auto& num : divisors(f.front())) {
        for (const auto& den : divisors(f.back())) {
            for (int sign : {1, -1}) {
                // Horner on num/den scaled by den^n.
                mpz_class acc = 0;
                mpz_class n = sign * num;
                std::vector<mpz_class> dp(f.size());
                dp[0] = 1;
                for (std::size_t i = 1; i < f.size(); ++i) dp[i] = dp[i - 1] * den;
                mpz_class npow = 1;
                for (std::size_t i = 0; i < f.size(); ++i) {
                    acc += f[i] * npow * dp[f.size() - 1 - i];
                    npow *= n;
                }
                if (acc == 0) return true;
            }
        }
    }
    return false;
}

std::set<int> subset_sums(const std::vector<int>& degrees) {
    std::set<int> sums{0};
    for (int d : degrees) {
        std::set<int> next = sums;
        for (int s : sums) next.insert(s + d);
        sums = std::move(next);
    }
    return sums;
}

bool is_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

}  // namespace

Field FieldDescriptor::rationals() {
    static const Field q = [] {
        auto f = std::shared_ptr<FieldDescriptor>(new FieldDescriptor());
        return Field(f);
    }();
    return q;
}

Field FieldDescriptor::make_extension(std::vector<Rational> minpoly, std::string generator) {
    for (auto& c : minpoly) c.canonicalize();
    while (!minpoly.empty() && sgn(minpoly.back()) == 0) minpoly.pop_back();
    if (minpoly.size() < 2) raise(ErrorKind::InvalidArgument, "minimal polynomial must have degree >= 1");
    if (minpoly.back() != 1) raise(ErrorKind::NotMonic, "minimal polynomial must be monic");

    auto fd = std::shared_ptr<FieldDescriptor>(new FieldDescriptor());
    fd->minpoly_ = minpoly;
    fd->generator_ = std::move(generator);
    const int n = static_cast<int>(minpoly.size()) - 1;
    if (n == 1) return fd;

    // Integer model L * m(w).
    mpz_class lcm_den = 1;
    for (const auto& c : minpoly) lcm_den = lcm(lcm_den, mpz_class(c.get_den()));
    std::vector<mpz_class> integral;
    for (const auto& c : minpoly) integral.push_back(mpz_class(c * lcm_den));

    if (has_rational_root(integral))
        raise(ErrorKind::ReducibleMinpoly, "minimal polynomial has a rational root");
    if (n <= 3) return fd;

    std::set<int> possible;
    for (int d = 0; d <= n; ++d) possible.insert(d);
    int used = 0;
    for (long p = 2; used < 25; ++p) {
        if (!is_prime(p)) continue;
        auto shape = detail::factor_degrees_mod_p(integral, p);
        if (!shape) continue;  // p divides the discriminant or the leading coefficient
        ++used;
        if (shape->size() == 1) return fd;
        std::set<int> sums = subset_sums(*shape);
        std::set<int> meet;
        std::set_intersection(possible.begin(), possible.end(), sums.begin(), sums.end(),
                              std::inserter(meet, meet.begin()));
        possible = std::move(meet);
        if (possible.size() <= 2) return fd;  // only trivial factorizations remain
    }
    fd->warning_ = "irreducibility not proved by reduction modulo 25 primes; accepted as asserted";
    return fd;
}

bool FieldDescriptor::same_as(const FieldDescriptor& other) const {
    return this == &other || (minpoly_ == other.minpoly_ && generator_ == other.generator_);
}

Scalar FieldDescriptor::reduce(std::vector<Rational> poly) const {
    for (auto& c : poly) c.canonicalize();
    if (!minpoly_.empty()) {
        const std::size_t n = minpoly_.size() - 1;
        for (std::size_t k = poly.size(); k-- > n;) {
            if (sgn(poly[k]) == 0) continue;
            Rational c = poly[k];
            for (std::size_t i = 0; i < n; ++i) poly[k - n + i] -= c * minpoly_[i];
            poly[k] = 0;
        }
    }
    trim(poly);
    return poly;
}

Scalar FieldDescriptor::add(const Scalar& a, const Scalar& b) const {
    Scalar r(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (i < a.size()) r[i] += a[i];
        if (i < b.size()) r[i] += b[i];
    }
    trim(r);
    return r;
}

Scalar FieldDescriptor::sub(const Scalar& a, const Scalar& b) const {
    Scalar r(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (i < a.size()) r[i] += a[i];
        if (i < b.size()) r[i] -= b[i];
    }
    trim(r);
    return r;
}

Scalar FieldDescriptor::neg(const Scalar& a) const {
    Scalar r = a;
    for (auto& c : r) c = -c;
    return r;
}

Scalar FieldDescriptor::mul(const Scalar& a, const Scalar& b) const {
    if (a.empty() || b.empty()) return {};
    if (a.size() == 1 && b.size() == 1) return Scalar{a[0] * b[0]};
    std::vector<Rational> r(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (sgn(a[i]) == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    return reduce(std::move(r));
}

namespace {

using QPoly = std::vector<Rational>;

void qtrim(QPoly& p) {
    while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

// Division with remainder in Q[w].
std::pair<QPoly, QPoly> qdivmod(QPoly a, const QPoly& b) {
    qtrim(a);
    QPoly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0);
    while (a.size() >= b.size() && !a.empty()) {
        Rational c = a.back() / b.back();
        std::size_t shift = a.size() - b.size();
        q[shift] = c;
        for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= c * b[i];
        qtrim(a);
    }
    qtrim(q);
    return {q, a};
}

QPoly qsub_mul(const QPoly& a, const QPoly& q, const QPoly& b) {
    QPoly r = a;
    if (!q.empty() && !b.empty()) {
        r.resize(std::max(r.size(), q.size() + b.size() - 1));
        for (std::size_t i = 0; i < q.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j) r[i + j] -= q[i] * b[j];
    }
    qtrim(r);
    return r;
}

}  // namespace

Scalar FieldDescriptor::inv(const Scalar& a) const {
    if (a.empty()) raise(ErrorKind::DivisionByZero, "inverse of zero");
    if (a.size() == 1) return Scalar{1 / a[0]};
    QPoly r0 = minpoly_, r1 = a, s0, s1{1};
    while (!r1.empty()) {
        auto [q, r] = qdivmod(r0, r1);
        QPoly s2 = qsub_mul(s0, q, s1);
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    if (r0.size() != 1) raise(ErrorKind::DivisionByZero, "element is a zero divisor modulo the minimal polynomial");
    for (auto& c : s0) c /= r0[0];
    return reduce(std::move(s0));
}

Scalar FieldDescriptor::pow(const Scalar& a, unsigned long e) const {
    Scalar result{1};
    Scalar base = a;
    while (e > 0) {
        if (e & 1) result = mul(result, base);
        e >>= 1;
        if (e) base = mul(base, base);
    }
    return result;
}

Scalar FieldDescriptor::from_rational(const Rational& q) const {
    Scalar s{q};
    s[0].canonicalize();
    trim(s);
    return s;
}

Scalar FieldDescriptor::generator_element() const {
    if (minpoly_.empty()) raise(ErrorKind::FieldMismatch, "the field Q has no generator");
    return reduce({Rational(0), Rational(1)});
}

std::string FieldDescriptor::format(const Scalar& a) const {
    if (a.empty()) return "0";
    std::string out;
    bool first = true;
    for (std::size_t k = a.size(); k-- > 0;) {
        const Rational& c = a[k];
        if (sgn(c) == 0) continue;
        Rational mag = abs(c);
        if (first) {
            if (sgn(c) < 0) out += "-";
        } else {
            out += sgn(c) < 0 ? " - " : " + ";
        }
        first = false;
        if (k == 0) {
            out += mag.get_str();
            continue;
        }
        if (mag != 1) out += mag.get_str() + "*";
        out += generator_;
        if (k > 1) out += "^" + std::to_string(k);
    }
    return out;
}

std::string FieldDescriptor::describe() const {
    if (minpoly_.empty()) return "Q";
    return "Q[" + generator_ + "]/(" + format(Scalar(minpoly_.begin(), minpoly_.end() - 1)) + " + " + generator_ +
           (minpoly_.size() > 2 ? "^" + std::to_string(minpoly_.size() - 1) : "") + ")";
}

// ---------------------------------------------------------------------------

FieldElement::FieldElement(Field field, Scalar value) : field_(std::move(field)), value_(field_->reduce(std::move(value))) {}

FieldElement FieldElement::rational(Field field, const Rational& q) {
    return FieldElement(field, field->from_rational(q));
}

void FieldElement::require_same_field(const FieldElement& o) const {
    if (!field_->same_as(*o.field_)) raise(ErrorKind::FieldMismatch, field_->describe() + " vs " + o.field_->describe());
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
    require_same_field(o);
    return FieldElement(field_, field_->add(value_, o.value_));
}
FieldElement FieldElement::operator-(const FieldElement& o) const {
    require_same_field(o);
    return FieldElement(field_, field_->sub(value_, o.value_));
}
FieldElement FieldElement::operator*(const FieldElement& o) const {
    require_same_field(o);
    return FieldElement(field_, field_->mul(value_, o.value_));
}
FieldElement FieldElement::operator/(const FieldElement& o) const {
    require_same_field(o);
    return FieldElement(field_, field_->div(value_, o.value_));
}
FieldElement FieldElement::operator-() const { return FieldElement(field_, field_->neg(value_)); }
FieldElement FieldElement::inverse() const { return FieldElement(field_, field_->inv(value_)); }

bool FieldElement::operator==(const FieldElement& o) const {
    return field_->same_as(*o.field_) && value_ == o.value_;
}

namespace {

struct ScalarVisitor {
    const FieldDescriptor& field;

    Scalar integer(const mpz_class& z) { return field.from_rational(Rational(z)); }
    Scalar identifier(const std::string& name) {
        if (field.is_rationals() || name != field.generator())
            raise(ErrorKind::ParseError, "unknown symbol '" + name + "' in scalar");
        return field.generator_element();
    }
    Scalar differential(const std::string&) { raise(ErrorKind::ParseError, "differential in scalar"); }
    Scalar add(const Scalar& a, const Scalar& b) { return field.add(a, b); }
    Scalar sub(const Scalar& a, const Scalar& b) { return field.sub(a, b); }
    Scalar mul(const Scalar& a, const Scalar& b) { return field.mul(a, b); }
    Scalar div(const Scalar& a, const Scalar& b) { return field.div(a, b); }
    Scalar neg(const Scalar& a) { return field.neg(a); }
    Scalar pow(const Scalar& a, unsigned long e) { return field.pow(a, e); }
    Scalar wedge(const Scalar&, const Scalar&) { raise(ErrorKind::ParseError, "wedge product in scalar"); }
};

}  // namespace

FieldElement parse_scalar(const Field& field, const std::string& text) {
    auto ast = parse::parse_expression(text);
    ScalarVisitor v{*field};
    return FieldElement(field, parse::evaluate(*ast, v));
}

}  // namespace omegatr
