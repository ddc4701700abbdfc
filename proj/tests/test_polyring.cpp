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

#include <random>

#include "doctest.h"
#include "omegatr/polyring.hpp"

using namespace omegatr;

namespace {

Field zeta3() { return FieldDescriptor::make_extension({Rational(1), Rational(1), Rational(1)}); }

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error raised");
    return ErrorKind::InvalidArgument;
}

struct Mu3 {
    Field k = zeta3();
    Ring ra = PolyRing::make(k, {"u", "v"});
    Ring rb = PolyRing::make(k, {"x", "y", "u", "v"});
    Quotient A = CoordinateRing::polynomial(ra);
    Quotient B = CoordinateRing::make(rb, {parse_polynomial(rb, "x^3 - u*v^2"), parse_polynomial(rb, "y^3 - u^2*v"),
                                           parse_polynomial(rb, "x^2 - y*v"), parse_polynomial(rb, "y^2 - x*u"),
                                           parse_polynomial(rb, "x*y - u*v")});
    RingHom inc = RingHom(A, B, {B->parse("u"), B->parse("v")});
};

MvPolynomial random_poly(const Ring& r, std::mt19937& rng, int deg) {
    std::uniform_int_distribution<int> c(-5, 5), e(0, deg);
    MvPolynomial p(r);
    for (int t = 0; t < 4; ++t) {
        std::vector<unsigned> ex(r->nvars());
        for (auto& x : ex) x = e(rng);
        p += MvPolynomial::monomial(r, Monomial(ex), r->field()->from_rational(Rational(c(rng))));
    }
    return p;
}

}  // namespace

TEST_CASE("printing and parsing") {
    auto r = PolyRing::make(FieldDescriptor::rationals(), {"x", "y"});
    CHECK(parse_polynomial(r, "x^2*y - 1/2*x + 3").to_string() == "x^2*y - 1/2*x + 3");
    CHECK(parse_polynomial(r, "(x + y)^2 - x*x").to_string() == "2*x*y + y^2");
    CHECK(parse_polynomial(r, "0").to_string() == "0");
    auto rz = PolyRing::make(zeta3(), {"x"});
    CHECK(parse_polynomial(rz, "(w + 1)*x - w").to_string() == "(w + 1)*x - w");
    CHECK(kind_of([&] { parse_polynomial(r, "x/y"); }) == ErrorKind::ParseError);
    CHECK(kind_of([&] { parse_polynomial(r, "z"); }) == ErrorKind::ParseError);
    std::mt19937 rng(3);
    for (int i = 0; i < 50; ++i) {
        auto p = random_poly(r, rng, 3);
        CHECK(parse_polynomial(r, p.to_string()) == p);
    }
}

TEST_CASE("groebner bases") {
    auto k = FieldDescriptor::rationals();
    auto r = PolyRing::make(k, {"x", "y"});
    auto g1 = groebner(Ideal{r, {parse_polynomial(r, "x")}});
    CHECK(g1.to_string() == "{x}");
    auto lex = groebner(Ideal{r, {parse_polynomial(r, "x^2 - 1"), parse_polynomial(r, "x*y - 1")}}, MonomialOrder::lex());
    CHECK(lex.to_string() == "{y^2 - 1, x - y}");
    CHECK(lex.polys().size() == 2);

    Mu3 m;
    CHECK(m.B->reduce(m.B->parse("x*y")).to_string() == "u*v");
    CHECK(m.B->reduce(parse_polynomial(m.rb, "x^3")).to_string() == "u*v^2");
    CHECK(m.B->reduce(parse_polynomial(m.rb, "x*y - u*v")).is_zero());
    CHECK(m.B->reduce(MvPolynomial(m.rb)).is_zero());
    CHECK(kind_of([&] { m.B->gb().normal_form(parse_polynomial(m.rb->with_order(MonomialOrder::lex()), "x")); }) ==
          ErrorKind::OrderMismatch);
}

TEST_CASE("normal form properties") {
    auto r = PolyRing::make(FieldDescriptor::rationals(), {"x", "y", "z"});
    auto gb = groebner(Ideal{r, {parse_polynomial(r, "x^2 + y*z - 1"), parse_polynomial(r, "x*y - z^2")}});
    std::mt19937 rng(5);
    for (int i = 0; i < 30; ++i) {
        auto p = random_poly(r, rng, 3);
        auto n = gb.normal_form(p);
        CHECK(gb.normal_form(n) == n);
        CHECK(gb.contains(p - n));
        auto q = random_poly(r, rng, 2);
        CHECK(gb.contains((p - n) * q));
    }
    // Determinism: recomputing from permuted generators yields the same basis.
    auto gb2 = groebner(Ideal{r, {parse_polynomial(r, "x*y - z^2"), parse_polynomial(r, "x^2 + y*z - 1")}});
    CHECK(gb.to_string() == gb2.to_string());
}

TEST_CASE("homomorphism checks") {
    auto k = FieldDescriptor::rationals();
    auto rt = PolyRing::make(k, {"t"});
    auto ry = PolyRing::make(k, {"y"});
    auto A = CoordinateRing::polynomial(rt);
    auto B = CoordinateRing::polynomial(ry);
    RingHom inc(A, B, {B->parse("y^2")});
    RingHom sigma(B, B, {B->parse("-y")});
    auto checked = check_hom(sigma, std::make_pair(inc, inc));
    CHECK(checked.verified());

    auto Bn = CoordinateRing::make(ry, {parse_polynomial(ry, "y^2")});
    CHECK(kind_of([&] { check_hom(RingHom(Bn, Bn, {Bn->parse("y + 1")})); }) == ErrorKind::NotAHomomorphism);
    RingHom shift(B, B, {B->parse("y + 1")});
    CHECK(kind_of([&] { check_hom(shift, std::make_pair(inc, inc)); }) == ErrorKind::NotOverBase);

    Mu3 m;
    RingHom g(m.B, m.B, {m.B->parse("w*x"), m.B->parse("w^2*y"), m.B->parse("u"), m.B->parse("v")});
    CHECK(check_hom(g, std::make_pair(m.inc, m.inc)).verified());
    RingHom bad(m.B, m.B, {m.B->parse("w*x"), m.B->parse("w*y"), m.B->parse("u"), m.B->parse("v")});
    CHECK(kind_of([&] { check_hom(bad); }) == ErrorKind::NotAHomomorphism);
}

TEST_CASE("generic rank") {
    auto k = FieldDescriptor::rationals();
    auto rt = PolyRing::make(k, {"t"});
    auto ry = PolyRing::make(k, {"y"});
    auto A = CoordinateRing::polynomial(rt);
    auto B = CoordinateRing::polynomial(ry);
    RingHom inc(A, B, {B->parse("y^2")});
    for (auto s : {RankStrategy::Exact, RankStrategy::Specialization}) {
        CHECK(generic_rank(inc, {s, 0}) == 2);
        CHECK(generic_rank(RingHom::identity(A), {s, 0}) == 1);
    }
    Mu3 m;
    CHECK(generic_rank(m.inc, {RankStrategy::Exact}) == 3);
    CHECK(generic_rank(m.inc, {RankStrategy::Specialization, 17}) == 3);

    // Circle over the x-line: degree 2.
    auto rc = PolyRing::make(k, {"x", "y"});
    auto C = CoordinateRing::make(rc, {parse_polynomial(rc, "x^2 + y^2 - 1")});
    auto rx = PolyRing::make(k, {"a"});
    RingHom proj(CoordinateRing::polynomial(rx), C, {C->parse("x")});
    CHECK(generic_rank(proj) == 2);
    CHECK(generic_rank(proj, {RankStrategy::Specialization, 4}) == 2);

    // Plane over a line is not finite.
    auto r2 = PolyRing::make(k, {"p", "q"});
    RingHom line(A, CoordinateRing::polynomial(r2), {parse_polynomial(r2, "p")});
    CHECK(kind_of([&] { generic_rank(line); }) == ErrorKind::NotModuleFinite);
    CHECK(kind_of([&] { generic_rank(line, {RankStrategy::Specialization}); }) == ErrorKind::NotModuleFinite);
}

TEST_CASE("localization") {
    auto k = FieldDescriptor::rationals();
    auto rt = PolyRing::make(k, {"t"});
    auto A = CoordinateRing::polynomial(rt);
    auto At = localize(A, A->parse("t"));
    CHECK(At->describe() == "Q[t, s]/(t*s - 1)");
    CHECK(At->is_zero(At->parse("s*t - 1")));
    CHECK(kind_of([&] { localize(A, A->parse("0")); }) == ErrorKind::ZeroDenominator);

    auto rc = PolyRing::make(k, {"x", "y"});
    auto C = CoordinateRing::make(rc, {parse_polynomial(rc, "x^2 + y^2 - 1")});
    auto Cy = localize(C, C->parse("y"));
    CHECK(Cy->nvars() == 3);
    CHECK(Cy->is_zero(Cy->parse("s*y - 1")));

    // Localizing twice at f, g agrees in rank with localizing at f*g.
    auto ry = PolyRing::make(k, {"y"});
    auto B = CoordinateRing::polynomial(ry);
    auto Bfg = localize(B, B->parse("y*(y + 1)"));
    auto Bf = localize(B, B->parse("y"));
    auto Bf_g = localize(Bf, Bf->parse("y + 1"));
    RingHom i1(A, Bfg, {Bfg->parse("y^2")});
    RingHom i2(A, Bf_g, {Bf_g->parse("y^2")});
    CHECK(generic_rank(i1) == generic_rank(i2));
    CHECK(generic_rank(i1) == 2);
}

TEST_CASE("preimages and independent sets") {
    Mu3 m;
    auto a = preimage(m.inc, m.B->parse("x^3 + y*x"));
    REQUIRE(a.has_value());
    CHECK(a->to_string() == "u*v^2 + u*v");
    CHECK(!preimage(m.inc, m.B->parse("x")).has_value());
    CHECK(m.B->dimension() == 2);
    auto rc = PolyRing::make(FieldDescriptor::rationals(), {"x", "y"});
    auto C = CoordinateRing::make(rc, {parse_polynomial(rc, "x^2 + y^2 - 1")});
    CHECK(C->independent_set() == std::vector<std::size_t>{1});
}
