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

#include <functional>
#include <random>

#include "doctest.h"
#include "omegatr/descent.hpp"

using namespace omegatr;

namespace {

Field Q() { return FieldDescriptor::rationals(); }
Field zeta3() { return FieldDescriptor::make_extension({Rational(1), Rational(1), Rational(1)}); }

Quotient ring(std::vector<std::string> vars, std::vector<std::string> rels = {}, Field k = Q()) {
    auto r = PolyRing::make(k, std::move(vars));
    std::vector<MvPolynomial> ps;
    for (const auto& s : rels) ps.push_back(parse_polynomial(r, s));
    return CoordinateRing::make(r, ps);
}

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error raised");
    return ErrorKind::InvalidArgument;
}

RingHom hom(const Quotient& s, const Quotient& t, std::vector<std::string> images) {
    std::vector<MvPolynomial> ps;
    for (const auto& i : images) ps.push_back(t->parse(i));
    return RingHom(s, t, ps);
}

struct Kummer {
    Quotient A = ring({"t"});
    Quotient B = ring({"y"});
    RingHom inc = hom(A, B, {"y^2"});
    Variety X = AffineVariety::make("X", A, {true, true, true});
    Variety W = AffineVariety::make("W", B, {true, true, true});
    GaloisCoverDatum d = make_cover(X, W, inc, {RingHom::identity(B), hom(B, B, {"-y"})}, {B->parse("1"), B->parse("y")});
};

struct Mu3 {
    Field k = zeta3();
    Quotient A = ring({"u", "v"}, {}, k);
    Quotient B = ring({"x", "y", "u", "v"}, {"x^3 - u*v^2", "y^3 - u^2*v", "x^2 - y*v", "y^2 - x*u", "x*y - u*v"}, k);
    RingHom inc = hom(A, B, {"u", "v"});
    Variety X = AffineVariety::make("X", A, {true, true, true});
    Variety W = AffineVariety::make("W", B, {true, true, false});
    std::vector<RingHom> group{RingHom::identity(B), hom(B, B, {"w*x", "w^2*y", "u", "v"}),
                               hom(B, B, {"w^2*x", "w*y", "u", "v"})};
    GaloisCoverDatum d = make_cover(X, W, inc, group, {B->parse("1"), B->parse("x"), B->parse("y")});
};

}  // namespace

TEST_CASE("cover verification") {
    Kummer K;
    auto report = verify_cover(K.d);
    CHECK(report.passed());
    CHECK(report.rank == 2);

    Mu3 M;
    CHECK(verify_cover(M.d).rank == 3);

    GaloisCoverDatum lonely{K.X, K.W, K.inc, {RingHom::identity(K.B)}, {K.B->parse("1"), K.B->parse("y")}};
    CHECK(kind_of([&] { verify_cover(lonely); }) == ErrorKind::RankMismatch);

    GaloisCoverDatum open{M.X, M.W, M.inc, {M.group[0], M.group[1]}, M.d.generators};
    CHECK(kind_of([&] { verify_cover(open); }) == ErrorKind::GroupNotClosed);

    auto shift = hom(K.B, K.B, {"y + 1"});
    GaloisCoverDatum moving{K.X, K.W, K.inc, {RingHom::identity(K.B), shift}, K.d.generators};
    CHECK(kind_of([&] { verify_cover(moving); }) == ErrorKind::HomNotOverBase);

    GaloisCoverDatum short_gens{K.X, K.W, K.inc, K.d.group, {K.B->parse("1")}};
    CHECK(kind_of([&] { verify_cover(short_gens); }) == ErrorKind::NotModuleFinite);

    // The other diagonal weights do not preserve x^2 - y*v.
    auto bad = hom(M.B, M.B, {"w*x", "w*y", "u", "v"});
    CHECK(kind_of([&] { check_hom(bad); }) == ErrorKind::NotAHomomorphism);
}

TEST_CASE("averaging") {
    Kummer K;
    CHECK(average(parse_form(K.B, "d(y)"), K.d).is_zero());
    CHECK(average(parse_form(K.B, "y * d(y)"), K.d).to_string() == "y * d(y)");
    Mu3 M;
    PForm xdy = parse_form(M.B, "x * d(y)");
    CHECK(average(xdy, M.d).same_as(xdy));
    CHECK(average(parse_form(M.B, "d(x)"), M.d).is_zero());

    std::mt19937 rng(5);
    std::uniform_int_distribution<int> c(-3, 3);
    for (int trial = 0; trial < 10; ++trial) {
        std::string text = std::to_string(c(rng)) + "*y^" + std::to_string(trial % 4) + " * d(y) + " +
                           std::to_string(c(rng)) + "*y^3 * d(y)";
        PForm w = parse_form(K.B, text);
        PForm a = average(w, K.d);
        CHECK(average(a, K.d).same_as(a));
    }
}

TEST_CASE("descent on the Kummer cover") {
    Kummer K;
    CHECK(descend(parse_form(K.B, "y * d(y)"), K.d).to_string() == "1/2 * d(t)");
    CHECK(descend(parse_form(K.B, "d(y)"), K.d).is_zero());
    CHECK(descend(parse_form(K.B, "y^2 * y * d(y)"), K.d).to_string() == "1/2*t * d(t)");
    CHECK(descend(parse_form(K.B, "y^2"), K.d).to_string() == "t");
    CHECK(descend(parse_form(K.B, "y^3 * d(y)"), K.d).to_string() == "1/2*t * d(t)");
    // A form whose descent has a pole at t = 0.
    CHECK(kind_of([&] { descend(parse_form(K.B, "d(y) / y"), K.d); }) == ErrorKind::NotRegular);

    // Properties: descend o pullback = id, A-linearity, group invariance.
    std::mt19937 rng(9);
    std::uniform_int_distribution<int> c(-5, 5), e(0, 3);
    auto sigma = K.d.group[1];
    for (int trial = 0; trial < 10; ++trial) {
        std::string a = std::to_string(c(rng)) + "*t^" + std::to_string(e(rng)) + " + " + std::to_string(c(rng));
        PForm w = parse_form(K.A, "(" + a + ") * d(t)");
        CHECK(descend(pullback(K.inc, w), K.d).same_as(w));
        std::string b = std::to_string(c(rng)) + "*y^" + std::to_string(e(rng)) + " + " + std::to_string(c(rng));
        PForm v = parse_form(K.B, "(" + b + ") * d(y)");
        PForm scaled = v.scaled(K.inc.apply(parse_polynomial(K.A->ring(), a)));
        CHECK(descend(scaled, K.d).same_as(descend(v, K.d).scaled(parse_polynomial(K.A->ring(), a))));
        CHECK(descend(pullback(sigma, v), K.d).same_as(descend(v, K.d)));
    }
}

TEST_CASE("the mu3 cover") {
    Mu3 M;
    // B is free over A on 1, x, y and generated by the orbit of 1 + x + y.
    const Ring& PB = M.B->ring();
    RestrictedSpan basis(M.d.inclusion, PresentedModule::free(M.B, 1),
                         {{M.B->parse("1")}, {M.B->parse("x")}, {M.B->parse("y")}});
    CHECK(basis.relations().empty());
    std::vector<Vector> orbit;
    for (const auto& g : M.d.group) orbit.push_back({g.apply(parse_polynomial(PB, "1 + x + y"))});
    RestrictedSpan primitive(M.d.inclusion, PresentedModule::free(M.B, 1), orbit);
    for (const char* b : {"1", "x", "y", "x*y", "x^2"}) CHECK(primitive.contains({M.B->parse(b)}));

    // x dy is invariant and nonzero in the relative differentials.
    auto inv = invariant_forms(M.d, 1, true);
    CHECK(!inv.module.is_zero_module());
    Variety Wrel = M.d.total;
    auto rel = omega(*Wrel, 1, true);
    PForm xdy = parse_form(M.B, "x * d(y)");
    CHECK(!rel.module.is_zero(rel.to_vector(xdy)));
    for (const auto& g : M.d.group) CHECK(rel.equal(pullback(g, xdy), xdy));
    RestrictedSpan invariant_span(M.d.inclusion, rel.module, inv.elements);
    CHECK(invariant_span.contains(rel.to_vector(xdy)));
    CHECK(!invariant_span.contains(rel.to_vector(parse_form(M.B, "d(x)"))));

    // Descent of x dy: the averaged absolute form comes from X.
    PForm down = descend_generic(xdy, M.d);
    CHECK(generic_equal(pullback(M.inc, down), xdy, relative_frame(M.inc, *M.W)));
}

TEST_CASE("invariant functions") {
    Kummer K;
    auto inv0 = invariant_forms(K.d, 0, false);
    REQUIRE(inv0.elements.size() == 1);
    CHECK(inv0.module.is_free());
    // Relative forms are Q*dy, on which sigma acts by -1.
    auto inv1 = invariant_forms(K.d, 1, true);
    CHECK(inv1.module.is_zero_module());
    Mu3 M;
    auto m0 = invariant_forms(M.d, 0, false);
    CHECK(m0.elements.size() == 1);
    CHECK(m0.module.is_free());
}

TEST_CASE("bidual descent") {
    Kummer K;
    auto r = bidual_descent_check(K.d, 1);
    CHECK(r.holds());
    CHECK(r.base_generators == 1);

    auto line = ring({"t"});
    auto X = AffineVariety::make("X", line);
    auto trivial = make_cover(X, X, RingHom::identity(line), {RingHom::identity(line)}, {line->parse("1")});
    CHECK(bidual_descent_check(trivial, 1).holds());
    CHECK(bidual_descent_check(trivial, 0).holds());
}

TEST_CASE("bidual descent on the mu3 cover") {
    Mu3 M;
    auto r = bidual_descent_check(M.d, 1);
    CHECK(r.holds());
    CHECK(r.base_generators == 2);
}
