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
#include "omegatr/transfer.hpp"

using namespace omegatr;

namespace {

Field Q() { return FieldDescriptor::rationals(); }

Quotient ring(std::vector<std::string> vars, std::vector<std::string> rels = {}) {
    auto r = PolyRing::make(Q(), std::move(vars));
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

Variety var(const std::string& name, const Quotient& R) { return AffineVariety::make(name, R, {true, true, true}); }

// X1 = A^1 (coordinate s), X2 = A^1 (coordinate t), Z = V(s - t^2) = Spec Q[t].
struct Transpose {
    Quotient A1 = ring({"s"});
    Quotient A2 = ring({"t"});
    Quotient C = ring({"t"});
    Variety X1 = var("X1", A1), X2 = var("X2", A2), Z = var("Z", C);
    RingHom p1 = hom(A1, C, {"t^2"});
    RingHom p2 = hom(A2, C, {"t"});
    RingHom sigma = hom(C, C, {"-t"});
    GaloisCoverDatum cover = make_cover(X1, Z, p1, {RingHom::identity(C), sigma}, {C->parse("1"), C->parse("t")});
    PrimeCorrespondence c = make_prime(X1, X2, Z, p1, p2, cover, {RingHom::identity(C), sigma});
};

}  // namespace

TEST_CASE("transfer along graphs and transposes") {
    auto L1 = ring({"t"});
    auto L2 = ring({"s"});
    auto f = hom(L2, L1, {"t^2"});
    auto g = graph(var("X1", L1), var("X2", L2), f);
    CHECK(transfer_prime(g, parse_form(L2, "d(s)")).to_string() == "2*t * d(t)");

    Transpose T;
    CHECK(transfer_prime(T.c, parse_form(T.A2, "d(t)")).is_zero());
    CHECK(transfer_prime(T.c, parse_form(T.A2, "t * d(t)")).to_string() == "1 * d(s)");
    CHECK(transfer_prime(T.c, parse_form(T.A2, "t^2")).to_string() == "2*s");

    // Dropping a witness map breaks the cardinality invariant.
    CHECK(kind_of([&] { make_prime(T.X1, T.X2, T.Z, T.p1, T.p2, T.cover, {RingHom::identity(T.C)}); }) ==
          ErrorKind::WitnessInvalid);
    auto not_over = hom(T.C, T.C, {"t + 1"});
    CHECK(kind_of([&] { make_prime(T.X1, T.X2, T.Z, T.p1, T.p2, T.cover, {RingHom::identity(T.C), not_over}); }) ==
          ErrorKind::WitnessInvalid);
}

TEST_CASE("cycles") {
    auto L = ring({"u"});
    auto X = var("X", L);
    auto id = graph(X, X, RingHom::identity(L));
    auto flip = graph(X, X, hom(L, L, {"-u"}));
    PForm w = parse_form(L, "(u^3 + u + 1) * d(u)");
    CHECK(transfer_cycle(make_cycle({{1, id}}), w).same_as(w));
    CHECK(transfer_cycle(make_cycle({{2, id}}), w).same_as(w.scaled(L->parse("2"))));
    auto both = make_cycle({{1, id}, {1, flip}});
    CHECK(transfer_cycle(both, w).to_string() == "(2*u^3 + 2*u) * d(u)");
    CHECK(make_cycle({{1, id}, {2, id}}).terms.size() == 1);
    CHECK(make_cycle({{1, id}, {2, id}}).terms[0].first == 3);
    CHECK(make_cycle({{1, id}}).to_string() == "1*[(u - u')]");
    CHECK(kind_of([&] { make_cycle({{0, id}}); }) == ErrorKind::InvalidArgument);

    // Linearity over cycles.
    auto sq = graph(X, X, hom(L, L, {"u^2"}));
    auto z1 = make_cycle({{2, sq}});
    auto z2 = make_cycle({{1, flip}});
    auto sum = make_cycle({{2, sq}, {1, flip}});
    CHECK(transfer_cycle(sum, w).same_as(transfer_cycle(z1, w) + transfer_cycle(z2, w)));
}

TEST_CASE("laws") {
    Transpose T;
    std::mt19937 rng(21);
    std::uniform_int_distribution<int> c(-4, 4), e(0, 4);
    auto line = ring({"x"});
    auto Xl = var("L", line);
    auto f = hom(T.A2, line, {"x^3 - x"});
    auto gr = graph(Xl, T.X2, f);
    for (int trial = 0; trial < 8; ++trial) {
        std::string a = std::to_string(c(rng)) + "*t^" + std::to_string(e(rng)) + " + " + std::to_string(c(rng));
        PForm w0 = parse_form(T.A2, a);
        PForm w1 = parse_form(T.A2, "(" + a + ") * d(t)");
        // Graph law.
        CHECK(transfer_prime(gr, w1).same_as(pullback(f, w1)));
        // d-compatibility.
        CHECK(transfer_prime(T.c, de_rham_d(w0)).same_as(de_rham_d(transfer_prime(T.c, w0))));
        // Degree law: transpose of s = t^2 applied to a pullback gives 2 w.
        PForm v = parse_form(T.A1, "(" + std::to_string(c(rng)) + "*s^" + std::to_string(e(rng)) + " + 1) * d(s)");
        PForm lifted = pullback(T.p1, v);  // a form on Z, which is also X2's ring
        PForm onX2 = parse_form(T.A2, lifted.to_string());
        CHECK(transfer_prime(T.c, onX2).same_as(v.scaled(T.A1->parse("2"))));
    }
}

TEST_CASE("pushforward") {
    auto Zp = ring({"t"});
    auto Z = ring({"y"});
    auto p = hom(Zp, Z, {"y^2"});
    auto pushed = pushforward({PushTerm{1, p, ""}});
    REQUIRE(pushed.size() == 1);
    CHECK(pushed[0].multiplicity == 2);
    CHECK(pushforward({PushTerm{3, p, ""}})[0].multiplicity == 6);
    CHECK(pushforward({PushTerm{1, RingHom::identity(Z), ""}})[0].multiplicity == 1);
    auto merged = pushforward({PushTerm{1, p, ""}, PushTerm{1, RingHom::identity(Zp), ""}});
    REQUIRE(merged.size() == 1);
    CHECK(merged[0].multiplicity == 3);
    auto plane = ring({"a", "b"});
    CHECK(kind_of([&] { pushforward({PushTerm{1, hom(plane, Z, {"y", "0"}), ""}}); }) == ErrorKind::RankFailure);
}

namespace {

// Graph of t -> t^2 from X1 = A^1(a) to X2 = A^1(u), then its transpose X2 -> X3 = A^1(b).
struct KummerPair {
    Quotient A1 = ring({"a"}), A2 = ring({"u"}), A3 = ring({"b"});
    Variety X1 = var("X1", A1), X2 = var("X2", A2), X3 = var("X3", A3);
    Quotient C2 = ring({"c"});  // Z' = V(u - b^2) with coordinate c = b
    Variety Z2 = var("Z'", C2);
    PrimeCorrespondence first = graph(X1, X2, hom(A2, A1, {"a^2"}));
    RingHom sig = hom(C2, C2, {"-c"});
    PrimeCorrespondence second =
        make_prime(X2, X3, Z2, hom(A2, C2, {"c^2"}), hom(A3, C2, {"c"}),
                   make_cover(X2, Z2, hom(A2, C2, {"c^2"}), {RingHom::identity(C2), sig}, {C2->parse("1"), C2->parse("c")}),
                   {RingHom::identity(C2), sig});
    CycleCorrespondence z = make_cycle({{1, first}});
    CycleCorrespondence z2 = make_cycle({{1, second}});
    // Z x_{X2} Z' = V(a^2 - c^2) = V(a - c) + V(a + c), each a copy of A^1 with coordinate a.
    PrimeCorrespondence diag = graph(X1, X3, hom(A3, A1, {"a"}));
    PrimeCorrespondence anti = graph(X1, X3, hom(A3, A1, {"-a"}));
    FiberWitness witness{{{{FiberComponent{1, A1, RingHom::identity(A1), hom(C2, A1, {"a"}), diag, RingHom::identity(A1)},
                            FiberComponent{1, A1, RingHom::identity(A1), hom(C2, A1, {"-a"}), anti,
                                           RingHom::identity(A1)}}}}};
};

}  // namespace

TEST_CASE("composition") {
    KummerPair K;
    auto composite = compose_cycles(K.z, K.z2, K.witness);
    CHECK(composite.terms.size() == 2);
    CHECK(composite.to_string() == "1*[(a + b)] + 1*[(a - b)]");
    auto report = verify_composition(K.z, K.z2, K.witness,
                                     {parse_form(K.A3, "b * d(b)"), parse_form(K.A3, "(b^3 + 2) * d(b)"),
                                      parse_form(K.A3, "0", 1), parse_form(K.A3, "b^4 + b")});
    CHECK(report.passed());
    CHECK(report.samples[0].left == "2*a * d(a)");
    CHECK(report.samples[2].left == "0");

    // A missing component breaks the degree identity.
    FiberWitness half{{{{K.witness.parts[0][0][0]}}}};
    CHECK(kind_of([&] { compose_cycles(K.z, K.z2, half); }) == ErrorKind::WitnessDegreeMismatch);
    // A component outside the fiber product.
    FiberWitness wrong = K.witness;
    wrong.parts[0][0][1].from_second = hom(K.C2, K.A1, {"2*a"});
    CHECK(kind_of([&] { compose_cycles(K.z, K.z2, wrong); }) == ErrorKind::ComponentNotContained);

    // Composition with identity graphs.
    auto idX1 = make_cycle({{1, graph(K.X1, K.X1, RingHom::identity(K.A1))}});
    FiberWitness trivial{{{{FiberComponent{1, K.A1, RingHom::identity(K.A1), RingHom::identity(K.A1), K.first,
                                           RingHom::identity(K.A1)}}}}};
    auto same = compose_cycles(idX1, K.z, trivial);
    CHECK(same.to_string() == K.z.to_string());

    // Graphs compose to the graph of the composite.
    auto g = make_cycle({{1, graph(K.X2, K.X3, hom(K.A3, K.A2, {"u + 1"}))}});
    auto gf = graph(K.X1, K.X3, hom(K.A3, K.A1, {"a^2 + 1"}));
    FiberWitness gw{{{{FiberComponent{1, K.A1, RingHom::identity(K.A1), hom(K.A2, K.A1, {"a^2"}), gf,
                                      RingHom::identity(K.A1)}}}}};
    auto composite_graph = compose_cycles(K.z, g, gw);
    CHECK(composite_graph.to_string() == make_cycle({{1, gf}}).to_string());
    CHECK(verify_composition(K.z, g, gw, {parse_form(K.A3, "d(b)")}).samples[0].left == "2*a * d(a)");
}

TEST_CASE("well-definedness") {
    Transpose T;
    std::vector<PForm> samples{parse_form(T.A2, "t * d(t)"), parse_form(T.A2, "(t^3 + t^2) * d(t)"),
                               parse_form(T.A2, "t^4")};
    AlternativeWitness same{T.cover, T.c.homs, RingHom::identity(T.C)};
    CHECK(verify_well_definedness(T.c, same, samples).passed());

    // W1 = Z with a square root of 2 adjoined: a rank 4 cover of X1.
    auto B1 = ring({"t", "r"}, {"r^2 - 2"});
    auto W1 = var("W1", B1);
    auto inc = hom(T.A1, B1, {"t^2"});
    auto big = make_cover(T.X1, W1, inc,
                          {RingHom::identity(B1), hom(B1, B1, {"-t", "r"}), hom(B1, B1, {"t", "-r"}),
                           hom(B1, B1, {"-t", "-r"})},
                          {B1->parse("1"), B1->parse("t"), B1->parse("r"), B1->parse("t*r")});
    AlternativeWitness enlarged{big, {hom(T.C, B1, {"t"}), hom(T.C, B1, {"-t"})}, hom(T.C, B1, {"t"})};
    auto report = verify_well_definedness(T.c, enlarged, samples);
    CHECK(report.bijection);
    CHECK(report.passed());
    CHECK(report.samples[0].left == "1 * d(s)");

    AlternativeWitness bad{big, {hom(T.C, B1, {"t"}), hom(T.C, B1, {"-t"})}, hom(T.C, B1, {"-t"})};
    CHECK(verify_well_definedness(T.c, bad, samples).passed());  // q -> q o f is still a bijection
    AlternativeWitness off{big, {hom(T.C, B1, {"t"}), hom(T.C, B1, {"-t"})}, hom(T.C, B1, {"r*t"})};
    CHECK(kind_of([&] { verify_well_definedness(T.c, off, samples); }) == ErrorKind::BijectionFailure);
}
