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

// Acceptance suite: one PASS/FAIL line per criterion.
// Usage: acceptance DATA_DIR GOLDEN_DIR

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "commands.hpp"
#include "omegatr/descent.hpp"
#include "omegatr/transfer.hpp"

using namespace omegatr;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool passed;
    std::string detail;
};

Field Q() { return FieldDescriptor::rationals(); }
Field zeta3() { return FieldDescriptor::make_extension({Rational(1), Rational(1), Rational(1)}); }

Quotient ring(std::vector<std::string> vars, std::vector<std::string> rels = {}, Field k = Q()) {
    auto r = PolyRing::make(k, std::move(vars));
    std::vector<MvPolynomial> ps;
    for (const auto& s : rels) ps.push_back(parse_polynomial(r, s));
    return CoordinateRing::make(r, ps);
}

RingHom hom(const Quotient& s, const Quotient& t, std::vector<std::string> images) {
    std::vector<MvPolynomial> ps;
    for (const auto& i : images) ps.push_back(t->parse(i));
    return RingHom(s, t, ps);
}

Variety var(const std::string& name, const Quotient& R, bool smooth = true) {
    return AffineVariety::make(name, R, {true, true, smooth});
}

std::optional<ErrorKind> kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return std::nullopt;
}

// Random p-form with coefficients of total degree at most max_degree.
PForm random_form(const Quotient& R, std::mt19937& rng, int p, int max_degree) {
    std::uniform_int_distribution<int> c(-5, 5), e(0, max_degree), v(0, static_cast<int>(R->nvars()) - 1);
    const Ring& P = R->ring();
    FractionField F(R);
    PForm w(R, p);
    for (int t = 0; t < 3; ++t) {
        std::vector<unsigned> ex(R->nvars());
        int budget = e(rng);
        for (auto& x : ex) {
            x = static_cast<unsigned>(std::uniform_int_distribution<int>(0, budget)(rng));
            budget -= static_cast<int>(x);
        }
        PForm::Index I;
        for (int k = 0; k < p; ++k) I.push_back(static_cast<std::uint32_t>(v(rng)));
        w.add_term(I, F.make(MvPolynomial::monomial(P, Monomial(ex), P->field()->from_rational(Rational(c(rng))))));
    }
    return w;
}

struct Cli {
    int code;
    std::string text;  // stdout, then stderr after a marker line
};

Cli cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    std::string text = out.str();
    if (!err.str().empty()) text += "--- stderr\n" + err.str();
    return {code, text};
}

struct Mu3 {
    Field k = zeta3();
    Quotient A = ring({"u", "v"}, {}, k);
    Quotient B = ring({"x", "y", "u", "v"}, {"x^3 - u*v^2", "y^3 - u^2*v", "x^2 - y*v", "y^2 - x*u", "x*y - u*v"}, k);
    RingHom inc = hom(A, B, {"u", "v"});
    Variety X = var("X", A);
    Variety W = var("W", B, false);
    std::vector<RingHom> group{RingHom::identity(B), hom(B, B, {"w*x", "w^2*y", "u", "v"}),
                               hom(B, B, {"w^2*x", "w*y", "u", "v"})};
    GaloisCoverDatum d = make_cover(X, W, inc, group, {B->parse("1"), B->parse("x"), B->parse("y")});
};

struct Kummer {
    Quotient A = ring({"t"});
    Quotient B = ring({"y"});
    GaloisCoverDatum d = make_cover(var("X", A), var("W", B), hom(A, B, {"y^2"}),
                                    {RingHom::identity(B), hom(B, B, {"-y"})}, {B->parse("1"), B->parse("y")});
};

Outcome counterexample() {
    auto start = std::chrono::steady_clock::now();
    Mu3 M;
    std::vector<std::string> bad;
    if (generic_rank(M.inc, {RankStrategy::Exact}) != 3) bad.push_back("rank (exact)");
    if (generic_rank(M.inc, {RankStrategy::Specialization, 11}) != 3) bad.push_back("rank (specialization)");

    std::vector<Vector> basis{{M.B->parse("1")}, {M.B->parse("x")}, {M.B->parse("y")}};
    RestrictedSpan span(M.inc, PresentedModule::free(M.B, 1), basis);
    if (!span.relations().empty()) bad.push_back("basis dependent");
    for (const char* m : {"x^2", "y^2", "x*y", "x^2*y + u*x", "v*y^2 - 3*x"})
        if (!span.contains({M.B->parse(m)})) bad.push_back(std::string("basis misses ") + m);

    OmegaModule rel = omega(*M.d.total, 1, true);
    PForm xdy = parse_form(M.B, "x * d(y)");
    for (const auto& g : M.group)
        if (!rel.equal(pullback(g, xdy), xdy)) bad.push_back("x dy not invariant");
    if (rel.module.is_zero(rel.to_vector(xdy))) bad.push_back("x dy is zero");

    MvPolynomial p = M.B->parse("1 + x + y");
    std::vector<Vector> orbit;
    for (const auto& g : M.group) orbit.push_back({g.apply(p)});
    RestrictedSpan ospan(M.inc, PresentedModule::free(M.B, 1), orbit);
    for (const char* m : {"1", "x", "y"})
        if (!ospan.contains({M.B->parse(m)})) bad.push_back(std::string("orbit misses ") + m);

    Cli c = cli({"verify", "counterexample", "mu3.toml"});
    if (c.code != 0 || c.text.find("xdy invariant: yes; xdy zero: no") == std::string::npos)
        bad.push_back("cli report");

    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs >= 10) bad.push_back("slow");
    std::ostringstream detail;
    detail.precision(2);
    detail << std::fixed << "rank 3, basis 1, x, y, x dy invariant and nonzero, 1 + x + y primitive (" << secs << " s)";
    if (!bad.empty()) return {false, "failed: " + bad.front()};
    return {true, detail.str()};
}

Outcome bidual() {
    auto line = ring({"t"});
    auto X = var("X", line);
    auto trivial = make_cover(X, X, RingHom::identity(line), {RingHom::identity(line)}, {line->parse("1")});
    if (!bidual_descent_check(trivial, 1).holds()) return {false, "trivial cover"};
    Kummer K;
    if (!bidual_descent_check(K.d, 1).holds()) return {false, "Kummer cover"};
    Mu3 M;
    auto r = bidual_descent_check(M.d, 1);
    if (!r.holds()) return {false, "mu3 cover"};

    // x dy is invariant in the absolute Omega^1(W) but not in the image of Omega^1(X).
    OmegaModule abs = omega(*M.W, 1);
    PForm xdy = parse_form(M.B, "x * d(y)");
    for (const auto& g : M.group)
        if (!abs.equal(pullback(g, xdy), xdy)) return {false, "x dy not invariant in absolute Omega^1"};
    std::vector<Vector> image{abs.to_vector(pullback(M.inc, parse_form(M.A, "d(u)"))),
                              abs.to_vector(pullback(M.inc, parse_form(M.A, "d(v)")))};
    RestrictedSpan pulled(M.inc, abs.module, image);
    if (!pulled.contains(abs.to_vector(pullback(M.inc, parse_form(M.A, "u * d(v) + v^2 * d(u)")))))
        return {false, "image of Omega^1(X) not recognized"};
    if (pulled.contains(abs.to_vector(xdy))) return {false, "naive invariants agree with Omega^1(X)"};
    return {true, "trivial, Kummer and mu3 biduals descend; x dy is invariant in Omega^1(W), outside Omega^1(X)"};
}

// Source/target pairs for graph and pullback checks; f: O(X2) -> O(X1).
struct MapCase {
    Variety X1, X2;
    RingHom f;
};

std::vector<MapCase> map_corpus() {
    auto a1 = ring({"t"});
    auto a2 = ring({"x", "y"});
    auto c = ring({"x", "y"}, {"x^2 + y^2 - 1"});
    auto L = var("A1", a1), P = var("A2", a2), C = var("C", c);
    return {
        {L, L, hom(a1, a1, {"t^3 - 2*t + 1"})},
        {L, P, hom(a2, a1, {"t^2 - 1", "t^3 + t"})},
        {P, L, hom(a1, a2, {"x*y - y^2 + 3"})},
        {P, P, hom(a2, a2, {"x + y^2", "x*y"})},
        {C, L, hom(a1, c, {"x^2 - y"})},
        {C, P, hom(a2, c, {"x", "y"})},
        {C, C, hom(c, c, {"3/5*x - 4/5*y", "4/5*x + 3/5*y"})},
        {C, C, hom(c, c, {"x^2 - y^2", "2*x*y"})},
    };
}

Outcome transfer_oracle() {
    auto s = ring({"s"});
    auto t = ring({"t"});
    auto Xs = var("S", s), Xt = var("T", t);
    auto sigma = hom(t, t, {"-t"});
    auto cover = make_cover(Xs, var("Z", t), hom(s, t, {"t^2"}), {RingHom::identity(t), sigma},
                            {t->parse("1"), t->parse("t")});
    auto transpose = make_prime(Xs, Xt, cover.total, hom(s, t, {"t^2"}), RingHom::identity(t), cover,
                                {RingHom::identity(t), sigma});
    if (!transfer_prime(transpose, parse_form(t, "d(t)")).is_zero()) return {false, "dt does not transfer to 0"};
    if (!transfer_prime(transpose, parse_form(t, "t * d(t)")).same_as(parse_form(s, "d(s)")))
        return {false, "t dt does not transfer to ds"};

    std::mt19937 rng(2026);
    int count = 0;
    for (const auto& m : map_corpus()) {
        auto g = graph(m.X1, m.X2, m.f);
        for (int p = 0; p <= static_cast<int>(m.X2->ring()->dimension()); ++p) {
            OmegaModule o = omega(*m.X1, p);
            for (int k = 0; k < 2; ++k) {
                PForm w = random_form(m.X2->ring(), rng, p, 4);
                if (o.canonical(transfer_prime(g, w)).to_string() != o.canonical(pullback(m.f, w)).to_string())
                    return {false, "graph transfer differs from pullback on " + w.to_string()};
                ++count;
            }
        }
    }
    return {true, "dt -> 0, t dt -> ds; graph transfer = pullback on " + std::to_string(count) + " random forms"};
}

struct Pair {
    Quotient A1 = ring({"a"}), A2 = ring({"u"}), A3 = ring({"b"});
    Variety X1 = var("X1", A1), X2 = var("X2", A2), X3 = var("X3", A3);
    Quotient C2 = ring({"c"});
    Variety Z2 = var("Z'", C2);
    RingHom sig = hom(C2, C2, {"-c"});
    PrimeCorrespondence square = graph(X1, X2, hom(A2, A1, {"a^2"}));
    PrimeCorrespondence transpose =
        make_prime(X2, X3, Z2, hom(A2, C2, {"c^2"}), hom(A3, C2, {"c"}),
                   make_cover(X2, Z2, hom(A2, C2, {"c^2"}), {RingHom::identity(C2), sig}, {C2->parse("1"), C2->parse("c")}),
                   {RingHom::identity(C2), sig});
    PrimeCorrespondence diag = graph(X1, X3, hom(A3, A1, {"a"}));
    PrimeCorrespondence anti = graph(X1, X3, hom(A3, A1, {"-a"}));
    FiberWitness witness(long m1, long m2) const {
        return {{{{FiberComponent{m1, A1, RingHom::identity(A1), hom(C2, A1, {"a"}), diag, RingHom::identity(A1)},
                   FiberComponent{m2, A1, RingHom::identity(A1), hom(C2, A1, {"-a"}), anti, RingHom::identity(A1)}}}}};
    }
};

std::vector<PForm> samples(const Quotient& R) {
    std::vector<PForm> out;
    for (const char* s : {"d(b)", "b * d(b)", "(b^3 + 2*b - 1) * d(b)", "(b^4 - b^2) * d(b)", "b^4 + 3*b", "7"})
        out.push_back(parse_form(R, s));
    return out;
}

Outcome composition() {
    Pair P;
    // (a) two graphs: a -> a^2 then u -> u + 1.
    auto shift = graph(P.X2, P.X3, hom(P.A3, P.A2, {"u + 1"}));
    auto composite = graph(P.X1, P.X3, hom(P.A3, P.A1, {"a^2 + 1"}));
    FiberWitness gw{{{{FiberComponent{1, P.A1, RingHom::identity(P.A1), hom(P.A2, P.A1, {"a^2"}), composite,
                                      RingHom::identity(P.A1)}}}}};
    auto ga = verify_composition(make_cycle({{1, P.square}}), make_cycle({{1, shift}}), gw, samples(P.A3));
    if (!ga.passed()) return {false, "graph composition"};
    if (ga.composite != make_cycle({{1, composite}}).to_string()) return {false, "graph composite " + ga.composite};

    // (b) the Kummer graph followed by its transpose is [diagonal] + [graph of a -> -a].
    auto rb = verify_composition(make_cycle({{1, P.square}}), make_cycle({{1, P.transpose}}), P.witness(1, 1),
                                 samples(P.A3));
    if (!rb.passed()) return {false, "Kummer composition"};
    if (rb.composite != make_cycle({{1, P.diag}, {1, P.anti}}).to_string()) return {false, "composite " + rb.composite};
    // T = id* + sigma* on every sample.
    auto sigma = hom(P.A3, P.A1, {"-a"}), id = hom(P.A3, P.A1, {"a"});
    for (const auto& w : samples(P.A3)) {
        PForm lhs = transfer_cycle(make_cycle({{1, P.transpose}}), w);
        lhs = transfer_cycle(make_cycle({{1, P.square}}), lhs);
        if (!lhs.same_as(pullback(id, w) + pullback(sigma, w))) return {false, "T != id* + sigma* on " + w.to_string()};
    }
    return {true, "graphs: " + ga.composite + "; Kummer: " + rb.composite + "; " +
                      std::to_string(ga.samples.size() + rb.samples.size()) + " samples"};
}

Outcome bookkeeping() {
    auto Zp = ring({"t"});
    auto Z = ring({"y"});
    auto pushed = pushforward({PushTerm{1, hom(Zp, Z, {"y^2"}), ""}});
    if (pushed.size() != 1 || pushed[0].multiplicity != 2) return {false, "1*[Z] does not push to 2*[Z']"};

    Pair P;
    auto z = make_cycle({{1, P.square}});
    auto z2 = make_cycle({{1, P.transpose}});
    if (kind_of([&] { compose_cycles(z, z2, P.witness(1, 1)); })) return {false, "valid witness rejected"};
    for (auto [m1, m2] : {std::pair{2L, 1L}, {1L, 2L}, {1L, 3L}})
        if (kind_of([&] { compose_cycles(z, z2, P.witness(m1, m2)); }) != ErrorKind::WitnessDegreeMismatch)
            return {false, "corrupted multiplicity accepted"};
    if (kind_of([&] { compose_cycles(z, z2, {{{{P.witness(1, 1).parts[0][0][0]}}}}); }) !=
        ErrorKind::WitnessDegreeMismatch)
        return {false, "missing component accepted"};

    Cli c = cli({"verify", "compose", "corrupted.toml", "kummer"});
    if (c.code != 1 || c.text.find("WitnessDegreeMismatch") == std::string::npos) return {false, "cli exit code"};
    Cli ok = cli({"verify", "compose", "transfer.toml"});
    if (ok.code != 0) return {false, "cli rejects valid witnesses"};
    return {true, "1*[Z] -> 2*[Z']; corrupted multiplicities rejected (cli exit 1)"};
}

Outcome de_rham() {
    std::mt19937 rng(17);
    int count = 0;
    for (const auto& m : map_corpus()) {
        int top = static_cast<int>(m.X2->ring()->nvars());
        for (int k = 0; k < 14; ++k) {
            int p = k % (top + 1);
            PForm w = random_form(m.X2->ring(), rng, p, 4);
            OmegaModule target = omega(*m.X2, p + 2);
            if (!target.equal(de_rham_d(de_rham_d(w)), PForm(m.X2->ring(), p + 2)))
                return {false, "d(d w) != 0 for " + w.to_string()};
            OmegaModule source = omega(*m.X1, p + 1);
            if (!source.equal(pullback(m.f, de_rham_d(w)), de_rham_d(pullback(m.f, w))))
                return {false, "pullback does not commute with d on " + w.to_string()};
            ++count;
        }
    }
    return {true, std::to_string(count) + " random forms on A1, A2 and the circle"};
}

Outcome equalizer() {
    auto A = ring({"t", "s"}, {"t*s - 1"});
    auto B = ring({"y", "z"}, {"y*z - 1"});
    auto r = equalizer_check(hom(A, B, {"y^2", "z^2"}), {B->parse("1"), B->parse("y")});
    if (!r.holds()) return {false, "localized cover"};
    auto A0 = ring({"t"});
    auto B0 = ring({"y"});
    if (kind_of([&] { equalizer_check(hom(A0, B0, {"y^2"}), {B0->parse("1"), B0->parse("y")}); }) !=
        ErrorKind::NotEtale)
        return {false, "unlocalized cover not reported as NotEtale"};
    return {true, "localized Kummer cover is an equalizer; unlocalized reports NotEtale"};
}

Outcome determinism(const fs::path& golden) {
    std::ifstream cases(golden / "cases.txt");
    if (!cases) return {false, "no cases.txt"};
    std::string line;
    int count = 0;
    while (std::getline(cases, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream in(line);
        std::string name;
        int expect = 0;
        in >> name >> expect;
        std::vector<std::string> args;
        for (std::string a; in >> a;) args.push_back(a);
        std::ifstream g(golden / (name + ".out"), std::ios::binary);
        if (!g) return {false, "missing golden file " + name};
        std::string stored((std::istreambuf_iterator<char>(g)), {});
        std::vector<std::vector<std::string>> runs{args, args, args, args};
        runs[2].insert(runs[2].begin(), {"--seed", "0"});
        runs[3].insert(runs[3].begin(), {"--seed", "7"});
        for (const auto& r : runs) {
            Cli c = cli(r);
            if (c.code != expect) return {false, name + ": exit " + std::to_string(c.code)};
            if (c.text != stored) return {false, name + ": output differs from golden file"};
        }
        ++count;
    }
    return {true, std::to_string(count) + " golden files stable across runs and seeds"};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 3) {
        std::cerr << "usage: acceptance DATA_DIR GOLDEN_DIR\n";
        return 2;
    }
    fs::path golden = fs::absolute(argv[2]);
    fs::current_path(argv[1]);

    std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"counterexample suite", counterexample},
        {"descent of biduals", bidual},
        {"transfer oracle", transfer_oracle},
        {"composition", composition},
        {"multiplicity bookkeeping", bookkeeping},
        {"de Rham complex", de_rham},
        {"sheaf equalizer", equalizer},
        {"determinism", [&] { return determinism(golden); }},
    };
    bool all = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        all = all && o.passed;
        std::cout << "criterion " << i + 1 << " (" << criteria[i].first << "): " << (o.passed ? "PASS" : "FAIL") << " "
                  << o.detail << std::endl;
    }
    return all ? 0 : 1;
}
