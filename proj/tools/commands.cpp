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

#include "commands.hpp"

#include <algorithm>
#include <functional>

#include "CLI11.hpp"
#include "json.hpp"
#include "workspace.hpp"

namespace omegatr::cli {

namespace {

using json = nlohmann::ordered_json;

bool is_input_error(ErrorKind k) {
    switch (k) {
        case ErrorKind::ParseError:
        case ErrorKind::InvalidArgument:
        case ErrorKind::FieldMismatch:
        case ErrorKind::RingMismatch:
        case ErrorKind::OrderMismatch:
        case ErrorKind::NotMonic:
        case ErrorKind::ReducibleMinpoly:
        case ErrorKind::NegativeDegree:
            return true;
        default:
            return false;
    }
}

struct Target {
    std::string name;
    std::vector<CheckResult> checks;
};

using Checker = std::function<void(const Workspace&, const std::string&, int, std::vector<CheckResult>&)>;

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
    return out;
}

std::string label(const std::string& form_text) {
    std::string out;
    for (char c : form_text)
        if (c != ' ' && c != '*' && c != '(' && c != ')') out += c;
    return out;
}

void check_cover(const Workspace& ws, const std::string& name, int /*degree*/, std::vector<CheckResult>& out) {
    CoverReport r = verify_cover(ws.cover(name).datum, ws.options().rank);
    out.insert(out.end(), r.checks.begin(), r.checks.end());
}

void check_descent(const Workspace& ws, const std::string& name, int degree, std::vector<CheckResult>& out) {
    GaloisCoverDatum d = ws.verified_cover(name);
    out.push_back({"cover", true, "order " + std::to_string(d.group.size())});
    BidualReport r = bidual_descent_check(d, degree);
    out.push_back({"bidual into invariants", r.into_invariants, std::to_string(r.base_generators) + " generators on " +
                                                                  d.base->name()});
    out.push_back({"bidual onto invariants", r.onto_invariants,
                   std::to_string(r.invariant_generators) + " averaged generators on " + d.total->name()});
    for (const auto& w : ws.cover(name).samples) {
        try {
            out.push_back({"descend " + w.to_string(), true, descend(w, d).to_string()});
        } catch (const Error& e) {
            if (is_input_error(e.kind())) throw;
            out.push_back({"descend " + w.to_string(), false, e.what()});
        }
    }
}

void check_compose(const Workspace& ws, const std::string& name, int /*degree*/, std::vector<CheckResult>& out) {
    FiberSection f = ws.fiber_witness(name);
    CompositionReport r = verify_composition(f.first, f.second, f.witness, f.samples, ws.options().rank);
    out.push_back({"composite", true, r.composite});
    for (const auto& s : r.samples)
        out.push_back({"sample " + s.form, s.equal, s.equal ? s.left : s.left + " vs " + s.right});
}

void check_welldef(const Workspace& ws, const std::string& name, int /*degree*/, std::vector<CheckResult>& out) {
    WellDefSection w = ws.well_definedness(name);
    WellDefinednessReport r = verify_well_definedness(w.correspondence, w.alternative, w.samples);
    out.push_back({"bijection", r.bijection, std::to_string(w.alternative.homs.size()) + " witness maps"});
    for (const auto& s : r.samples)
        out.push_back({"sample " + s.form, s.equal, s.equal ? s.left : s.left + " vs " + s.right});
}

void check_equalizer(const Workspace& ws, const std::string& name, int /*degree*/, std::vector<CheckResult>& out) {
    CoverSection c = ws.cover(name);
    EqualizerReport r = equalizer_check(check_hom(c.datum.inclusion), c.datum.generators);
    out.push_back({"image in kernel", r.image_in_kernel, ""});
    out.push_back({"kernel in image", r.kernel_in_image, std::to_string(r.kernel_generators) + " kernel generators"});
    out.push_back({"injective", r.injective, ""});
}

void check_counterexample(const Workspace& ws, const std::string& name, int /*degree*/, std::vector<CheckResult>& out) {
    CoverSection c = ws.cover(name);
    GaloisCoverDatum d = ws.verified_cover(name);
    const Quotient& B = d.total->ring();
    long rank = generic_rank(d.inclusion, ws.options().rank);
    out.push_back({"generic rank", rank == static_cast<long>(d.group.size()), std::to_string(rank)});

    std::vector<Vector> basis;
    std::vector<std::string> names;
    for (const auto& b : d.generators) {
        basis.push_back({b});
        names.push_back(b.to_string());
    }
    RestrictedSpan span(d.inclusion, PresentedModule::free(B, 1), basis);
    bool free = span.relations().empty();
    out.push_back({"free basis", free, join(names, ", ") + (free ? "" : " are dependent")});

    if (!c.invariant_form) raise(ErrorKind::ParseError, "[cover." + name + "] needs invariant_form");
    const PForm& w = *c.invariant_form;
    OmegaModule rel = omega(*d.total, 1, true);
    bool invariant = std::all_of(d.group.begin(), d.group.end(),
                                 [&](const RingHom& g) { return rel.equal(pullback(g, w), w); });
    bool zero = rel.module.is_zero(rel.to_vector(w));
    std::string l = label(w.to_string());
    out.push_back({"invariant form", invariant && !zero,
                   l + " invariant: " + (invariant ? "yes" : "no") + "; " + l + " zero: " + (zero ? "yes" : "no")});

    if (!c.primitive) raise(ErrorKind::ParseError, "[cover." + name + "] needs primitive");
    MvPolynomial p = B->parse(*c.primitive);
    std::vector<Vector> orbit;
    for (const auto& g : d.group) orbit.push_back({g.apply(p)});
    RestrictedSpan ospan(d.inclusion, PresentedModule::free(B, 1), orbit);
    bool generates = ospan.contains({B->parse("1")});
    for (std::size_t j = 0; j < B->nvars(); ++j) generates = generates && ospan.contains({B->var(j)});
    out.push_back({"primitive element", generates,
                   "orbit of " + p.to_string() + (generates ? " generates " : " does not generate ") + d.total->name()});
}

struct Globals {
    std::optional<std::string> field;
    std::string order = "degrevlex";
    std::uint64_t seed = 0;
    bool json = false;
    std::string strategy = "exact";

    LoadOptions load() const {
        LoadOptions o;
        o.field = field;
        o.order = order == "lex" ? MonomialOrder::lex() : MonomialOrder::degrevlex();
        o.rank.seed = seed;
        o.rank.strategy = strategy == "specialization" ? RankStrategy::Specialization : RankStrategy::Exact;
        return o;
    }
};

void emit_warnings(const Workspace& ws, std::ostream& err) {
    for (const auto& w : ws.warnings()) err << "warning: " << w << "\n";
}

int verify(const Globals& g, const std::string& kind, int degree, const std::string& file, std::vector<std::string> targets,
           std::ostream& out, std::ostream& err) {
    static const std::map<std::string, std::pair<std::string, Checker>> kinds{
        {"cover", {"cover", check_cover}},
        {"descent", {"cover", check_descent}},
        {"compose", {"fiberwitness", check_compose}},
        {"welldef", {"welldef", check_welldef}},
        {"equalizer", {"cover", check_equalizer}},
        {"counterexample", {"cover", check_counterexample}},
    };
    auto it = kinds.find(kind);
    if (it == kinds.end()) raise(ErrorKind::InvalidArgument, "unknown verification '" + kind + "'");
    Workspace ws = Workspace::load_file(file, g.load());
    if (targets.empty()) targets = ws.names(it->second.first);
    if (targets.empty()) raise(ErrorKind::InvalidArgument, "no [" + it->second.first + ".*] sections in " + file);

    std::vector<Target> results;
    for (const auto& t : targets) {
        Target r{t, {}};
        try {
            it->second.second(ws, t, degree, r.checks);
        } catch (const Error& e) {
            if (is_input_error(e.kind())) throw;
            r.checks.push_back({"error", false, e.what()});
        }
        results.push_back(std::move(r));
    }
    emit_warnings(ws, err);

    bool passed = true;
    for (const auto& r : results)
        for (const auto& c : r.checks) passed = passed && c.passed;
    if (g.json) {
        json j{{"command", "verify"}, {"kind", kind}, {"targets", json::array()}, {"passed", passed}};
        for (const auto& r : results) {
            json t{{"name", r.name}, {"checks", json::array()}};
            for (const auto& c : r.checks)
                t["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
            j["targets"].push_back(t);
        }
        out << j.dump(2) << "\n";
    } else {
        for (const auto& r : results)
            for (const auto& c : r.checks)
                out << "CHECK " << r.name << "/" << c.name << ": " << (c.passed ? "PASS" : "FAIL")
                    << (c.detail.empty() ? "" : " " + c.detail) << "\n";
    }
    return passed ? Success : CheckFailure;
}

int omega_command(const Globals& g, const std::string& file, const std::string& variety, int p, bool relative,
                  std::ostream& out, std::ostream& err) {
    Workspace ws = Workspace::load_file(file, g.load());
    OmegaModule om = omega(*ws.variety(variety), p, relative);
    emit_warnings(ws, err);
    if (g.json) {
        json j{{"command", "omega"}, {"variety", variety}, {"degree", p}, {"relative", relative},
               {"generators", om.module.names()}, {"relations", json::array()}};
        for (const auto& r : om.module.relations()) j["relations"].push_back(om.module.format(r));
        out << j.dump(2) << "\n";
    } else {
        out << om.module.to_string() << "\n";
    }
    return Success;
}

int transfer_command(const Globals& g, const std::string& file, const std::string& corr, const std::string& form,
                     std::ostream& out, std::ostream& err) {
    Workspace ws = Workspace::load_file(file, g.load());
    CycleCorrespondence z = ws.correspondence(corr);
    PForm w = ws.form(form);
    PForm result = transfer_cycle(z, w);
    std::string text = omega(*z.terms.at(0).second.source, result.degree()).canonical(result).to_string();
    emit_warnings(ws, err);
    if (g.json) {
        json j{{"command", "transfer"}, {"correspondence", corr}, {"cycle", z.to_string()},
               {"form", w.to_string()}, {"result", text}};
        out << j.dump(2) << "\n";
    } else {
        out << text << "\n";
    }
    return Success;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Transfers of Kaehler differential forms along finite correspondences", "omegatr"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--field", g.field, "Override the coefficient field: Q or a minimal polynomial in w");
    app.add_option("--order", g.order, "Monomial order")->check(CLI::IsMember({"degrevlex", "lex"}));
    app.add_option("--seed", g.seed, "Seed for random specializations");
    app.add_flag("--json", g.json, "Structured output");
    app.add_option("--rank-strategy", g.strategy, "Generic rank method")
        ->check(CLI::IsMember({"exact", "specialization"}));

    std::string file, name, form_name, kind;
    int degree = 1;
    bool relative = false;
    std::vector<std::string> targets;

    auto* om = app.add_subcommand("omega", "Print a presentation of Omega^p");
    om->add_option("file", file, "Workspace file")->required();
    om->add_option("variety", name, "Variety name")->required();
    om->add_option("p", degree, "Form degree")->required();
    om->add_flag("--base", relative, "Differentials relative to the variety's base");
    om->fallthrough();

    auto* tr = app.add_subcommand("transfer", "Transfer a form along a correspondence");
    tr->add_option("file", file, "Workspace file")->required();
    tr->add_option("correspondence", name, "Correspondence name")->required();
    tr->add_option("form", form_name, "Form name")->required();
    tr->fallthrough();

    auto* ve = app.add_subcommand("verify", "Run a verification suite");
    ve->add_option("kind", kind, "cover, descent, compose, welldef, equalizer or counterexample")->required();
    ve->add_option("file", file, "Workspace file")->required();
    ve->add_option("targets", targets, "Section names (default: all of the relevant kind)");
    ve->add_option("--degree", degree, "Form degree for descent");
    ve->fallthrough();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? Success : InputError;
    }

    try {
        if (*om) return omega_command(g, file, name, degree, relative, out, err);
        if (*tr) return transfer_command(g, file, name, form_name, out, err);
        return verify(g, kind, degree, file, targets, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return is_input_error(e.kind()) ? InputError : CheckFailure;
    }
}

}  // namespace omegatr::cli
