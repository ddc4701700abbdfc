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
#include <sstream>

#include "commands.hpp"
#include "doctest.h"
#include "toml.hpp"
#include "workspace.hpp"

using namespace omegatr;
using namespace omegatr::cli;

namespace {

std::string error_text(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.what();
    }
    FAIL("no error raised");
    return {};
}

int exit_code(std::vector<std::string> args) {
    std::ostringstream out, err;
    return run(args, out, err);
}

const char* line_workspace = R"toml(
[variety.L]
vars = ["t"]
flags = ["irreducible", "normal", "smooth"]

[variety.M]
vars = ["s"]

[correspondence.g]
source = "L"
target = "M"
components = [{ graph = ["t^2"] }]

[form.ds]
variety = "M"
expression = "d(s)"
)toml";

}  // namespace

TEST_CASE("toml subset") {
    auto root = toml::parse(R"toml(
# comment
top = "a \"quoted\" \\ string"
n = -42
flag = true

[section.name]
list = [
  "x",   # trailing comment
  "y",
]
nested = [{ a = 1, b = [2, 3] }, {}]
)toml");
    REQUIRE(root.size() == 4);
    CHECK(root[0].first == "top");
    CHECK(toml::require(root, "top", "root").as_string() == "a \"quoted\" \\ string");
    CHECK(toml::require(root, "n", "root").as_integer() == -42);
    CHECK(toml::require(root, "flag", "root").as_bool());
    const auto& name = toml::require(toml::require(root, "section", "root").as_table(), "name", "s").as_table();
    const auto& list = toml::require(name, "list", "s").as_array();
    REQUIRE(list.size() == 2);
    CHECK(list[1].as_string() == "y");
    CHECK(list[1].line == 10);
    const auto& nested = toml::require(name, "nested", "s").as_array();
    CHECK(toml::require(nested[0].as_table(), "b", "t").as_array()[1].as_integer() == 3);
    CHECK(nested[1].as_table().empty());
    CHECK(toml::find(name, "absent") == nullptr);
}

TEST_CASE("toml errors carry line numbers") {
    CHECK(error_text([] { toml::parse("a = 1\na = 2\n"); }).find("line 2") != std::string::npos);
    CHECK(error_text([] { toml::parse("[x]\n[x]\n"); }).find("line 2") != std::string::npos);
    CHECK(error_text([] { toml::parse("a = \"open\n"); }).find("line 1") != std::string::npos);
    CHECK(error_text([] { toml::parse("\n\nb = [1, 2\n"); }).find("ParseError") == 0);
    CHECK(error_text([] { toml::parse("c = 1.5\n"); }).find("line 1") != std::string::npos);
    auto root = toml::parse("\nk = 3\n");
    CHECK(error_text([&] { toml::require(root, "k", "root").as_string(); }).find("line 2") != std::string::npos);
    CHECK(error_text([&] { toml::require(root, "missing", "[root]"); }).find("[root]") != std::string::npos);
}

TEST_CASE("workspace resolution") {
    Workspace ws(line_workspace, {});
    CHECK(ws.names("variety") == std::vector<std::string>{"L", "M"});
    CHECK(ws.variety("L")->ring()->nvars() == 1);
    CHECK(ws.form("ds").to_string() == "1 * d(s)");
    auto z = ws.correspondence("g");
    CHECK(transfer_cycle(z, ws.form("ds")).to_string() == "2*t * d(t)");
    CHECK(ws.warnings().empty());

    CHECK(error_text([&] { ws.variety("N"); }).find("no [variety.N] section") != std::string::npos);
    CHECK(error_text([] {
              Workspace bad("[variety.A]\nvars = [\"t\"]\n[form.f]\nvariety = \"B\"\nexpression = \"d(t)\"\n", {});
              bad.form("f");
          }).find("line 4") != std::string::npos);
    CHECK(error_text([] { Workspace("[widget.A]\nx = 1\n", {}); }).find("unknown section") != std::string::npos);
    CHECK(error_text([] {
              Workspace bad("[variety.A]\nvars = [\"t\"]\nrelations = [\"t^\"]\n", {});
              bad.variety("A");
          }).find("line 3") != std::string::npos);
}

TEST_CASE("field sections and overrides") {
    const char* text = "[field]\nminpoly = \"w^2 + w + 1\"\n[variety.A]\nvars = [\"x\"]\n";
    Workspace ws(text, {});
    CHECK(ws.variety("A")->ring()->parse("w^3").to_string() == "1");
    LoadOptions q;
    q.field = "Q";
    Workspace wq(text, q);
    CHECK(error_text([&] { wq.variety("A")->ring()->parse("w*x"); }).find("ParseError") == 0);
    CHECK(error_text([] { Workspace("[field]\nminpoly = \"w^2 - 1\"\n", {}); }).find("ReducibleMinpoly") == 0);
    CHECK(error_text([] { Workspace("[field]\nminpoly = \"2*w^2 + 1\"\n", {}); }).find("NotMonic") == 0);
}

TEST_CASE("exit codes") {
    CHECK(exit_code({"--help"}) == 0);
    CHECK(exit_code({}) == InputError);
    CHECK(exit_code({"omega"}) == InputError);
    CHECK(exit_code({"--order", "grlex", "omega", "x.toml", "A", "1"}) == InputError);
    CHECK(exit_code({"verify", "cover", "no-such-file.toml"}) == InputError);
}
