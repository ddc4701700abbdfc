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

// Workspace files: named fields, varieties, covers, correspondences, forms
// and witnesses, resolved into library objects on demand.

#ifndef OMEGATR_TOOLS_WORKSPACE_HPP
#define OMEGATR_TOOLS_WORKSPACE_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "omegatr/transfer.hpp"
#include "toml.hpp"

namespace omegatr::cli {

struct LoadOptions {
    std::optional<std::string> field;  // overrides the [field] section: "Q" or a minimal polynomial
    MonomialOrder order = MonomialOrder::degrevlex();
    RankOptions rank;
};

struct CoverSection {
    GaloisCoverDatum datum;  // maps not yet checked
    std::optional<std::string> primitive;
    std::optional<PForm> invariant_form;
    std::vector<PForm> samples;
};

struct FiberSection {
    CycleCorrespondence first, second;
    FiberWitness witness;
    std::vector<PForm> samples;
};

struct WellDefSection {
    PrimeCorrespondence correspondence;
    AlternativeWitness alternative;
    std::vector<PForm> samples;
};

class Workspace {
public:
    Workspace(const std::string& text, LoadOptions options);
    static Workspace load_file(const std::string& path, LoadOptions options);

    const Field& field() const noexcept { return field_; }
    const LoadOptions& options() const noexcept { return options_; }
    /// Section names of a kind ("variety", "cover", ...) in file order.
    std::vector<std::string> names(const std::string& kind) const;

    Variety variety(const std::string& name) const;
    CoverSection cover(const std::string& name) const;
    /// The cover with every map checked and the datum verified.
    GaloisCoverDatum verified_cover(const std::string& name) const;
    CycleCorrespondence correspondence(const std::string& name) const;
    PForm form(const std::string& name) const;
    FiberSection fiber_witness(const std::string& name) const;
    WellDefSection well_definedness(const std::string& name) const;

    /// Field and smoothness warnings collected while loading.
    std::vector<std::string> warnings() const;

private:
    const toml::Table& section(const std::string& kind, const std::string& name) const;
    std::string ref(const toml::Value& v, const std::string& kind) const;
    Quotient ring_of(const std::string& variety) const;
    RingHom hom_from(const toml::Value& v, const Quotient& source, const Quotient& target, const std::string& where) const;
    std::vector<PForm> forms_from(const toml::Table& t, const std::string& where) const;
    PrimeCorrespondence prime_from(const toml::Table& t, const Variety& source, const Variety& target,
                                   const std::string& where) const;

    toml::Table root_;
    LoadOptions options_;
    Field field_;
    mutable std::map<std::string, Variety> varieties_;
};

}  // namespace omegatr::cli

#endif
