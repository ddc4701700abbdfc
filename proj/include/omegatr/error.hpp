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

#ifndef OMEGATR_ERROR_HPP
#define OMEGATR_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace omegatr {

enum class ErrorKind {
    // scalars
    DivisionByZero,
    FieldMismatch,
    ReducibleMinpoly,
    NotMonic,
    // polyring
    OrderMismatch,
    RingMismatch,
    NotAHomomorphism,
    NotOverBase,
    DegenerateSpecialization,
    NotModuleFinite,
    ZeroDenominator,
    // modules
    ActionNotVerified,
    TwistMismatch,
    // kaehler
    NegativeDegree,
    NonRegularCoefficient,
    NotEtale,
    // descent
    GroupNotClosed,
    RankMismatch,
    HomNotOverBase,
    NotDescendable,
    NotRegular,
    CheckFailed,
    // transfer
    WitnessInvalid,
    RankFailure,
    WitnessDegreeMismatch,
    ComponentNotContained,
    BijectionFailure,
    ValueMismatch,
    // input handling
    ParseError,
    InvalidArgument,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above so
/// callers (and the CLI exit-code mapping) can dispatch on it.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), message_(message) {}

    ErrorKind kind() const noexcept { return kind_; }
    /// The text without the kind prefix.
    const std::string& message() const noexcept { return message_; }

private:
    ErrorKind kind_;
    std::string message_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace omegatr

#endif
