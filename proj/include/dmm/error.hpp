// Copyright 2026 The dmm Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace dmm {

enum class ErrorCode {
    DuplicateVersion,
    NonContiguousVersion,
    DuplicateAttribute,
    DanglingEquivalence,
    UnknownSchema,
    UnknownVersion,
    UnknownAttribute,
    UnresolvableCoordinate,
    ValidityViolation,
    StateMismatch,
    InconsistentStore,
    CorruptStore,
    PayloadMismatch,
    InfeasibleConfig,
    Parse,
    Io,
};

const char* to_string(ErrorCode code);

/// Errors in the validation family are caller mistakes (bad input data);
/// everything else is a state/store problem.
bool is_validation_error(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& msg)
        : std::runtime_error(std::string(to_string(code)) + ": " + msg), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace dmm
