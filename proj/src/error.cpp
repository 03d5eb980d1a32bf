// Copyright 2026 The dmm Authors
// SPDX-License-Identifier: Apache-2.0
#include "dmm/error.hpp"

namespace dmm {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::DuplicateVersion: return "duplicate-version";
        case ErrorCode::NonContiguousVersion: return "non-contiguous-version";
        case ErrorCode::DuplicateAttribute: return "duplicate-attribute";
        case ErrorCode::DanglingEquivalence: return "dangling-equivalence";
        case ErrorCode::UnknownSchema: return "unknown-schema";
        case ErrorCode::UnknownVersion: return "unknown-version";
        case ErrorCode::UnknownAttribute: return "unknown-attribute";
        case ErrorCode::UnresolvableCoordinate: return "unresolvable-coordinate";
        case ErrorCode::ValidityViolation: return "validity-violation";
        case ErrorCode::StateMismatch: return "state-mismatch";
        case ErrorCode::InconsistentStore: return "inconsistent-store";
        case ErrorCode::CorruptStore: return "corrupt-store";
        case ErrorCode::PayloadMismatch: return "payload-mismatch";
        case ErrorCode::InfeasibleConfig: return "infeasible-config";
        case ErrorCode::Parse: return "parse-error";
        case ErrorCode::Io: return "io-error";
    }
    return "unknown-error";
}

bool is_validation_error(ErrorCode code) {
    switch (code) {
        case ErrorCode::DuplicateVersion:
        case ErrorCode::NonContiguousVersion:
        case ErrorCode::DuplicateAttribute:
        case ErrorCode::DanglingEquivalence:
        case ErrorCode::UnknownAttribute:
        case ErrorCode::UnresolvableCoordinate:
        case ErrorCode::ValidityViolation:
        case ErrorCode::PayloadMismatch:
        case ErrorCode::InfeasibleConfig:
        case ErrorCode::Parse:
            return true;
        default:
            return false;
    }
}

}  // namespace dmm
