// Copyright (C) 2026 The headcue Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace headcue {

enum class ErrorCode {
    parse,
    config,
    target_unresolvable,
    no_signal,
    empty_window,
    cannot_split,
    missing_event,
    nothing_to_aggregate,
    invalid_scenario,
    io,
};

const char* to_string(ErrorCode code);

/// Base exception for every failure the engine reports.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Stream-format violation; carries the 1-based line number of the offending record.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error(ErrorCode::parse, "line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace headcue
