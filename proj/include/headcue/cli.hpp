// Copyright (C) 2026 The headcue Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace headcue::cli {

// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kPartialFailure = 1;
inline constexpr int kConfigError = 2;

/// Writes <out>/<session_id>.events.jsonl, <session_id>.<phase>.signals.csv
/// per analyzed target, and report.txt / report.csv over all sessions.
int cmd_analyze(const std::string& config_path, const std::vector<std::string>& session_paths,
                const std::string& out_dir, std::ostream& err);

int cmd_simulate(const std::string& config_path, const std::string& out_dir, std::ostream& err);

/// Reads one session stream from `in`, writing event records to `out` as
/// they become final and diagnostics to `err`.
int cmd_stream(const std::string& config_path, std::istream& in, std::ostream& out,
               std::ostream& err);

/// Aggregates every *.events.jsonl file in `in_dir`.
int cmd_report(const std::string& in_dir, const std::string& format, std::ostream& out,
               std::ostream& err);

/// Entry point behind the headcue executable.
int run(int argc, char** argv);

}  // namespace headcue::cli
