// Copyright (C) 2026 The headcue Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "headcue/events.hpp"

namespace headcue {

struct ActionSummary {
    std::string action_label;
    std::string measured_quantity;
    std::size_t n = 0;
    double mean = 0.0;
    double std = 0.0;  // sample estimator; 0 for n == 1
    double median = 0.0;

    bool operator==(const ActionSummary&) const = default;
};

/// mean / sample std / median of one group of values.
struct Moments {
    double mean = 0.0;
    double std = 0.0;
    double median = 0.0;
};

/// Throws Error(nothing_to_aggregate) on empty input.
Moments summarize(std::span<const double> values);

/// One summary per (action_label, phase) group, sorted by label then
/// quantity. Results without an action label are grouped under "-".
std::vector<ActionSummary> aggregate(std::span<const AnticipationResult> results);

enum class ReportFormat { text, csv };

ReportFormat parse_report_format(std::string_view name);

/// Rows appear in the order given.
std::string render_report(std::span<const ActionSummary> summaries, ReportFormat format);

}  // namespace headcue
