// Copyright (C) 2026 The headcue Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "headcue/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <utility>

#include "headcue/error.hpp"

namespace headcue {

Moments summarize(std::span<const double> values) {
    if (values.empty()) throw Error(ErrorCode::nothing_to_aggregate, "nothing to aggregate");
    // Sorting first makes the sums independent of input order.
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    const auto n = static_cast<double>(v.size());

    Moments m;
    double sum = 0.0;
    for (double x : v) sum += x;
    m.mean = sum / n;
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - m.mean) * (x - m.mean);
        m.std = std::sqrt(ss / (n - 1.0));
    }
    const std::size_t mid = v.size() / 2;
    m.median = v.size() % 2 == 1 ? v[mid] : (v[mid - 1] + v[mid]) / 2.0;
    return m;
}

std::vector<ActionSummary> aggregate(std::span<const AnticipationResult> results) {
    if (results.empty()) throw Error(ErrorCode::nothing_to_aggregate, "nothing to aggregate");
    std::map<std::pair<std::string, std::string>, std::vector<double>> groups;
    for (const auto& r : results) {
        groups[{r.action_label.value_or("-"), measured_quantity(r.phase)}].push_back(
            r.anticipation_seconds);
    }
    std::vector<ActionSummary> out;
    out.reserve(groups.size());
    for (const auto& [key, values] : groups) {
        const Moments m = summarize(values);
        out.push_back({key.first, key.second, values.size(), m.mean, m.std, m.median});
    }
    return out;
}

ReportFormat parse_report_format(std::string_view name) {
    if (name == "text") return ReportFormat::text;
    if (name == "csv") return ReportFormat::csv;
    throw Error(ErrorCode::config, "unknown report format '" + std::string(name) + "'");
}

namespace {

std::string fixed(double v, int decimals) {
    char buf[64];
    // Avoid printing "-0.00" for values that round to zero.
    if (std::fabs(v) < 0.5 * std::pow(10.0, -decimals)) v = 0.0;
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string render_report(std::span<const ActionSummary> summaries, ReportFormat format) {
    std::ostringstream os;
    if (format == ReportFormat::csv) {
        os << "action,quantity,n,mean_s,std_s,median_s\n";
        for (const auto& s : summaries) {
            os << csv_field(s.action_label) << ',' << csv_field(s.measured_quantity) << ',' << s.n
               << ',' << fixed(s.mean, 6) << ',' << fixed(s.std, 6) << ',' << fixed(s.median, 6)
               << '\n';
        }
        return os.str();
    }

    const std::string h_action = "original action";
    const std::string h_quantity = "measured quantity";
    std::size_t wa = h_action.size();
    std::size_t wq = h_quantity.size();
    for (const auto& s : summaries) {
        wa = std::max(wa, s.action_label.size());
        wq = std::max(wq, s.measured_quantity.size());
    }
    auto pad = [](const std::string& s, std::size_t w) { return s + std::string(w - s.size(), ' '); };
    auto lpad = [](const std::string& s, std::size_t w) {
        return std::string(w > s.size() ? w - s.size() : 0, ' ') + s;
    };
    os << pad(h_action, wa) << "  " << pad(h_quantity, wq) << "  " << lpad("n", 4) << "  "
       << lpad("mean [s]", 9) << "  " << lpad("std [s]", 9) << "  " << lpad("median [s]", 10)
       << '\n';
    os << std::string(wa + wq + 4 + 4 + 9 + 9 + 10 + 10, '-') << '\n';
    for (const auto& s : summaries) {
        os << pad(s.action_label, wa) << "  " << pad(s.measured_quantity, wq) << "  "
           << lpad(std::to_string(s.n), 4) << "  " << lpad(fixed(s.mean, 2), 9) << "  "
           << lpad(fixed(s.std, 2), 9) << "  " << lpad(fixed(s.median, 2), 10) << '\n';
    }
    return os.str();
}

}  // namespace headcue
