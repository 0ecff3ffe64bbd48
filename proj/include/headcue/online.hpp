// Copyright (C) 2026 The headcue Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "headcue/events.hpp"
#include "headcue/ingest.hpp"
#include "headcue/scene.hpp"
#include "headcue/signals.hpp"

namespace headcue {

/// Incremental first_window_min over a window [start, bound].
///
/// Samples are pushed in frame order. A local-minimum candidate is
/// confirmed by the next valid sample; the answer for the window is the
/// first confirmed minimum, or the last valid sample inside the window when
/// that comes earlier (the valid samples before it are then strictly
/// decreasing, so it is the window's end-point minimum).
class OnlineWindowMin {
public:
    static constexpr std::int64_t kOpen = std::numeric_limits<std::int64_t>::max();

    explicit OnlineWindowMin(std::int64_t start = 0, std::int64_t bound = kOpen);

    /// Restarts the search at `start`; earlier frames are ignored from now on.
    void reset(std::int64_t start);
    /// Moves the window end. Must not be below the last pushed frame.
    void set_bound(std::int64_t bound);
    void push(std::int64_t frame, const Sample& sample);

    /// Answer if it can no longer change once every frame <= seen_frame
    /// has been pushed.
    std::optional<EventPoint> settled(std::int64_t seen_frame) const;
    /// Answer over everything pushed so far, treating the stream as ended.
    std::optional<EventPoint> result() const;

private:
    std::int64_t start_;
    std::int64_t bound_;
    std::optional<double> prev_;
    std::optional<EventPoint> candidate_;
    std::optional<EventPoint> confirmed_;
    std::optional<EventPoint> latest_;      // latest valid sample since start
    std::optional<EventPoint> last_valid_;  // latest valid sample inside the window
};

/// Centred moving median with edge clipping, one sample in, one (delayed
/// by half_width) out. Matches smooth() on the whole series exactly.
class StreamingMedian {
public:
    explicit StreamingMedian(int half_width);

    /// Smoothed value of the sample pushed half_width calls ago, once known.
    std::optional<Sample> push(const Sample& sample);
    /// Remaining smoothed samples at end of stream.
    std::vector<Sample> finish();

private:
    Sample at(std::size_t k) const;

    std::size_t h_;
    std::deque<Sample> window_;  // raw samples [pushed_ - window_.size(), pushed_)
    std::size_t pushed_ = 0;
    std::size_t emitted_ = 0;
};

/// Single-pass analyzer for one session stream.
///
/// Holds O(max_gap + smoothing width) frames regardless of stream length.
/// Event records are released as soon as they are final: with explicit
/// windows and a fixed hand that is one valid sample after the minimum;
/// with auto-split windows (which depend on the session-wide d_H minimum)
/// or automatic hand choice, at end of stream.
class StreamAnalyzer {
public:
    explicit StreamAnalyzer(SceneConfig scene);
    ~StreamAnalyzer();
    StreamAnalyzer(const StreamAnalyzer&) = delete;
    StreamAnalyzer& operator=(const StreamAnalyzer&) = delete;

    /// Feeds one input line; returns records that became final. Throws
    /// ParseError for a bad line (state is unchanged, the stream may continue).
    std::vector<AnticipationResult> feed_line(std::string_view line);
    /// Feeds an already parsed frame (header must have been fed).
    std::vector<AnticipationResult> feed_frame(FrameRecord frame);
    /// Ends the stream. Per-target failures are appended to `errors`.
    std::vector<AnticipationResult> finish(std::vector<std::string>& errors);

    bool has_header() const;
    std::size_t frames_seen() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace headcue
