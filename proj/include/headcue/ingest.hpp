// Copyright (C) 2026 The headcue Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace headcue {

/// Facial landmark ids used as head-anchor candidates, in fallback order.
inline constexpr std::string_view kNose = "nose";
inline constexpr std::string_view kLeftEye = "l_eye";
inline constexpr std::string_view kRightEye = "r_eye";
inline constexpr std::string_view kLeftEar = "l_ear";
inline constexpr std::string_view kRightEar = "r_ear";
inline constexpr std::string_view kLeftWrist = "l_wrist";
inline constexpr std::string_view kRightWrist = "r_wrist";

struct Keypoint {
    std::string id;
    double x = 0.0;  // pixels
    double y = 0.0;  // pixels
    std::optional<double> z;  // depth, absent when the detector gives none
    double confidence = 0.0;

    bool operator==(const Keypoint&) const = default;
};

struct BoundingBox {
    double x0 = 0.0;
    double y0 = 0.0;
    double x1 = 0.0;
    double y1 = 0.0;

    bool operator==(const BoundingBox&) const = default;
};

struct Detection {
    std::string class_label;
    BoundingBox box;
    double confidence = 0.0;

    bool operator==(const Detection&) const = default;
};

/// Head orientation in degrees. yaw and roll live in (-180, 180], pitch in [-90, 90].
struct HeadPose {
    double yaw = 0.0;
    double pitch = 0.0;
    double roll = 0.0;
    double confidence = 0.0;

    bool operator==(const HeadPose&) const = default;
};

struct FrameRecord {
    std::int64_t frame_index = 0;
    double timestamp = 0.0;
    std::vector<Keypoint> keypoints;
    std::vector<Detection> detections;
    std::optional<HeadPose> head_pose;

    const Keypoint* find_keypoint(std::string_view id) const;

    bool operator==(const FrameRecord&) const = default;
};

struct SessionHeader {
    std::string session_id;
    double fps = 0.0;
    std::optional<std::string> action_label;

    bool operator==(const SessionHeader&) const = default;
};

struct Session {
    SessionHeader header;
    std::vector<FrameRecord> frames;

    bool operator==(const Session&) const = default;
};

/// Wraps an angle in degrees into (-180, 180].
double wrap_degrees(double angle);

/// Line-at-a-time parser for the session stream format.
///
/// The first non-blank line must be the header. Each subsequent frame line is
/// validated against the header and the previously accepted frame, so the
/// parser holds O(1) state regardless of stream length.
class SessionParser {
public:
    /// Returns the parsed frame, or nullopt for the header and blank lines.
    /// Throws ParseError on any violation; the parser state is unchanged then.
    std::optional<FrameRecord> feed(std::string_view line);

    bool has_header() const { return header_.has_value(); }
    const SessionHeader& header() const;
    std::size_t line_number() const { return line_no_; }

private:
    std::optional<SessionHeader> header_;
    std::optional<std::int64_t> last_index_;
    double last_timestamp_ = 0.0;
    std::int64_t first_index_ = 0;
    double first_timestamp_ = 0.0;
    std::size_t line_no_ = 0;
};

/// Reads a whole session from a line-delimited stream.
Session parse_session(std::istream& in);
Session parse_session_text(std::string_view text);
Session load_session(const std::string& path);

std::string serialize_header(const SessionHeader& header);
std::string serialize_frame(const FrameRecord& frame);
void write_session(std::ostream& out, const Session& session);

inline constexpr int kDefaultMaxGap = 5;

/// Incremental gap repair with a bounded look-ahead of max_gap frames.
///
/// Missing frame indices are materialized as empty frames (timestamps
/// interpolated). A channel (head pose, each keypoint id, each detection
/// class) absent for a run of at most max_gap frames between two frames that
/// carry it is filled by linear interpolation; yaw and roll follow the
/// shortest arc. Longer runs and leading/trailing runs stay absent.
class GapRepairer {
public:
    explicit GapRepairer(int max_gap = kDefaultMaxGap);

    /// Accepts the next frame (indices must increase) and returns the frames
    /// that can no longer change.
    std::vector<FrameRecord> push(FrameRecord frame);
    /// Flushes everything still buffered.
    std::vector<FrameRecord> finish();

    std::size_t buffered() const { return buffer_.size(); }

private:
    void fill_head_pose(const FrameRecord& right);
    void fill_keypoints(const FrameRecord& right);
    void fill_detections(const FrameRecord& right);
    FrameRecord* buffered_frame(std::int64_t index);
    std::vector<FrameRecord> release_up_to(std::int64_t index);

    int max_gap_;
    std::deque<FrameRecord> buffer_;
    std::optional<std::pair<std::int64_t, HeadPose>> last_pose_;
    std::map<std::string, std::pair<std::int64_t, Keypoint>, std::less<>> last_keypoint_;
    std::map<std::string, std::pair<std::int64_t, std::vector<Detection>>, std::less<>>
        last_detections_;
    std::optional<std::int64_t> newest_index_;
    double newest_timestamp_ = 0.0;
};

/// Batch form of GapRepairer. The input is never modified.
Session repair_gaps(const Session& session, int max_gap = kDefaultMaxGap);

}  // namespace headcue
