// Copyright (C) 2026 The headcue Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "headcue/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "headcue/error.hpp"

namespace headcue {

using nlohmann::json;

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::parse: return "parse error";
        case ErrorCode::config: return "config error";
        case ErrorCode::target_unresolvable: return "target unresolvable";
        case ErrorCode::no_signal: return "no signal";
        case ErrorCode::empty_window: return "empty window";
        case ErrorCode::cannot_split: return "cannot split";
        case ErrorCode::missing_event: return "missing event";
        case ErrorCode::nothing_to_aggregate: return "nothing to aggregate";
        case ErrorCode::invalid_scenario: return "invalid scenario";
        case ErrorCode::io: return "I/O error";
    }
    return "error";
}

double wrap_degrees(double angle) {
    double a = std::fmod(angle, 360.0);
    if (a > 180.0) a -= 360.0;
    if (a <= -180.0) a += 360.0;
    return a;
}

const Keypoint* FrameRecord::find_keypoint(std::string_view id) const {
    for (const auto& kp : keypoints) {
        if (kp.id == id) return &kp;
    }
    return nullptr;
}

namespace {

class FieldReader {
public:
    explicit FieldReader(std::size_t line) : line_(line) {}

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(line_, what); }

    const json& member(const json& obj, const char* key, const std::string& path) const {
        auto it = obj.find(key);
        if (it == obj.end() || it->is_null()) fail("missing field '" + path + "'");
        return *it;
    }

    double number(const json& obj, const char* key, const std::string& path) const {
        const json& v = member(obj, key, path);
        if (!v.is_number()) fail("field '" + path + "' must be a number");
        double d = v.get<double>();
        if (!std::isfinite(d)) fail("field '" + path + "' must be finite");
        return d;
    }

    std::optional<double> optional_number(const json& obj, const char* key,
                                          const std::string& path) const {
        auto it = obj.find(key);
        if (it == obj.end() || it->is_null()) return std::nullopt;
        return number(obj, key, path);
    }

    double confidence(const json& obj, const char* key, const std::string& path) const {
        double c = number(obj, key, path);
        if (c < 0.0 || c > 1.0) {
            std::ostringstream os;
            os << "field '" << path << "' out of range [0,1]: " << c;
            fail(os.str());
        }
        return c;
    }

    std::string string(const json& obj, const char* key, const std::string& path) const {
        const json& v = member(obj, key, path);
        if (!v.is_string()) fail("field '" + path + "' must be a string");
        return v.get<std::string>();
    }

    const json* optional_array(const json& obj, const char* key) const {
        auto it = obj.find(key);
        if (it == obj.end() || it->is_null()) return nullptr;
        if (!it->is_array()) fail(std::string("field '") + key + "' must be an array");
        return &*it;
    }

private:
    std::size_t line_;
};

std::string indexed(const char* base, std::size_t i, const char* field) {
    return std::string(base) + "[" + std::to_string(i) + "]." + field;
}

SessionHeader parse_header(const json& obj, const FieldReader& r) {
    SessionHeader h;
    auto id = obj.find("session_id");
    if (id == obj.end() || !id->is_string())
        r.fail("missing mandatory header field 'session_id'");
    h.session_id = id->get<std::string>();
    auto fps = obj.find("fps");
    if (fps == obj.end() || !fps->is_number()) r.fail("missing mandatory header field 'fps'");
    h.fps = fps->get<double>();
    if (!(h.fps > 0.0) || !std::isfinite(h.fps)) r.fail("header field 'fps' must be positive");
    auto label = obj.find("action_label");
    if (label != obj.end() && !label->is_null()) {
        if (!label->is_string()) r.fail("header field 'action_label' must be a string");
        h.action_label = label->get<std::string>();
    }
    return h;
}

FrameRecord parse_frame(const json& obj, const FieldReader& r) {
    FrameRecord f;
    const json& idx = r.member(obj, "frame_index", "frame_index");
    if (!idx.is_number_integer()) r.fail("field 'frame_index' must be an integer");
    f.frame_index = idx.get<std::int64_t>();
    if (f.frame_index < 0) r.fail("field 'frame_index' must be nonnegative");
    f.timestamp = r.number(obj, "timestamp", "timestamp");

    if (const json* kps = r.optional_array(obj, "keypoints")) {
        f.keypoints.reserve(kps->size());
        for (std::size_t i = 0; i < kps->size(); ++i) {
            const json& k = (*kps)[i];
            if (!k.is_object()) r.fail(indexed("keypoints", i, "") + " must be an object");
            Keypoint kp;
            kp.id = r.string(k, "id", indexed("keypoints", i, "id"));
            kp.x = r.number(k, "x", indexed("keypoints", i, "x"));
            kp.y = r.number(k, "y", indexed("keypoints", i, "y"));
            kp.z = r.optional_number(k, "z", indexed("keypoints", i, "z"));
            kp.confidence = r.confidence(k, "conf", indexed("keypoints", i, "conf"));
            f.keypoints.push_back(std::move(kp));
        }
    }

    if (const json* dets = r.optional_array(obj, "detections")) {
        f.detections.reserve(dets->size());
        for (std::size_t i = 0; i < dets->size(); ++i) {
            const json& d = (*dets)[i];
            if (!d.is_object()) r.fail(indexed("detections", i, "") + " must be an object");
            Detection det;
            det.class_label = r.string(d, "class", indexed("detections", i, "class"));
            det.box.x0 = r.number(d, "x0", indexed("detections", i, "x0"));
            det.box.y0 = r.number(d, "y0", indexed("detections", i, "y0"));
            det.box.x1 = r.number(d, "x1", indexed("detections", i, "x1"));
            det.box.y1 = r.number(d, "y1", indexed("detections", i, "y1"));
            det.confidence = r.confidence(d, "conf", indexed("detections", i, "conf"));
            if (det.box.x0 > det.box.x1 || det.box.y0 > det.box.y1)
                r.fail(indexed("detections", i, "box") + " has min corner above max corner");
            f.detections.push_back(std::move(det));
        }
    }

    auto hp = obj.find("head_pose");
    if (hp != obj.end() && !hp->is_null()) {
        if (!hp->is_object()) r.fail("field 'head_pose' must be an object");
        HeadPose pose;
        pose.yaw = wrap_degrees(r.number(*hp, "yaw", "head_pose.yaw"));
        pose.pitch = r.number(*hp, "pitch", "head_pose.pitch");
        pose.roll = wrap_degrees(r.number(*hp, "roll", "head_pose.roll"));
        pose.confidence = r.confidence(*hp, "conf", "head_pose.conf");
        if (pose.pitch < -90.0 || pose.pitch > 90.0) {
            std::ostringstream os;
            os << "field 'head_pose.pitch' out of range [-90,90]: " << pose.pitch;
            r.fail(os.str());
        }
        f.head_pose = pose;
    }
    return f;
}

}  // namespace

const SessionHeader& SessionParser::header() const {
    if (!header_) throw std::logic_error("SessionParser: no header parsed yet");
    return *header_;
}

std::optional<FrameRecord> SessionParser::feed(std::string_view line) {
    const std::size_t line_no = ++line_no_;
    if (line.find_first_not_of(" \t\r\n") == std::string_view::npos) return std::nullopt;

    FieldReader r(line_no);
    json obj = json::parse(line.begin(), line.end(), nullptr, false);
    if (obj.is_discarded()) r.fail("malformed record (not valid JSON)");
    if (!obj.is_object()) r.fail("record must be a JSON object");
    auto type = obj.find("type");
    if (type == obj.end() || !type->is_string()) r.fail("missing field 'type'");
    const auto& kind = type->get_ref<const std::string&>();

    if (!header_) {
        if (kind != "header") r.fail("missing mandatory header (session_id, fps) before frames");
        header_ = parse_header(obj, r);
        return std::nullopt;
    }
    if (kind == "header") r.fail("duplicate header");
    if (kind != "frame") r.fail("unknown record type '" + kind + "'");

    FrameRecord f = parse_frame(obj, r);
    if (last_index_) {
        if (f.frame_index == *last_index_)
            r.fail("duplicate frame_index " + std::to_string(f.frame_index));
        if (f.frame_index < *last_index_)
            r.fail("frame_index " + std::to_string(f.frame_index) + " not increasing");
        if (f.timestamp < last_timestamp_) r.fail("non-monotone timestamp");
        const double period = 1.0 / header_->fps;
        const double expected =
            static_cast<double>(f.frame_index - first_index_) * period;
        if (std::abs((f.timestamp - first_timestamp_) - expected) > period * (1.0 + 1e-9))
            r.fail("timestamp inconsistent with frame_index at the declared fps");
    } else {
        first_index_ = f.frame_index;
        first_timestamp_ = f.timestamp;
    }
    last_index_ = f.frame_index;
    last_timestamp_ = f.timestamp;
    return f;
}

Session parse_session(std::istream& in) {
    SessionParser parser;
    Session session;
    std::string line;
    while (std::getline(in, line)) {
        if (auto frame = parser.feed(line)) session.frames.push_back(std::move(*frame));
    }
    if (!parser.has_header())
        throw ParseError(parser.line_number(), "missing mandatory header (session_id, fps)");
    session.header = parser.header();
    return session;
}

Session parse_session_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_session(in);
}

Session load_session(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io, "cannot open session file '" + path + "'");
    return parse_session(in);
}

std::string serialize_header(const SessionHeader& header) {
    nlohmann::ordered_json j;
    j["type"] = "header";
    j["session_id"] = header.session_id;
    j["fps"] = header.fps;
    if (header.action_label) j["action_label"] = *header.action_label;
    return j.dump();
}

std::string serialize_frame(const FrameRecord& frame) {
    nlohmann::ordered_json j;
    j["type"] = "frame";
    j["frame_index"] = frame.frame_index;
    j["timestamp"] = frame.timestamp;
    j["keypoints"] = nlohmann::ordered_json::array();
    for (const auto& kp : frame.keypoints) {
        nlohmann::ordered_json k;
        k["id"] = kp.id;
        k["x"] = kp.x;
        k["y"] = kp.y;
        if (kp.z) k["z"] = *kp.z;
        k["conf"] = kp.confidence;
        j["keypoints"].push_back(std::move(k));
    }
    j["detections"] = nlohmann::ordered_json::array();
    for (const auto& det : frame.detections) {
        nlohmann::ordered_json d;
        d["class"] = det.class_label;
        d["x0"] = det.box.x0;
        d["y0"] = det.box.y0;
        d["x1"] = det.box.x1;
        d["y1"] = det.box.y1;
        d["conf"] = det.confidence;
        j["detections"].push_back(std::move(d));
    }
    if (frame.head_pose) {
        j["head_pose"] = {{"yaw", frame.head_pose->yaw},
                          {"pitch", frame.head_pose->pitch},
                          {"roll", frame.head_pose->roll},
                          {"conf", frame.head_pose->confidence}};
    }
    return j.dump();
}

void write_session(std::ostream& out, const Session& session) {
    out << serialize_header(session.header) << '\n';
    for (const auto& f : session.frames) out << serialize_frame(f) << '\n';
}

// ---------------------------------------------------------------------------
// Gap repair

namespace {

double lerp(double a, double b, double u) { return a + (b - a) * u; }

double lerp_angle(double a, double b, double u) {
    return wrap_degrees(a + wrap_degrees(b - a) * u);
}

double centroid_distance2(const BoundingBox& a, const BoundingBox& b) {
    const double dx = (a.x0 + a.x1) - (b.x0 + b.x1);
    const double dy = (a.y0 + a.y1) - (b.y0 + b.y1);
    return dx * dx + dy * dy;
}

}  // namespace

GapRepairer::GapRepairer(int max_gap) : max_gap_(std::max(0, max_gap)) {}

FrameRecord* GapRepairer::buffered_frame(std::int64_t index) {
    if (buffer_.empty()) return nullptr;
    const std::int64_t offset = index - buffer_.front().frame_index;
    if (offset < 0 || offset >= static_cast<std::int64_t>(buffer_.size())) return nullptr;
    return &buffer_[static_cast<std::size_t>(offset)];
}

std::vector<FrameRecord> GapRepairer::release_up_to(std::int64_t index) {
    std::vector<FrameRecord> out;
    while (!buffer_.empty() && buffer_.front().frame_index <= index) {
        out.push_back(std::move(buffer_.front()));
        buffer_.pop_front();
    }
    return out;
}

void GapRepairer::fill_head_pose(const FrameRecord& right) {
    if (!right.head_pose) return;
    if (last_pose_) {
        const auto& [a, left] = *last_pose_;
        const std::int64_t b = right.frame_index;
        const std::int64_t gap = b - a - 1;
        if (gap >= 1 && gap <= max_gap_) {
            for (std::int64_t k = a + 1; k < b; ++k) {
                FrameRecord* f = buffered_frame(k);
                if (f == nullptr || f->head_pose) continue;
                const double u = static_cast<double>(k - a) / static_cast<double>(b - a);
                HeadPose p;
                p.yaw = lerp_angle(left.yaw, right.head_pose->yaw, u);
                p.pitch = lerp(left.pitch, right.head_pose->pitch, u);
                p.roll = lerp_angle(left.roll, right.head_pose->roll, u);
                p.confidence = lerp(left.confidence, right.head_pose->confidence, u);
                f->head_pose = p;
            }
        }
    }
    last_pose_ = std::make_pair(right.frame_index, *right.head_pose);
}

void GapRepairer::fill_keypoints(const FrameRecord& right) {
    const std::int64_t b = right.frame_index;
    for (std::size_t i = 0; i < right.keypoints.size(); ++i) {
        const Keypoint& kp = right.keypoints[i];
        if (right.find_keypoint(kp.id) != &kp) continue;  // first occurrence only
        auto it = last_keypoint_.find(kp.id);
        if (it != last_keypoint_.end()) {
            const auto& [a, left] = it->second;
            const std::int64_t gap = b - a - 1;
            if (gap >= 1 && gap <= max_gap_) {
                for (std::int64_t k = a + 1; k < b; ++k) {
                    FrameRecord* f = buffered_frame(k);
                    if (f == nullptr || f->find_keypoint(kp.id) != nullptr) continue;
                    const double u = static_cast<double>(k - a) / static_cast<double>(b - a);
                    Keypoint filled;
                    filled.id = kp.id;
                    filled.x = lerp(left.x, kp.x, u);
                    filled.y = lerp(left.y, kp.y, u);
                    if (left.z && kp.z) filled.z = lerp(*left.z, *kp.z, u);
                    filled.confidence = lerp(left.confidence, kp.confidence, u);
                    f->keypoints.push_back(std::move(filled));
                }
            }
            it->second = {b, kp};
        } else {
            last_keypoint_.emplace(kp.id, std::make_pair(b, kp));
        }
    }
}

void GapRepairer::fill_detections(const FrameRecord& right) {
    const std::int64_t b = right.frame_index;
    std::map<std::string, std::vector<Detection>, std::less<>> by_class;
    for (const auto& det : right.detections) by_class[det.class_label].push_back(det);

    for (auto& [label, dets] : by_class) {
        auto it = last_detections_.find(label);
        if (it != last_detections_.end()) {
            const auto& [a, left] = it->second;
            const std::int64_t gap = b - a - 1;
            if (gap >= 1 && gap <= max_gap_) {
                for (std::int64_t k = a + 1; k < b; ++k) {
                    FrameRecord* f = buffered_frame(k);
                    if (f == nullptr) continue;
                    const bool present =
                        std::any_of(f->detections.begin(), f->detections.end(),
                                    [&](const Detection& d) { return d.class_label == label; });
                    if (present) continue;
                    const double u = static_cast<double>(k - a) / static_cast<double>(b - a);
                    for (const Detection& l : left) {
                        const Detection* partner = &dets.front();
                        double best = centroid_distance2(l.box, partner->box);
                        for (const Detection& r : dets) {
                            const double d2 = centroid_distance2(l.box, r.box);
                            if (d2 < best) {
                                best = d2;
                                partner = &r;
                            }
                        }
                        Detection filled;
                        filled.class_label = label;
                        filled.box = {lerp(l.box.x0, partner->box.x0, u),
                                      lerp(l.box.y0, partner->box.y0, u),
                                      lerp(l.box.x1, partner->box.x1, u),
                                      lerp(l.box.y1, partner->box.y1, u)};
                        filled.confidence = lerp(l.confidence, partner->confidence, u);
                        f->detections.push_back(std::move(filled));
                    }
                }
            }
            it->second = {b, std::move(dets)};
        } else {
            last_detections_.emplace(label, std::make_pair(b, std::move(dets)));
        }
    }
}

std::vector<FrameRecord> GapRepairer::push(FrameRecord frame) {
    const std::int64_t idx = frame.frame_index;
    if (newest_index_ && idx <= *newest_index_)
        throw std::invalid_argument("GapRepairer: frame indices must increase");

    std::vector<FrameRecord> out;
    if (newest_index_) {
        // Materialize missing indices. Anything older than idx - max_gap can
        // no longer receive a fill, so it is released on the way.
        const std::int64_t prev = *newest_index_;
        for (std::int64_t k = prev + 1; k < idx; ++k) {
            FrameRecord placeholder;
            placeholder.frame_index = k;
            placeholder.timestamp =
                newest_timestamp_ + (frame.timestamp - newest_timestamp_) *
                                        static_cast<double>(k - prev) /
                                        static_cast<double>(idx - prev);
            buffer_.push_back(std::move(placeholder));
            auto released = release_up_to(idx - max_gap_ - 1);
            std::move(released.begin(), released.end(), std::back_inserter(out));
        }
    }

    newest_index_ = idx;
    newest_timestamp_ = frame.timestamp;
    buffer_.push_back(frame);
    fill_head_pose(frame);
    fill_keypoints(frame);
    fill_detections(frame);

    auto released = release_up_to(idx - max_gap_);
    std::move(released.begin(), released.end(), std::back_inserter(out));
    return out;
}

std::vector<FrameRecord> GapRepairer::finish() {
    return release_up_to(std::numeric_limits<std::int64_t>::max());
}

Session repair_gaps(const Session& session, int max_gap) {
    Session out;
    out.header = session.header;
    out.frames.reserve(session.frames.size());
    GapRepairer repairer(max_gap);
    for (const auto& f : session.frames) {
        auto ready = repairer.push(f);
        std::move(ready.begin(), ready.end(), std::back_inserter(out.frames));
    }
    auto rest = repairer.finish();
    std::move(rest.begin(), rest.end(), std::back_inserter(out.frames));
    return out;
}

}  // namespace headcue
