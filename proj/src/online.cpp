// Copyright (C) 2026 The headcue Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "headcue/online.hpp"

#include <algorithm>
#include <utility>

#include "headcue/error.hpp"
#include "headcue/kernels.hpp"
#include "headcue/pipeline.hpp"

namespace headcue {

// ---------------------------------------------------------------------------
// OnlineWindowMin

OnlineWindowMin::OnlineWindowMin(std::int64_t start, std::int64_t bound)
    : start_(start), bound_(bound) {}

void OnlineWindowMin::reset(std::int64_t start) {
    start_ = start;
    prev_.reset();
    candidate_.reset();
    confirmed_.reset();
    latest_.reset();
    last_valid_.reset();
}

void OnlineWindowMin::set_bound(std::int64_t bound) {
    bound_ = bound;
    last_valid_ = latest_;
}

void OnlineWindowMin::push(std::int64_t frame, const Sample& sample) {
    if (frame < start_ || !sample.valid) return;
    const EventPoint here{frame, sample.value};
    latest_ = here;
    if (frame <= bound_) last_valid_ = here;
    if (confirmed_) return;
    if (candidate_) {
        if (sample.value >= candidate_->value) {
            confirmed_ = candidate_;
            return;
        }
        candidate_.reset();
    }
    if (!prev_ || sample.value <= *prev_) candidate_ = here;
    prev_ = sample.value;
}

std::optional<EventPoint> OnlineWindowMin::settled(std::int64_t seen_frame) const {
    if (confirmed_ && confirmed_->frame <= bound_) return confirmed_;
    if (bound_ != kOpen && seen_frame >= bound_) return result();
    return std::nullopt;
}

std::optional<EventPoint> OnlineWindowMin::result() const {
    const auto& first = confirmed_ ? confirmed_ : candidate_;
    if (first && last_valid_ && first->frame <= last_valid_->frame) return first;
    return last_valid_;
}

// ---------------------------------------------------------------------------
// StreamingMedian

StreamingMedian::StreamingMedian(int half_width)
    : h_(static_cast<std::size_t>(std::max(0, half_width))) {}

Sample StreamingMedian::at(std::size_t k) const {
    const std::size_t lo = k >= h_ ? k - h_ : 0;
    const std::size_t hi = std::min(pushed_ - 1, k + h_);
    const std::size_t base = pushed_ - window_.size();
    thread_local std::vector<Sample> local;
    local.assign(window_.begin() + static_cast<std::ptrdiff_t>(lo - base),
                 window_.begin() + static_cast<std::ptrdiff_t>(hi - base + 1));
    if (h_ == 0) return local.front();
    return kernels::median_at(local, k - lo, static_cast<int>(h_));
}

std::optional<Sample> StreamingMedian::push(const Sample& sample) {
    window_.push_back(sample);
    ++pushed_;
    if (window_.size() > 2 * h_ + 1) window_.pop_front();
    if (pushed_ <= h_) return std::nullopt;
    return at(emitted_++);
}

std::vector<Sample> StreamingMedian::finish() {
    std::vector<Sample> out;
    while (emitted_ < pushed_) out.push_back(at(emitted_++));
    return out;
}

// ---------------------------------------------------------------------------
// StreamAnalyzer

namespace {

struct HandLane {
    Hand hand;
    StreamingMedian med_h;
    std::optional<double> raw_min_h;
    bool any_h = false;
    std::optional<EventPoint> touch;
    OnlineWindowMin reach_g;
    OnlineWindowMin reach_h;
    OnlineWindowMin transport_g;
    OnlineWindowMin transport_o;

    HandLane(Hand h, int half_width) : hand(h), med_h(half_width) {}
};

struct TargetLane {
    std::size_t index;
    const TargetSpec* spec;
    ObjectTracker tracker;
    std::optional<Vec3> target_point;
    StreamingMedian med_g;
    StreamingMedian med_o;
    bool any_g = false;
    bool any_o = false;
    std::int64_t next_smoothed = 0;
    bool done = false;
    std::vector<HandLane> hands;

    TargetLane(std::size_t i, const TargetSpec& t, const SceneConfig& scene)
        : index(i),
          spec(&t),
          tracker(t.object_class, scene.association_radius, t.initial_object_position),
          med_g(scene.smoothing_half_width),
          med_o(scene.smoothing_half_width) {}
};

}  // namespace

struct StreamAnalyzer::Impl {
    SceneConfig scene;
    PointMapper mapper;
    SessionParser parser;
    GapRepairer repairer;
    std::optional<SessionHeader> header;
    std::vector<TargetLane> lanes;
    std::optional<std::int64_t> first_frame;
    std::size_t frames_seen = 0;

    explicit Impl(SceneConfig s)
        : scene(std::move(s)), mapper(scene), repairer(scene.max_gap) {}

    void start(const SessionHeader& h) {
        header = h;
        for (std::size_t i : applicable_targets(scene, h.action_label)) {
            TargetLane lane(i, scene.targets[i], scene);
            if (lane.spec->kind == TargetKind::position) lane.target_point = mapper.target(*lane.spec);
            auto add_hand = [&](Hand hand) { lane.hands.emplace_back(hand, scene.smoothing_half_width); };
            switch (scene.hand) {
                case HandSelection::left: add_hand(Hand::left); break;
                case HandSelection::right: add_hand(Hand::right); break;
                case HandSelection::automatic:
                    add_hand(Hand::right);
                    add_hand(Hand::left);
                    break;
            }
            lanes.push_back(std::move(lane));
        }
    }

    void init_windows(std::int64_t first) {
        const auto& w = scene.windows;
        for (auto& lane : lanes) {
            lane.next_smoothed = first;
            for (auto& hl : lane.hands) {
                if (w.auto_split) {
                    hl.reach_g = OnlineWindowMin(first);
                    hl.reach_h = OnlineWindowMin(first);
                    hl.transport_g = OnlineWindowMin(OnlineWindowMin::kOpen);
                    hl.transport_o = OnlineWindowMin(OnlineWindowMin::kOpen);
                    continue;
                }
                if (w.reach_window) {
                    hl.reach_g = OnlineWindowMin(w.reach_window->first, w.reach_window->last);
                    hl.reach_h = hl.reach_g;
                }
                if (w.transport_window) {
                    hl.transport_g =
                        OnlineWindowMin(w.transport_window->first, w.transport_window->last);
                    hl.transport_o = hl.transport_g;
                }
            }
        }
    }

    AnticipationResult make_result(const EventTimes& ev, Phase phase) const {
        AnticipationResult r = compute_anticipation(ev, header->fps, phase);
        r.session_id = header->session_id;
        r.action_label = header->action_label;
        return r;
    }

    // Early release is possible only when nothing decided at end of stream
    // can still change the record.
    void maybe_emit(TargetLane& lane, std::int64_t seen, std::vector<AnticipationResult>& out) {
        if (lane.done || scene.windows.auto_split || lane.hands.size() != 1) return;
        const HandLane& hl = lane.hands.front();
        const Phase phase = lane.spec->phase();
        EventTimes ev;
        if (phase == Phase::reach) {
            if (!scene.windows.reach_window) return;
            ev.gazing_target = hl.reach_g.settled(seen);
            ev.touching_object = hl.reach_h.settled(seen);
            if (!ev.gazing_target || !ev.touching_object) return;
        } else {
            if (!scene.windows.transport_window) return;
            ev.gazing_target = hl.transport_g.settled(seen);
            ev.target_object = hl.transport_o.settled(seen);
            if (!ev.gazing_target || !ev.target_object) return;
        }
        out.push_back(make_result(ev, phase));
        lane.done = true;
    }

    void process(TargetLane& lane, HandLane& hl, std::int64_t k, const Sample& g, const Sample& h,
                 const Sample& o) {
        if (scene.windows.auto_split && h.valid && (!hl.touch || h.value < hl.touch->value)) {
            hl.touch = EventPoint{k, h.value};
            hl.reach_g.set_bound(k + scene.windows.margin);
            hl.reach_h.set_bound(k + scene.windows.margin);
            hl.transport_g.reset(k + 1);
            hl.transport_o.reset(k + 1);
        }
        hl.reach_g.push(k, g);
        hl.reach_h.push(k, h);
        hl.transport_g.push(k, g);
        if (lane.spec->kind == TargetKind::position) hl.transport_o.push(k, o);
    }

    void on_repaired(const FrameRecord& f, std::vector<AnticipationResult>& out) {
        if (!first_frame) {
            first_frame = f.frame_index;
            init_windows(f.frame_index);
        }
        const auto gaze = mapper.gaze(f);
        std::optional<Vec3> wrists[2];
        bool wrist_done[2] = {false, false};
        auto wrist = [&](Hand hand) -> const std::optional<Vec3>& {
            const int i = hand == Hand::left ? 0 : 1;
            if (!wrist_done[i]) {
                wrists[i] = mapper.wrist(f, hand);
                wrist_done[i] = true;
            }
            return wrists[i];
        };

        for (auto& lane : lanes) {
            const auto centroid = lane.tracker.update(f);
            std::optional<Vec3> obj;
            if (centroid) obj = mapper.object(*centroid);
            const bool position = lane.spec->kind == TargetKind::position;
            const Sample g = kernels::distance_sample(gaze, position ? lane.target_point : obj);
            const Sample o = position ? kernels::distance_sample(obj, lane.target_point) : Sample{};
            lane.any_g |= g.valid;
            lane.any_o |= o.valid;
            const auto sg = lane.med_g.push(g);
            const auto so = lane.med_o.push(o);
            for (auto& hl : lane.hands) {
                const Sample h = kernels::distance_sample(wrist(hl.hand), obj);
                if (h.valid) {
                    hl.any_h = true;
                    if (!hl.raw_min_h || h.value < *hl.raw_min_h) hl.raw_min_h = h.value;
                }
                const auto sh = hl.med_h.push(h);
                if (sg) process(lane, hl, lane.next_smoothed, *sg, *sh, *so);
            }
            if (sg) {
                maybe_emit(lane, lane.next_smoothed, out);
                ++lane.next_smoothed;
            }
        }
    }

    void flush_lane(TargetLane& lane) {
        const auto gs = lane.med_g.finish();
        const auto os = lane.med_o.finish();
        std::vector<std::vector<Sample>> hs;
        for (auto& hl : lane.hands) hs.push_back(hl.med_h.finish());
        for (std::size_t i = 0; i < gs.size(); ++i) {
            for (std::size_t j = 0; j < lane.hands.size(); ++j)
                process(lane, lane.hands[j], lane.next_smoothed, gs[i], hs[j][i], os[i]);
            ++lane.next_smoothed;
        }
    }

    AnticipationResult finalize(TargetLane& lane) const {
        const TargetSpec& t = *lane.spec;
        if (!lane.tracker.started())
            throw Error(ErrorCode::target_unresolvable,
                        "target unresolvable: class '" + t.object_class + "' never detected in '" +
                            header->session_id + "'");
        const HandLane* hl = &lane.hands.front();
        if (lane.hands.size() == 2) {
            const HandLane& right = lane.hands[0];
            const HandLane& left = lane.hands[1];
            hl = (left.raw_min_h && (!right.raw_min_h || *left.raw_min_h < *right.raw_min_h))
                     ? &left
                     : &right;
        }
        if (!lane.any_g && !hl->any_h && !lane.any_o)
            throw Error(ErrorCode::no_signal,
                        "no signal: every frame of '" + header->session_id + "' is invalid");
        if (scene.windows.auto_split && !hl->touch)
            throw Error(ErrorCode::cannot_split, "cannot split: d_H has no valid sample");

        auto need = [&](const std::optional<FrameWindow>& configured, const OnlineWindowMin& m,
                        const char* event) {
            if (!scene.windows.auto_split && !configured)
                throw Error(ErrorCode::empty_window, std::string(event) + ": no window configured");
            auto r = m.result();
            if (!r) throw Error(ErrorCode::empty_window, std::string(event) + ": empty window");
            return *r;
        };
        const Phase phase = t.phase();
        EventTimes ev;
        if (phase == Phase::reach) {
            ev.gazing_target = need(scene.windows.reach_window, hl->reach_g, "gazing_target_time");
            ev.touching_object =
                need(scene.windows.reach_window, hl->reach_h, "touching_object_time");
        } else {
            ev.gazing_target =
                need(scene.windows.transport_window, hl->transport_g, "gazing_target_time");
            ev.target_object =
                need(scene.windows.transport_window, hl->transport_o, "target_object_time");
        }
        return make_result(ev, phase);
    }
};

StreamAnalyzer::StreamAnalyzer(SceneConfig scene) : impl_(std::make_unique<Impl>(std::move(scene))) {
    impl_->scene.validate();
}

StreamAnalyzer::~StreamAnalyzer() = default;

bool StreamAnalyzer::has_header() const { return impl_->header.has_value(); }

std::size_t StreamAnalyzer::frames_seen() const { return impl_->frames_seen; }

std::vector<AnticipationResult> StreamAnalyzer::feed_line(std::string_view line) {
    auto frame = impl_->parser.feed(line);
    if (!impl_->header && impl_->parser.has_header()) impl_->start(impl_->parser.header());
    if (!frame) return {};
    return feed_frame(std::move(*frame));
}

std::vector<AnticipationResult> StreamAnalyzer::feed_frame(FrameRecord frame) {
    if (!impl_->header) throw Error(ErrorCode::parse, "frame before session header");
    ++impl_->frames_seen;
    std::vector<AnticipationResult> out;
    for (const auto& f : impl_->repairer.push(std::move(frame))) impl_->on_repaired(f, out);
    return out;
}

std::vector<AnticipationResult> StreamAnalyzer::finish(std::vector<std::string>& errors) {
    std::vector<AnticipationResult> out;
    if (!impl_->header) {
        errors.push_back("missing session header");
        return out;
    }
    if (impl_->frames_seen == 0) return out;
    if (impl_->lanes.empty()) {
        errors.push_back("no target applies to action '" +
                         impl_->header->action_label.value_or("") + "'");
        return out;
    }
    for (const auto& f : impl_->repairer.finish()) impl_->on_repaired(f, out);
    for (auto& lane : impl_->lanes) {
        impl_->flush_lane(lane);
        if (lane.done) continue;
        try {
            out.push_back(impl_->finalize(lane));
        } catch (const Error& e) {
            errors.push_back(e.what());
        }
        lane.done = true;
    }
    return out;
}

}  // namespace headcue
