// Copyright (C) 2026 The headcue Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "headcue/scene.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "headcue/error.hpp"

namespace headcue {

using nlohmann::json;

const char* to_string(Phase phase) { return phase == Phase::reach ? "reach" : "transport"; }

bool TargetSpec::applies(const std::optional<std::string>& action_label) const {
    if (applies_to.empty()) return true;
    if (!action_label) return false;
    return std::find(applies_to.begin(), applies_to.end(), *action_label) != applies_to.end();
}

namespace {

[[noreturn]] void config_fail(const std::string& what) {
    throw Error(ErrorCode::config, "scene config: " + what);
}

double number(const json& v, const std::string& key) {
    if (!v.is_number()) config_fail("'" + key + "' must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) config_fail("'" + key + "' must be finite");
    return d;
}

int integer(const json& v, const std::string& key) {
    if (!v.is_number_integer()) config_fail("'" + key + "' must be an integer");
    return v.get<int>();
}

/// [x, y] or [x, y, z]; the bool reports whether z was given.
std::pair<Vec3, bool> point(const json& v, const std::string& key) {
    if (!v.is_array() || v.size() < 2 || v.size() > 3)
        config_fail("'" + key + "' must be [x, y] or [x, y, z]");
    Vec3 p{number(v[0], key), number(v[1], key), 0.0};
    if (v.size() == 3) p.z = number(v[2], key);
    return {p, v.size() == 3};
}

FrameWindow window(const json& v, const std::string& key) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer())
        config_fail("'" + key + "' must be [first, last] frame indices");
    FrameWindow w{v[0].get<std::int64_t>(), v[1].get<std::int64_t>()};
    if (w.first > w.last) config_fail("'" + key + "' has first > last");
    return w;
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        const bool known = std::any_of(allowed.begin(), allowed.end(),
                                       [&](const char* k) { return it.key() == k; });
        if (!known) config_fail("unknown key '" + it.key() + "' in " + where);
    }
}

TargetSpec parse_target(const json& t, std::size_t i) {
    const std::string where = "targets[" + std::to_string(i) + "]";
    if (!t.is_object()) config_fail(where + " must be an object");
    check_keys(t, {"kind", "object_class", "target_position", "initial_object_position",
                   "applies_to"},
               where);
    TargetSpec spec;
    const std::string kind = t.value("kind", std::string{});
    if (kind == "object") {
        spec.kind = TargetKind::object;
    } else if (kind == "position") {
        spec.kind = TargetKind::position;
    } else {
        config_fail(where + ".kind must be \"object\" or \"position\"");
    }
    if (auto it = t.find("object_class"); it != t.end()) {
        if (!it->is_string()) config_fail(where + ".object_class must be a string");
        spec.object_class = it->get<std::string>();
    }
    if (auto it = t.find("target_position"); it != t.end() && !it->is_null()) {
        auto [p, has_z] = point(*it, where + ".target_position");
        spec.target_position = p;
        spec.target_has_depth = has_z;
    }
    if (auto it = t.find("initial_object_position"); it != t.end() && !it->is_null())
        spec.initial_object_position = point(*it, where + ".initial_object_position").first;
    if (auto it = t.find("applies_to"); it != t.end()) {
        if (!it->is_array()) config_fail(where + ".applies_to must be an array of labels");
        for (const auto& label : *it) {
            if (!label.is_string()) config_fail(where + ".applies_to must hold strings");
            spec.applies_to.push_back(label.get<std::string>());
        }
    }
    if (spec.object_class.empty()) config_fail(where + " needs 'object_class'");
    if (spec.kind == TargetKind::position && !spec.target_position)
        config_fail(where + " of kind position needs 'target_position'");
    return spec;
}

json point_json(const Vec3& p, bool with_z) {
    return with_z ? json::array({p.x, p.y, p.z}) : json::array({p.x, p.y});
}

}  // namespace

void SceneConfig::validate() const {
    if (projection_mode == ProjectionMode::mode_3d && !table_plane)
        config_fail("MODE_3D requires 'table_plane'");
    if (projection_mode == ProjectionMode::mode_2d && !table_line)
        config_fail("MODE_2D requires 'table_line'");
    if (table_plane && std::abs(norm(table_plane->normal) - 1.0) > 1e-9)
        config_fail("table_plane.normal must be unit length");
    if (targets.empty()) config_fail("at least one target is required");
    if (smoothing_half_width < 0) config_fail("smoothing_half_width must be >= 0");
    if (max_gap < 0) config_fail("max_gap must be >= 0");
    if (!(association_radius > 0.0)) config_fail("association_radius must be positive");
    if (confidence_threshold < 0.0 || confidence_threshold > 1.0)
        config_fail("confidence_threshold must lie in [0,1]");
    if (windows.margin < 0) config_fail("windows.margin must be >= 0");
    if (windows.reach_window && windows.transport_window &&
        windows.reach_window->last > windows.transport_window->last)
        config_fail("reach_window must end no later than transport_window");
    if (!windows.auto_split) {
        const bool needs_transport = std::any_of(targets.begin(), targets.end(), [](auto& t) {
            return t.kind == TargetKind::position;
        });
        if (!windows.reach_window) config_fail("auto_split is off but reach_window is missing");
        if (needs_transport && !windows.transport_window)
            config_fail("auto_split is off but transport_window is missing");
    }
}

SceneConfig parse_scene_config(std::string_view json_text) {
    json j = json::parse(json_text.begin(), json_text.end(), nullptr, false);
    if (j.is_discarded() || !j.is_object()) config_fail("not a JSON object");
    check_keys(j,
               {"projection_mode", "table_plane", "table_line", "targets", "hand", "windows",
                "smoothing_half_width", "max_gap", "association_radius", "confidence_threshold"},
               "scene config");

    SceneConfig s;
    if (auto it = j.find("projection_mode"); it != j.end()) {
        const std::string mode = it->is_string() ? it->get<std::string>() : "";
        if (mode == "MODE_3D") {
            s.projection_mode = ProjectionMode::mode_3d;
        } else if (mode == "MODE_2D") {
            s.projection_mode = ProjectionMode::mode_2d;
        } else {
            config_fail("projection_mode must be \"MODE_3D\" or \"MODE_2D\"");
        }
    }
    if (auto it = j.find("table_plane"); it != j.end() && !it->is_null()) {
        if (!it->is_object() || !it->contains("normal") || !it->contains("offset"))
            config_fail("table_plane needs 'normal' and 'offset'");
        check_keys(*it, {"normal", "offset"}, "table_plane");
        auto [n, has_z] = point(it->at("normal"), "table_plane.normal");
        if (!has_z) config_fail("table_plane.normal must have three components");
        const double len = norm(n);
        if (!(len > 0.0)) config_fail("table_plane.normal must be nonzero");
        Plane p;
        p.normal = n;
        p.offset = number(it->at("offset"), "table_plane.offset");
        if (std::abs(len - 1.0) > 1e-12) {
            p.normal = n / len;
            p.offset /= len;
        }
        s.table_plane = p;
    }
    if (auto it = j.find("table_line"); it != j.end() && !it->is_null()) {
        if (!it->is_array() || it->size() != 2) config_fail("table_line must be two image points");
        s.table_line = TableLine{point((*it)[0], "table_line[0]").first,
                                 point((*it)[1], "table_line[1]").first};
        s.table_line->a.z = s.table_line->b.z = 0.0;
    }
    if (auto it = j.find("targets"); it != j.end()) {
        if (!it->is_array()) config_fail("targets must be an array");
        for (std::size_t i = 0; i < it->size(); ++i) s.targets.push_back(parse_target((*it)[i], i));
    }
    if (auto it = j.find("hand"); it != j.end()) {
        const std::string hand = it->is_string() ? it->get<std::string>() : "";
        if (hand == "left") {
            s.hand = HandSelection::left;
        } else if (hand == "right") {
            s.hand = HandSelection::right;
        } else if (hand == "auto") {
            s.hand = HandSelection::automatic;
        } else {
            config_fail("hand must be \"left\", \"right\" or \"auto\"");
        }
    }
    if (auto it = j.find("windows"); it != j.end()) {
        if (it->is_string()) {
            if (it->get<std::string>() != "auto") config_fail("windows must be \"auto\" or an object");
        } else if (it->is_object()) {
            check_keys(*it, {"reach_window", "transport_window", "auto_split", "margin"}, "windows");
            if (auto w = it->find("reach_window"); w != it->end() && !w->is_null())
                s.windows.reach_window = window(*w, "windows.reach_window");
            if (auto w = it->find("transport_window"); w != it->end() && !w->is_null())
                s.windows.transport_window = window(*w, "windows.transport_window");
            if (auto a = it->find("auto_split"); a != it->end()) {
                if (!a->is_boolean()) config_fail("windows.auto_split must be a boolean");
                s.windows.auto_split = a->get<bool>();
            }
            if (auto m = it->find("margin"); m != it->end())
                s.windows.margin = integer(*m, "windows.margin");
        } else {
            config_fail("windows must be \"auto\" or an object");
        }
    }
    if (auto it = j.find("smoothing_half_width"); it != j.end())
        s.smoothing_half_width = integer(*it, "smoothing_half_width");
    if (auto it = j.find("max_gap"); it != j.end()) s.max_gap = integer(*it, "max_gap");
    if (auto it = j.find("association_radius"); it != j.end())
        s.association_radius = number(*it, "association_radius");
    if (auto it = j.find("confidence_threshold"); it != j.end())
        s.confidence_threshold = number(*it, "confidence_threshold");

    s.validate();
    return s;
}

SceneConfig load_scene_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::config, "cannot open scene config '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scene_config(buf.str());
}

std::string scene_config_to_json(const SceneConfig& s) {
    nlohmann::ordered_json j;
    j["projection_mode"] = s.projection_mode == ProjectionMode::mode_3d ? "MODE_3D" : "MODE_2D";
    if (s.table_plane) {
        j["table_plane"] = {{"normal", point_json(s.table_plane->normal, true)},
                            {"offset", s.table_plane->offset}};
    }
    if (s.table_line) {
        j["table_line"] = json::array(
            {point_json(s.table_line->a, false), point_json(s.table_line->b, false)});
    }
    j["targets"] = nlohmann::ordered_json::array();
    for (const auto& t : s.targets) {
        nlohmann::ordered_json o;
        o["kind"] = t.kind == TargetKind::object ? "object" : "position";
        o["object_class"] = t.object_class;
        if (t.target_position) o["target_position"] = point_json(*t.target_position, t.target_has_depth);
        if (t.initial_object_position)
            o["initial_object_position"] = point_json(*t.initial_object_position, true);
        if (!t.applies_to.empty()) o["applies_to"] = t.applies_to;
        j["targets"].push_back(std::move(o));
    }
    j["hand"] = s.hand == HandSelection::left    ? "left"
                : s.hand == HandSelection::right ? "right"
                                                 : "auto";
    const auto& w = s.windows;
    if (!w.reach_window && !w.transport_window && w.auto_split && w.margin == kDefaultSplitMargin) {
        j["windows"] = "auto";
    } else {
        nlohmann::ordered_json wj;
        if (w.reach_window) wj["reach_window"] = {w.reach_window->first, w.reach_window->last};
        if (w.transport_window)
            wj["transport_window"] = {w.transport_window->first, w.transport_window->last};
        wj["auto_split"] = w.auto_split;
        wj["margin"] = w.margin;
        j["windows"] = std::move(wj);
    }
    j["smoothing_half_width"] = s.smoothing_half_width;
    j["max_gap"] = s.max_gap;
    j["association_radius"] = s.association_radius;
    j["confidence_threshold"] = s.confidence_threshold;
    return j.dump(2);
}

}  // namespace headcue
