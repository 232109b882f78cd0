#ifndef AURALIZE_CONFIG_HPP
#define AURALIZE_CONFIG_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "auralize/acoustics.hpp"
#include "auralize/error.hpp"
#include "auralize/geometry.hpp"
#include "auralize/io.hpp"
#include "auralize/renderer.hpp"

// Scene configuration document (JSON). Unknown keys are rejected so typos
// fail loudly; every referenced input file must exist at load time. The full
// schema and defaults are documented in the README.

namespace auralize {

struct InputPaths {
    std::string audio;
    std::string src_traj;
    std::string poses;
    std::string boxes;
    std::string depth_dir;
    std::string intrinsics;
};

// Either a sampled category or explicit dimensions (with optional betas).
struct RoomChoice {
    std::optional<RoomCategory> category;
    std::optional<RoomSpec> explicit_room;  // t60/beta may still be filled later
    bool explicit_beta = false;
};

struct SceneConfig {
    RenderConfig render;
    RoomChoice room;
    std::optional<double> t60;  // explicit override; otherwise sampled
    InputPaths inputs;
    int patch_radius = 5;
    double dbscan_eps = 0.0;  // <= 0 selects the scale-adaptive default
    int dbscan_min_pts = 0;   // <= 0 selects the count-based default
    PoseConvention pose_convention = PoseConvention::WorldToCamera;
    double depth_scale = 1.0;
    bool strict_ranges = false;
};

namespace detail {

inline void require_keys(const nlohmann::json& obj, const std::vector<std::string>& allowed,
                         const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        bool ok = false;
        for (const auto& a : allowed)
            if (key == a) ok = true;
        if (!ok) raise(Errc::UnknownKey, "unknown key '" + key + "' in " + where);
    }
}

inline void require_exists(const std::string& path, const std::string& key) {
    if (!path.empty() && !std::filesystem::exists(path))
        raise(Errc::MissingInput, key + " path does not exist: " + path);
}

inline RoomCategory parse_category(const std::string& name) {
    if (name == "small") return RoomCategory::Small;
    if (name == "medium") return RoomCategory::Medium;
    if (name == "large") return RoomCategory::Large;
    if (name == "outdoor") return RoomCategory::Outdoor;
    raise(Errc::RangeViolation,
          "room category must be small, medium, large or outdoor, got '" + name + "'");
}

inline const char* category_name(RoomCategory cat) {
    switch (cat) {
    case RoomCategory::Small: return "small";
    case RoomCategory::Medium: return "medium";
    case RoomCategory::Large: return "large";
    case RoomCategory::Outdoor: return "outdoor";
    default: return "explicit";
    }
}

template <typename T>
T get_or(const nlohmann::json& obj, const std::string& key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        raise(Errc::RangeViolation, "key '" + key + "' has the wrong type");
    }
}

}  // namespace detail

inline SceneConfig parse_config(const nlohmann::json& doc) {
    detail::require_keys(doc,
                         {"inputs", "fs", "c", "ear_offset", "pattern", "segment_len",
                          "frame_rate", "margin", "seed", "normalize", "crossfade", "threads",
                          "max_order_cap", "traj_upsample", "room", "t60", "patch_radius",
                          "dbscan", "pose_convention", "depth_scale", "strict_ranges"},
                         "config root");

    SceneConfig cfg;
    cfg.render.fs = detail::get_or(doc, "fs", cfg.render.fs);
    cfg.render.c = detail::get_or(doc, "c", cfg.render.c);
    cfg.render.ear_offset = detail::get_or(doc, "ear_offset", cfg.render.ear_offset);
    cfg.render.segment_len = detail::get_or(doc, "segment_len", cfg.render.segment_len);
    cfg.render.frame_rate = detail::get_or(doc, "frame_rate", cfg.render.frame_rate);
    cfg.render.margin = detail::get_or(doc, "margin", cfg.render.margin);
    cfg.render.seed = detail::get_or(doc, "seed", cfg.render.seed);
    cfg.render.normalize = detail::get_or(doc, "normalize", cfg.render.normalize);
    cfg.render.crossfade = detail::get_or(doc, "crossfade", cfg.render.crossfade);
    cfg.render.threads = detail::get_or(doc, "threads", cfg.render.threads);
    cfg.render.max_order_cap = detail::get_or(doc, "max_order_cap", cfg.render.max_order_cap);
    cfg.render.traj_upsample =
        detail::get_or<size_t>(doc, "traj_upsample", cfg.render.traj_upsample);

    std::string pattern = detail::get_or<std::string>(doc, "pattern", "omni");
    if (pattern == "omni")
        cfg.render.pattern = MicPattern::Omni;
    else if (pattern == "cardioid")
        cfg.render.pattern = MicPattern::Cardioid;
    else
        raise(Errc::RangeViolation, "pattern must be 'omni' or 'cardioid', got '" + pattern + "'");

    if (doc.contains("inputs")) {
        const auto& in = doc.at("inputs");
        detail::require_keys(in, {"audio", "src_traj", "poses", "boxes", "depth_dir", "intrinsics"},
                             "inputs");
        cfg.inputs.audio = detail::get_or<std::string>(in, "audio", "");
        cfg.inputs.src_traj = detail::get_or<std::string>(in, "src_traj", "");
        cfg.inputs.poses = detail::get_or<std::string>(in, "poses", "");
        cfg.inputs.boxes = detail::get_or<std::string>(in, "boxes", "");
        cfg.inputs.depth_dir = detail::get_or<std::string>(in, "depth_dir", "");
        cfg.inputs.intrinsics = detail::get_or<std::string>(in, "intrinsics", "");
    }

    if (doc.contains("room")) {
        const auto& room = doc.at("room");
        detail::require_keys(room, {"category", "lx", "ly", "lz", "beta", "t60"}, "room");
        if (room.contains("category")) {
            if (room.contains("lx") || room.contains("ly") || room.contains("lz"))
                raise(Errc::RangeViolation, "room takes either a category or explicit dimensions");
            cfg.room.category = detail::parse_category(room.at("category").get<std::string>());
        } else {
            RoomSpec spec;
            spec.lx = detail::get_or(room, "lx", 0.0);
            spec.ly = detail::get_or(room, "ly", 0.0);
            spec.lz = detail::get_or(room, "lz", 0.0);
            if (!(spec.lx > 0.0 && spec.ly > 0.0 && spec.lz > 0.0))
                raise(Errc::RangeViolation, "explicit room needs positive lx, ly, lz");
            spec.t60 = detail::get_or(room, "t60", 0.0);
            if (room.contains("beta")) {
                auto beta = room.at("beta").get<std::vector<double>>();
                if (beta.size() != 6)
                    raise(Errc::RangeViolation, "room beta must list 6 wall coefficients");
                for (size_t i = 0; i < 6; ++i) {
                    if (!(beta[i] >= 0.0 && beta[i] < 1.0))
                        raise(Errc::RangeViolation, "beta values must lie in [0, 1)");
                    spec.beta[i] = beta[i];
                }
                cfg.room.explicit_beta = true;
            }
            spec.category = RoomCategory::Explicit;
            cfg.room.explicit_room = spec;
        }
    } else {
        cfg.room.category = RoomCategory::Small;
    }

    if (doc.contains("t60")) {
        double t60 = doc.at("t60").get<double>();
        if (!(t60 > 0.0)) raise(Errc::RangeViolation, "t60 must be positive");
        cfg.t60 = t60;
    }

    cfg.patch_radius = detail::get_or(doc, "patch_radius", cfg.patch_radius);
    if (cfg.patch_radius < 1 || cfg.patch_radius % 2 == 0)
        raise(Errc::RangeViolation, "patch_radius must be odd and positive");

    if (doc.contains("dbscan")) {
        const auto& db = doc.at("dbscan");
        detail::require_keys(db, {"eps", "min_pts"}, "dbscan");
        cfg.dbscan_eps = detail::get_or(db, "eps", cfg.dbscan_eps);
        cfg.dbscan_min_pts = detail::get_or(db, "min_pts", cfg.dbscan_min_pts);
    }

    std::string conv = detail::get_or<std::string>(doc, "pose_convention", "world_to_camera");
    if (conv == "world_to_camera")
        cfg.pose_convention = PoseConvention::WorldToCamera;
    else if (conv == "camera_to_world")
        cfg.pose_convention = PoseConvention::CameraToWorld;
    else
        raise(Errc::RangeViolation,
              "pose_convention must be world_to_camera or camera_to_world, got '" + conv + "'");

    cfg.depth_scale = detail::get_or(doc, "depth_scale", cfg.depth_scale);
    if (!(cfg.depth_scale > 0.0)) raise(Errc::RangeViolation, "depth_scale must be positive");
    cfg.strict_ranges = detail::get_or(doc, "strict_ranges", cfg.strict_ranges);

    cfg.render.validate();

    // Published sampling ranges, enforced on explicit values when asked to.
    if (cfg.strict_ranges) {
        if (cfg.t60 && !(*cfg.t60 > 0.3 && *cfg.t60 < 0.6))
            raise(Errc::RangeViolation, "strict_ranges: t60 must lie strictly in (0.3, 0.6)");
        if (cfg.room.explicit_room && cfg.room.explicit_room->t60 > 0.0 &&
            !(cfg.room.explicit_room->t60 > 0.3 && cfg.room.explicit_room->t60 < 0.6))
            raise(Errc::RangeViolation, "strict_ranges: room t60 must lie strictly in (0.3, 0.6)");
    }

    return cfg;
}

inline SceneConfig load_config(const std::string& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(detail::read_file(path));
    } catch (const nlohmann::json::exception& e) {
        raise(Errc::MalformedLine, std::string("config parse error: ") + e.what());
    }
    if (!doc.is_object()) raise(Errc::MalformedLine, "config root must be an object");
    SceneConfig cfg = parse_config(doc);

    // Relative input paths are resolved against the config file's directory.
    std::filesystem::path base = std::filesystem::path(path).parent_path();
    auto resolve = [&](std::string& p) {
        if (!p.empty() && std::filesystem::path(p).is_relative()) p = (base / p).string();
    };
    resolve(cfg.inputs.audio);
    resolve(cfg.inputs.src_traj);
    resolve(cfg.inputs.poses);
    resolve(cfg.inputs.boxes);
    resolve(cfg.inputs.depth_dir);
    resolve(cfg.inputs.intrinsics);

    detail::require_exists(cfg.inputs.audio, "inputs.audio");
    detail::require_exists(cfg.inputs.src_traj, "inputs.src_traj");
    detail::require_exists(cfg.inputs.poses, "inputs.poses");
    detail::require_exists(cfg.inputs.boxes, "inputs.boxes");
    detail::require_exists(cfg.inputs.depth_dir, "inputs.depth_dir");
    detail::require_exists(cfg.inputs.intrinsics, "inputs.intrinsics");
    return cfg;
}

// Materialize the room for a run: sample what the config leaves open, then
// derive wall coefficients from t60 unless given explicitly.
inline RoomSpec resolve_room(const SceneConfig& cfg) {
    RoomSpec room;
    if (cfg.room.explicit_room) {
        room = *cfg.room.explicit_room;
        if (cfg.t60) room.t60 = *cfg.t60;
        if (room.t60 <= 0.0) room.t60 = sample_t60(cfg.render.seed);
    } else {
        room = sample_room(*cfg.room.category, cfg.render.seed);
        room.t60 = cfg.t60 ? *cfg.t60 : sample_t60(cfg.render.seed);
    }
    if (!cfg.room.explicit_beta) room.beta = beta_from_t60(room, cfg.strict_ranges);
    room.validate();
    return room;
}

inline CameraIntrinsics read_intrinsics(const std::string& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(detail::read_file(path));
    } catch (const nlohmann::json::exception& e) {
        raise(Errc::MalformedLine, std::string("intrinsics parse error: ") + e.what());
    }
    detail::require_keys(doc, {"fx", "fy", "cx", "cy", "width", "height"}, path);
    CameraIntrinsics intr;
    intr.fx = detail::get_or(doc, "fx", 0.0);
    intr.fy = detail::get_or(doc, "fy", 0.0);
    intr.cx = detail::get_or(doc, "cx", 0.0);
    intr.cy = detail::get_or(doc, "cy", 0.0);
    intr.width = detail::get_or(doc, "width", 0);
    intr.height = detail::get_or(doc, "height", 0);
    intr.validate();
    return intr;
}

inline void write_intrinsics(const std::string& path, const CameraIntrinsics& intr) {
    nlohmann::json doc{{"fx", intr.fx}, {"fy", intr.fy},         {"cx", intr.cx},
                       {"cy", intr.cy}, {"width", intr.width},   {"height", intr.height}};
    detail::write_file(path, doc.dump(2) + "\n");
}

}  // namespace auralize

#endif
