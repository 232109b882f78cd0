#ifndef AURALIZE_TOY_SCENE_HPP
#define AURALIZE_TOY_SCENE_HPP

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "auralize/config.hpp"
#include "auralize/io.hpp"
#include "auralize/localization.hpp"
#include "auralize/trajectory.hpp"

// Self-contained demo scene: two seconds of tonal audio whose source pans
// left to right in front of a static camera. Exercises the full pipeline
// (boxes + depth -> localize -> render) without any external data.

namespace auralize {

struct ToySceneFiles {
    std::string audio;
    std::string src_traj;
    std::string poses;
    std::string boxes;
    std::string depth_dir;
    std::string intrinsics;
    std::string config;
};

namespace toy {

constexpr int kFs = 44100;
constexpr double kSeconds = 2.0;
constexpr int kFrames = 61;  // 30 fps over 2 s, inclusive endpoints
constexpr double kFrameRate = 30.0;
constexpr double kDepth = 2.0;  // source plane distance, meters

inline AudioBuffer make_audio() {
    AudioBuffer audio;
    audio.sample_rate = kFs;
    auto n = static_cast<size_t>(kSeconds * kFs);
    audio.channels.assign(1, std::vector<double>(n));
    constexpr double pi2 = 2.0 * std::numbers::pi;
    for (size_t i = 0; i < n; ++i) {
        double t = static_cast<double>(i) / kFs;
        double env = 0.6 + 0.4 * std::sin(pi2 * 2.0 * t);
        double s = 0.55 * std::sin(pi2 * 330.0 * t) * env + 0.25 * std::sin(pi2 * 987.0 * t);
        // short attack to avoid an onset click
        if (t < 0.02) s *= t / 0.02;
        audio.channels[0][i] = s;
    }
    return audio;
}

// Source world position at frame f: a straight pan in front of the camera.
inline Vec3 source_at(int frame) {
    double w = static_cast<double>(frame) / (kFrames - 1);
    return {-1.5 + 3.0 * w, 0.0, kDepth};
}

inline CameraIntrinsics make_intrinsics() {
    CameraIntrinsics intr;
    intr.width = 64;
    intr.height = 48;
    intr.fx = 40.0;
    intr.fy = 40.0;
    intr.cx = 32.0;
    intr.cy = 24.0;
    return intr;
}

}  // namespace toy

// Write the complete scene into `dir` and return the file map.
inline ToySceneFiles make_toy_scene(const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    fs::create_directories(dir + "/depth");

    ToySceneFiles files;
    files.audio = dir + "/audio.wav";
    files.src_traj = dir + "/src_traj.csv";
    files.poses = dir + "/poses.txt";
    files.boxes = dir + "/boxes.csv";
    files.depth_dir = dir + "/depth";
    files.intrinsics = dir + "/intrinsics.json";
    files.config = dir + "/scene.json";

    write_wav(files.audio, toy::make_audio());

    Trajectory traj;
    traj.frame_rate = toy::kFrameRate;
    for (int f = 0; f < toy::kFrames; ++f)
        traj.points.push_back({static_cast<double>(f), toy::source_at(f)});
    write_trajectory(files.src_traj, traj);

    std::vector<CameraPose> poses(toy::kFrames);  // identity: camera at origin
    write_poses(files.poses, poses, PoseConvention::WorldToCamera);

    CameraIntrinsics intr = toy::make_intrinsics();
    write_intrinsics(files.intrinsics, intr);

    // Boxes follow the projected source; depth is the constant source plane.
    std::vector<std::optional<GroundingBox>> boxes(toy::kFrames);
    DepthMap depth;
    depth.width = intr.width;
    depth.height = intr.height;
    depth.values.assign(static_cast<size_t>(intr.width) * intr.height,
                        static_cast<float>(toy::kDepth));
    for (int f = 0; f < toy::kFrames; ++f) {
        ImagePoint center = project(toy::source_at(f), intr);
        double cx = center.u / intr.width;
        double cy = center.v / intr.height;
        GroundingBox box;
        box.frame_index = f;
        box.x0 = std::clamp(cx - 0.05, 0.0, 1.0);
        box.x1 = std::clamp(cx + 0.05, 0.0, 1.0);
        box.y0 = std::clamp(cy - 0.05, 0.0, 1.0);
        box.y1 = std::clamp(cy + 0.05, 0.0, 1.0);
        boxes[static_cast<size_t>(f)] = box;

        char name[32];
        std::snprintf(name, sizeof(name), "depth_%06d.depth", f);
        write_depth(files.depth_dir + "/" + name, depth);
    }
    write_boxes(files.boxes, boxes);

    nlohmann::json cfg{
        {"inputs",
         {{"audio", "audio.wav"},
          {"src_traj", "src_traj.csv"},
          {"poses", "poses.txt"},
          {"boxes", "boxes.csv"},
          {"depth_dir", "depth"},
          {"intrinsics", "intrinsics.json"}}},
        {"fs", toy::kFs},
        {"frame_rate", toy::kFrameRate},
        {"seed", 7},
        {"room", {{"category", "small"}}},
    };
    detail::write_file(files.config, cfg.dump(2) + "\n");

    return files;
}

}  // namespace auralize

#endif
