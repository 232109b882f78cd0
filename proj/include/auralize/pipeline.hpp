#ifndef AURALIZE_PIPELINE_HPP
#define AURALIZE_PIPELINE_HPP

#include <string>
#include <vector>

#include "auralize/acoustics.hpp"
#include "auralize/config.hpp"
#include "auralize/io.hpp"
#include "auralize/localization.hpp"
#include "auralize/renderer.hpp"

// End-to-end stage drivers shared by the CLI and the acceptance tests.

namespace auralize {

struct RenderRun {
    RoomSpec room;
    SceneFit fit;
    size_t segments = 0;
    AudioBuffer output;
};

// Load audio + trajectories, materialize the room, fit the scene and render.
// Input paths come from cfg.inputs.
inline RenderRun render_pipeline(const SceneConfig& cfg) {
    if (cfg.inputs.audio.empty()) raise(Errc::MissingInput, "no audio input configured");
    if (cfg.inputs.src_traj.empty()) raise(Errc::MissingInput, "no source trajectory configured");
    if (cfg.inputs.poses.empty()) raise(Errc::MissingInput, "no poses configured");

    AudioBuffer mono = read_wav(cfg.inputs.audio);
    if (mono.channels.size() != 1) raise(Errc::ChannelMismatch, "mono required");
    if (mono.sample_rate != cfg.render.fs)
        raise(Errc::SampleRateMismatch,
              "audio is " + std::to_string(mono.sample_rate) + " Hz, config expects " +
                  std::to_string(cfg.render.fs));

    Trajectory traj_src = read_trajectory(cfg.inputs.src_traj);
    PoseFile pose_file = read_poses(cfg.inputs.poses, cfg.pose_convention);
    if (pose_file.poses.empty()) raise(Errc::EmptyTrajectory, "pose file contains no poses");
    Trajectory traj_rsv = receiver_from_poses(pose_file.poses, pose_file.convention);
    std::vector<CameraPose> poses_w2c = pose_file.world_to_camera();

    RenderRun run;
    run.room = resolve_room(cfg);
    run.fit = fit_scene(traj_src, traj_rsv, run.room, cfg.render.margin);

    Trajectory src_fit = run.fit.apply(traj_src);
    Trajectory rsv_fit = run.fit.apply(traj_rsv);

    size_t seg_len = cfg.render.segment_len > 0
                         ? static_cast<size_t>(cfg.render.segment_len)
                         : std::max<size_t>(1, static_cast<size_t>(std::llround(
                                                   static_cast<double>(cfg.render.fs) /
                                                   cfg.render.frame_rate)));
    run.segments = plan_segments(mono.frames(), seg_len).segments();

    run.output = render_binaural(mono, src_fit, rsv_fit, poses_w2c, run.room, cfg.render);
    return run;
}

struct LocalizeRun {
    Trajectory trajectory;
    std::vector<bool> interpolated;  // per frame: true when not an original survivor
    std::vector<bool> estimated;     // per frame: a raw 3D estimate existed
    size_t survivors = 0;
    size_t noise = 0;
    size_t missing = 0;
};

// Boxes + per-frame depth rasters to a dense source trajectory.
// Depth files are `<depth_dir>/depth_%06d.depth`, one per frame with a box.
inline LocalizeRun localize_pipeline(const std::vector<std::optional<GroundingBox>>& boxes,
                                     const std::string& depth_dir, const CameraIntrinsics& intr,
                                     int patch_radius, double eps, int min_pts,
                                     double depth_scale = 1.0) {
    if (boxes.empty()) raise(Errc::EmptyTrajectory, "no frames in box list");

    std::vector<DepthMap> depths(boxes.size());
    for (size_t i = 0; i < boxes.size(); ++i) {
        if (!boxes[i]) continue;
        char name[32];
        std::snprintf(name, sizeof(name), "depth_%06zu.depth", i);
        std::string path = depth_dir + "/" + name;
        depths[i] = read_depth(path);
        if (depth_scale != 1.0)
            for (auto& v : depths[i].values) v = static_cast<float>(v * depth_scale);
    }

    std::vector<std::optional<Vec3>> raw =
        estimate_raw_source_points(boxes, depths, intr, patch_radius);

    FilterResult filtered = filter_and_interpolate_detailed(raw, eps, min_pts);

    LocalizeRun run;
    run.trajectory = std::move(filtered.trajectory);
    run.interpolated.resize(raw.size());
    run.estimated.resize(raw.size());
    for (size_t i = 0; i < raw.size(); ++i) {
        run.interpolated[i] = !filtered.survivor[i];
        run.estimated[i] = raw[i].has_value();
        if (filtered.survivor[i])
            ++run.survivors;
        else if (raw[i])
            ++run.noise;
        else
            ++run.missing;
    }
    return run;
}

}  // namespace auralize

#endif
