#ifndef AURALIZE_LOCALIZATION_HPP
#define AURALIZE_LOCALIZATION_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "auralize/error.hpp"
#include "auralize/geometry.hpp"
#include "auralize/trajectory.hpp"
#include "auralize/vec.hpp"

// Source localization: grounding boxes + depth rasters in, smooth 3D source
// trajectory out. Receiver-side helpers (camera centers, mic placement) also
// live here.

namespace auralize {

struct GroundingBox {
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;  // normalized to [0,1]
    int frame_index = 0;

    void validate() const {
        if (!(0.0 <= x0 && x0 <= x1 && x1 <= 1.0) || !(0.0 <= y0 && y0 <= y1 && y1 <= 1.0))
            raise(Errc::InvalidArgument,
                  "box coordinates must satisfy 0 <= min <= max <= 1 (frame " +
                      std::to_string(frame_index) + ")");
    }
};

struct LabeledPoints {
    std::vector<Vec3> points;
    std::vector<int> labels;  // cluster id, -1 = noise
};

struct MicPair {
    Vec3 left;
    Vec3 right;
    Vec3 left_facing;   // unit vectors; meaningful for cardioid only
    Vec3 right_facing;
};

inline PixelPoint bbox_center(const GroundingBox& box, int width, int height) {
    box.validate();
    if (width < 1 || height < 1) raise(Errc::InvalidArgument, "image dimensions must be positive");
    int u = static_cast<int>(std::floor((box.x0 + box.x1) / 2.0 * width));
    int v = static_cast<int>(std::floor((box.y0 + box.y1) / 2.0 * height));
    u = std::clamp(u, 0, width - 1);
    v = std::clamp(v, 0, height - 1);
    return {u, v};
}

// Per-frame 3D source estimates. boxes[i] and depth_maps[i] describe frame i;
// a frame without a box, or whose depth patch is entirely invalid, yields an
// empty optional. Depth rasters at missing-box frames are never touched, so
// placeholders are fine there.
inline std::vector<std::optional<Vec3>> estimate_raw_source_points(
    const std::vector<std::optional<GroundingBox>>& boxes, const std::vector<DepthMap>& depth_maps,
    const CameraIntrinsics& intr, int r) {
    if (boxes.size() != depth_maps.size())
        raise(Errc::FrameMismatch, "got " + std::to_string(boxes.size()) + " boxes vs " +
                                       std::to_string(depth_maps.size()) + " depth maps");
    std::vector<std::optional<Vec3>> out(boxes.size());
    for (size_t i = 0; i < boxes.size(); ++i) {
        if (!boxes[i]) continue;
        if (boxes[i]->frame_index != static_cast<int>(i))
            raise(Errc::FrameMismatch, "box at position " + std::to_string(i) +
                                           " carries frame index " +
                                           std::to_string(boxes[i]->frame_index));
        PixelPoint center = bbox_center(*boxes[i], intr.width, intr.height);
        try {
            out[i] = patch_average_3d(center, depth_maps[i], intr, r);
        } catch (const Error& e) {
            if (e.code() != Errc::EmptyPatch) throw;
        }
    }
    return out;
}

// Classic DBSCAN, Euclidean metric, core iff >= min_pts neighbors within eps
// counting itself. Scan order is input order; a border point belongs to the
// first cluster whose expansion reaches it, which makes labels deterministic.
inline LabeledPoints dbscan(const std::vector<Vec3>& points, double eps, int min_pts) {
    if (!(eps > 0.0)) raise(Errc::InvalidArgument, "eps must be positive");
    if (min_pts < 1) raise(Errc::InvalidArgument, "min_pts must be at least 1");

    const size_t n = points.size();
    const double eps2 = eps * eps;
    auto neighbors = [&](size_t i) {
        std::vector<size_t> out;
        for (size_t j = 0; j < n; ++j) {
            Vec3 d = points[i] - points[j];
            if (dot(d, d) <= eps2) out.push_back(j);
        }
        return out;
    };

    constexpr int kUnvisited = -2;
    std::vector<int> labels(n, kUnvisited);
    int next_cluster = 0;

    for (size_t i = 0; i < n; ++i) {
        if (labels[i] != kUnvisited) continue;
        std::vector<size_t> nb = neighbors(i);
        if (nb.size() < static_cast<size_t>(min_pts)) {
            labels[i] = -1;  // may be promoted to border later
            continue;
        }
        int cluster = next_cluster++;
        labels[i] = cluster;
        std::deque<size_t> queue(nb.begin(), nb.end());
        while (!queue.empty()) {
            size_t j = queue.front();
            queue.pop_front();
            if (labels[j] == -1) labels[j] = cluster;  // noise becomes border
            if (labels[j] != kUnvisited) continue;
            labels[j] = cluster;
            std::vector<size_t> nbj = neighbors(j);
            if (nbj.size() >= static_cast<size_t>(min_pts))
                queue.insert(queue.end(), nbj.begin(), nbj.end());
        }
    }

    for (auto& l : labels)
        if (l == kUnvisited) l = -1;
    return {points, labels};
}

// Scale-adaptive clustering defaults: eps five times the median
// nearest-neighbor distance, min_pts at 5% of the point count (floor 3).
inline double default_dbscan_eps(const std::vector<Vec3>& points) {
    if (points.size() < 2) return 1.0;
    std::vector<double> nn(points.size());
    for (size_t i = 0; i < points.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (size_t j = 0; j < points.size(); ++j) {
            if (i == j) continue;
            Vec3 d = points[i] - points[j];
            best = std::min(best, dot(d, d));
        }
        nn[i] = std::sqrt(best);
    }
    std::sort(nn.begin(), nn.end());
    double median = nn[nn.size() / 2];
    if (nn.size() % 2 == 0) median = 0.5 * (nn[nn.size() / 2 - 1] + nn[nn.size() / 2]);
    return median > 0.0 ? 5.0 * median : 1.0;
}

inline int default_dbscan_min_pts(size_t n) {
    return std::max(3, static_cast<int>(std::ceil(0.05 * static_cast<double>(n))));
}

struct FilterResult {
    Trajectory trajectory;
    std::vector<bool> survivor;  // per frame: the raw estimate was kept as-is
};

// Reject spurious estimates and fill the gaps: keep the largest DBSCAN
// cluster, then rebuild a dense per-frame path by per-coordinate linear
// interpolation between surviving frames (constant beyond the ends).
// eps <= 0 or min_pts <= 0 select the scale-adaptive defaults.
inline FilterResult filter_and_interpolate_detailed(const std::vector<std::optional<Vec3>>& raw,
                                                    double eps = 0.0, int min_pts = 0) {
    std::vector<Vec3> present;
    std::vector<size_t> frame_of;
    for (size_t i = 0; i < raw.size(); ++i) {
        if (raw[i]) {
            present.push_back(*raw[i]);
            frame_of.push_back(i);
        }
    }
    if (present.empty()) raise(Errc::AllNoise, "no frames with a source estimate");

    if (eps <= 0.0) eps = default_dbscan_eps(present);
    if (min_pts <= 0) min_pts = default_dbscan_min_pts(present.size());
    LabeledPoints labeled = dbscan(present, eps, min_pts);

    int best_cluster = -1;
    long best_count = 0;
    for (int l : labeled.labels) {
        if (l < 0) continue;
        long count = std::count(labeled.labels.begin(), labeled.labels.end(), l);
        if (count > best_count || (count == best_count && l < best_cluster)) {
            best_count = count;
            best_cluster = l;
        }
    }
    if (best_cluster < 0) raise(Errc::AllNoise, "every estimate was labeled noise");

    std::vector<size_t> kept;  // indices into present/frame_of
    for (size_t i = 0; i < present.size(); ++i)
        if (labeled.labels[i] == best_cluster) kept.push_back(i);

    FilterResult result;
    result.survivor.assign(raw.size(), false);
    for (size_t i : kept) result.survivor[frame_of[i]] = true;

    Trajectory& out = result.trajectory;
    out.points.reserve(raw.size());
    size_t next = 0;  // first kept survivor with frame >= current frame
    for (size_t f = 0; f < raw.size(); ++f) {
        while (next < kept.size() && frame_of[kept[next]] < f) ++next;
        Vec3 p;
        if (next == 0) {
            p = present[kept.front()];
        } else if (next == kept.size()) {
            p = present[kept.back()];
        } else if (frame_of[kept[next]] == f) {
            p = present[kept[next]];
        } else {
            size_t ia = kept[next - 1], ib = kept[next];
            double fa = static_cast<double>(frame_of[ia]);
            double fb = static_cast<double>(frame_of[ib]);
            double w = (static_cast<double>(f) - fa) / (fb - fa);
            p = present[ia] + (present[ib] - present[ia]) * w;
        }
        out.points.push_back({static_cast<double>(f), p});
    }
    return result;
}

inline Trajectory filter_and_interpolate(const std::vector<std::optional<Vec3>>& raw,
                                         double eps = 0.0, int min_pts = 0) {
    return filter_and_interpolate_detailed(raw, eps, min_pts).trajectory;
}

// Camera centers in world coordinates, one per pose.
inline Trajectory receiver_from_poses(const std::vector<CameraPose>& poses,
                                      PoseConvention convention = PoseConvention::WorldToCamera) {
    if (poses.empty()) raise(Errc::EmptyTrajectory, "no poses");
    Trajectory out;
    out.points.reserve(poses.size());
    for (size_t i = 0; i < poses.size(); ++i) {
        poses[i].validate();
        Vec3 p = convention == PoseConvention::WorldToCamera ? poses[i].center()
                                                             : poses[i].translation;
        out.points.push_back({static_cast<double>(i), p});
    }
    return out;
}

// Mic pair around `receiver_pos` along a given world-frame right axis,
// facing outward.
inline MicPair binaural_mics_along(const Vec3& right_axis, const Vec3& receiver_pos,
                                   double ear_offset) {
    if (!(ear_offset > 0.0)) raise(Errc::InvalidArgument, "ear_offset must be positive");
    double n = norm(right_axis);
    if (n < 1e-9) raise(Errc::DegenerateRotation, "camera right axis has near-zero norm");
    Vec3 right_dir = right_axis / n;
    MicPair mics;
    mics.left = receiver_pos - right_dir * ear_offset;
    mics.right = receiver_pos + right_dir * ear_offset;
    mics.left_facing = -right_dir;
    mics.right_facing = right_dir;
    return mics;
}

// Place the two ear microphones on the camera's left/right axis, facing
// outward. The pose must be world-to-camera; its first rotation row is the
// camera right direction expressed in world coordinates.
inline MicPair binaural_mics(const CameraPose& pose, const Vec3& receiver_pos, double ear_offset) {
    return binaural_mics_along(pose.rotation.row(0), receiver_pos, ear_offset);
}

}  // namespace auralize

#endif
