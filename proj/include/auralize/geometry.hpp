#ifndef AURALIZE_GEOMETRY_HPP
#define AURALIZE_GEOMETRY_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "auralize/error.hpp"
#include "auralize/vec.hpp"

// Pinhole camera geometry. Camera frame convention throughout the library:
// +z forward (optical axis), +x right, +y down.

namespace auralize {

struct CameraIntrinsics {
    double fx = 0.0;
    double fy = 0.0;
    double cx = 0.0;
    double cy = 0.0;
    int width = 0;
    int height = 0;

    void validate() const {
        if (!(fx > 0.0) || !(fy > 0.0))
            raise(Errc::InvalidArgument, "focal lengths must be positive");
        if (width < 1 || height < 1)
            raise(Errc::InvalidArgument, "image dimensions must be at least 1x1");
        if (!(cx >= 0.0 && cx < width) || !(cy >= 0.0 && cy < height))
            raise(Errc::InvalidArgument, "principal point must lie inside the image");
    }
};

struct PixelPoint {
    int u = 0;
    int v = 0;

    bool operator==(const PixelPoint&) const = default;
};

// Continuous image coordinates, as produced by projection.
struct ImagePoint {
    double u = 0.0;
    double v = 0.0;
};

// Row-major single-channel float raster holding metric depth per pixel.
struct DepthMap {
    int width = 0;
    int height = 0;
    std::vector<float> values;  // width * height, row-major

    float at(int u, int v) const { return values[static_cast<size_t>(v) * width + u]; }
    float& at(int u, int v) { return values[static_cast<size_t>(v) * width + u]; }
};

// Rigid camera pose. `rotation`/`translation` map world points into the
// camera frame (world-to-camera) unless stated otherwise at the call site:
// X_cam = R * X_world + t.
struct CameraPose {
    Mat3 rotation;
    Vec3 translation;

    // Camera center in world coordinates: the X_world with R*X + t = 0.
    Vec3 center() const { return -(transpose(rotation) * translation); }

    void validate(double tol = 1e-4) const {
        if (orthonormality_error(rotation) > tol)
            raise(Errc::InvalidRotation, "rotation is not orthonormal within " + std::to_string(tol));
        if (std::abs(det(rotation) - 1.0) > tol)
            raise(Errc::InvalidRotation, "rotation determinant is not +1 (got " +
                                             std::to_string(det(rotation)) + ")");
    }
};

enum class PoseConvention { WorldToCamera, CameraToWorld };

// Lift continuous pixel coordinates and a depth along +z to a camera-frame
// point. Depth is the z coordinate, not the ray length.
inline Vec3 back_project(double u, double v, double depth, const CameraIntrinsics& intr) {
    intr.validate();
    if (!(depth > 0.0) || !std::isfinite(depth))
        raise(Errc::NonPositiveDepth, "depth must be positive and finite, got " + std::to_string(depth));
    if (u < 0.0 || u >= intr.width || v < 0.0 || v >= intr.height)
        raise(Errc::OutOfBounds, "pixel (" + std::to_string(u) + ", " + std::to_string(v) +
                                     ") outside " + std::to_string(intr.width) + "x" +
                                     std::to_string(intr.height));
    return {(u - intr.cx) / intr.fx * depth, (v - intr.cy) / intr.fy * depth, depth};
}

inline Vec3 back_project(PixelPoint p, double depth, const CameraIntrinsics& intr) {
    return back_project(static_cast<double>(p.u), static_cast<double>(p.v), depth, intr);
}

inline ImagePoint project(const Vec3& point, const CameraIntrinsics& intr) {
    intr.validate();
    if (!(point.z > 0.0))
        raise(Errc::BehindCamera, "point has non-positive z = " + std::to_string(point.z));
    return {intr.fx * point.x / point.z + intr.cx, intr.fy * point.y / point.z + intr.cy};
}

// Mean of the back-projections of an r x r pixel patch centered on `center`,
// clipped at the image borders. Pixels whose depth is non-positive or
// non-finite are excluded from the mean.
inline Vec3 patch_average_3d(PixelPoint center, const DepthMap& depth, const CameraIntrinsics& intr,
                             int r) {
    intr.validate();
    if (r < 1 || r % 2 == 0)
        raise(Errc::InvalidArgument, "patch size must be odd and positive, got " + std::to_string(r));
    if (depth.width != intr.width || depth.height != intr.height)
        raise(Errc::InvalidArgument, "depth raster does not match intrinsics dimensions");
    if (center.u < 0 || center.u >= intr.width || center.v < 0 || center.v >= intr.height)
        raise(Errc::OutOfBounds, "patch center outside image");

    int half = (r - 1) / 2;
    int u0 = std::max(0, center.u - half);
    int u1 = std::min(intr.width - 1, center.u + half);
    int v0 = std::max(0, center.v - half);
    int v1 = std::min(intr.height - 1, center.v + half);

    Vec3 sum;
    long count = 0;
    for (int v = v0; v <= v1; ++v) {
        for (int u = u0; u <= u1; ++u) {
            double d = depth.at(u, v);
            if (!(d > 0.0) || !std::isfinite(d)) continue;
            sum += back_project(PixelPoint{u, v}, d, intr);
            ++count;
        }
    }
    if (count == 0) raise(Errc::EmptyPatch, "no valid depth in patch");
    return sum / static_cast<double>(count);
}

}  // namespace auralize

#endif
