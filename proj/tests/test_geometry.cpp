#include <catch2/catch_amalgamated.hpp>

#include "auralize/geometry.hpp"
#include "support/oracles.hpp"

using namespace auralize;
using Catch::Approx;
using oracles::throws_code;

namespace {

CameraIntrinsics vga() {
    CameraIntrinsics intr;
    intr.fx = 525.0;
    intr.fy = 525.0;
    intr.cx = 319.5;
    intr.cy = 239.5;
    intr.width = 640;
    intr.height = 480;
    return intr;
}

DepthMap constant_depth(const CameraIntrinsics& intr, float d) {
    DepthMap depth;
    depth.width = intr.width;
    depth.height = intr.height;
    depth.values.assign(static_cast<size_t>(intr.width) * intr.height, d);
    return depth;
}

}  // namespace

TEST_CASE("back_project maps the principal point onto the optical axis") {
    CameraIntrinsics intr = vga();
    Vec3 p = back_project(intr.cx, intr.cy, 3.0, intr);
    CHECK(p.x == Approx(0.0).margin(1e-12));
    CHECK(p.y == Approx(0.0).margin(1e-12));
    CHECK(p.z == 3.0);
}

TEST_CASE("back_project one focal length right of center") {
    CameraIntrinsics intr;
    intr.fx = intr.fy = 100.0;
    intr.cx = intr.cy = 50.0;
    intr.width = 640;
    intr.height = 480;
    Vec3 p = back_project(PixelPoint{150, 50}, 2.0, intr);
    CHECK(p.x == Approx(2.0));
    CHECK(p.y == Approx(0.0).margin(1e-12));
    CHECK(p.z == 2.0);
}

TEST_CASE("back_project rejects bad depth and out-of-bounds pixels") {
    CameraIntrinsics intr = vga();
    CHECK(throws_code([&] { back_project(10.0, 10.0, 0.0, intr); }, Errc::NonPositiveDepth));
    CHECK(throws_code([&] { back_project(10.0, 10.0, -1.0, intr); }, Errc::NonPositiveDepth));
    CHECK(throws_code([&] { back_project(-1.0, 10.0, 1.0, intr); }, Errc::OutOfBounds));
    CHECK(throws_code([&] { back_project(10.0, 480.0, 1.0, intr); }, Errc::OutOfBounds));
}

TEST_CASE("project maps the optical axis to the principal point") {
    CameraIntrinsics intr = vga();
    ImagePoint ip = project({0.0, 0.0, 5.0}, intr);
    CHECK(ip.u == Approx(intr.cx));
    CHECK(ip.v == Approx(intr.cy));
}

TEST_CASE("project inverts the back_project example") {
    CameraIntrinsics intr;
    intr.fx = intr.fy = 100.0;
    intr.cx = intr.cy = 50.0;
    intr.width = 640;
    intr.height = 480;
    ImagePoint ip = project({2.0, 0.0, 2.0}, intr);
    CHECK(ip.u == Approx(150.0));
    CHECK(ip.v == Approx(50.0));
}

TEST_CASE("project rejects points behind the camera") {
    CameraIntrinsics intr = vga();
    CHECK(throws_code([&] { project({0.0, 0.0, 0.0}, intr); }, Errc::BehindCamera));
    CHECK(throws_code([&] { project({1.0, 1.0, -2.0}, intr); }, Errc::BehindCamera));
}

TEST_CASE("projection roundtrips over random pixels and depths") {
    CameraIntrinsics intr = vga();
    oracles::Rand rng(101);
    double worst_px = 0.0;
    double worst_m = 0.0;
    for (int i = 0; i < 1000; ++i) {
        double u = rng.uniform(0.0, intr.width - 1e-6);
        double v = rng.uniform(0.0, intr.height - 1e-6);
        double d = rng.uniform(0.05, 80.0);
        Vec3 p = back_project(u, v, d, intr);
        ImagePoint ip = project(p, intr);
        worst_px = std::max({worst_px, std::abs(ip.u - u), std::abs(ip.v - v)});
        Vec3 q = back_project(ip.u, ip.v, d, intr);
        worst_m = std::max(worst_m, norm(q - p));
    }
    CHECK(worst_px < 1e-6);
    CHECK(worst_m < 1e-6);
}

TEST_CASE("patch_average_3d with r=1 equals back_project") {
    CameraIntrinsics intr = vga();
    DepthMap depth = constant_depth(intr, 4.0f);
    PixelPoint c{100, 200};
    CHECK(patch_average_3d(c, depth, intr, 1) == back_project(c, 4.0, intr));
}

TEST_CASE("patch_average_3d on constant depth equals the mean ray") {
    CameraIntrinsics intr = vga();
    DepthMap depth = constant_depth(intr, 2.5f);
    PixelPoint c{320, 240};
    Vec3 got = patch_average_3d(c, depth, intr, 5);
    // Back-projection is linear in (u, v) at fixed depth, so the patch mean
    // equals the back-projection of the mean pixel.
    Vec3 want = back_project(static_cast<double>(c.u), static_cast<double>(c.v), 2.5, intr);
    CHECK(norm(got - want) < 1e-9);
}

TEST_CASE("patch_average_3d skips invalid depths") {
    CameraIntrinsics intr = vga();
    DepthMap depth = constant_depth(intr, 3.0f);
    PixelPoint c{50, 50};
    depth.at(50, 50) = std::numeric_limits<float>::quiet_NaN();
    CHECK(norm(patch_average_3d(c, depth, intr, 3) - oracles::ref_patch_average(c, depth, intr, 3)) <
          1e-9);

    depth.at(49, 49) = -1.0f;
    depth.at(51, 51) = std::numeric_limits<float>::infinity();
    CHECK(norm(patch_average_3d(c, depth, intr, 3) - oracles::ref_patch_average(c, depth, intr, 3)) <
          1e-9);
}

TEST_CASE("patch_average_3d clips at image borders") {
    CameraIntrinsics intr = vga();
    DepthMap depth = constant_depth(intr, 1.5f);
    PixelPoint corner{0, 0};
    Vec3 got = patch_average_3d(corner, depth, intr, 5);
    Vec3 want = oracles::ref_patch_average(corner, depth, intr, 5);
    CHECK(norm(got - want) < 1e-9);
}

TEST_CASE("patch_average_3d matches the brute-force sum on random rasters") {
    CameraIntrinsics intr = vga();
    oracles::Rand rng(202);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        DepthMap depth = constant_depth(intr, 0.0f);
        PixelPoint c{rng.integer(0, intr.width - 1), rng.integer(0, intr.height - 1)};
        int r = 2 * rng.integer(0, 4) + 1;
        int half = (r - 1) / 2;
        for (int v = std::max(0, c.v - half); v <= std::min(intr.height - 1, c.v + half); ++v)
            for (int u = std::max(0, c.u - half); u <= std::min(intr.width - 1, c.u + half); ++u)
                depth.at(u, v) = static_cast<float>(rng.uniform(0.2, 20.0));
        if (trial % 3 == 0 && r > 1) depth.at(c.u, c.v) = -5.0f;  // invalid pixel in the mix
        Vec3 got = patch_average_3d(c, depth, intr, r);
        Vec3 want = oracles::ref_patch_average(c, depth, intr, r);
        worst = std::max(worst, norm(got - want));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("patch_average_3d is translation-equivariant in depth-implied points") {
    // Shifting the camera ray scale: constant-depth patches at two depths
    // give results proportional to depth (linearity of back-projection).
    CameraIntrinsics intr = vga();
    DepthMap d1 = constant_depth(intr, 2.0f);
    DepthMap d2 = constant_depth(intr, 4.0f);
    PixelPoint c{123, 321};
    Vec3 a = patch_average_3d(c, d1, intr, 7);
    Vec3 b = patch_average_3d(c, d2, intr, 7);
    CHECK(norm(b - a * 2.0) < 1e-9);
}

TEST_CASE("patch_average_3d error cases") {
    CameraIntrinsics intr = vga();
    DepthMap depth = constant_depth(intr, 0.0f);
    CHECK(throws_code([&] { patch_average_3d({10, 10}, depth, intr, 3); }, Errc::EmptyPatch));
    CHECK(throws_code([&] { patch_average_3d({10, 10}, depth, intr, 2); }, Errc::InvalidArgument));
    CHECK(throws_code([&] { patch_average_3d({-1, 10}, depth, intr, 3); }, Errc::OutOfBounds));
    DepthMap wrong;
    wrong.width = 2;
    wrong.height = 2;
    wrong.values.assign(4, 1.0f);
    CHECK(throws_code([&] { patch_average_3d({0, 0}, wrong, intr, 3); }, Errc::InvalidArgument));
}

TEST_CASE("camera pose center inverts the rigid transform") {
    CameraPose pose;  // identity
    CHECK(pose.center() == Vec3{0.0, 0.0, 0.0});

    pose.translation = {0.0, 0.0, -5.0};
    Vec3 c = pose.center();
    CHECK(c.x == Approx(0.0).margin(1e-12));
    CHECK(c.y == Approx(0.0).margin(1e-12));
    CHECK(c.z == Approx(5.0));
}

TEST_CASE("pose validation rejects non-rotations") {
    CameraPose pose;
    pose.rotation(0, 0) = 2.0;
    CHECK(throws_code([&] { pose.validate(); }, Errc::InvalidRotation));

    CameraPose mirror;  // orthonormal but det -1
    mirror.rotation(0, 0) = -1.0;
    CHECK(throws_code([&] { mirror.validate(); }, Errc::InvalidRotation));
}

TEST_CASE("intrinsics validation enforces the declared invariants") {
    CameraIntrinsics intr = vga();
    CHECK_NOTHROW(intr.validate());
    intr.fx = 0.0;
    CHECK_THROWS_AS(intr.validate(), Error);
    intr = vga();
    intr.cx = 640.0;
    CHECK_THROWS_AS(intr.validate(), Error);
    intr = vga();
    intr.height = 0;
    CHECK_THROWS_AS(intr.validate(), Error);
}

TEST_CASE("matrix helpers behave") {
    Mat3 r;  // identity
    CHECK(det(r) == Approx(1.0));
    CHECK(orthonormality_error(r) == Approx(0.0).margin(1e-15));

    // 90 degree rotation about z
    Mat3 rz;
    rz(0, 0) = 0.0;
    rz(0, 1) = -1.0;
    rz(1, 0) = 1.0;
    rz(1, 1) = 0.0;
    CHECK(det(rz) == Approx(1.0));
    CHECK(orthonormality_error(rz) < 1e-15);
    Vec3 v = rz * Vec3{1.0, 0.0, 0.0};
    CHECK(norm(v - Vec3{0.0, 1.0, 0.0}) < 1e-15);
    CHECK(norm(transpose(rz) * v - Vec3{1.0, 0.0, 0.0}) < 1e-15);
}
