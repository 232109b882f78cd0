#ifndef AURALIZE_ACOUSTICS_HPP
#define AURALIZE_ACOUSTICS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "auralize/error.hpp"
#include "auralize/trajectory.hpp"
#include "auralize/vec.hpp"

// Shoebox room acoustics: scene sampling, Sabine absorption, image-source
// enumeration and impulse response synthesis.

namespace auralize {

enum class RoomCategory { Small, Medium, Large, Outdoor, Explicit };

enum class MicPattern { Omni, Cardioid };

// Axis-aligned shoebox [0,lx] x [0,ly] x [0,lz]. Wall reflection
// coefficients are ordered x=0, x=lx, y=0, y=ly, z=0, z=lz.
struct RoomSpec {
    double lx = 0.0, ly = 0.0, lz = 0.0;
    std::array<double, 6> beta{};
    double t60 = 0.0;
    RoomCategory category = RoomCategory::Explicit;

    double volume() const { return lx * ly * lz; }
    double surface() const { return 2.0 * (lx * ly + lx * lz + ly * lz); }
    double dim(int axis) const { return axis == 0 ? lx : (axis == 1 ? ly : lz); }

    bool contains(const Vec3& p) const {
        return p.x > 0.0 && p.x < lx && p.y > 0.0 && p.y < ly && p.z > 0.0 && p.z < lz;
    }

    void validate() const {
        if (!(lx > 0.0 && ly > 0.0 && lz > 0.0))
            raise(Errc::DegenerateRoom, "room dimensions must be positive");
        for (double b : beta)
            if (!(b >= 0.0 && b < 1.0))
                raise(Errc::InvalidArgument, "reflection coefficients must lie in [0,1)");
        if (!(t60 > 0.0)) raise(Errc::InvalidArgument, "t60 must be positive");
    }
};

struct ImpulseResponse {
    std::vector<double> samples;
    int sample_rate = 0;
};

struct ImageSource {
    Vec3 pos;
    double coeff = 1.0;
};

// Uniform scale + translation mapping trajectory coordinates into the room:
// p' = scale * p + offset.
struct SceneFit {
    double scale = 1.0;
    Vec3 offset;

    Vec3 apply(const Vec3& p) const { return p * scale + offset; }

    Trajectory apply(const Trajectory& traj) const {
        Trajectory out = traj;
        for (auto& tp : out.points) tp.p = apply(tp.p);
        return out;
    }
};

// ---------------------------------------------------------------------------
// Seeded randomness. One user seed drives every stochastic choice; fixed
// stream ids keep the draws independent, so adding a consumer never perturbs
// existing ones. Doubles are built from raw engine words instead of
// std::uniform_real_distribution, whose output is implementation-defined.

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

namespace seed_stream {
constexpr uint64_t kRoomDims = 0;
constexpr uint64_t kT60 = 1;
}  // namespace seed_stream

inline uint64_t derive_seed(uint64_t seed, uint64_t stream) {
    return splitmix64(splitmix64(seed) ^ splitmix64(~stream));
}

class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    // Strictly inside (a, b): the mantissa offset keeps 0 and 1 unreachable.
    double uniform(double a, double b) {
        double u = (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
        return a + (b - a) * u;
    }

private:
    std::mt19937_64 eng_;
};

// ---------------------------------------------------------------------------

struct CategoryRanges {
    double lw_min, lw_max;  // length and width share one range
    double h_min, h_max;
};

inline CategoryRanges category_ranges(RoomCategory cat) {
    switch (cat) {
    case RoomCategory::Small: return {3.0, 8.0, 2.5, 4.0};
    case RoomCategory::Medium: return {8.0, 15.0, 3.0, 6.0};
    case RoomCategory::Large: return {15.0, 30.0, 5.0, 10.0};
    case RoomCategory::Outdoor: return {100.0, 200.0, 50.0, 100.0};
    default: raise(Errc::InvalidArgument, "explicit rooms are not sampled");
    }
}

// Uniformly sampled dimensions for the category. Betas and t60 are left for
// the caller (sample_t60 + beta_from_t60).
inline RoomSpec sample_room(RoomCategory cat, uint64_t seed) {
    CategoryRanges r = category_ranges(cat);
    Rng rng(derive_seed(seed, seed_stream::kRoomDims));
    RoomSpec room;
    room.lx = rng.uniform(r.lw_min, r.lw_max);
    room.ly = rng.uniform(r.lw_min, r.lw_max);
    room.lz = rng.uniform(r.h_min, r.h_max);
    room.category = cat;
    return room;
}

inline double sample_t60(uint64_t seed) {
    Rng rng(derive_seed(seed, seed_stream::kT60));
    return rng.uniform(0.3, 0.6);
}

// Sabine's relation inverted for a uniform absorption coefficient:
// alpha = 0.161 V / (S * T60), beta = sqrt(1 - alpha) on all six walls.
// The clamp keeps tiny rooms with long T60 usable; strict mode rejects them.
inline std::array<double, 6> beta_from_t60(const RoomSpec& room, bool strict = false) {
    if (!(room.t60 > 0.0)) raise(Errc::InvalidArgument, "t60 must be positive");
    if (!(room.lx > 0.0 && room.ly > 0.0 && room.lz > 0.0))
        raise(Errc::DegenerateRoom, "room dimensions must be positive");
    double alpha = 0.161 * room.volume() / (room.surface() * room.t60);
    if (alpha > 1.0 && strict)
        raise(Errc::UnreachableT60, "Sabine absorption " + std::to_string(alpha) +
                                        " > 1; room cannot decay that fast");
    alpha = std::min(alpha, 0.9999);
    double beta = std::sqrt(1.0 - alpha);
    return {beta, beta, beta, beta, beta, beta};
}

inline double ipow(double base, int exp) {
    double r = 1.0;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

namespace detail {

// One axis of the signed-index mirror expansion. Index i maps to coordinate
// i*L + s for even i and i*L + (L - s) for odd i; the wall hit counts follow
// the Allen–Berkley parity bookkeeping.
struct AxisImage {
    double pos;
    int hits_lo;  // reflections off the wall at 0
    int hits_hi;  // reflections off the wall at L
};

inline AxisImage axis_image(int i, double s, double L) {
    AxisImage a;
    if (i % 2 == 0) {
        a.pos = i * L + s;
        a.hits_lo = std::abs(i) / 2;
        a.hits_hi = std::abs(i) / 2;
    } else {
        a.pos = i * L + (L - s);
        a.hits_lo = std::abs(i - 1) / 2;
        a.hits_hi = std::abs(i + 1) / 2;
    }
    return a;
}

}  // namespace detail

// All (2*max_order+1)^3 mirror images of the source with their accumulated
// wall attenuation, enumerated in fixed (ix, iy, iz) order.
inline std::vector<ImageSource> image_sources(const Vec3& src, const RoomSpec& room, int max_order) {
    if (max_order < 0) raise(Errc::InvalidArgument, "max_order must be non-negative");
    if (!room.contains(src)) raise(Errc::SourceOutsideRoom, "source must be strictly inside the room");

    std::vector<ImageSource> out;
    size_t per_axis = 2 * static_cast<size_t>(max_order) + 1;
    out.reserve(per_axis * per_axis * per_axis);

    for (int ix = -max_order; ix <= max_order; ++ix) {
        detail::AxisImage ax = detail::axis_image(ix, src.x, room.lx);
        double cx = ipow(room.beta[0], ax.hits_lo) * ipow(room.beta[1], ax.hits_hi);
        for (int iy = -max_order; iy <= max_order; ++iy) {
            detail::AxisImage ay = detail::axis_image(iy, src.y, room.ly);
            double cy = ipow(room.beta[2], ay.hits_lo) * ipow(room.beta[3], ay.hits_hi);
            for (int iz = -max_order; iz <= max_order; ++iz) {
                detail::AxisImage az = detail::axis_image(iz, src.z, room.lz);
                double cz = ipow(room.beta[4], az.hits_lo) * ipow(room.beta[5], az.hits_hi);
                out.push_back({{ax.pos, ay.pos, az.pos}, cx * cy * cz});
            }
        }
    }
    return out;
}

inline double polar_gain(MicPattern pattern, const Vec3& facing, const Vec3& direction_to_image) {
    if (pattern == MicPattern::Omni) return 1.0;
    if (std::abs(norm(facing) - 1.0) > 1e-6 || std::abs(norm(direction_to_image) - 1.0) > 1e-6)
        raise(Errc::InvalidArgument, "polar_gain expects unit vectors");
    return (1.0 + dot(facing, direction_to_image)) / 2.0;
}

namespace detail {

// 16-tap Hann-windowed sinc deposit of amplitude a at fractional sample p.
inline void deposit_fractional(std::vector<double>& h, double p, double a) {
    constexpr int kTaps = 16;
    constexpr double kHalf = kTaps / 2.0;  // window half-width in samples
    int start = static_cast<int>(std::floor(p)) - kTaps / 2 + 1;
    for (int k = 0; k < kTaps; ++k) {
        int j = start + k;
        if (j < 0 || j >= static_cast<int>(h.size())) continue;
        double t = static_cast<double>(j) - p;  // in (-8, 8]
        constexpr double pi = std::numbers::pi;
        double window = 0.5 * (1.0 + std::cos(pi * t / kHalf));
        double sinc = t == 0.0 ? 1.0 : std::sin(pi * t) / (pi * t);
        h[static_cast<size_t>(j)] += a * window * sinc;
    }
}

}  // namespace detail

// Allen-Berkley reflection order: mirrored room *pairs* per axis needed for
// the image horizon to cover c*t60 of travel. One pair spans 2*L of image
// coordinate while the signed image index advances only L per step, so the
// enumeration below walks indices out to twice this order; stopping at the
// order itself would cut the image set at half the horizon and make the
// synthesized tail decay almost twice as fast as the target T60.
inline int reflection_order(double L, double t60, double c) {
    return static_cast<int>(std::ceil(c * t60 / (2.0 * L)));
}

// Image Source Method RIR. Each image contributes coeff * polar_gain / d at
// arrival d/c through the fractional-delay kernel; gain is unity at 1 m.
// `max_order_cap` > 0 limits the per-axis order (useful for quick previews).
inline ImpulseResponse compute_rir(const Vec3& src, const Vec3& mic, const Vec3& facing,
                                   MicPattern pattern, const RoomSpec& room, int fs, double c,
                                   int max_order_cap = 0) {
    room.validate();
    if (fs <= 0) raise(Errc::InvalidArgument, "sample rate must be positive");
    if (!(c > 0.0)) raise(Errc::InvalidArgument, "speed of sound must be positive");
    if (!room.contains(src)) raise(Errc::SourceOutsideRoom, "source must be strictly inside the room");
    if (!room.contains(mic)) raise(Errc::MicOutsideRoom, "microphone must be strictly inside the room");
    if (norm(src - mic) < 1e-6) raise(Errc::SourceAtMic, "source and microphone coincide");

    const size_t n_samples = static_cast<size_t>(std::ceil(room.t60 * fs));
    ImpulseResponse rir;
    rir.sample_rate = fs;
    rir.samples.assign(n_samples, 0.0);

    int nx = 2 * reflection_order(room.lx, room.t60, c);
    int ny = 2 * reflection_order(room.ly, room.t60, c);
    int nz = 2 * reflection_order(room.lz, room.t60, c);
    if (max_order_cap > 0) {
        nx = std::min(nx, max_order_cap);
        ny = std::min(ny, max_order_cap);
        nz = std::min(nz, max_order_cap);
    }

    for (int ix = -nx; ix <= nx; ++ix) {
        detail::AxisImage ax = detail::axis_image(ix, src.x, room.lx);
        double cx = ipow(room.beta[0], ax.hits_lo) * ipow(room.beta[1], ax.hits_hi);
        for (int iy = -ny; iy <= ny; ++iy) {
            detail::AxisImage ay = detail::axis_image(iy, src.y, room.ly);
            double cy = cx * ipow(room.beta[2], ay.hits_lo) * ipow(room.beta[3], ay.hits_hi);
            if (cy == 0.0) continue;
            for (int iz = -nz; iz <= nz; ++iz) {
                detail::AxisImage az = detail::axis_image(iz, src.z, room.lz);
                double coeff = cy * ipow(room.beta[4], az.hits_lo) * ipow(room.beta[5], az.hits_hi);
                bool direct = ix == 0 && iy == 0 && iz == 0;
                if (coeff == 0.0 && !direct) continue;
                Vec3 img{ax.pos, ay.pos, az.pos};
                double d = norm(img - mic);
                double p = d / c * fs;
                if (p >= static_cast<double>(n_samples)) continue;
                double gain = polar_gain(pattern, facing, (img - mic) / d);
                detail::deposit_fractional(rir.samples, p, coeff * gain / d);
            }
        }
    }
    return rir;
}

// Fit the union bounding cuboid of both trajectories into the room: center
// it, then scale uniformly about the cuboid center if any extent exceeds
// room_dim - 2*margin. The returned transform is p' = scale*p + offset.
inline SceneFit fit_scene(const Trajectory& traj_src, const Trajectory& traj_rsv,
                          const RoomSpec& room, double margin) {
    traj_src.validate();
    traj_rsv.validate();
    if (!(room.lx > 0.0 && room.ly > 0.0 && room.lz > 0.0))
        raise(Errc::DegenerateRoom, "room dimensions must be positive");
    if (margin < 0.0) raise(Errc::InvalidArgument, "margin must be non-negative");
    double min_dim = std::min({room.lx, room.ly, room.lz});
    if (!(2.0 * margin < min_dim))
        raise(Errc::DegenerateRoom, "margin " + std::to_string(margin) +
                                        " leaves no interior in a room with min dimension " +
                                        std::to_string(min_dim));

    Vec3 lo = traj_src.points.front().p;
    Vec3 hi = lo;
    auto extend = [&](const Trajectory& t) {
        for (const auto& tp : t.points)
            for (int k = 0; k < 3; ++k) {
                lo[k] = std::min(lo[k], tp.p[k]);
                hi[k] = std::max(hi[k], tp.p[k]);
            }
    };
    extend(traj_src);
    extend(traj_rsv);

    Vec3 center = (lo + hi) * 0.5;
    Vec3 room_center{room.lx / 2.0, room.ly / 2.0, room.lz / 2.0};

    double scale = 1.0;
    for (int k = 0; k < 3; ++k) {
        double extent = hi[k] - lo[k];
        double avail = room.dim(k) - 2.0 * margin;
        if (extent > avail) scale = std::min(scale, avail / extent);
    }

    // Guard against the scaled extremes landing an ulp outside the closed
    // margin interval.
    for (int attempt = 0; attempt < 64; ++attempt) {
        SceneFit fit{scale, room_center - center * scale};
        bool ok = true;
        auto check = [&](const Trajectory& t) {
            for (const auto& tp : t.points) {
                Vec3 p = fit.apply(tp.p);
                for (int k = 0; k < 3; ++k)
                    if (p[k] < margin || p[k] > room.dim(k) - margin) return false;
            }
            return true;
        };
        ok = check(traj_src) && check(traj_rsv);
        if (ok) return fit;
        scale *= 1.0 - 1e-12;
    }
    raise(Errc::DegenerateRoom, "could not fit trajectories inside the margins");
}

}  // namespace auralize

#endif
