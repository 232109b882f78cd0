#ifndef AURALIZE_TRAJECTORY_HPP
#define AURALIZE_TRAJECTORY_HPP

#include <cmath>
#include <string>
#include <vector>

#include "auralize/error.hpp"
#include "auralize/vec.hpp"

namespace auralize {

// One sample of a piecewise-linear path. `t` is in seconds or frame units;
// the library never mixes the two within one trajectory.
struct TimedPoint {
    double t = 0.0;
    Vec3 p;
};

struct Trajectory {
    std::vector<TimedPoint> points;  // strictly increasing t
    double frame_rate = 0.0;         // Hz; 0 when t is already in seconds

    bool empty() const { return points.empty(); }
    size_t size() const { return points.size(); }

    void validate() const {
        if (points.empty()) raise(Errc::EmptyTrajectory, "trajectory has no points");
        for (size_t i = 0; i < points.size(); ++i) {
            const TimedPoint& tp = points[i];
            if (!std::isfinite(tp.t) || !std::isfinite(tp.p.x) || !std::isfinite(tp.p.y) ||
                !std::isfinite(tp.p.z))
                raise(Errc::InvalidArgument,
                      "non-finite trajectory point at index " + std::to_string(i));
            if (i > 0 && !(tp.t > points[i - 1].t))
                raise(Errc::NonMonotoneTime, "timestamps must be strictly increasing at index " +
                                                 std::to_string(i));
        }
    }
};

// Piecewise-linear evaluation with constant extrapolation outside [t0, tN].
inline Vec3 eval_trajectory(const Trajectory& traj, double t) {
    traj.validate();
    const auto& pts = traj.points;
    if (t <= pts.front().t) return pts.front().p;
    if (t >= pts.back().t) return pts.back().p;
    // Linear scan is fine at the library's scales; segments are consumed in
    // increasing order anyway.
    size_t i = 1;
    while (pts[i].t < t) ++i;
    const TimedPoint& a = pts[i - 1];
    const TimedPoint& b = pts[i];
    double w = (t - a.t) / (b.t - a.t);
    return a.p + (b.p - a.p) * w;
}

// Resample onto n uniformly spaced timestamps over [t_first, t_last].
// Endpoints are preserved exactly; a single-point trajectory is replicated.
inline Trajectory resample_trajectory(const Trajectory& traj, size_t n) {
    traj.validate();
    if (n < 2) raise(Errc::InvalidArgument, "resample size must be at least 2");

    Trajectory out;
    out.frame_rate = traj.frame_rate;
    out.points.reserve(n);

    if (traj.points.size() == 1) {
        // Replicate the single point. Equal timestamps would violate
        // monotonicity, so spread them with unit steps.
        for (size_t i = 0; i < n; ++i)
            out.points.push_back({traj.points.front().t + static_cast<double>(i), traj.points.front().p});
        return out;
    }

    double t0 = traj.points.front().t;
    double t1 = traj.points.back().t;
    for (size_t i = 0; i < n; ++i) {
        double w = static_cast<double>(i) / static_cast<double>(n - 1);
        double t = t0 + w * (t1 - t0);
        Vec3 p;
        if (i == 0)
            p = traj.points.front().p;
        else if (i == n - 1) {
            t = t1;
            p = traj.points.back().p;
        } else
            p = eval_trajectory(traj, t);
        out.points.push_back({t, p});
    }
    return out;
}

}  // namespace auralize

#endif
