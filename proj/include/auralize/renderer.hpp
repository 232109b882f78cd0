#ifndef AURALIZE_RENDERER_HPP
#define AURALIZE_RENDERER_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "auralize/acoustics.hpp"
#include "auralize/error.hpp"
#include "auralize/fft.hpp"
#include "auralize/geometry.hpp"
#include "auralize/localization.hpp"
#include "auralize/trajectory.hpp"

// Moving-source binaural rendering: segment the audio, hold source/receiver
// stationary per segment, convolve each block with its RIR pair and
// overlap-add the tails.

namespace auralize {

struct AudioBuffer {
    int sample_rate = 0;
    std::vector<std::vector<double>> channels;

    size_t frames() const { return channels.empty() ? 0 : channels[0].size(); }

    void validate() const {
        if (sample_rate <= 0) raise(Errc::InvalidArgument, "sample rate must be positive");
        if (channels.empty() || channels.size() > 2)
            raise(Errc::ChannelMismatch, "expected 1 or 2 channels, got " +
                                             std::to_string(channels.size()));
        for (const auto& ch : channels) {
            if (ch.size() != channels[0].size())
                raise(Errc::ChannelMismatch, "channel lengths differ");
            for (double s : ch)
                if (!std::isfinite(s)) raise(Errc::InvalidArgument, "non-finite sample");
        }
    }
};

struct SegmentPlan {
    std::vector<size_t> boundaries;  // 0 = n_0 < n_1 < ... < n_M = N

    size_t segments() const { return boundaries.size() - 1; }
    size_t total() const { return boundaries.back(); }
};

struct RenderConfig {
    int fs = 44100;
    double c = 343.0;
    double ear_offset = 0.0875;
    MicPattern pattern = MicPattern::Omni;
    int segment_len = 0;      // samples; 0 selects one segment per video frame
    double frame_rate = 30.0;  // used only in per-frame mode
    double margin = 0.5;
    uint64_t seed = 0;
    bool normalize = true;
    bool crossfade = false;
    int threads = 0;           // 0 = AURALIZE_THREADS env var, then hardware
    int max_order_cap = 0;     // 0 = derive from t60 and room size
    size_t traj_upsample = 0;  // 0 = evaluate trajectories directly

    void validate() const {
        if (fs != 16000 && fs != 44100 && fs != 48000)
            raise(Errc::RangeViolation, "fs must be one of 16000, 44100, 48000");
        if (segment_len != 0 && segment_len < 64)
            raise(Errc::RangeViolation, "segment_len must be 0 (per-frame) or >= 64");
        if (segment_len == 0 && !(frame_rate > 0.0))
            raise(Errc::RangeViolation, "frame_rate must be positive in per-frame mode");
        if (!(ear_offset > 0.0)) raise(Errc::RangeViolation, "ear_offset must be positive");
        if (!(c > 0.0)) raise(Errc::RangeViolation, "speed of sound must be positive");
        if (margin < 0.0) raise(Errc::RangeViolation, "margin must be non-negative");
        if (traj_upsample == 1) raise(Errc::RangeViolation, "traj_upsample must be 0 or >= 2");
    }
};

inline SegmentPlan plan_segments(size_t total_samples, size_t segment_len) {
    if (total_samples < 1) raise(Errc::EmptyAudio, "cannot segment empty audio");
    if (segment_len < 1) raise(Errc::InvalidArgument, "segment length must be positive");
    SegmentPlan plan;
    for (size_t n = 0; n < total_samples; n += segment_len) plan.boundaries.push_back(n);
    plan.boundaries.push_back(total_samples);
    return plan;
}

// Trajectory position for each segment, evaluated at the segment's midpoint
// sample mapped proportionally onto the trajectory's time span.
inline std::vector<Vec3> segment_positions(const Trajectory& traj, const SegmentPlan& plan) {
    traj.validate();
    double t0 = traj.points.front().t;
    double t1 = traj.points.back().t;
    double total = static_cast<double>(plan.total());
    std::vector<Vec3> out;
    out.reserve(plan.segments());
    for (size_t i = 0; i < plan.segments(); ++i) {
        double mid = (static_cast<double>(plan.boundaries[i]) +
                      static_cast<double>(plan.boundaries[i + 1])) /
                     2.0;
        double t = t0 + mid / total * (t1 - t0);
        out.push_back(eval_trajectory(traj, t));
    }
    return out;
}

namespace detail {

constexpr size_t kDirectConvThreshold = 1 << 14;  // block*rir products

inline std::vector<double> direct_convolve(const std::vector<double>& a,
                                           const std::vector<double>& b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (size_t i = 0; i < a.size(); ++i) {
        double ai = a[i];
        if (ai == 0.0) continue;
        for (size_t j = 0; j < b.size(); ++j) out[i + j] += ai * b[j];
    }
    return out;
}

// Size-based dispatch keeps results deterministic for fixed inputs.
inline std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) return {};
    if (a.size() * b.size() <= kDirectConvThreshold) return direct_convolve(a, b);
    return fft_convolve(a, b);
}

}  // namespace detail

// accumulator[offset + n] += (block * rir)[n]. The FFT path is used for
// large products; it matches direct convolution to better than 1e-9 relative.
inline void block_convolve_add(const std::vector<double>& block, const ImpulseResponse& rir,
                               size_t offset, std::vector<double>& accumulator) {
    if (block.empty() || rir.samples.empty()) return;
    size_t needed = offset + block.size() + rir.samples.size() - 1;
    if (accumulator.size() < needed)
        raise(Errc::AccumulatorTooShort, "need " + std::to_string(needed) + " samples, have " +
                                             std::to_string(accumulator.size()));
    std::vector<double> conv = detail::convolve(block, rir.samples);
    for (size_t n = 0; n < conv.size(); ++n) accumulator[offset + n] += conv[n];
}

// Divide every channel by the joint peak magnitude; silence passes through.
inline AudioBuffer normalize(const AudioBuffer& audio) {
    audio.validate();
    double peak = 0.0;
    for (const auto& ch : audio.channels)
        for (double s : ch) peak = std::max(peak, std::abs(s));
    if (peak == 0.0) return audio;
    AudioBuffer out = audio;
    for (auto& ch : out.channels)
        for (double& s : ch) s /= peak;
    return out;
}

namespace detail {

inline int resolve_threads(int configured) {
    if (configured > 0) return configured;
    if (const char* env = std::getenv("AURALIZE_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(std::min(hw, 16u));
}

// Camera right axis (first rotation row, world-to-camera) interpolated at a
// fractional frame position, renormalized.
inline Vec3 right_axis_at(const std::vector<CameraPose>& poses, double frac) {
    if (poses.size() == 1) {
        Vec3 axis = poses[0].rotation.row(0);
        double n = norm(axis);
        if (n < 1e-9) raise(Errc::DegenerateRotation, "camera right axis has near-zero norm");
        return axis / n;
    }
    double q = frac * static_cast<double>(poses.size() - 1);
    q = std::clamp(q, 0.0, static_cast<double>(poses.size() - 1));
    size_t i0 = std::min(static_cast<size_t>(q), poses.size() - 2);
    double w = q - static_cast<double>(i0);
    Vec3 axis = poses[i0].rotation.row(0) * (1.0 - w) + poses[i0 + 1].rotation.row(0) * w;
    double n = norm(axis);
    if (n < 1e-9)
        raise(Errc::DegenerateRotation, "interpolated camera right axis has near-zero norm");
    return axis / n;
}

struct SegmentBlock {
    size_t offset = 0;
    std::vector<double> samples;
};

// Cut the mono signal for one segment. With crossfading enabled the block
// extends `fade` samples past its end with a fade-out ramp, and opens with
// the complementary fade-in; the ramps of adjacent segments sum to one.
inline SegmentBlock cut_block(const std::vector<double>& mono, const SegmentPlan& plan, size_t i,
                              size_t fade) {
    size_t n0 = plan.boundaries[i];
    size_t n1 = plan.boundaries[i + 1];
    SegmentBlock block;
    block.offset = n0;
    if (fade == 0) {
        block.samples.assign(mono.begin() + static_cast<long>(n0),
                             mono.begin() + static_cast<long>(n1));
        return block;
    }
    size_t end = std::min(n1 + fade, mono.size());
    block.samples.assign(mono.begin() + static_cast<long>(n0),
                         mono.begin() + static_cast<long>(end));
    double denom = static_cast<double>(fade);
    if (i > 0)
        for (size_t k = 0; k < fade && k < block.samples.size(); ++k)
            block.samples[k] *= (static_cast<double>(k) + 0.5) / denom;
    for (size_t j = n1; j < end; ++j)
        block.samples[j - n0] *= 1.0 - (static_cast<double>(j - n1) + 0.5) / denom;
    return block;
}

}  // namespace detail

// Physically simulated two-channel rendering (the whole point of the
// library). Both trajectories must already sit inside the room; apply
// fit_scene first. Poses supply mic orientation only.
inline AudioBuffer render_binaural(const AudioBuffer& mono, const Trajectory& traj_src,
                                   const Trajectory& traj_rsv,
                                   const std::vector<CameraPose>& poses, const RoomSpec& room,
                                   const RenderConfig& cfg) {
    cfg.validate();
    mono.validate();
    room.validate();
    if (mono.channels.size() != 1) raise(Errc::ChannelMismatch, "mono required");
    if (mono.sample_rate != cfg.fs)
        raise(Errc::SampleRateMismatch, "audio is " + std::to_string(mono.sample_rate) +
                                            " Hz, config expects " + std::to_string(cfg.fs));
    if (mono.frames() == 0) raise(Errc::EmptyAudio, "input audio has no samples");
    if (poses.empty()) raise(Errc::InvalidArgument, "at least one pose required");
    for (const auto& p : poses) p.validate();

    Trajectory src = traj_src;
    Trajectory rsv = traj_rsv;
    if (cfg.traj_upsample >= 2) {
        src = resample_trajectory(src, cfg.traj_upsample);
        rsv = resample_trajectory(rsv, cfg.traj_upsample);
    }

    const size_t n_total = mono.frames();
    size_t seg_len = cfg.segment_len > 0
                         ? static_cast<size_t>(cfg.segment_len)
                         : std::max<size_t>(1, static_cast<size_t>(std::llround(
                                                   static_cast<double>(cfg.fs) / cfg.frame_rate)));
    SegmentPlan plan = plan_segments(n_total, seg_len);
    const size_t n_segments = plan.segments();

    std::vector<Vec3> src_pos = segment_positions(src, plan);
    std::vector<Vec3> rsv_pos = segment_positions(rsv, plan);

    size_t fade = 0;
    if (cfg.crossfade && n_segments > 1) {
        size_t min_seg = n_total;
        for (size_t i = 0; i < n_segments; ++i)
            min_seg = std::min(min_seg, plan.boundaries[i + 1] - plan.boundaries[i]);
        fade = std::min<size_t>(256, min_seg);
    }

    struct SegmentResult {
        size_t offset = 0;
        std::vector<double> left, right;
    };
    std::vector<SegmentResult> results(n_segments);

    auto render_segment = [&](size_t i) {
        double mid = (static_cast<double>(plan.boundaries[i]) +
                      static_cast<double>(plan.boundaries[i + 1])) /
                     2.0;
        double frac = mid / static_cast<double>(n_total);
        Vec3 axis = detail::right_axis_at(poses, frac);
        MicPair mics = binaural_mics_along(axis, rsv_pos[i], cfg.ear_offset);

        ImpulseResponse rir_l = compute_rir(src_pos[i], mics.left, mics.left_facing, cfg.pattern,
                                            room, cfg.fs, cfg.c, cfg.max_order_cap);
        ImpulseResponse rir_r = compute_rir(src_pos[i], mics.right, mics.right_facing, cfg.pattern,
                                            room, cfg.fs, cfg.c, cfg.max_order_cap);

        detail::SegmentBlock block = detail::cut_block(mono.channels[0], plan, i, fade);
        results[i].offset = block.offset;
        results[i].left = detail::convolve(block.samples, rir_l.samples);
        results[i].right = detail::convolve(block.samples, rir_r.samples);
    };

    int n_threads = std::min<int>(detail::resolve_threads(cfg.threads),
                                  static_cast<int>(n_segments));
    if (n_threads <= 1) {
        for (size_t i = 0; i < n_segments; ++i) render_segment(i);
    } else {
        // Segments are claimed by atomic counter; results land in per-segment
        // slots, so the merge below is identical for any thread count.
        std::atomic<size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto worker = [&] {
            for (;;) {
                size_t i = next.fetch_add(1);
                if (i >= n_segments) return;
                try {
                    render_segment(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    return;
                }
            }
        };
        std::vector<std::thread> threads;
        threads.reserve(static_cast<size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
        if (failure) std::rethrow_exception(failure);
    }

    // Deterministic merge in segment order, then truncate the tail.
    size_t rir_len = results.empty() ? 0 : results[0].left.size();
    for (const auto& r : results) rir_len = std::max(rir_len, r.left.size());
    AudioBuffer out;
    out.sample_rate = cfg.fs;
    out.channels.assign(2, std::vector<double>(n_total + rir_len, 0.0));
    for (const auto& r : results) {
        for (size_t n = 0; n < r.left.size(); ++n) out.channels[0][r.offset + n] += r.left[n];
        for (size_t n = 0; n < r.right.size(); ++n) out.channels[1][r.offset + n] += r.right[n];
    }
    out.channels[0].resize(n_total);
    out.channels[1].resize(n_total);

    return cfg.normalize ? normalize(out) : out;
}

}  // namespace auralize

#endif
