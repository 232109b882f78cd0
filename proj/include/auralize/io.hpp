#ifndef AURALIZE_IO_HPP
#define AURALIZE_IO_HPP

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "auralize/error.hpp"
#include "auralize/geometry.hpp"
#include "auralize/localization.hpp"
#include "auralize/renderer.hpp"
#include "auralize/trajectory.hpp"

// File formats. Binary payloads are little-endian regardless of host; text
// numbers are printed with 17 significant digits so doubles roundtrip
// exactly. Parsers reject malformed input instead of repairing it.

namespace auralize {

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(Errc::FileError, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (!in.good() && !in.eof()) raise(Errc::FileError, "failed reading " + path);
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) raise(Errc::FileError, "cannot open " + path + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out.good()) raise(Errc::FileError, "failed writing " + path);
}

inline uint16_t rd_u16le(const unsigned char* p) {
    return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

inline uint32_t rd_u32le(const unsigned char* p) {
    return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
           (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

inline float rd_f32le(const unsigned char* p) { return std::bit_cast<float>(rd_u32le(p)); }

inline void wr_u16le(std::string& out, uint16_t v) {
    out.push_back(static_cast<char>(v & 0xFF));
    out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

inline void wr_u32le(std::string& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

inline void wr_f32le(std::string& out, float v) { wr_u32le(out, std::bit_cast<uint32_t>(v)); }

inline std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline double parse_double(std::string_view s, int line_no) {
    // from_chars is locale-independent and roundtrips %.17g output exactly.
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    while (first < last && (*first == ' ' || *first == '\t')) ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    while (ptr < last && (*ptr == ' ' || *ptr == '\t')) ++ptr;
    if (ec != std::errc{} || ptr != last)
        raise(Errc::MalformedLine, "bad number '" + std::string(s) + "' on line " +
                                       std::to_string(line_no));
    return v;
}

inline long parse_long(std::string_view s, int line_no) {
    long v = 0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    while (first < last && (*first == ' ' || *first == '\t')) ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    while (ptr < last && (*ptr == ' ' || *ptr == '\t')) ++ptr;
    if (ec != std::errc{} || ptr != last)
        raise(Errc::MalformedLine, "bad integer '" + std::string(s) + "' on line " +
                                       std::to_string(line_no));
    return v;
}

inline std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    size_t start = 0;
    while (start <= text.size()) {
        size_t end = text.find('\n', start);
        if (end == std::string::npos) {
            if (start < text.size()) lines.push_back(text.substr(start));
            break;
        }
        std::string line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
        start = end + 1;
    }
    return lines;
}

inline std::vector<std::string_view> split_fields(const std::string& line, char sep) {
    std::vector<std::string_view> fields;
    size_t start = 0;
    for (;;) {
        size_t end = line.find(sep, start);
        if (end == std::string::npos) {
            fields.emplace_back(line.data() + start, line.size() - start);
            return fields;
        }
        fields.emplace_back(line.data() + start, end - start);
        start = end + 1;
    }
}

inline bool blank(const std::string& line) {
    return line.find_first_not_of(" \t") == std::string::npos;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// WAV: RIFF container, PCM 16-bit or IEEE float 32-bit, 1 or 2 channels.

enum class WavEncoding { Float32, Pcm16 };

inline AudioBuffer read_wav(const std::string& path) {
    std::string bytes = detail::read_file(path);
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    if (bytes.size() < 12 || std::memcmp(p, "RIFF", 4) != 0 || std::memcmp(p + 8, "WAVE", 4) != 0)
        raise(Errc::CorruptHeader, path + " is not a RIFF/WAVE file");

    bool have_fmt = false;
    uint16_t format = 0, channels = 0, bits = 0;
    uint32_t fs = 0;
    size_t data_off = 0, data_len = 0;

    size_t off = 12;
    while (off + 8 <= bytes.size()) {
        uint32_t chunk_len = detail::rd_u32le(p + off + 4);
        if (off + 8 + chunk_len > bytes.size())
            raise(Errc::TruncatedPayload, "chunk at byte " + std::to_string(off) + " of " + path +
                                              " exceeds the file size");
        if (std::memcmp(p + off, "fmt ", 4) == 0) {
            if (chunk_len < 16) raise(Errc::CorruptHeader, "fmt chunk too short in " + path);
            format = detail::rd_u16le(p + off + 8);
            channels = detail::rd_u16le(p + off + 10);
            fs = detail::rd_u32le(p + off + 12);
            bits = detail::rd_u16le(p + off + 22);
            have_fmt = true;
        } else if (std::memcmp(p + off, "data", 4) == 0) {
            data_off = off + 8;
            data_len = chunk_len;
        }
        off += 8 + chunk_len + (chunk_len % 2);  // chunks are word-aligned
    }
    if (!have_fmt || data_off == 0) raise(Errc::CorruptHeader, path + " lacks fmt or data chunk");
    if (channels != 1 && channels != 2)
        raise(Errc::UnsupportedEncoding, path + " has " + std::to_string(channels) +
                                             " channels; only 1 or 2 supported");
    if (fs != 16000 && fs != 44100 && fs != 48000)
        raise(Errc::UnsupportedEncoding, path + " sample rate " + std::to_string(fs) +
                                             " not in {16000, 44100, 48000}");

    size_t bytes_per_sample;
    if (format == 1 && bits == 16)
        bytes_per_sample = 2;
    else if (format == 3 && bits == 32)
        bytes_per_sample = 4;
    else
        raise(Errc::UnsupportedEncoding, path + " encoding (format " + std::to_string(format) +
                                             ", " + std::to_string(bits) +
                                             " bits) is not PCM16 or float32");

    size_t frame_bytes = bytes_per_sample * channels;
    if (data_len % frame_bytes != 0)
        raise(Errc::TruncatedPayload, "data chunk of " + path + " is not a whole frame count");
    size_t n_frames = data_len / frame_bytes;

    AudioBuffer audio;
    audio.sample_rate = static_cast<int>(fs);
    audio.channels.assign(channels, std::vector<double>(n_frames));
    const unsigned char* d = p + data_off;
    for (size_t i = 0; i < n_frames; ++i) {
        for (uint16_t ch = 0; ch < channels; ++ch) {
            const unsigned char* s = d + (i * channels + ch) * bytes_per_sample;
            if (bytes_per_sample == 2) {
                auto v = static_cast<int16_t>(detail::rd_u16le(s));
                audio.channels[ch][i] = static_cast<double>(v) / 32768.0;
            } else {
                audio.channels[ch][i] = static_cast<double>(detail::rd_f32le(s));
            }
        }
    }
    return audio;
}

inline void write_wav(const std::string& path, const AudioBuffer& audio,
                      WavEncoding encoding = WavEncoding::Float32) {
    audio.validate();
    auto channels = static_cast<uint16_t>(audio.channels.size());
    auto n_frames = static_cast<uint32_t>(audio.frames());
    bool pcm = encoding == WavEncoding::Pcm16;
    uint16_t bytes_per_sample = pcm ? 2 : 4;
    uint32_t data_len = n_frames * channels * bytes_per_sample;

    std::string out;
    out.reserve(64 + data_len);
    out += "RIFF";
    detail::wr_u32le(out, 0);  // patched below
    out += "WAVE";
    out += "fmt ";
    detail::wr_u32le(out, pcm ? 16 : 18);
    detail::wr_u16le(out, pcm ? 1 : 3);
    detail::wr_u16le(out, channels);
    detail::wr_u32le(out, static_cast<uint32_t>(audio.sample_rate));
    detail::wr_u32le(out, static_cast<uint32_t>(audio.sample_rate) * channels * bytes_per_sample);
    detail::wr_u16le(out, static_cast<uint16_t>(channels * bytes_per_sample));
    detail::wr_u16le(out, pcm ? 16 : 32);
    if (!pcm) {
        detail::wr_u16le(out, 0);  // cbSize
        out += "fact";
        detail::wr_u32le(out, 4);
        detail::wr_u32le(out, n_frames);
    }
    out += "data";
    detail::wr_u32le(out, data_len);
    for (uint32_t i = 0; i < n_frames; ++i) {
        for (uint16_t ch = 0; ch < channels; ++ch) {
            double s = audio.channels[ch][i];
            if (pcm) {
                double clamped = std::clamp(s, -1.0, 1.0);
                auto v = static_cast<int>(std::lround(clamped * 32767.0));
                detail::wr_u16le(out, static_cast<uint16_t>(static_cast<int16_t>(v)));
            } else {
                detail::wr_f32le(out, static_cast<float>(s));
            }
        }
    }
    uint32_t riff_len = static_cast<uint32_t>(out.size()) - 8;
    for (int i = 0; i < 4; ++i) out[4 + i] = static_cast<char>((riff_len >> (8 * i)) & 0xFF);
    detail::write_file(path, out);
}

// ---------------------------------------------------------------------------
// Depth raster: "DEPTH <width> <height>\n" + width*height little-endian
// float32, row-major, top-left origin.

inline DepthMap read_depth(const std::string& path) {
    std::string bytes = detail::read_file(path);
    size_t nl = bytes.find('\n');
    if (nl == std::string::npos) raise(Errc::HeaderMismatch, path + " has no header line");
    std::string header = bytes.substr(0, nl);
    int w = 0, h = 0;
    if (std::sscanf(header.c_str(), "DEPTH %d %d", &w, &h) != 2 || w < 1 || h < 1)
        raise(Errc::HeaderMismatch, path + " header '" + header + "' is not 'DEPTH <w> <h>'");

    size_t payload = bytes.size() - nl - 1;
    size_t expected = static_cast<size_t>(w) * static_cast<size_t>(h) * 4;
    if (payload < expected)
        raise(Errc::TruncatedPayload, path + " payload has " + std::to_string(payload) +
                                          " bytes, expected " + std::to_string(expected));
    if (payload > expected)
        raise(Errc::HeaderMismatch, path + " has trailing bytes after the raster");

    DepthMap map;
    map.width = w;
    map.height = h;
    map.values.resize(static_cast<size_t>(w) * h);
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data()) + nl + 1;
    for (size_t i = 0; i < map.values.size(); ++i) map.values[i] = detail::rd_f32le(p + 4 * i);
    return map;
}

inline void write_depth(const std::string& path, const DepthMap& map) {
    if (map.width < 1 || map.height < 1 ||
        map.values.size() != static_cast<size_t>(map.width) * map.height)
        raise(Errc::InvalidArgument, "depth raster dimensions do not match value count");
    std::string out = "DEPTH " + std::to_string(map.width) + " " + std::to_string(map.height) + "\n";
    out.reserve(out.size() + map.values.size() * 4);
    for (float v : map.values) detail::wr_f32le(out, v);
    detail::write_file(path, out);
}

// ---------------------------------------------------------------------------
// Grounding boxes: one line per frame, `frame_index,x0,y0,x1,y1` with
// normalized coordinates; a blank line marks a frame without a box.

inline std::vector<std::optional<GroundingBox>> read_boxes(const std::string& path) {
    std::vector<std::string> lines = detail::split_lines(detail::read_file(path));
    std::vector<std::optional<GroundingBox>> out;
    out.reserve(lines.size());
    for (size_t i = 0; i < lines.size(); ++i) {
        int line_no = static_cast<int>(i) + 1;
        if (detail::blank(lines[i])) {
            out.emplace_back(std::nullopt);
            continue;
        }
        auto fields = detail::split_fields(lines[i], ',');
        if (fields.size() != 5)
            raise(Errc::MalformedLine,
                  "expected 'frame,x0,y0,x1,y1' on line " + std::to_string(line_no));
        GroundingBox box;
        box.frame_index = static_cast<int>(detail::parse_long(fields[0], line_no));
        box.x0 = detail::parse_double(fields[1], line_no);
        box.y0 = detail::parse_double(fields[2], line_no);
        box.x1 = detail::parse_double(fields[3], line_no);
        box.y1 = detail::parse_double(fields[4], line_no);
        if (box.frame_index != static_cast<int>(i))
            raise(Errc::MalformedLine, "frame index " + std::to_string(box.frame_index) +
                                           " does not match position on line " +
                                           std::to_string(line_no));
        try {
            box.validate();
        } catch (const Error& e) {
            raise(Errc::MalformedLine, std::string(e.what()) + " on line " + std::to_string(line_no));
        }
        out.emplace_back(box);
    }
    return out;
}

inline void write_boxes(const std::string& path,
                        const std::vector<std::optional<GroundingBox>>& boxes) {
    std::string out;
    for (size_t i = 0; i < boxes.size(); ++i) {
        if (boxes[i]) {
            out += std::to_string(i) + "," + detail::fmt_g17(boxes[i]->x0) + "," +
                   detail::fmt_g17(boxes[i]->y0) + "," + detail::fmt_g17(boxes[i]->x1) + "," +
                   detail::fmt_g17(boxes[i]->y1);
        }
        out += "\n";
    }
    detail::write_file(path, out);
}

// ---------------------------------------------------------------------------
// Poses: optional convention header line (`world_to_camera` or
// `camera_to_world`), then one row-major 4x4 homogeneous matrix per line.

struct PoseFile {
    PoseConvention convention = PoseConvention::WorldToCamera;
    std::vector<CameraPose> poses;

    // Poses normalized to the library's world-to-camera convention.
    std::vector<CameraPose> world_to_camera() const {
        if (convention == PoseConvention::WorldToCamera) return poses;
        std::vector<CameraPose> out;
        out.reserve(poses.size());
        for (const auto& p : poses) {
            Mat3 rt = transpose(p.rotation);
            out.push_back({rt, -(rt * p.translation)});
        }
        return out;
    }
};

inline PoseFile read_poses(const std::string& path,
                           PoseConvention default_convention = PoseConvention::WorldToCamera) {
    std::vector<std::string> lines = detail::split_lines(detail::read_file(path));
    PoseFile file;
    file.convention = default_convention;
    size_t start = 0;
    if (!lines.empty()) {
        if (lines[0] == "world_to_camera") {
            file.convention = PoseConvention::WorldToCamera;
            start = 1;
        } else if (lines[0] == "camera_to_world") {
            file.convention = PoseConvention::CameraToWorld;
            start = 1;
        }
    }
    for (size_t i = start; i < lines.size(); ++i) {
        int line_no = static_cast<int>(i) + 1;
        if (detail::blank(lines[i])) continue;
        std::istringstream ss(lines[i]);
        std::vector<std::string> tokens;
        std::string tok;
        while (ss >> tok) tokens.push_back(tok);
        if (tokens.size() != 16)
            raise(Errc::MalformedLine, "expected 16 matrix entries on line " +
                                           std::to_string(line_no) + ", got " +
                                           std::to_string(tokens.size()));
        double m[16];
        for (int k = 0; k < 16; ++k) m[k] = detail::parse_double(tokens[static_cast<size_t>(k)], line_no);
        for (int k = 0; k < 3; ++k)
            if (std::abs(m[12 + k]) > 1e-6)
                raise(Errc::BadBottomRow, "bottom row is not [0,0,0,1] on line " +
                                              std::to_string(line_no));
        if (std::abs(m[15] - 1.0) > 1e-6)
            raise(Errc::BadBottomRow,
                  "bottom row is not [0,0,0,1] on line " + std::to_string(line_no));
        CameraPose pose;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) pose.rotation(r, c) = m[4 * r + c];
        pose.translation = {m[3], m[7], m[11]};
        if (orthonormality_error(pose.rotation) > 1e-4 || std::abs(det(pose.rotation) - 1.0) > 1e-4)
            raise(Errc::InvalidRotation,
                  "rotation is not orthonormal with determinant +1 on line " +
                      std::to_string(line_no));
        file.poses.push_back(pose);
    }
    return file;
}

inline void write_poses(const std::string& path, const std::vector<CameraPose>& poses,
                        PoseConvention convention) {
    std::string out =
        convention == PoseConvention::WorldToCamera ? "world_to_camera\n" : "camera_to_world\n";
    for (const auto& pose : poses) {
        std::string line;
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) line += detail::fmt_g17(pose.rotation(r, c)) + " ";
            line += detail::fmt_g17(pose.translation[r]) + " ";
        }
        line += "0 0 0 1";
        out += line + "\n";
    }
    detail::write_file(path, out);
}

// ---------------------------------------------------------------------------
// Trajectory CSV: `frame_index,x,y,z`, strictly increasing indices.

inline Trajectory read_trajectory(const std::string& path) {
    std::vector<std::string> lines = detail::split_lines(detail::read_file(path));
    Trajectory traj;
    for (size_t i = 0; i < lines.size(); ++i) {
        int line_no = static_cast<int>(i) + 1;
        if (detail::blank(lines[i])) continue;
        auto fields = detail::split_fields(lines[i], ',');
        if (fields.size() != 4)
            raise(Errc::MalformedLine, "expected 'frame,x,y,z' on line " + std::to_string(line_no));
        TimedPoint tp;
        tp.t = detail::parse_double(fields[0], line_no);
        tp.p = {detail::parse_double(fields[1], line_no), detail::parse_double(fields[2], line_no),
                detail::parse_double(fields[3], line_no)};
        if (!traj.points.empty() && !(tp.t > traj.points.back().t))
            raise(Errc::NonMonotoneIndex, "frame index " + detail::fmt_g17(tp.t) +
                                              " on line " + std::to_string(line_no) +
                                              " does not increase");
        traj.points.push_back(tp);
    }
    if (traj.points.empty()) raise(Errc::EmptyTrajectory, path + " contains no points");
    return traj;
}

inline void write_trajectory(const std::string& path, const Trajectory& traj) {
    traj.validate();
    std::string out;
    for (const auto& tp : traj.points)
        out += detail::fmt_g17(tp.t) + "," + detail::fmt_g17(tp.p.x) + "," +
               detail::fmt_g17(tp.p.y) + "," + detail::fmt_g17(tp.p.z) + "\n";
    detail::write_file(path, out);
}

}  // namespace auralize

#endif
