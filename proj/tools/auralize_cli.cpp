// Command-line front end: localize, room, rir and render stages plus a
// self-contained demo scene generator. Diagnostics go to stderr as key=value
// lines; exit codes are 0 (ok), 1 (I/O or config), 2 (domain error).

#include <bit>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "auralize/auralize.hpp"

namespace {

using namespace auralize;

std::string fmt(double v) { return auralize::detail::fmt_g17(v); }

void log_kv(const std::string& key, const std::string& value) {
    std::cerr << key << "=" << value << "\n";
}

void log_kv(const std::string& key, double value) { log_kv(key, fmt(value)); }

Vec3 parse_xyz(const std::string& text, const std::string& flag) {
    Vec3 v;
    if (std::sscanf(text.c_str(), "%lf,%lf,%lf", &v.x, &v.y, &v.z) != 3)
        raise(Errc::InvalidArgument, flag + " expects 'x,y,z', got '" + text + "'");
    return v;
}

struct LocalizeArgs {
    std::string boxes, depth_dir, intrinsics, out;
    int patch_r = 5;
    double eps = 0.0;
    int min_pts = 0;
    double depth_scale = 1.0;
};

int cmd_localize(const LocalizeArgs& args) {
    auto boxes = read_boxes(args.boxes);
    CameraIntrinsics intr = read_intrinsics(args.intrinsics);
    LocalizeRun run = localize_pipeline(boxes, args.depth_dir, intr, args.patch_r, args.eps,
                                        args.min_pts, args.depth_scale);
    write_trajectory(args.out, run.trajectory);

    for (size_t f = 0; f < run.interpolated.size(); ++f) {
        std::cerr << "frame=" << f
                  << " status=" << (run.interpolated[f] ? "interpolated" : "kept");
        if (run.interpolated[f]) std::cerr << " reason=" << (run.estimated[f] ? "noise" : "missing");
        std::cerr << "\n";
    }
    std::cerr << "frames=" << run.interpolated.size() << " kept=" << run.survivors
              << " interpolated=" << (run.noise + run.missing) << " noise=" << run.noise
              << " missing=" << run.missing << "\n";
    log_kv("out", args.out);
    return 0;
}

struct RenderArgs {
    std::string audio, src_traj, poses, config, out;
};

int cmd_render(const RenderArgs& args) {
    SceneConfig cfg = args.config.empty() ? SceneConfig{} : load_config(args.config);
    if (!args.audio.empty()) cfg.inputs.audio = args.audio;
    if (!args.src_traj.empty()) cfg.inputs.src_traj = args.src_traj;
    if (!args.poses.empty()) cfg.inputs.poses = args.poses;

    RenderRun run = render_pipeline(cfg);
    write_wav(args.out, run.output);

    log_kv("room_lx", run.room.lx);
    log_kv("room_ly", run.room.ly);
    log_kv("room_lz", run.room.lz);
    log_kv("room_category", auralize::detail::category_name(run.room.category));
    log_kv("t60", run.room.t60);
    log_kv("beta", run.room.beta[0]);
    log_kv("scale", run.fit.scale);
    std::cerr << "offset=" << fmt(run.fit.offset.x) << ","
              << fmt(run.fit.offset.y) << "," << fmt(run.fit.offset.z)
              << "\n";
    std::cerr << "segments=" << run.segments << "\n";
    log_kv("out", args.out);
    return 0;
}

struct RirArgs {
    std::string src, mic, facing = "1,0,0", config, out;
};

int cmd_rir(const RirArgs& args) {
    SceneConfig cfg = args.config.empty() ? SceneConfig{} : load_config(args.config);
    RoomSpec room = resolve_room(cfg);
    Vec3 src = parse_xyz(args.src, "--src");
    Vec3 mic = parse_xyz(args.mic, "--mic");
    Vec3 facing = parse_xyz(args.facing, "--facing");
    double n = norm(facing);
    if (n < 1e-9) raise(Errc::InvalidArgument, "--facing must be a nonzero vector");
    facing = facing / n;

    ImpulseResponse rir = compute_rir(src, mic, facing, cfg.render.pattern, room, cfg.render.fs,
                                      cfg.render.c, cfg.render.max_order_cap);
    AudioBuffer out;
    out.sample_rate = rir.sample_rate;
    out.channels.push_back(rir.samples);
    write_wav(args.out, out);

    log_kv("room_lx", room.lx);
    log_kv("room_ly", room.ly);
    log_kv("room_lz", room.lz);
    log_kv("t60", room.t60);
    std::cerr << "samples=" << rir.samples.size() << "\n";
    log_kv("out", args.out);
    return 0;
}

struct RoomArgs {
    std::string category = "small";
    uint64_t seed = 0;
    std::string traj_src, traj_rsv, out;
    double margin = 0.5;
};

int cmd_room(const RoomArgs& args) {
    RoomCategory cat = auralize::detail::parse_category(args.category);
    RoomSpec room = sample_room(cat, args.seed);
    room.t60 = sample_t60(args.seed);
    room.beta = beta_from_t60(room);

    Trajectory src = read_trajectory(args.traj_src);
    Trajectory rsv = read_trajectory(args.traj_rsv);
    SceneFit fit = fit_scene(src, rsv, room, args.margin);

    namespace fs = std::filesystem;
    fs::create_directories(args.out);
    std::string report;
    auto add = [&](const std::string& k, const std::string& v) { report += k + "=" + v + "\n"; };
    add("category", args.category);
    add("room_lx", fmt(room.lx));
    add("room_ly", fmt(room.ly));
    add("room_lz", fmt(room.lz));
    add("t60", fmt(room.t60));
    add("beta", fmt(room.beta[0]));
    add("scale", fmt(fit.scale));
    add("offset", fmt(fit.offset.x) + "," + fmt(fit.offset.y) + "," +
                      fmt(fit.offset.z));
    auralize::detail::write_file(args.out + "/report.txt", report);
    write_trajectory(args.out + "/src_fitted.csv", fit.apply(src));
    write_trajectory(args.out + "/rsv_fitted.csv", fit.apply(rsv));
    std::cerr << report;
    log_kv("out", args.out);
    return 0;
}

int cmd_toy_scene(const std::string& out_dir) {
    ToySceneFiles files = make_toy_scene(out_dir);
    log_kv("audio", files.audio);
    log_kv("src_traj", files.src_traj);
    log_kv("poses", files.poses);
    log_kv("boxes", files.boxes);
    log_kv("depth_dir", files.depth_dir);
    log_kv("intrinsics", files.intrinsics);
    log_kv("config", files.config);
    return 0;
}

struct PfmArgs {
    std::string in, out;
    double scale = 1.0;
};

// PFM (grayscale "Pf") to the native depth raster. PFM stores rows
// bottom-up; a negative scale marks little-endian payloads.
int cmd_depth_from_pfm(const PfmArgs& args) {
    std::string bytes = auralize::detail::read_file(args.in);
    size_t pos = 0;
    auto next_token = [&]() -> std::string {
        while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
        size_t start = pos;
        while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
        return bytes.substr(start, pos - start);
    };
    std::string magic = next_token();
    if (magic != "Pf")
        raise(Errc::HeaderMismatch, args.in + " is not a grayscale PFM (magic '" + magic + "')");
    int w = std::stoi(next_token());
    int h = std::stoi(next_token());
    double pfm_scale = std::stod(next_token());
    if (w < 1 || h < 1) raise(Errc::HeaderMismatch, "bad PFM dimensions");
    ++pos;  // single whitespace after the scale line
    size_t expected = static_cast<size_t>(w) * h * 4;
    if (bytes.size() - pos < expected)
        raise(Errc::TruncatedPayload, args.in + " payload too short");

    bool little_endian = pfm_scale < 0.0;
    DepthMap map;
    map.width = w;
    map.height = h;
    map.values.resize(static_cast<size_t>(w) * h);
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data()) + pos;
    for (int row = 0; row < h; ++row) {
        int src_row = h - 1 - row;  // flip to top-left origin
        for (int col = 0; col < w; ++col) {
            const unsigned char* s = p + (static_cast<size_t>(src_row) * w + col) * 4;
            uint32_t bits = little_endian
                                ? auralize::detail::rd_u32le(s)
                                : (static_cast<uint32_t>(s[0]) << 24) |
                                      (static_cast<uint32_t>(s[1]) << 16) |
                                      (static_cast<uint32_t>(s[2]) << 8) | s[3];
            float v = std::bit_cast<float>(bits);
            map.values[static_cast<size_t>(row) * w + col] = static_cast<float>(v * args.scale);
        }
    }
    write_depth(args.out, map);
    log_kv("out", args.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"physically simulated binaural rendering from localization evidence"};
    app.require_subcommand(1);

    LocalizeArgs loc;
    auto* localize = app.add_subcommand("localize", "boxes + depth rasters to a source trajectory");
    localize->add_option("--boxes", loc.boxes, "grounding box CSV")->required();
    localize->add_option("--depth-dir", loc.depth_dir, "directory of depth_%06d.depth files")
        ->required();
    localize->add_option("--intrinsics", loc.intrinsics, "camera intrinsics JSON")->required();
    localize->add_option("--patch-r", loc.patch_r, "odd patch size in pixels (default 5)");
    localize->add_option("--eps", loc.eps, "DBSCAN radius in meters (0 = auto)");
    localize->add_option("--min-pts", loc.min_pts, "DBSCAN core threshold (0 = auto)");
    localize->add_option("--depth-scale", loc.depth_scale, "multiplier to meters (default 1)");
    localize->add_option("--out", loc.out, "output trajectory CSV")->required();

    RenderArgs ren;
    auto* render = app.add_subcommand("render", "mono audio + trajectories to binaural WAV");
    render->add_option("--audio", ren.audio, "mono input WAV");
    render->add_option("--src-traj", ren.src_traj, "source trajectory CSV");
    render->add_option("--poses", ren.poses, "receiver camera pose file");
    render->add_option("--config", ren.config, "scene config JSON");
    render->add_option("--out", ren.out, "output stereo WAV")->required();

    RirArgs rir;
    auto* rir_cmd = app.add_subcommand("rir", "write one impulse response for inspection");
    rir_cmd->add_option("--src", rir.src, "source position x,y,z")->required();
    rir_cmd->add_option("--mic", rir.mic, "microphone position x,y,z")->required();
    rir_cmd->add_option("--facing", rir.facing, "mic facing x,y,z (cardioid only)");
    rir_cmd->add_option("--config", rir.config, "scene config JSON");
    rir_cmd->add_option("--out", rir.out, "output mono WAV")->required();

    RoomArgs room;
    auto* room_cmd = app.add_subcommand("room", "sample a room and fit trajectories into it");
    room_cmd->add_option("--category", room.category, "small|medium|large|outdoor");
    room_cmd->add_option("--seed", room.seed, "sampling seed (default 0)");
    room_cmd->add_option("--traj-src", room.traj_src, "source trajectory CSV")->required();
    room_cmd->add_option("--traj-rsv", room.traj_rsv, "receiver trajectory CSV")->required();
    room_cmd->add_option("--margin", room.margin, "wall clearance in meters (default 0.5)");
    room_cmd->add_option("--out", room.out, "output directory")->required();

    std::string toy_dir;
    auto* toy = app.add_subcommand("toy-scene", "write the bundled demo scene");
    toy->add_option("--out-dir", toy_dir, "output directory")->required();

    PfmArgs pfm;
    auto* pfm_cmd = app.add_subcommand("depth-from-pfm", "convert a PFM image to a depth raster");
    pfm_cmd->add_option("--in", pfm.in, "input .pfm")->required();
    pfm_cmd->add_option("--out", pfm.out, "output .depth")->required();
    pfm_cmd->add_option("--scale", pfm.scale, "depth multiplier (default 1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (localize->parsed()) return cmd_localize(loc);
        if (render->parsed()) return cmd_render(ren);
        if (rir_cmd->parsed()) return cmd_rir(rir);
        if (room_cmd->parsed()) return cmd_room(room);
        if (toy->parsed()) return cmd_toy_scene(toy_dir);
        if (pfm_cmd->parsed()) return cmd_depth_from_pfm(pfm);
    } catch (const Error& e) {
        std::cerr << "error=" << e.what() << "\n";
        return is_io_error(e.code()) ? 1 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error=" << e.what() << "\n";
        return 1;
    }
    return 0;
}
