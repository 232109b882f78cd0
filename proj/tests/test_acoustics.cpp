#include <algorithm>
#include <cmath>
#include <numeric>

#include <catch2/catch_amalgamated.hpp>

#include "auralize/acoustics.hpp"
#include "support/oracles.hpp"

using namespace auralize;
using Catch::Approx;
using oracles::throws_code;

namespace {

RoomSpec make_room(double lx, double ly, double lz, double beta, double t60) {
    RoomSpec room;
    room.lx = lx;
    room.ly = ly;
    room.lz = lz;
    room.beta.fill(beta);
    room.t60 = t60;
    return room;
}

double energy(const std::vector<double>& h) {
    return std::inner_product(h.begin(), h.end(), h.begin(), 0.0);
}

size_t argmax_abs(const std::vector<double>& h) {
    size_t best = 0;
    for (size_t i = 1; i < h.size(); ++i)
        if (std::abs(h[i]) > std::abs(h[best])) best = i;
    return best;
}

}  // namespace

TEST_CASE("derived seed streams are deterministic and distinct") {
    CHECK(derive_seed(42, 0) == derive_seed(42, 0));
    CHECK(derive_seed(42, 0) != derive_seed(42, 1));
    CHECK(derive_seed(42, 0) != derive_seed(43, 0));
    Rng a(7), b(7);
    for (int i = 0; i < 100; ++i) CHECK(a.uniform(0, 1) == b.uniform(0, 1));
}

TEST_CASE("raw engine doubles stay strictly inside the interval") {
    Rng rng(1234);
    for (int i = 0; i < 100000; ++i) {
        double u = rng.uniform(0.0, 1.0);
        CHECK(u > 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("sampled room dimensions respect the category ranges") {
    struct Case {
        RoomCategory cat;
        double lw_min, lw_max, h_min, h_max;
    };
    const Case cases[] = {
        {RoomCategory::Small, 3.0, 8.0, 2.5, 4.0},
        {RoomCategory::Medium, 8.0, 15.0, 3.0, 6.0},
        {RoomCategory::Large, 15.0, 30.0, 5.0, 10.0},
        {RoomCategory::Outdoor, 100.0, 200.0, 50.0, 100.0},
    };
    for (const Case& c : cases) {
        for (uint64_t seed = 0; seed < 200; ++seed) {
            RoomSpec room = sample_room(c.cat, seed);
            CHECK(room.lx > c.lw_min);
            CHECK(room.lx < c.lw_max);
            CHECK(room.ly > c.lw_min);
            CHECK(room.ly < c.lw_max);
            CHECK(room.lz > c.h_min);
            CHECK(room.lz < c.h_max);
            CHECK(room.category == c.cat);
        }
        RoomSpec again = sample_room(c.cat, 99);
        RoomSpec first = sample_room(c.cat, 99);
        CHECK(again.lx == first.lx);
        CHECK(again.ly == first.ly);
        CHECK(again.lz == first.lz);
    }
    CHECK(throws_code([&] { sample_room(RoomCategory::Explicit, 0); }, Errc::InvalidArgument));
}

TEST_CASE("sampled reverberation times cover (0.3, 0.6) uniformly") {
    double sum = 0.0;
    for (uint64_t seed = 0; seed < 10000; ++seed) {
        double t = sample_t60(seed);
        CHECK(t > 0.3);
        CHECK(t < 0.6);
        sum += t;
    }
    CHECK(sum / 10000.0 == Approx(0.45).margin(0.01));
    CHECK(sample_t60(5) == sample_t60(5));
}

TEST_CASE("beta_from_t60 reproduces the hand-computed Sabine value") {
    RoomSpec room = make_room(5, 4, 3, 0.0, 0.5);
    auto beta = beta_from_t60(room);
    // alpha = 0.161 * V / (S * T60) with V = 60 m^3 and S = 94 m^2
    double alpha = (0.161 * 60.0) / (94.0 * 0.5);
    CHECK(alpha == Approx(9.66 / 47.0).margin(1e-15));
    double want = std::sqrt(1.0 - alpha);
    for (double b : beta) CHECK(b == want);
    CHECK(beta[0] == Approx(0.8913294).margin(1e-6));
}

TEST_CASE("beta_from_t60 clamps impossible targets unless strict") {
    RoomSpec room = make_room(1, 1, 1, 0.0, 0.01);  // alpha = 0.161/0.06 > 1
    auto beta = beta_from_t60(room);
    CHECK(beta[0] == Approx(std::sqrt(1.0 - 0.9999)).margin(1e-12));
    CHECK(throws_code([&] { beta_from_t60(room, true); }, Errc::UnreachableT60));
}

TEST_CASE("ipow agrees with std::pow on integer exponents") {
    CHECK(ipow(0.7, 0) == 1.0);
    CHECK(ipow(0.7, 1) == 0.7);
    CHECK(ipow(2.0, 10) == 1024.0);
    for (int e = 0; e < 12; ++e) CHECK(ipow(0.93, e) == Approx(std::pow(0.93, e)).epsilon(1e-12));
}

TEST_CASE("axis images match the recursive mirror oracle") {
    oracles::Rand rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        double L = rng.uniform(1.0, 12.0);
        double s = rng.uniform(0.05, 0.95) * L;
        for (int i = -6; i <= 6; ++i) {
            detail::AxisImage got = detail::axis_image(i, s, L);
            oracles::RefAxisImage want = oracles::ref_axis_image(i, s, L);
            CHECK(got.hits_lo == want.hits_lo);
            CHECK(got.hits_hi == want.hits_hi);
            CHECK(got.pos == Approx(want.pos).margin(1e-9));
        }
    }
}

TEST_CASE("image_sources enumerates the expected lattice") {
    RoomSpec room = make_room(4, 4, 4, 0.0, 0.5);
    room.beta = {0.9, 0.8, 0.7, 0.6, 0.5, 0.4};
    Vec3 src{1, 1, 1};

    auto order0 = image_sources(src, room, 0);
    REQUIRE(order0.size() == 1);
    CHECK(order0[0].pos == src);
    CHECK(order0[0].coeff == 1.0);

    auto order1 = image_sources(src, room, 1);
    REQUIRE(order1.size() == 27);
    auto find = [&](const Vec3& p) {
        for (const auto& img : order1)
            if (norm(img.pos - p) < 1e-12) return img;
        FAIL("missing image");
        return ImageSource{};
    };
    CHECK(find({-1, 1, 1}).coeff == 0.9);  // one bounce off x = 0
    CHECK(find({7, 1, 1}).coeff == 0.8);   // one bounce off x = lx
    CHECK(find({1, -1, 1}).coeff == 0.7);
    CHECK(find({1, 1, 7}).coeff == 0.4);
    CHECK(find({-1, -1, 1}).coeff == Approx(0.9 * 0.7).margin(1e-15));

    auto order3 = image_sources(src, room, 3);
    CHECK(order3.size() == 343);

    // Growing the order only appends new images, it never changes old ones.
    auto order2 = image_sources(src, room, 2);
    for (const auto& img : order1) {
        bool present = false;
        for (const auto& cand : order2)
            present = present || (cand.pos == img.pos && cand.coeff == img.coeff);
        CHECK(present);
    }
}

TEST_CASE("image_sources matches the recursive oracle exactly") {
    RoomSpec room = make_room(5, 4, 3, 0.0, 0.5);
    room.beta = {0.9, 0.8, 0.7, 0.6, 0.5, 0.4};
    Vec3 src{1, 2, 1.5};
    auto got = image_sources(src, room, 2);
    auto want = oracles::ref_image_sources(src, room, 2);
    REQUIRE(got.size() == want.size());
    for (size_t i = 0; i < got.size(); ++i) {
        CHECK(norm(got[i].pos - want[i].pos) < 1e-9);
        CHECK(got[i].coeff == want[i].coeff);  // same factor order, bit-exact
    }
}

TEST_CASE("image_sources validates its inputs") {
    RoomSpec room = make_room(4, 4, 4, 0.5, 0.5);
    CHECK(throws_code([&] { image_sources({5, 1, 1}, room, 1); }, Errc::SourceOutsideRoom));
    CHECK(throws_code([&] { image_sources({0, 1, 1}, room, 1); }, Errc::SourceOutsideRoom));
    CHECK(throws_code([&] { image_sources({1, 1, 1}, room, -1); }, Errc::InvalidArgument));
}

TEST_CASE("polar gains follow the cardioid law") {
    CHECK(polar_gain(MicPattern::Omni, {9, 9, 9}, {3, 0, 0}) == 1.0);
    Vec3 facing{1, 0, 0};
    CHECK(polar_gain(MicPattern::Cardioid, facing, {1, 0, 0}) == 1.0);
    CHECK(polar_gain(MicPattern::Cardioid, facing, {-1, 0, 0}) == 0.0);
    CHECK(polar_gain(MicPattern::Cardioid, facing, {0, 1, 0}) == 0.5);
    CHECK(polar_gain(MicPattern::Cardioid, facing, {0, 0.6, 0.8}) == 0.5);
    CHECK(throws_code([&] { polar_gain(MicPattern::Cardioid, {2, 0, 0}, {1, 0, 0}); },
                      Errc::InvalidArgument));
    CHECK(throws_code([&] { polar_gain(MicPattern::Cardioid, {1, 0, 0}, {0.5, 0, 0}); },
                      Errc::InvalidArgument));
}

TEST_CASE("anechoic impulse response is a pure delayed 1/d pulse") {
    RoomSpec room = make_room(20, 10, 10, 0.0, 1.0);
    Vec3 src{5, 5, 5};
    Vec3 mic{8.43, 5, 5};
    ImpulseResponse rir = compute_rir(src, mic, {1, 0, 0}, MicPattern::Omni, room, 16000, 343.0);
    REQUIRE(rir.samples.size() == 16000);
    double d = norm(mic - src);  // 3.43 m -> 160 samples at fs/c
    size_t peak = argmax_abs(rir.samples);
    CHECK(peak == 160);
    CHECK(rir.samples[peak] == Approx(1.0 / d).epsilon(1e-9));
    double outside = 0.0;
    for (size_t j = 0; j < rir.samples.size(); ++j)
        if (j < 152 || j > 168) outside += std::abs(rir.samples[j]);
    CHECK(outside == 0.0);  // the deposit kernel only spans 16 taps

    Vec3 far{11.86, 5, 5};  // doubled distance
    ImpulseResponse rir2 = compute_rir(src, far, {1, 0, 0}, MicPattern::Omni, room, 16000, 343.0);
    size_t peak2 = argmax_abs(rir2.samples);
    CHECK(peak2 == 320);
    CHECK(rir2.samples[peak2] / rir.samples[peak] == Approx(0.5).epsilon(1e-9));
}

TEST_CASE("anechoic responses depend only on the source-mic offset") {
    RoomSpec room = make_room(20, 10, 10, 0.0, 0.5);
    Vec3 src{5, 5, 5}, mic{8.5, 5, 5};
    Vec3 delta{0.25, 0.5, -0.75};  // dyadic so the shifted arithmetic is exact
    ImpulseResponse a = compute_rir(src, mic, {1, 0, 0}, MicPattern::Omni, room, 44100, 343.0);
    ImpulseResponse b =
        compute_rir(src + delta, mic + delta, {1, 0, 0}, MicPattern::Omni, room, 44100, 343.0);
    REQUIRE(a.samples.size() == 22050);
    CHECK(a.samples == b.samples);
}

TEST_CASE("omnidirectional responses are reciprocal") {
    RoomSpec room = make_room(6, 5, 4, 0.7, 0.3);
    Vec3 a{1.2, 2.1, 1.4}, b{4.4, 3.2, 2.6};
    ImpulseResponse ab = compute_rir(a, b, {1, 0, 0}, MicPattern::Omni, room, 16000, 343.0);
    ImpulseResponse ba = compute_rir(b, a, {1, 0, 0}, MicPattern::Omni, room, 16000, 343.0);
    REQUIRE(ab.samples.size() == ba.samples.size());
    double worst = 0.0;
    for (size_t i = 0; i < ab.samples.size(); ++i)
        worst = std::max(worst, std::abs(ab.samples[i] - ba.samples[i]));
    CHECK(worst < 1e-9);
}

TEST_CASE("wall reflectivity increases the response energy") {
    Vec3 src{1, 2, 1}, mic{4, 3, 2};
    double prev = -1.0;
    for (double b : {0.0, 0.3, 0.6, 0.9}) {
        RoomSpec room = make_room(6, 5, 4, b, 0.4);
        ImpulseResponse rir = compute_rir(src, mic, {1, 0, 0}, MicPattern::Omni, room, 16000, 343.0);
        double e = energy(rir.samples);
        CHECK(e > prev);
        prev = e;
    }
}

TEST_CASE("compute_rir is deterministic") {
    RoomSpec room = make_room(7, 6, 3, 0.8, 0.35);
    ImpulseResponse a =
        compute_rir({2, 2, 1}, {5, 4, 2}, {0, 0, 1}, MicPattern::Cardioid, room, 16000, 343.0);
    ImpulseResponse b =
        compute_rir({2, 2, 1}, {5, 4, 2}, {0, 0, 1}, MicPattern::Cardioid, room, 16000, 343.0);
    CHECK(a.samples == b.samples);
}

TEST_CASE("compute_rir rejects bad geometry") {
    RoomSpec room = make_room(20, 10, 10, 0.5, 0.5);
    Vec3 in{5, 5, 5};
    CHECK(throws_code([&] { compute_rir(in, in, {1, 0, 0}, MicPattern::Omni, room, 16000, 343.0); },
                      Errc::SourceAtMic));
    CHECK(throws_code(
        [&] { compute_rir(in, {25, 5, 5}, {1, 0, 0}, MicPattern::Omni, room, 16000, 343.0); },
        Errc::MicOutsideRoom));
    CHECK(throws_code(
        [&] { compute_rir({-1, 5, 5}, in, {1, 0, 0}, MicPattern::Omni, room, 16000, 343.0); },
        Errc::SourceOutsideRoom));
    CHECK(throws_code(
        [&] { compute_rir(in, {6, 5, 5}, {1, 0, 0}, MicPattern::Omni, room, 0, 343.0); },
        Errc::InvalidArgument));
    RoomSpec bad = room;
    bad.beta[2] = 1.0;
    CHECK(throws_code(
        [&] { compute_rir(in, {6, 5, 5}, {1, 0, 0}, MicPattern::Omni, bad, 16000, 343.0); },
        Errc::InvalidArgument));
}

TEST_CASE("reflection_order covers the decay window") {
    CHECK(reflection_order(5.0, 0.5, 343.0) == 18);   // ceil(171.5 / 10)
    CHECK(reflection_order(20.0, 1.0, 343.0) == 9);   // ceil(343 / 40)
    CHECK(reflection_order(100.0, 0.4, 343.0) == 1);  // ceil(137.2 / 200)
}

TEST_CASE("a Sabine-matched room decays near its target time") {
    RoomSpec room = make_room(6, 5, 3, 0.0, 0.5);
    room.beta = beta_from_t60(room);
    ImpulseResponse rir =
        compute_rir({1.5, 2.0, 1.0}, {4.0, 3.0, 2.0}, {1, 0, 0}, MicPattern::Omni, room, 16000,
                    343.0);
    double crossing = oracles::schroeder_crossing_time(rir.samples, 16000, -60.0);
    CHECK(crossing > 0.375);
    CHECK(crossing < 0.625);
}

TEST_CASE("fit_scene centers a fitting scene without scaling") {
    Trajectory src;
    src.points = {{0.0, {0, 0, 0}}};
    Trajectory rsv;
    rsv.points = {{0.0, {2, 0, 0}}};
    RoomSpec room = make_room(10, 8, 6, 0.5, 0.5);
    SceneFit fit = fit_scene(src, rsv, room, 0.5);
    CHECK(fit.scale == 1.0);
    CHECK(fit.offset == Vec3{4, 4, 3});
    CHECK(fit.apply(Vec3{0, 0, 0}) == Vec3{4, 4, 3});
    CHECK(fit.apply(Vec3{2, 0, 0}) == Vec3{6, 4, 3});
}

TEST_CASE("fit_scene shrinks oversized scenes onto the margin boundary") {
    Trajectory src;
    src.points = {{0.0, {0, 0, 0}}, {1.0, {18, 3, 6}}};
    Trajectory rsv;
    rsv.points = {{0.0, {9, 1.5, 3}}};
    RoomSpec room = make_room(10, 10, 4, 0.5, 0.5);
    SceneFit fit = fit_scene(src, rsv, room, 0.5);
    CHECK(fit.scale == 0.5);  // min(9/18, 3/6); y fits already
    Vec3 p0 = fit.apply(src.points[0].p);
    Vec3 p1 = fit.apply(src.points[1].p);
    CHECK(p0 == Vec3{0.5, 4.25, 0.5});
    CHECK(p1 == Vec3{9.5, 5.75, 3.5});
}

TEST_CASE("fit_scene keeps every point inside the margins") {
    oracles::Rand rng(555);
    for (int trial = 0; trial < 50; ++trial) {
        RoomSpec room = make_room(rng.uniform(2.0, 12.0), rng.uniform(2.0, 12.0),
                                  rng.uniform(2.0, 12.0), 0.5, 0.5);
        double min_dim = std::min({room.lx, room.ly, room.lz});
        double margin = rng.uniform(0.0, 0.3) * min_dim;
        Trajectory src, rsv;
        int n = rng.integer(1, 20);
        for (int i = 0; i < n; ++i) src.points.push_back({static_cast<double>(i), rng.point(-50, 50)});
        int m = rng.integer(1, 20);
        for (int i = 0; i < m; ++i) rsv.points.push_back({static_cast<double>(i), rng.point(-50, 50)});
        SceneFit fit = fit_scene(src, rsv, room, margin);
        CHECK(fit.scale > 0.0);
        CHECK(fit.scale <= 1.0);
        auto inside = [&](const Trajectory& t) {
            for (const auto& tp : t.points) {
                Vec3 p = fit.apply(tp.p);
                for (int k = 0; k < 3; ++k) {
                    if (p[k] < margin) return false;
                    if (p[k] > room.dim(k) - margin) return false;
                }
            }
            return true;
        };
        CHECK(inside(src));
        CHECK(inside(rsv));
    }
}

TEST_CASE("fit_scene rejects impossible margins") {
    Trajectory one;
    one.points = {{0.0, {0, 0, 0}}};
    RoomSpec room = make_room(5, 4, 3, 0.5, 0.5);
    CHECK(throws_code([&] { fit_scene(one, one, room, 1.5); }, Errc::DegenerateRoom));
    CHECK(throws_code([&] { fit_scene(one, one, room, -0.1); }, Errc::InvalidArgument));
}

TEST_CASE("scene fits carry trajectories along") {
    Trajectory t;
    t.points = {{0.0, {1, 1, 1}}, {2.0, {3, 3, 3}}};
    SceneFit fit{0.5, {10, 0, 0}};
    Trajectory out = fit.apply(t);
    CHECK(out.points[0].t == 0.0);
    CHECK(out.points[1].t == 2.0);
    CHECK(out.points[0].p == Vec3{10.5, 0.5, 0.5});
    CHECK(out.points[1].p == Vec3{11.5, 1.5, 1.5});
}

TEST_CASE("room containment is strict") {
    RoomSpec room = make_room(2, 2, 2, 0.5, 0.5);
    CHECK(room.contains({1, 1, 1}));
    CHECK_FALSE(room.contains({0, 1, 1}));
    CHECK_FALSE(room.contains({2, 1, 1}));
    CHECK(room.volume() == 8.0);
    CHECK(room.surface() == 24.0);
}
