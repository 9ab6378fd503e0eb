#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "courtmetrics/errors.hpp"
#include "courtmetrics/events.hpp"
#include "courtmetrics/synth.hpp"

using namespace courtmetrics;

namespace {

/// Build a fully observed, "perfectly smoothed" track from analytic points:
/// every per-frame array carries the same path.
BallTrack track_from(const std::vector<Vec2>& pts, std::int64_t start = 0) {
    BallTrack t;
    t.start_frame = start;
    for (const Vec2 p : pts) {
        t.positions.push_back(BallObservation{p, 0.9, Provenance::detected});
        t.smoothed.push_back(p);
        t.court_positions.push_back(p);
        t.court_smoothed.push_back(p);
    }
    return t;
}

Vec2 rotate(Vec2 v, double degrees) {
    const double r = degrees * std::numbers::pi / 180.0;
    return {v.x * std::cos(r) - v.y * std::sin(r), v.x * std::sin(r) + v.y * std::cos(r)};
}

/// Piecewise-linear path turning at `turn_frames`; each turn rotates the
/// direction by `angle_deg` and scales the speed by `speed_factor`.
std::vector<Vec2> zigzag(std::size_t n, std::vector<std::int64_t> turn_frames, double angle_deg,
                         double speed_factor) {
    std::vector<Vec2> pts;
    Vec2 pos{0.0, 0.0};
    Vec2 vel{1.0, 0.25};
    std::size_t next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        pts.push_back(pos);
        if (next < turn_frames.size() && static_cast<std::int64_t>(i) == turn_frames[next]) {
            vel = rotate(vel, angle_deg) * speed_factor;
            angle_deg = -angle_deg;  // alternate turn direction
            ++next;
        }
        pos = pos + vel;
    }
    return pts;
}

std::vector<std::int64_t> frames_of(const std::vector<ShotEvent>& shots) {
    std::vector<std::int64_t> out;
    for (const auto& s : shots) out.push_back(s.frame_index);
    return out;
}

PlayerTrack player_at(int id, std::int64_t start, std::vector<std::optional<Vec2>> court) {
    PlayerTrack t;
    t.player_id = id;
    t.start_frame = start;
    t.positions.resize(court.size());
    t.court_positions = std::move(court);
    return t;
}

}  // namespace

TEST_CASE("a straight constant-velocity track has no shots") {
    std::vector<Vec2> pts;
    for (int i = 0; i < 100; ++i) pts.push_back({2.0 * i, 1.0 * i});
    CHECK(detect_shots(track_from(pts), EventConfig{}, 30.0).empty());
}

TEST_CASE("a 170-degree reversal with a 1.5x speed change is one shot at the turn") {
    const auto pts = zigzag(81, {40}, 170.0, 1.5);
    const auto shots = detect_shots(track_from(pts), EventConfig{}, 30.0);
    REQUIRE(shots.size() == 1);
    CHECK(std::abs(shots[0].frame_index - 40) <= 1);
    CHECK(shots[0].turn_angle_deg > 45.0);
    CHECK(shots[0].turn_angle_deg <= 180.0);
    // Window velocities are per second: segment speeds were |v|=~1.03 and
    // 1.5x that per frame.
    const double pre = norm(shots[0].pre_velocity);
    const double post = norm(shots[0].post_velocity);
    CHECK(post / pre == doctest::Approx(1.5).epsilon(1e-6));
}

TEST_CASE("a gentle sinusoidal curve below the angle threshold has no shots") {
    // Direction angle stays within atan(0.1) of the x axis; successive
    // window velocities differ by far less than 45 degrees.
    std::vector<Vec2> pts;
    for (int i = 0; i < 200; ++i)
        pts.push_back({10.0 * i, 5.0 * std::sin(0.2 * i)});
    CHECK(detect_shots(track_from(pts), EventConfig{}, 30.0).empty());
}

TEST_CASE("tracks shorter than the velocity stencil produce no shots") {
    const auto pts = zigzag(4, {2}, 170.0, 1.5);
    CHECK(detect_shots(track_from(pts), EventConfig{}, 30.0).empty());
}

TEST_CASE("detected shots keep the minimum gap and stay sorted") {
    const auto pts = zigzag(140, {30, 60, 90, 120}, 150.0, 1.5);
    EventConfig cfg;
    cfg.min_gap_frames = 15;
    const auto shots = detect_shots(track_from(pts), cfg, 30.0);
    REQUIRE(shots.size() == 4);
    for (std::size_t i = 1; i < shots.size(); ++i)
        CHECK(shots[i].frame_index - shots[i - 1].frame_index >= cfg.min_gap_frames);
    CHECK(frames_of(shots) == std::vector<std::int64_t>{30, 60, 90, 120});
}

TEST_CASE("turns closer than the gap are suppressed to the sharpest") {
    // Two turns 8 frames apart; only one survives a 15-frame gap.
    const auto pts = zigzag(60, {24, 32}, 120.0, 1.5);
    EventConfig cfg;
    cfg.min_gap_frames = 15;
    const auto shots = detect_shots(track_from(pts), cfg, 30.0);
    CHECK(shots.size() == 1);
}

TEST_CASE("shot detection is invariant to translation and uniform scaling") {
    const auto base = zigzag(130, {35, 70, 105}, 155.0, 1.4);
    std::vector<Vec2> moved;
    for (const Vec2 p : base) moved.push_back(p * 2.5 + Vec2{100.0, -50.0});
    const auto a = detect_shots(track_from(base), EventConfig{}, 30.0);
    const auto b = detect_shots(track_from(moved), EventConfig{}, 30.0);
    CHECK(frames_of(a) == frames_of(b));
    CHECK(frames_of(a) == std::vector<std::int64_t>{35, 70, 105});
}

TEST_CASE("image-space fallback detects the same turns without court data") {
    const auto pts = zigzag(81, {40}, 160.0, 1.5);
    BallTrack t = track_from(pts);
    t.court_positions.assign(t.court_positions.size(), std::nullopt);
    t.court_smoothed.assign(t.court_smoothed.size(), std::nullopt);
    const auto shots = detect_shots(t, EventConfig{}, 30.0);
    REQUIRE(shots.size() == 1);
    CHECK(shots[0].frame_index == 40);
    CHECK_FALSE(shots[0].ball_court.has_value());
}

TEST_CASE("suppression keeps the highest angle of a close pair") {
    const std::vector<ShotCandidate> candidates{{40, 170.0}, {43, 120.0}};
    CHECK(suppress_close_events(candidates, 10) == std::vector<std::int64_t>{40});
}

TEST_CASE("suppression keeps well-separated candidates") {
    const std::vector<ShotCandidate> candidates{{40, 170.0}, {80, 120.0}};
    CHECK(suppress_close_events(candidates, 10) == std::vector<std::int64_t>{40, 80});
}

TEST_CASE("suppression matches a brute-force reference on random inputs") {
    synth::PortableRng rng(555);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<ShotCandidate> candidates;
        std::int64_t frame = 0;
        const int n = 1 + static_cast<int>(rng.uniform(0, 12));
        for (int i = 0; i < n; ++i) {
            frame += 1 + static_cast<std::int64_t>(rng.uniform(0, 9));
            candidates.push_back({frame, 45.0 + rng.uniform(0, 135)});
        }
        const int gap = static_cast<int>(rng.uniform(0, 20));
        // Reference: repeatedly keep the global best (highest angle, earliest
        // frame on ties), discard everything within the gap.
        std::vector<ShotCandidate> pool = candidates;
        std::vector<std::int64_t> expected;
        while (!pool.empty()) {
            auto best = std::min_element(pool.begin(), pool.end(), [](auto a, auto b) {
                if (a.turn_angle_deg != b.turn_angle_deg) return a.turn_angle_deg > b.turn_angle_deg;
                return a.frame < b.frame;
            });
            const std::int64_t kept = best->frame;
            expected.push_back(kept);
            // Remove the kept candidate itself too: with gap 0 nothing is
            // "closer than the gap", but the winner must still leave the pool.
            std::erase_if(pool, [&](auto c) {
                return c.frame == kept || std::abs(c.frame - kept) < gap;
            });
        }
        std::sort(expected.begin(), expected.end());
        CHECK(suppress_close_events(candidates, gap) == expected);
    }
}

TEST_CASE("suppression validates candidate ordering") {
    const std::vector<ShotCandidate> unsorted{{50, 100.0}, {40, 120.0}};
    try {
        suppress_close_events(unsorted, 10);
        FAIL("expected parameter error");
    } catch (const Error& e) {
        CHECK(e.category() == ErrorCategory::parameter);
    }
}

TEST_CASE("shot attribution picks the nearest player") {
    const auto p1 = player_at(1, 0, {Vec2{0.5, -11.0}});
    const auto p2 = player_at(2, 0, {Vec2{0.0, 11.0}});
    CHECK(attribute_shot(0, {1.0, -10.0}, p1, p2) == 1);
}

TEST_CASE("exact attribution ties go to player 1") {
    const auto p1 = player_at(1, 0, {Vec2{2.0, 0.0}});
    const auto p2 = player_at(2, 0, {Vec2{-2.0, 0.0}});
    CHECK(attribute_shot(0, {0.0, 0.0}, p1, p2) == 1);
}

TEST_CASE("attribution is unknown when no player is close enough") {
    const auto p1 = player_at(1, 0, {Vec2{0.0, -11.0}});
    const auto p2 = player_at(2, 0, {Vec2{0.0, 11.0}});
    CHECK(attribute_shot(0, {0.0, 0.0}, p1, p2, 6.0) == 0);
}

TEST_CASE("attribution searches nearby frames for missing positions") {
    // Position at the shot frame is missing; frame +2 carries it.
    const auto p1 = player_at(1, 0, {std::nullopt, std::nullopt, Vec2{1.0, -9.5}});
    const auto p2 = player_at(2, 0, {std::nullopt, std::nullopt, Vec2{0.0, 11.0}});
    CHECK(attribute_shot(0, {1.0, -10.0}, p1, p2) == 1);
}

TEST_CASE("attribution validates max_strike_distance") {
    const auto p1 = player_at(1, 0, {Vec2{0.0, -11.0}});
    const auto p2 = player_at(2, 0, {Vec2{0.0, 11.0}});
    try {
        attribute_shot(0, {0.0, 0.0}, p1, p2, 0.0);
        FAIL("expected parameter error");
    } catch (const Error& e) {
        CHECK(e.category() == ErrorCategory::parameter);
    }
}

TEST_CASE("event config domains are enforced") {
    const auto pts = zigzag(60, {30}, 150.0, 1.5);
    const BallTrack t = track_from(pts);
    EventConfig bad;
    bad.angle_threshold_deg = 0.0;
    CHECK_THROWS_AS(detect_shots(t, bad, 30.0), Error);
    bad = EventConfig{};
    bad.speed_change_ratio = 0.9;
    CHECK_THROWS_AS(detect_shots(t, bad, 30.0), Error);
    bad = EventConfig{};
    bad.min_gap_frames = -1;
    CHECK_THROWS_AS(detect_shots(t, bad, 30.0), Error);
    bad = EventConfig{};
    bad.velocity_window = 1;
    CHECK_THROWS_AS(detect_shots(t, bad, 30.0), Error);
    CHECK_THROWS_AS(detect_shots(t, EventConfig{}, 0.0), Error);
}

TEST_CASE("angle-only or ratio-only changes are not shots") {
    // 60-degree turn with no speed change: the corner frame passes the angle
    // gate but holds ratio 1.0, and the straddling windows one frame to
    // either side see only a 30-degree bend at ratio 1/cos(30) < 1.2.
    const auto angle_only = zigzag(60, {30}, 60.0, 1.0);
    CHECK(detect_shots(track_from(angle_only), EventConfig{}, 30.0).empty());
    // Speed doubles with no direction change: ratio passes, angle fails.
    const auto ratio_only = zigzag(60, {30}, 0.0, 2.0);
    CHECK(detect_shots(track_from(ratio_only), EventConfig{}, 30.0).empty());
}
