#include <doctest.h>

#include <cmath>
#include <optional>
#include <vector>

#include "courtmetrics/errors.hpp"
#include "courtmetrics/synth.hpp"
#include "courtmetrics/tracking.hpp"

using namespace courtmetrics;

namespace {

const std::vector<Vec2> kBoundary{{400, 200}, {880, 200}, {880, 650}, {400, 650}};

PersonDetection person_at(Vec2 foot, double w = 40.0, double h = 100.0, double conf = 0.9) {
    return {{foot.x - w / 2.0, foot.y - h, w, h}, conf};
}

DetectionFrame frame_with(std::int64_t index, std::vector<PersonDetection> persons) {
    DetectionFrame f;
    f.frame_index = index;
    f.persons = std::move(persons);
    return f;
}

std::optional<RawBallSample> sample(double x, double y, double conf = 0.9) {
    return RawBallSample{{x, y}, conf};
}

BallTrack linear_track(std::int64_t start, std::size_t n, Vec2 origin, Vec2 step) {
    std::vector<std::optional<RawBallSample>> raw(n);
    for (std::size_t i = 0; i < n; ++i)
        raw[i] = RawBallSample{origin + step * static_cast<double>(i), 0.9};
    return interpolate_ball(start, raw);
}

}  // namespace

TEST_CASE("spectators far outside the court are filtered out") {
    // Two persons inside the boundary, two in the stands.
    auto f = frame_with(0, {person_at({600, 600}), person_at({50, 80}), person_at({700, 300}),
                            person_at({1250, 90})});
    auto [p1, p2] = identify_players({&f, 1}, kBoundary, 0.0);
    REQUIRE(p1.positions.size() == 1);
    REQUIRE(p1.positions[0].has_value());
    REQUIRE(p2.positions[0].has_value());
    // Player 1 = larger foot y (nearer the camera).
    CHECK(p1.positions[0]->foot_point == Vec2{600, 600});
    CHECK(p2.positions[0]->foot_point == Vec2{700, 300});
    CHECK(p1.player_id == 1);
    CHECK(p2.player_id == 2);
}

TEST_CASE("three in-court candidates: the two nearest the centroid win") {
    const Vec2 centroid = polygon_centroid(kBoundary);  // (640, 425)
    auto f = frame_with(0, {person_at({640, 430}), person_at({660, 420}), person_at({870, 640})});
    auto [p1, p2] = identify_players({&f, 1}, kBoundary, 0.0);
    REQUIRE(p1.positions[0].has_value());
    REQUIRE(p2.positions[0].has_value());
    const double d1 = distance(p1.positions[0]->foot_point, centroid);
    const double d2 = distance(p2.positions[0]->foot_point, centroid);
    CHECK(std::max(d1, d2) < distance({870, 640}, centroid));
}

TEST_CASE("identity convention: lower image half is player 1") {
    auto f = frame_with(0, {person_at({500, 250}), person_at({700, 620})});
    auto [p1, p2] = identify_players({&f, 1}, kBoundary, 0.0);
    CHECK(p1.positions[0]->foot_point.y == 620);
    CHECK(p2.positions[0]->foot_point.y == 250 - 0);  // the far candidate
}

TEST_CASE("frames with fewer than two candidates are missing, not fatal") {
    std::vector<DetectionFrame> frames;
    frames.push_back(frame_with(0, {person_at({600, 600}), person_at({700, 300})}));
    frames.push_back(frame_with(1, {person_at({600, 600})}));
    frames.push_back(frame_with(2, {}));
    frames.push_back(frame_with(3, {person_at({610, 598}), person_at({690, 305})}));
    auto [p1, p2] = identify_players(frames, kBoundary, 0.0);
    REQUIRE(p1.positions.size() == 4);
    CHECK(p1.positions[0].has_value());
    CHECK_FALSE(p1.positions[1].has_value());
    CHECK_FALSE(p1.positions[2].has_value());
    CHECK(p1.positions[3].has_value());
    CHECK(p1.positions[3]->foot_point == Vec2{610, 598});
    CHECK(p2.positions[3]->foot_point == Vec2{690, 305});
}

TEST_CASE("identities stay consistent when players cross image halves") {
    std::vector<DetectionFrame> frames;
    // Player 1 walks up-image, player 2 down-image; they swap halves.
    for (int i = 0; i <= 10; ++i) {
        const double y1 = 600 - 30.0 * i;
        const double y2 = 300 + 30.0 * i;
        frames.push_back(frame_with(i, {person_at({600, y1}), person_at({700, y2})}));
    }
    auto [p1, p2] = identify_players(frames, kBoundary, 0.0);
    for (int i = 0; i <= 10; ++i) {
        REQUIRE(p1.positions[i].has_value());
        CHECK(p1.positions[i]->foot_point.x == 600);
        CHECK(p2.positions[i]->foot_point.x == 700);
    }
}

TEST_CASE("empty frame list is an empty-track error") {
    try {
        identify_players({}, kBoundary, 0.0);
        FAIL("expected empty-track error");
    } catch (const Error& e) {
        CHECK(e.category() == ErrorCategory::empty_track);
    }
}

TEST_CASE("association keeps identity when candidates barely move") {
    const PairAssignment a =
        associate_identities({{{100, 100}, {200, 200}}}, {{{101, 100}, {200, 201}}});
    CHECK_FALSE(a.swapped);
    CHECK(a.cost == doctest::Approx(2.0));
}

TEST_CASE("association picks the cheaper pairing") {
    // Straight pairing is cheaper.
    CHECK_FALSE(associate_identities({{{0, 0}, {10, 0}}}, {{{1, 0}, {11, 0}}}).swapped);
    // Crossing is strictly cheaper: candidates swapped sides.
    const PairAssignment swap = associate_identities({{{0, 0}, {10, 0}}}, {{{10, 1}, {0, 1}}});
    CHECK(swap.swapped);
    CHECK(swap.cost == doctest::Approx(2.0));
}

TEST_CASE("association cost equals the brute-force minimum") {
    synth::PortableRng rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        const std::array<Vec2, 2> prev{{{rng.uniform(0, 100), rng.uniform(0, 100)},
                                        {rng.uniform(0, 100), rng.uniform(0, 100)}}};
        const std::array<Vec2, 2> cur{{{rng.uniform(0, 100), rng.uniform(0, 100)},
                                       {rng.uniform(0, 100), rng.uniform(0, 100)}}};
        const auto sq = [](Vec2 a, Vec2 b) {
            return (a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y);
        };
        const double straight = sq(prev[0], cur[0]) + sq(prev[1], cur[1]);
        const double crossed = sq(prev[0], cur[1]) + sq(prev[1], cur[0]);
        const PairAssignment a = associate_identities(prev, cur);
        CHECK(a.cost == doctest::Approx(std::min(straight, crossed)));
        CHECK(a.swapped == (crossed < straight));
    }
}

TEST_CASE("player selection is a subset of the input persons, at most two") {
    synth::PortableRng rng(4242);
    std::vector<DetectionFrame> frames;
    for (int i = 0; i < 40; ++i) {
        std::vector<PersonDetection> persons;
        const int n = static_cast<int>(rng.uniform(0, 6));
        for (int k = 0; k < n; ++k)
            persons.push_back(person_at({rng.uniform(0, 1280), rng.uniform(0, 720)}));
        frames.push_back(frame_with(i, persons));
    }
    auto [p1, p2] = identify_players(frames, kBoundary, 100.0);
    for (std::size_t i = 0; i < frames.size(); ++i) {
        int selected = 0;
        for (const auto& track : {&p1, &p2}) {
            if (!track->positions[i]) continue;
            ++selected;
            bool found = false;
            for (const auto& person : frames[i].persons)
                if (person.bbox.foot_point() == track->positions[i]->foot_point) found = true;
            CHECK(found);
        }
        CHECK(selected <= 2);
    }
}

TEST_CASE("interpolation fills a one-frame gap with the midpoint") {
    std::vector<std::optional<RawBallSample>> raw{sample(0, 0), std::nullopt, sample(2, 2)};
    const BallTrack t = interpolate_ball(10, raw);
    CHECK(t.start_frame == 10);
    REQUIRE(t.positions.size() == 3);
    REQUIRE(t.positions[1].has_value());
    CHECK(t.positions[1]->center == Vec2{1.0, 1.0});
    CHECK(t.positions[1]->provenance == Provenance::interpolated);
    CHECK(t.positions[0]->provenance == Provenance::detected);
    CHECK(t.positions[2]->provenance == Provenance::detected);
}

TEST_CASE("confidence below 0.4 is treated as missing and re-filled") {
    std::vector<std::optional<RawBallSample>> raw{sample(0, 0), sample(5, 9, 0.3), sample(2, 2)};
    const BallTrack t = interpolate_ball(0, raw);
    REQUIRE(t.positions[1].has_value());
    CHECK(t.positions[1]->center == Vec2{1.0, 1.0});
    CHECK(t.positions[1]->provenance == Provenance::interpolated);
}

TEST_CASE("threshold boundary: 0.39 re-filled, 0.41 preserved bit-identically") {
    const Vec2 odd{517.123456789, 201.987654321};
    std::vector<std::optional<RawBallSample>> raw{sample(0, 0), RawBallSample{odd, 0.39},
                                                  RawBallSample{odd, 0.41}, sample(3, 3)};
    const BallTrack t = interpolate_ball(0, raw);
    // 0.39 falls below the 0.4 anchor threshold: interpolated between frames 0 and 2.
    CHECK(t.positions[1]->provenance == Provenance::interpolated);
    CHECK(t.positions[1]->center == (Vec2{0, 0} + odd) / 2.0);
    // 0.41 is an anchor: position and confidence unchanged, bit for bit.
    CHECK(t.positions[2]->provenance == Provenance::detected);
    CHECK(t.positions[2]->center.x == odd.x);
    CHECK(t.positions[2]->center.y == odd.y);
    CHECK(t.positions[2]->confidence == 0.41);
}

TEST_CASE("frames before the first and after the last anchor stay missing") {
    std::vector<std::optional<RawBallSample>> raw{std::nullopt, std::nullopt, sample(1, 1),
                                                  sample(2, 2), std::nullopt};
    const BallTrack t = interpolate_ball(0, raw);
    CHECK_FALSE(t.positions[0].has_value());
    CHECK_FALSE(t.positions[1].has_value());
    CHECK(t.positions[2].has_value());
    CHECK_FALSE(t.positions[4].has_value());
}

TEST_CASE("gaps longer than max_gap_frames stay missing") {
    std::vector<std::optional<RawBallSample>> raw(7);
    raw[0] = sample(0, 0);
    raw[6] = sample(6, 6);
    const BallTrack filled = interpolate_ball(0, raw, 0.4, 5);
    CHECK(filled.positions[3].has_value());
    const BallTrack split = interpolate_ball(0, raw, 0.4, 4);
    for (int i = 1; i <= 5; ++i) CHECK_FALSE(split.positions[i].has_value());
}

TEST_CASE("no anchors at all is an empty-track error") {
    std::vector<std::optional<RawBallSample>> raw{std::nullopt, sample(1, 1, 0.1)};
    try {
        interpolate_ball(0, raw);
        FAIL("expected empty-track error");
    } catch (const Error& e) {
        CHECK(e.category() == ErrorCategory::empty_track);
    }
}

TEST_CASE("interpolation is idempotent") {
    synth::PortableRng rng(7);
    std::vector<std::optional<RawBallSample>> raw(60);
    for (int i = 0; i < 60; ++i)
        if (rng.uniform() > 0.3) raw[i] = sample(rng.uniform(0, 1280), rng.uniform(0, 720));
    const BallTrack once = interpolate_ball(5, raw);
    // Feed the output back through: anchors are the same, fills must not move.
    std::vector<std::optional<RawBallSample>> again(once.positions.size());
    for (std::size_t i = 0; i < once.positions.size(); ++i)
        if (once.positions[i])
            again[i] = RawBallSample{once.positions[i]->center, once.positions[i]->confidence};
    const BallTrack twice = interpolate_ball(5, again);
    REQUIRE(twice.positions.size() == once.positions.size());
    for (std::size_t i = 0; i < once.positions.size(); ++i) {
        CHECK(once.positions[i].has_value() == twice.positions[i].has_value());
        if (once.positions[i]) {
            CHECK(once.positions[i]->center.x == twice.positions[i]->center.x);
            CHECK(once.positions[i]->center.y == twice.positions[i]->center.y);
            CHECK(once.positions[i]->provenance == twice.positions[i]->provenance);
        }
    }
}

TEST_CASE("interpolated points sit on the anchor segment") {
    std::vector<std::optional<RawBallSample>> raw(12);
    raw[0] = sample(100.5, 207.25);
    raw[11] = sample(913.75, 44.0);
    const BallTrack t = interpolate_ball(0, raw);
    const Vec2 a = t.positions[0]->center;
    const Vec2 b = t.positions[11]->center;
    for (int i = 1; i < 11; ++i) {
        REQUIRE(t.positions[i].has_value());
        const Vec2 p = t.positions[i]->center;
        CHECK(std::abs(cross(b - a, p - a)) / norm(b - a) < 1e-9);
        const double tpar = dot(p - a, b - a) / dot(b - a, b - a);
        CHECK(tpar >= 0.0);
        CHECK(tpar <= 1.0);
    }
}

TEST_CASE("negative max gap is a parameter error") {
    std::vector<std::optional<RawBallSample>> raw{sample(0, 0)};
    try {
        interpolate_ball(0, raw, 0.4, -1);
        FAIL("expected parameter error");
    } catch (const Error& e) {
        CHECK(e.category() == ErrorCategory::parameter);
    }
}

TEST_CASE("kalman smoothing reproduces an exactly linear track") {
    BallTrack t = linear_track(0, 60, {100, 500}, {8.5, -4.25});
    t = kalman_smooth(std::move(t), KalmanParams{}, 30.0);
    for (std::size_t i = 5; i < 60; ++i) {
        REQUIRE(t.smoothed[i].has_value());
        const Vec2 truth = Vec2{100, 500} + Vec2{8.5, -4.25} * static_cast<double>(i);
        CHECK(distance(*t.smoothed[i], truth) < 1e-3);
    }
}

TEST_CASE("single-sample runs pass through unchanged") {
    std::vector<std::optional<RawBallSample>> raw{sample(123.5, 456.25)};
    BallTrack t = interpolate_ball(0, raw);
    t = kalman_smooth(std::move(t), KalmanParams{}, 30.0);
    REQUIRE(t.smoothed[0].has_value());
    CHECK(t.smoothed[0]->x == 123.5);
    CHECK(t.smoothed[0]->y == 456.25);
}

TEST_CASE("smoothing reduces the error of a noisy linear track") {
    synth::PortableRng rng(2024);
    const Vec2 origin{200, 600}, step{9, -5};
    std::vector<std::optional<RawBallSample>> raw(120);
    std::vector<Vec2> truth(120);
    for (int i = 0; i < 120; ++i) {
        truth[i] = origin + step * static_cast<double>(i);
        raw[i] = RawBallSample{truth[i] + Vec2{3.0 * rng.normal(), 3.0 * rng.normal()}, 0.9};
    }
    BallTrack t = interpolate_ball(0, raw);
    t = kalman_smooth(std::move(t), KalmanParams{}, 30.0);
    double raw_se = 0.0, smooth_se = 0.0;
    for (int i = 0; i < 120; ++i) {
        raw_se += dot(t.positions[i]->center - truth[i], t.positions[i]->center - truth[i]);
        smooth_se += dot(*t.smoothed[i] - truth[i], *t.smoothed[i] - truth[i]);
    }
    CHECK(smooth_se < raw_se);
}

TEST_CASE("kalman smoothing is translation-equivariant") {
    synth::PortableRng rng(11);
    std::vector<std::optional<RawBallSample>> raw(50), shifted(50);
    const Vec2 delta{37.5, -12.25};
    for (int i = 0; i < 50; ++i) {
        if (i % 9 == 4) continue;  // leave some holes; runs smooth independently
        const Vec2 p{rng.uniform(0, 1280), rng.uniform(0, 720)};
        raw[i] = RawBallSample{p, 0.9};
        shifted[i] = RawBallSample{p + delta, 0.9};
    }
    BallTrack a = kalman_smooth(interpolate_ball(0, raw), KalmanParams{}, 30.0);
    BallTrack b = kalman_smooth(interpolate_ball(0, shifted), KalmanParams{}, 30.0);
    for (std::size_t i = 0; i < a.smoothed.size(); ++i) {
        CHECK(a.smoothed[i].has_value() == b.smoothed[i].has_value());
        if (a.smoothed[i]) CHECK(distance(*a.smoothed[i] + delta, *b.smoothed[i]) < 1e-9);
    }
}

TEST_CASE("kalman parameters must be strictly positive") {
    std::vector<std::optional<RawBallSample>> raw{sample(0, 0), sample(1, 1)};
    BallTrack t = interpolate_ball(0, raw);
    for (KalmanParams bad :
         {KalmanParams{0.0, 9.0, 100.0}, KalmanParams{1.0, -1.0, 100.0}, KalmanParams{1.0, 9.0, 0.0}}) {
        try {
            kalman_smooth(BallTrack{t}, bad, 30.0);
            FAIL("expected parameter error");
        } catch (const Error& e) {
            CHECK(e.category() == ErrorCategory::parameter);
        }
    }
    try {
        kalman_smooth(BallTrack{t}, KalmanParams{}, 0.0);
        FAIL("expected parameter error");
    } catch (const Error& e) {
        CHECK(e.category() == ErrorCategory::parameter);
    }
}

TEST_CASE("identity projection copies image positions into court positions") {
    BallTrack t = linear_track(0, 5, {10, 20}, {1, 1});
    t = kalman_smooth(std::move(t), KalmanParams{}, 30.0);
    t = project_track(std::move(t), Homography{});
    for (std::size_t i = 0; i < 5; ++i) {
        REQUIRE(t.court_positions[i].has_value());
        CHECK(*t.court_positions[i] == t.positions[i]->center);
        CHECK(*t.court_smoothed[i] == *t.smoothed[i]);
    }
}

TEST_CASE("missing frames stay missing after projection") {
    std::vector<std::optional<RawBallSample>> raw(5);
    raw[0] = sample(1, 1);
    raw[1] = sample(2, 2);
    raw[4] = sample(5, 5);  // 2-frame interior gap is filled; nothing else
    BallTrack t = interpolate_ball(0, raw, 0.4, 1);
    t = project_track(std::move(t), Homography{});
    CHECK(t.court_positions[0].has_value());
    CHECK_FALSE(t.court_positions[2].has_value());
    CHECK_FALSE(t.court_positions[3].has_value());
    CHECK(t.court_positions[4].has_value());
}

TEST_CASE("per-frame projection validates the span length") {
    BallTrack t = linear_track(0, 5, {10, 20}, {1, 1});
    std::vector<std::optional<Homography>> wrong(4);
    try {
        project_track(std::move(t), wrong);
        FAIL("expected parameter error");
    } catch (const Error& e) {
        CHECK(e.category() == ErrorCategory::parameter);
    }
}
