#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "courtmetrics/court.hpp"
#include "courtmetrics/geometry.hpp"
#include "courtmetrics/ingest.hpp"

namespace courtmetrics::synth {

/// Deterministic random source for fixtures. The stream is fully specified
/// so it can be reproduced in any language:
///   - engine: std::mt19937_64 seeded directly with the 64-bit seed
///   - uniform(): (next() >> 11) * 2^-53, one engine draw in [0, 1)
///   - normal(): Box-Muller, two uniform draws per value,
///       sqrt(-2 ln(1 - u1)) * cos(2 pi u2), no caching
class PortableRng {
public:
    explicit PortableRng(std::uint64_t seed) : engine_(seed) {}

    double uniform();                        // [0, 1)
    double uniform(double lo, double hi);    // [lo, hi)
    double normal();                         // standard normal
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);  // inclusive

private:
    std::mt19937_64 engine_;
};

/// One scripted shot: at `frame` the ball is at `launch` (court meters) and
/// leaves toward `target` at `speed_ms`. The responder holds still for
/// `responder_delay_s` after the shot before moving to their next position.
struct ShotScript {
    std::int64_t frame = 0;
    int striker = 0;
    Vec2 launch;
    Vec2 target;
    double speed_ms = 0.0;
    double responder_delay_s = 0.0;
};

struct PlayerWaypoint {
    std::int64_t frame = 0;
    Vec2 position;  // court meters
};

/// Full rally specification. Consistency requirement: the straight
/// constant-speed segment leaving shot k must arrive exactly at shot k+1's
/// launch point at shot k+1's frame (generate_rally validates this).
struct RallyScript {
    std::string name;
    double fps = 30.0;
    std::int64_t duration_frames = 0;
    int image_width = 1280;
    int image_height = 720;
    Homography camera;  // image -> court, like every Homography
    std::vector<ShotScript> shots;
    std::array<std::vector<PlayerWaypoint>, 2> player_motion;
    /// Ball position before the first shot is extrapolated backwards along
    /// the feed direction at feed_speed_ms from the first launch point.
    Vec2 feed_direction{0.0, -1.0};
    double feed_speed_ms = 8.0;
    int spectators = 2;  // static persons far outside the court
};

RallyScript script_from_json(const std::string& text);
std::string script_to_json(const RallyScript& script);

struct ReactionTruth {
    int responder_id = 0;
    std::int64_t shot_frame = 0;
    double delay_s = 0.0;
    std::int64_t onset_frame = 0;  // first frame the responder moves
};

struct GroundTruth {
    double fps = 0.0;
    Homography camera;
    std::vector<std::int64_t> shot_frames;
    std::vector<int> strikers;
    std::vector<double> shot_speeds_ms;
    std::vector<ReactionTruth> reactions;
    std::vector<Vec2> ball_court;                 // per frame
    std::array<std::vector<Vec2>, 2> player_court;  // per frame
};

std::string to_json(const GroundTruth& truth);

struct SynthResult {
    DetectionStream stream;
    GroundTruth truth;
};

/// Render a script into a noiseless detection stream plus exact ground
/// truth. The ball follows straight constant-speed court-plane segments that
/// change direction exactly at shot frames; players follow their waypoints;
/// image coordinates are court points pushed through the inverse camera.
/// Throws Error{script} on invariant violations.
SynthResult generate_rally(const RallyScript& script);

struct CorruptionConfig {
    double position_noise_sigma_px = 0.0;
    double dropout_prob = 0.0;   // ball detections dropped entirely
    double low_conf_prob = 0.0;  // ball confidence downgraded below 0.4
    std::uint64_t seed = 0;
};

/// Apply detector-style degradation: Gaussian pixel noise on every
/// coordinate, ball dropout, and confidence downgrades. Deterministic given
/// the seed; frame indices and ordering are never touched.
/// Draw order per frame: ball dropout, ball low-conf, ball noise (x then y),
/// then per person noise, then per keypoint noise, skipping absent entries.
DetectionStream corrupt(const DetectionStream& stream,
                        const CorruptionConfig& cfg);

/// High-level script builder used by fixtures and tests. Produces scripts
/// that alternate slow/fast shots (speed ratio >= 1.3), keep inter-shot gaps
/// clear of temporal suppression, and script each responder's reaction
/// delay.
struct RallyPlan {
    std::uint64_t seed = 1;
    int shot_count = 8;
    double fps = 30.0;
    /// Per-player reaction delay after the opponent's shot.
    std::array<double, 2> responder_delay_s = {0.25, 0.25};
    /// Responder movement speed; at 9.5 m/s the 0.3 m reaction threshold is
    /// crossed on the first moving frame.
    double responder_speed_ms = 9.5;
    std::array<double, 2> slow_speed_band_ms = {15.0, 18.0};
    std::array<double, 2> fast_speed_band_ms = {24.0, 27.0};
    /// Fixed per-shot speeds (m/s); overrides the bands when non-empty.
    std::vector<double> shot_speeds_ms;
    std::string name = "rally";
};

RallyScript make_rally_script(const RallyPlan& plan);

/// Broadcast-style camera: near baseline wide and low in the image, far
/// baseline narrow and high. jitter > 0 perturbs the four anchor corners
/// reproducibly for camera-variety tests.
Homography make_broadcast_camera(std::uint64_t seed = 0, double jitter_px = 0.0);

}  // namespace courtmetrics::synth
