#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "courtmetrics/geometry.hpp"
#include "courtmetrics/tracking.hpp"

namespace courtmetrics {

inline constexpr double kDefaultAngleThresholdDeg = 45.0;
inline constexpr double kDefaultSpeedChangeRatio = 1.2;
inline constexpr double kDefaultMinGapSeconds = 0.5;
inline constexpr int kDefaultVelocityWindow = 2;
inline constexpr double kDefaultMaxStrikeDistanceM = 6.0;
/// Guard for the speed-change ratio denominator (m/frame or px/frame).
inline constexpr double kSpeedEpsilon = 1e-6;

struct EventConfig {
    double angle_threshold_deg = kDefaultAngleThresholdDeg;
    double speed_change_ratio = kDefaultSpeedChangeRatio;
    int min_gap_frames = 15;  // round(0.5 s * 30 fps)
    int velocity_window = kDefaultVelocityWindow;
};

struct ShotEvent {
    std::int64_t frame_index = 0;
    int striker_id = 0;  // 1 or 2; 0 = unattributed
    Vec2 ball_image;
    std::optional<Vec2> ball_court;
    Vec2 pre_velocity;   // m/s court plane (px/s fallback without homography)
    Vec2 post_velocity;  // same units as pre_velocity
    double turn_angle_deg = 0.0;
};

/// Shot candidate frames are where the trajectory direction turns by more
/// than angle_threshold_deg while the speed magnitude changes by at least
/// speed_change_ratio. Velocities come from symmetric windows of
/// velocity_window frames on the smoothed court-plane path (image pixels
/// when no court positions exist). Surviving candidates are localized to the
/// sharpest turn of the observed path within +-velocity_window frames, which
/// undoes the corner rounding the smoother introduces. Tracks shorter than
/// 2 * velocity_window + 1 yield an empty result.
std::vector<ShotEvent> detect_shots(const BallTrack& track,
                                    const EventConfig& cfg, double fps);

struct ShotCandidate {
    std::int64_t frame = 0;
    double turn_angle_deg = 0.0;
};

/// Greedy temporal suppression: repeatedly keep the highest-angle candidate
/// (earliest frame on ties) and discard everything closer than
/// min_gap_frames to a kept one. Input must be sorted by frame.
std::vector<std::int64_t> suppress_close_events(
    std::span<const ShotCandidate> candidates, int min_gap_frames);

/// Striker = player whose court position is nearest the ball at the shot
/// frame (positions searched within +-3 frames). Returns 0 when neither
/// player is within max_strike_distance_m; exact ties go to player 1.
int attribute_shot(std::int64_t shot_frame, Vec2 ball_court,
                   const PlayerTrack& player1, const PlayerTrack& player2,
                   double max_strike_distance_m = kDefaultMaxStrikeDistanceM);

}  // namespace courtmetrics
