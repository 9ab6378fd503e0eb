#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "courtmetrics/court.hpp"
#include "courtmetrics/events.hpp"
#include "courtmetrics/tracking.hpp"

namespace courtmetrics {

inline constexpr double kDefaultMovementThresholdM = 0.3;
/// Outgoing per-shot speed window (frames), capped by the gap to the next shot.
inline constexpr int kShotSpeedWindowFrames = 10;
/// km/h per m/s.
inline constexpr double kKmhPerMs = 3.6;

inline constexpr int kDefaultHeatmapNx = 22;
inline constexpr int kDefaultHeatmapNy = 48;

struct SpeedMeasure {
    double chord_kmh = 0.0;  // straight-line displacement / elapsed time
    double path_kmh = 0.0;   // along-track length / elapsed time (diagnostic)
    double chord_m = 0.0;
    double path_m = 0.0;
    double seconds = 0.0;
};

/// Ball speed between two shot frames from court-plane positions.
/// Throws Error{interval} when shot_b <= shot_a and
/// Error{calibration_unavailable} when court positions are missing anywhere
/// on the interval.
SpeedMeasure ball_speed(const BallTrack& track, std::int64_t shot_a,
                        std::int64_t shot_b, double fps);

/// Scalar-calibration variant: pixel distances times meters_per_pixel.
SpeedMeasure ball_speed_scalar(const BallTrack& track, std::int64_t shot_a,
                               std::int64_t shot_b,
                               const CalibrationScale& scale, double fps);

struct PlayerSpeedSample {
    std::int64_t frame_a = 0;
    std::int64_t frame_b = 0;
    double mean_speed_kmh = 0.0;
    double distance_m = 0.0;  // court-plane chord
};

PlayerSpeedSample player_speed(const PlayerTrack& track, std::int64_t frame_a,
                               std::int64_t frame_b, double fps);

struct ReactionSample {
    int responder_id = 0;
    std::int64_t shot_frame = 0;
    std::int64_t response_frame = 0;
    double seconds = 0.0;
};

/// First frame after shot_frame (search bounded by window_end_frame,
/// exclusive) where the responder has moved more than movement_threshold_m
/// from their position at the shot frame. Empty optional when no such frame
/// exists, which is a valid no-response outcome rather than an error.
std::optional<ReactionSample> reaction_time(
    std::int64_t shot_frame, const PlayerTrack& responder,
    double movement_threshold_m, double fps, std::int64_t window_end_frame);

struct Rect {
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
};

struct Heatmap {
    int nx = 0, ny = 0;
    Rect bounds;
    std::vector<std::int64_t> counts;  // row-major, ny rows of nx
    std::int64_t overflow = 0;         // positions outside bounds

    std::int64_t total() const;
    std::int64_t& at(int ix, int iy) { return counts[static_cast<std::size_t>(iy) * nx + ix]; }
};

/// Bin court points into an nx * ny grid over bounds. Every input increments
/// exactly one cell or the overflow counter, so total() always equals the
/// input count. Points on the upper edges land in the last cell.
Heatmap heatmap(std::span<const Vec2> positions, int nx, int ny, Rect bounds);

struct ShotMetrics {
    std::int64_t frame = 0;
    double time_s = 0.0;
    int striker = 0;
    std::optional<Vec2> ball_court;
    Vec2 ball_image;
    double turn_angle_deg = 0.0;
    double incoming_speed_kmh = 0.0;  // window chord into the shot
    double outgoing_speed_kmh = 0.0;  // window chord out of the shot
    /// Whole-interval speed to the next shot; absent for the last shot.
    std::optional<SpeedMeasure> to_next_shot;
};

struct PlayerSummary {
    int player_id = 0;
    int shot_count = 0;
    double average_shot_speed_kmh = 0.0;
    double average_speed_kmh = 0.0;
    double total_distance_m = 0.0;
};

struct MatchMetrics {
    double fps = 0.0;
    std::string calibration_mode;  // "homography" or "scalar"
    std::string velocity_space;    // "court" or "image"
    std::optional<CalibrationScale> scale;
    std::vector<ShotMetrics> shots;
    std::array<std::vector<PlayerSpeedSample>, 2> player_speeds;
    std::vector<ReactionSample> reaction_times;
    Heatmap ball_heatmap;
    std::array<Heatmap, 2> player_heatmaps;
    std::array<PlayerSummary, 2> players;
};

struct MetricsConfig {
    double fps = 30.0;
    double movement_threshold_m = kDefaultMovementThresholdM;
    bool scalar_calibration = false;
    std::optional<CalibrationScale> scale;
    int heatmap_nx = kDefaultHeatmapNx;
    int heatmap_ny = kDefaultHeatmapNy;
};

/// Deterministic aggregation of every per-match output: per-shot speeds,
/// between-shot player speeds, per-responder reaction times, position
/// heatmaps and per-player averages.
MatchMetrics summarize(const BallTrack& ball,
                       const std::array<PlayerTrack, 2>& players,
                       std::span<const ShotEvent> shots,
                       const MetricsConfig& cfg);

/// Serialized artifacts. All floating-point values are written with 9
/// significant digits so reruns are byte-identical.
std::string to_json(const MatchMetrics& m);
std::string shots_csv(const MatchMetrics& m);
std::string heatmap_csv(const Heatmap& h);
std::string minicourt_jsonl(const BallTrack& ball,
                            const std::array<PlayerTrack, 2>& players);

}  // namespace courtmetrics
