#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "courtmetrics/court.hpp"
#include "courtmetrics/geometry.hpp"
#include "courtmetrics/ingest.hpp"

namespace courtmetrics {

inline constexpr double kDefaultLowConfidence = 0.4;
inline constexpr int kDefaultMaxGapFrames = 30;
inline constexpr double kDefaultMarginPx = 100.0;

enum class Provenance { detected, interpolated, missing };

const char* to_string(Provenance p);

struct BallObservation {
    Vec2 center;
    double confidence = 0.0;
    Provenance provenance = Provenance::missing;
};

/// Gap-free smoothed ball track. All per-frame vectors share one indexing:
/// element i corresponds to frame start_frame + i.
///
/// court_positions projects the observed/interpolated centers, which are
/// unbiased at trajectory corners; court_smoothed projects the Kalman
/// output. Shot detection scans the smoothed path, measurements (speeds,
/// shot positions) read the observed one.
struct BallTrack {
    std::int64_t start_frame = 0;
    std::vector<std::optional<BallObservation>> positions;
    std::vector<std::optional<Vec2>> smoothed;  // image px, Kalman + RTS pass
    std::vector<std::optional<Vec2>> court_positions;
    std::vector<std::optional<Vec2>> court_smoothed;

    std::int64_t end_frame() const {
        return start_frame + static_cast<std::int64_t>(positions.size());
    }
    bool contains(std::int64_t frame) const {
        return frame >= start_frame && frame < end_frame();
    }
    std::size_t index_of(std::int64_t frame) const {
        return static_cast<std::size_t>(frame - start_frame);
    }
};

struct PlayerObservation {
    Vec2 foot_point;  // bottom-center of the bounding box
    BBox bbox;
    double confidence = 0.0;
};

struct PlayerTrack {
    int player_id = 0;  // 1 = near half (larger image y), 2 = far half
    std::int64_t start_frame = 0;
    std::vector<std::optional<PlayerObservation>> positions;
    std::vector<std::optional<Vec2>> court_positions;

    bool contains(std::int64_t frame) const {
        return frame >= start_frame &&
               frame < start_frame + static_cast<std::int64_t>(positions.size());
    }
    std::size_t index_of(std::int64_t frame) const {
        return static_cast<std::size_t>(frame - start_frame);
    }
};

/// Constant-velocity Kalman smoothing parameters, image pixels.
/// process_noise is the per-frame velocity variance increment (px^2/frame^2),
/// measurement_noise the per-axis position variance (px^2).
struct KalmanParams {
    double process_noise = 1.0;
    double measurement_noise = 9.0;
    double initial_variance = 100.0;
};

/// Select the two active players per frame: persons are filtered by foot
/// position against the image-space court boundary (within or near it),
/// sorted by distance to the boundary centroid, and the top two kept.
/// Identities are assigned by image half at the first valid frame (larger
/// foot y = player 1) and kept temporally consistent afterwards. Frames with
/// fewer than two candidates yield missing positions, not a failure.
std::pair<PlayerTrack, PlayerTrack> identify_players(
    std::span<const DetectionFrame> frames, std::span<const Vec2> boundary_image,
    double margin_px = kDefaultMarginPx);

struct PairAssignment {
    bool swapped = false;  // true when current[0] follows previous[1]
    double cost = 0.0;     // sum of squared displacements of the chosen pairing
};

/// Two-candidate association: picks the pairing with the smaller sum of
/// squared displacements (ties keep the identity assignment).
PairAssignment associate_identities(const std::array<Vec2, 2>& previous,
                                    const std::array<Vec2, 2>& current);

struct RawBallSample {
    Vec2 center;
    double confidence = 0.0;
};

/// Fill gaps in a raw ball sequence. Frames that are missing or below
/// low_conf and lie strictly between two anchors (confidence >= low_conf)
/// at most max_gap_frames apart receive the linear interpolation of those
/// anchors. Frames before the first or after the last anchor stay missing,
/// as do gaps longer than max_gap_frames. Throws Error{empty_track} when no
/// anchor exists at all.
BallTrack interpolate_ball(std::int64_t start_frame,
                           std::span<const std::optional<RawBallSample>> raw,
                           double low_conf = kDefaultLowConfidence,
                           int max_gap_frames = kDefaultMaxGapFrames);

/// Dense per-frame ball samples for interpolate_ball; stream gaps become
/// missing samples. Returns the first frame index alongside.
std::pair<std::int64_t, std::vector<std::optional<RawBallSample>>>
extract_ball_samples(std::span<const DetectionFrame> frames);

/// Constant-velocity Kalman filter (state x, y, vx, vy; dt = 1/fps) followed
/// by a backward Rauch-Tung-Striebel pass. Each contiguous run of available
/// positions is smoothed independently; provenance is preserved and
/// single-sample runs pass through unchanged.
BallTrack kalman_smooth(BallTrack track, const KalmanParams& params, double fps);

/// Fill court_positions (and court_smoothed for the ball) by projecting every
/// available image position through h; missing stays missing.
BallTrack project_track(BallTrack track, const Homography& h);
PlayerTrack project_track(PlayerTrack track, const Homography& h);

/// Per-frame homography variant used by the pipeline (static-camera cadence:
/// entry i applies to frame start_frame + i of the track).
BallTrack project_track(BallTrack track,
                        std::span<const std::optional<Homography>> per_frame);
PlayerTrack project_track(PlayerTrack track,
                          std::span<const std::optional<Homography>> per_frame);

}  // namespace courtmetrics
