#include "courtmetrics/events.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "courtmetrics/errors.hpp"

namespace courtmetrics {
namespace {

struct WindowStats {
    Vec2 v_pre;   // per-frame velocity over [i-w, i]
    Vec2 v_post;  // per-frame velocity over [i, i+w]
    double angle_deg = 0.0;
    double ratio = 1.0;
    bool valid = false;
};

/// Turn angle and speed-change ratio at index i of a dense optional sequence.
/// Invalid when any sample in [i-w, i+w] is missing or either window velocity
/// is numerically zero.
WindowStats window_stats(std::span<const std::optional<Vec2>> seq, std::size_t i, int w) {
    WindowStats s;
    const std::size_t uw = static_cast<std::size_t>(w);
    if (i < uw || i + uw >= seq.size()) return s;
    for (std::size_t k = i - uw; k <= i + uw; ++k)
        if (!seq[k]) return s;
    s.v_pre = (*seq[i] - *seq[i - uw]) / static_cast<double>(w);
    s.v_post = (*seq[i + uw] - *seq[i]) / static_cast<double>(w);
    const double m_pre = norm(s.v_pre);
    const double m_post = norm(s.v_post);
    if (m_pre < kSpeedEpsilon || m_post < kSpeedEpsilon) return s;
    const double cos_angle =
        std::clamp(dot(s.v_pre, s.v_post) / (m_pre * m_post), -1.0, 1.0);
    s.angle_deg = std::acos(cos_angle) * 180.0 / std::numbers::pi;
    s.ratio = std::max(m_pre, m_post) / std::max(std::min(m_pre, m_post), kSpeedEpsilon);
    s.valid = true;
    return s;
}

void check_config(const EventConfig& cfg, double fps) {
    if (!(cfg.angle_threshold_deg > 0.0 && cfg.angle_threshold_deg < 180.0))
        raise(ErrorCategory::parameter, "angle threshold must lie in (0, 180) degrees");
    if (!(cfg.speed_change_ratio >= 1.0))
        raise(ErrorCategory::parameter, "speed-change ratio must be >= 1");
    if (cfg.min_gap_frames < 0)
        raise(ErrorCategory::parameter, "min gap must be non-negative");
    if (cfg.velocity_window < 2)
        raise(ErrorCategory::parameter, "velocity window must be >= 2");
    if (!(fps > 0.0)) raise(ErrorCategory::parameter, "fps must be positive");
}

}  // namespace

std::vector<std::int64_t> suppress_close_events(std::span<const ShotCandidate> candidates,
                                                int min_gap_frames) {
    if (min_gap_frames < 0)
        raise(ErrorCategory::parameter, "min gap must be non-negative");
    for (std::size_t i = 1; i < candidates.size(); ++i)
        if (candidates[i].frame <= candidates[i - 1].frame)
            raise(ErrorCategory::parameter, "candidates must be sorted by frame, no duplicates");

    std::vector<ShotCandidate> by_score(candidates.begin(), candidates.end());
    std::sort(by_score.begin(), by_score.end(), [](const ShotCandidate& a, const ShotCandidate& b) {
        if (a.turn_angle_deg != b.turn_angle_deg) return a.turn_angle_deg > b.turn_angle_deg;
        return a.frame < b.frame;
    });
    std::vector<std::int64_t> kept;
    for (const ShotCandidate& c : by_score) {
        const bool clear = std::all_of(kept.begin(), kept.end(), [&](std::int64_t f) {
            return std::llabs(c.frame - f) >= min_gap_frames;
        });
        if (clear) kept.push_back(c.frame);
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

std::vector<ShotEvent> detect_shots(const BallTrack& track, const EventConfig& cfg, double fps) {
    check_config(cfg, fps);
    const std::size_t n = track.positions.size();
    const int w = cfg.velocity_window;
    if (n < static_cast<std::size_t>(2 * w + 1)) return {};

    // Court plane when projections exist, image plane otherwise. Candidates
    // come from the smoothed path; localization reads the observed one.
    const bool court_space =
        std::any_of(track.court_smoothed.begin(), track.court_smoothed.end(),
                    [](const std::optional<Vec2>& p) { return p.has_value(); });
    std::vector<std::optional<Vec2>> smoothed_path(n), observed_path(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (court_space) {
            smoothed_path[i] = track.court_smoothed[i];
            observed_path[i] = track.court_positions[i];
        } else {
            smoothed_path[i] = track.smoothed[i];
            if (track.positions[i]) observed_path[i] = track.positions[i]->center;
        }
    }

    std::vector<ShotCandidate> candidates;
    std::vector<WindowStats> stats(n);
    for (std::size_t i = w; i + w < n; ++i) {
        stats[i] = window_stats(smoothed_path, i, w);
        if (!stats[i].valid) continue;
        if (stats[i].angle_deg > cfg.angle_threshold_deg &&
            stats[i].ratio >= cfg.speed_change_ratio)
            candidates.push_back(
                {track.start_frame + static_cast<std::int64_t>(i), stats[i].angle_deg});
    }
    const std::vector<std::int64_t> kept = suppress_close_events(candidates, cfg.min_gap_frames);

    // The smoother rounds trajectory corners, which can shift the angle peak
    // by a frame; the observed path keeps the corner sharp, so re-localize
    // each kept frame to the sharpest observed turn nearby.
    std::vector<ShotEvent> shots;
    for (std::int64_t frame : kept) {
        const std::size_t i = track.index_of(frame);
        std::size_t best = n;  // sentinel: no observed window available
        double best_angle = -1.0;
        for (int d = 0; d <= w; ++d) {
            for (const int off : {-d, d}) {
                const std::int64_t g = static_cast<std::int64_t>(i) + off;
                if (g < w || g + w >= static_cast<std::int64_t>(n)) continue;
                const WindowStats s = window_stats(observed_path, static_cast<std::size_t>(g), w);
                if (s.valid && s.angle_deg > best_angle) {
                    best_angle = s.angle_deg;
                    best = static_cast<std::size_t>(g);
                }
                if (d == 0) break;
            }
        }

        ShotEvent shot;
        const std::size_t at = best < n ? best : i;
        const WindowStats s = best < n ? window_stats(observed_path, at, w) : stats[i];
        shot.frame_index = track.start_frame + static_cast<std::int64_t>(at);
        shot.turn_angle_deg = s.angle_deg;
        shot.pre_velocity = s.v_pre * fps;
        shot.post_velocity = s.v_post * fps;
        if (track.positions[at])
            shot.ball_image = track.positions[at]->center;
        else if (track.smoothed[at])
            shot.ball_image = *track.smoothed[at];
        if (track.court_positions[at])
            shot.ball_court = track.court_positions[at];
        else if (track.court_smoothed[at])
            shot.ball_court = track.court_smoothed[at];
        shots.push_back(shot);
    }

    // Localization moves frames by at most w, which can in principle pinch a
    // pair below the gap; suppress once more on the final frames.
    std::sort(shots.begin(), shots.end(),
              [](const ShotEvent& a, const ShotEvent& b) { return a.frame_index < b.frame_index; });
    std::vector<ShotCandidate> final_candidates;
    for (const ShotEvent& s : shots)
        if (final_candidates.empty() || final_candidates.back().frame != s.frame_index)
            final_candidates.push_back({s.frame_index, s.turn_angle_deg});
    const std::vector<std::int64_t> final_kept =
        suppress_close_events(final_candidates, cfg.min_gap_frames);
    std::vector<ShotEvent> out;
    for (const ShotEvent& s : shots)
        if (std::binary_search(final_kept.begin(), final_kept.end(), s.frame_index) &&
            (out.empty() || out.back().frame_index != s.frame_index))
            out.push_back(s);
    return out;
}

int attribute_shot(std::int64_t shot_frame, Vec2 ball_court, const PlayerTrack& player1,
                   const PlayerTrack& player2, double max_strike_distance_m) {
    if (!(max_strike_distance_m > 0.0))
        raise(ErrorCategory::parameter, "max strike distance must be positive");
    const auto court_position_near = [&](const PlayerTrack& track) -> std::optional<Vec2> {
        for (int d = 0; d <= 3; ++d) {
            for (const int off : {-d, d}) {
                const std::int64_t f = shot_frame + off;
                if (track.contains(f) && track.court_positions[track.index_of(f)])
                    return track.court_positions[track.index_of(f)];
                if (d == 0) break;
            }
        }
        return std::nullopt;
    };
    const std::optional<Vec2> p1 = court_position_near(player1);
    const std::optional<Vec2> p2 = court_position_near(player2);
    const double d1 = p1 ? distance(*p1, ball_court) : std::numeric_limits<double>::infinity();
    const double d2 = p2 ? distance(*p2, ball_court) : std::numeric_limits<double>::infinity();
    if (std::min(d1, d2) > max_strike_distance_m) return 0;
    return d1 <= d2 ? 1 : 2;
}

}  // namespace courtmetrics
