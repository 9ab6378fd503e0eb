#include "courtmetrics/tracking.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <utility>

#include "courtmetrics/errors.hpp"

namespace courtmetrics {
namespace {

using Mat4 = Eigen::Matrix4d;
using Vec4 = Eigen::Vector4d;
using Mat2 = Eigen::Matrix2d;

/// Constant-velocity Kalman filter + RTS smoother over one contiguous run of
/// measurements. State [x, y, vx, vy] with velocity in px/s; the initial
/// velocity comes from the first measurement difference, so an exactly linear
/// track is reproduced (the model fits it with zero innovation).
std::vector<Vec2> smooth_run(std::span<const Vec2> zs, const KalmanParams& params, double fps) {
    const std::size_t n = zs.size();
    if (n <= 1) return {zs.begin(), zs.end()};
    const double dt = 1.0 / fps;

    Mat4 f = Mat4::Identity();
    f(0, 2) = dt;
    f(1, 3) = dt;
    // White-noise-acceleration Q; sigma_a^2 chosen so the per-frame velocity
    // variance increment equals process_noise in px^2/frame^2.
    const double sa2 = params.process_noise * fps * fps * fps * fps;
    const double q00 = sa2 * dt * dt * dt * dt / 4.0;
    const double q01 = sa2 * dt * dt * dt / 2.0;
    const double q11 = sa2 * dt * dt;
    Mat4 q = Mat4::Zero();
    q(0, 0) = q(1, 1) = q00;
    q(0, 2) = q(2, 0) = q(1, 3) = q(3, 1) = q01;
    q(2, 2) = q(3, 3) = q11;
    const Mat2 r = Mat2::Identity() * params.measurement_noise;

    Vec4 x{zs[0].x, zs[0].y, (zs[1].x - zs[0].x) / dt, (zs[1].y - zs[0].y) / dt};
    Mat4 p = Mat4::Zero();
    p(0, 0) = p(1, 1) = params.initial_variance;
    const double vel_var =
        2.0 * params.measurement_noise * fps * fps + params.initial_variance * fps * fps;
    p(2, 2) = p(3, 3) = vel_var;

    std::vector<Vec4> x_filt(n), x_pred(n);
    std::vector<Mat4> p_filt(n), p_pred(n);
    x_filt[0] = x_pred[0] = x;
    p_filt[0] = p_pred[0] = p;
    for (std::size_t k = 1; k < n; ++k) {
        const Vec4 xp = f * x_filt[k - 1];
        const Mat4 pp = f * p_filt[k - 1] * f.transpose() + q;
        x_pred[k] = xp;
        p_pred[k] = pp;
        const Eigen::Vector2d innov{zs[k].x - xp(0), zs[k].y - xp(1)};
        const Mat2 s = pp.topLeftCorner<2, 2>() + r;
        const Eigen::Matrix<double, 4, 2> gain = pp.leftCols<2>() * s.inverse();
        x_filt[k] = xp + gain * innov;
        Mat4 i_kh = Mat4::Identity();
        i_kh.leftCols<2>() -= gain;
        p_filt[k] = i_kh * pp;
    }

    std::vector<Vec4> x_sm = x_filt;
    std::vector<Mat4> p_sm = p_filt;
    for (std::size_t k = n - 1; k-- > 0;) {
        const Mat4 c = p_filt[k] * f.transpose() * p_pred[k + 1].inverse();
        x_sm[k] = x_filt[k] + c * (x_sm[k + 1] - x_pred[k + 1]);
        p_sm[k] = p_filt[k] + c * (p_sm[k + 1] - p_pred[k + 1]) * c.transpose();
    }

    std::vector<Vec2> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = {x_sm[k](0), x_sm[k](1)};
    return out;
}

}  // namespace

const char* to_string(Provenance p) {
    switch (p) {
        case Provenance::detected: return "detected";
        case Provenance::interpolated: return "interpolated";
        case Provenance::missing: return "missing";
    }
    return "missing";
}

std::pair<PlayerTrack, PlayerTrack> identify_players(std::span<const DetectionFrame> frames,
                                                     std::span<const Vec2> boundary_image,
                                                     double margin_px) {
    if (frames.empty())
        raise(ErrorCategory::empty_track, "player identification needs at least one frame");
    const Vec2 centroid = polygon_centroid(boundary_image);
    const std::int64_t first = frames.front().frame_index;
    const std::int64_t last = frames.back().frame_index;
    const std::size_t span = static_cast<std::size_t>(last - first + 1);

    PlayerTrack near_player, far_player;
    near_player.player_id = 1;
    far_player.player_id = 2;
    near_player.start_frame = far_player.start_frame = first;
    near_player.positions.resize(span);
    far_player.positions.resize(span);
    near_player.court_positions.resize(span);
    far_player.court_positions.resize(span);

    bool identities_fixed = false;
    std::array<Vec2, 2> last_pair{};  // foot points of players 1 and 2

    for (const DetectionFrame& frame : frames) {
        std::vector<PlayerObservation> candidates;
        for (const PersonDetection& person : frame.persons) {
            const Vec2 foot = person.bbox.foot_point();
            if (point_in_or_near_court(foot, boundary_image, margin_px))
                candidates.push_back({foot, person.bbox, person.confidence});
        }
        if (candidates.size() < 2) continue;  // frame stays missing, no failure
        std::stable_sort(candidates.begin(), candidates.end(),
                         [&](const PlayerObservation& a, const PlayerObservation& b) {
                             return distance(a.foot_point, centroid) <
                                    distance(b.foot_point, centroid);
                         });
        candidates.resize(2);

        std::size_t near_idx;
        if (!identities_fixed) {
            near_idx = candidates[0].foot_point.y >= candidates[1].foot_point.y ? 0 : 1;
            identities_fixed = true;
        } else {
            const PairAssignment assignment = associate_identities(
                last_pair, {candidates[0].foot_point, candidates[1].foot_point});
            near_idx = assignment.swapped ? 1 : 0;
        }
        const PlayerObservation& near_obs = candidates[near_idx];
        const PlayerObservation& far_obs = candidates[1 - near_idx];
        const std::size_t i = static_cast<std::size_t>(frame.frame_index - first);
        near_player.positions[i] = near_obs;
        far_player.positions[i] = far_obs;
        last_pair = {near_obs.foot_point, far_obs.foot_point};
    }
    return {std::move(near_player), std::move(far_player)};
}

PairAssignment associate_identities(const std::array<Vec2, 2>& previous,
                                    const std::array<Vec2, 2>& current) {
    const auto sq = [](Vec2 a, Vec2 b) {
        const Vec2 d = a - b;
        return dot(d, d);
    };
    const double straight = sq(current[0], previous[0]) + sq(current[1], previous[1]);
    const double crossed = sq(current[0], previous[1]) + sq(current[1], previous[0]);
    if (crossed < straight) return {true, crossed};
    return {false, straight};
}

std::pair<std::int64_t, std::vector<std::optional<RawBallSample>>> extract_ball_samples(
    std::span<const DetectionFrame> frames) {
    if (frames.empty()) return {0, {}};
    const std::int64_t first = frames.front().frame_index;
    const std::int64_t last = frames.back().frame_index;
    std::vector<std::optional<RawBallSample>> samples(static_cast<std::size_t>(last - first + 1));
    for (const DetectionFrame& frame : frames)
        if (frame.ball)
            samples[static_cast<std::size_t>(frame.frame_index - first)] =
                RawBallSample{frame.ball->bbox.center(), frame.ball->confidence};
    return {first, std::move(samples)};
}

BallTrack interpolate_ball(std::int64_t start_frame,
                           std::span<const std::optional<RawBallSample>> raw, double low_conf,
                           int max_gap_frames) {
    if (max_gap_frames < 0)
        raise(ErrorCategory::parameter, "max interpolation gap must be non-negative");
    BallTrack track;
    track.start_frame = start_frame;
    track.positions.resize(raw.size());
    track.smoothed.resize(raw.size());
    track.court_positions.resize(raw.size());
    track.court_smoothed.resize(raw.size());

    std::vector<std::size_t> anchors;
    for (std::size_t i = 0; i < raw.size(); ++i)
        if (raw[i] && raw[i]->confidence >= low_conf) anchors.push_back(i);
    if (anchors.empty())
        raise(ErrorCategory::empty_track, "no ball detection at or above confidence " +
                                              std::to_string(low_conf));

    for (std::size_t i : anchors)
        track.positions[i] = BallObservation{raw[i]->center, raw[i]->confidence,
                                             Provenance::detected};
    for (std::size_t a = 0; a + 1 < anchors.size(); ++a) {
        const std::size_t lo = anchors[a];
        const std::size_t hi = anchors[a + 1];
        const std::size_t gap = hi - lo - 1;
        if (gap == 0 || gap > static_cast<std::size_t>(max_gap_frames)) continue;
        const Vec2 p0 = raw[lo]->center;
        const Vec2 p1 = raw[hi]->center;
        for (std::size_t i = lo + 1; i < hi; ++i) {
            const double t = static_cast<double>(i - lo) / static_cast<double>(hi - lo);
            track.positions[i] =
                BallObservation{p0 + (p1 - p0) * t, 0.0, Provenance::interpolated};
        }
    }
    return track;
}

BallTrack kalman_smooth(BallTrack track, const KalmanParams& params, double fps) {
    if (!(params.process_noise > 0.0) || !(params.measurement_noise > 0.0) ||
        !(params.initial_variance > 0.0))
        raise(ErrorCategory::parameter, "Kalman parameters must be strictly positive");
    if (!(fps > 0.0)) raise(ErrorCategory::parameter, "fps must be positive");

    const std::size_t n = track.positions.size();
    track.smoothed.assign(n, std::nullopt);
    std::size_t i = 0;
    while (i < n) {
        if (!track.positions[i]) {
            ++i;
            continue;
        }
        std::size_t j = i;
        std::vector<Vec2> run;
        while (j < n && track.positions[j]) run.push_back(track.positions[j++]->center);
        const std::vector<Vec2> smoothed = smooth_run(run, params, fps);
        for (std::size_t k = 0; k < smoothed.size(); ++k) track.smoothed[i + k] = smoothed[k];
        i = j;
    }
    return track;
}

BallTrack project_track(BallTrack track, const Homography& h) {
    const std::size_t n = track.positions.size();
    track.court_positions.assign(n, std::nullopt);
    track.court_smoothed.assign(n, std::nullopt);
    for (std::size_t i = 0; i < n; ++i) {
        if (track.positions[i]) track.court_positions[i] = project(h, track.positions[i]->center);
        if (track.smoothed[i]) track.court_smoothed[i] = project(h, *track.smoothed[i]);
    }
    return track;
}

PlayerTrack project_track(PlayerTrack track, const Homography& h) {
    const std::size_t n = track.positions.size();
    track.court_positions.assign(n, std::nullopt);
    for (std::size_t i = 0; i < n; ++i)
        if (track.positions[i])
            track.court_positions[i] = project(h, track.positions[i]->foot_point);
    return track;
}

BallTrack project_track(BallTrack track, std::span<const std::optional<Homography>> per_frame) {
    const std::size_t n = track.positions.size();
    if (per_frame.size() != n)
        raise(ErrorCategory::parameter, "per-frame homography count must match track length");
    track.court_positions.assign(n, std::nullopt);
    track.court_smoothed.assign(n, std::nullopt);
    for (std::size_t i = 0; i < n; ++i) {
        if (!per_frame[i]) continue;
        if (track.positions[i])
            track.court_positions[i] = project(*per_frame[i], track.positions[i]->center);
        if (track.smoothed[i]) track.court_smoothed[i] = project(*per_frame[i], *track.smoothed[i]);
    }
    return track;
}

PlayerTrack project_track(PlayerTrack track,
                          std::span<const std::optional<Homography>> per_frame) {
    const std::size_t n = track.positions.size();
    if (per_frame.size() != n)
        raise(ErrorCategory::parameter, "per-frame homography count must match track length");
    track.court_positions.assign(n, std::nullopt);
    for (std::size_t i = 0; i < n; ++i)
        if (per_frame[i] && track.positions[i])
            track.court_positions[i] = project(*per_frame[i], track.positions[i]->foot_point);
    return track;
}

}  // namespace courtmetrics
