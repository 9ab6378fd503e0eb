#include "courtmetrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "courtmetrics/detail/jsonfmt.hpp"
#include "courtmetrics/errors.hpp"

namespace courtmetrics {
namespace {

using detail::format9;
using detail::ordered_json;
using detail::round9;

void check_interval(std::int64_t a, std::int64_t b) {
    if (b <= a)
        raise(ErrorCategory::interval, "interval end " + std::to_string(b) +
                                           " must be after start " + std::to_string(a));
}

void check_fps(double fps) {
    if (!(fps > 0.0)) raise(ErrorCategory::parameter, "fps must be positive");
}

/// Court position at every frame of [a, b], or an error naming the hole.
std::vector<Vec2> court_span(const BallTrack& track, std::int64_t a, std::int64_t b) {
    std::vector<Vec2> out;
    out.reserve(static_cast<std::size_t>(b - a + 1));
    for (std::int64_t f = a; f <= b; ++f) {
        if (!track.contains(f) || !track.court_positions[track.index_of(f)])
            raise(ErrorCategory::calibration_unavailable,
                  "no court-plane ball position at frame " + std::to_string(f));
        out.push_back(*track.court_positions[track.index_of(f)]);
    }
    return out;
}

SpeedMeasure measure_from_points(std::span<const Vec2> pts, double seconds) {
    SpeedMeasure m;
    m.seconds = seconds;
    m.chord_m = distance(pts.front(), pts.back());
    for (std::size_t i = 1; i < pts.size(); ++i) m.path_m += distance(pts[i - 1], pts[i]);
    m.chord_kmh = m.chord_m / seconds * kKmhPerMs;
    m.path_kmh = m.path_m / seconds * kKmhPerMs;
    return m;
}

ordered_json vec_json(const Vec2& v) {
    return {{"x", round9(v.x)}, {"y", round9(v.y)}};
}

ordered_json speed_json(const SpeedMeasure& m) {
    return {{"chord_kmh", round9(m.chord_kmh)},
            {"path_kmh", round9(m.path_kmh)},
            {"chord_m", round9(m.chord_m)},
            {"path_m", round9(m.path_m)},
            {"seconds", round9(m.seconds)}};
}

ordered_json heatmap_json(const Heatmap& h) {
    return {{"nx", h.nx},
            {"ny", h.ny},
            {"bounds",
             {{"x0", round9(h.bounds.x0)},
              {"y0", round9(h.bounds.y0)},
              {"x1", round9(h.bounds.x1)},
              {"y1", round9(h.bounds.y1)}}},
            {"counts", h.counts},
            {"overflow", h.overflow}};
}

}  // namespace

SpeedMeasure ball_speed(const BallTrack& track, std::int64_t shot_a, std::int64_t shot_b,
                        double fps) {
    check_interval(shot_a, shot_b);
    check_fps(fps);
    const std::vector<Vec2> pts = court_span(track, shot_a, shot_b);
    return measure_from_points(pts, static_cast<double>(shot_b - shot_a) / fps);
}

SpeedMeasure ball_speed_scalar(const BallTrack& track, std::int64_t shot_a, std::int64_t shot_b,
                               const CalibrationScale& scale, double fps) {
    check_interval(shot_a, shot_b);
    check_fps(fps);
    if (!(scale.meters_per_pixel > 0.0))
        raise(ErrorCategory::parameter, "meters_per_pixel must be positive");
    std::vector<Vec2> pts;
    for (std::int64_t f = shot_a; f <= shot_b; ++f) {
        if (!track.contains(f) || !track.positions[track.index_of(f)])
            raise(ErrorCategory::calibration_unavailable,
                  "no ball position at frame " + std::to_string(f));
        pts.push_back(track.positions[track.index_of(f)]->center * scale.meters_per_pixel);
    }
    return measure_from_points(pts, static_cast<double>(shot_b - shot_a) / fps);
}

PlayerSpeedSample player_speed(const PlayerTrack& track, std::int64_t frame_a,
                               std::int64_t frame_b, double fps) {
    check_interval(frame_a, frame_b);
    check_fps(fps);
    const auto at = [&](std::int64_t f) -> Vec2 {
        if (!track.contains(f) || !track.court_positions[track.index_of(f)])
            raise(ErrorCategory::calibration_unavailable,
                  "no court-plane player position at frame " + std::to_string(f));
        return *track.court_positions[track.index_of(f)];
    };
    PlayerSpeedSample s;
    s.frame_a = frame_a;
    s.frame_b = frame_b;
    s.distance_m = distance(at(frame_a), at(frame_b));
    s.mean_speed_kmh = s.distance_m / (static_cast<double>(frame_b - frame_a) / fps) * kKmhPerMs;
    return s;
}

std::optional<ReactionSample> reaction_time(std::int64_t shot_frame, const PlayerTrack& responder,
                                            double movement_threshold_m, double fps,
                                            std::int64_t window_end_frame) {
    check_fps(fps);
    if (movement_threshold_m < 0.0)
        raise(ErrorCategory::parameter, "movement threshold must be non-negative");
    if (!responder.contains(shot_frame) ||
        !responder.court_positions[responder.index_of(shot_frame)])
        return std::nullopt;
    const Vec2 origin = *responder.court_positions[responder.index_of(shot_frame)];
    for (std::int64_t f = shot_frame + 1; f < window_end_frame; ++f) {
        if (!responder.contains(f)) break;
        const std::optional<Vec2>& pos = responder.court_positions[responder.index_of(f)];
        if (pos && distance(*pos, origin) > movement_threshold_m)
            return ReactionSample{responder.player_id, shot_frame, f,
                                  static_cast<double>(f - shot_frame) / fps};
    }
    return std::nullopt;
}

std::int64_t Heatmap::total() const {
    std::int64_t sum = overflow;
    for (std::int64_t c : counts) sum += c;
    return sum;
}

Heatmap heatmap(std::span<const Vec2> positions, int nx, int ny, Rect bounds) {
    if (nx < 1 || ny < 1) raise(ErrorCategory::parameter, "heatmap grid must be at least 1x1");
    if (!(bounds.x1 > bounds.x0) || !(bounds.y1 > bounds.y0))
        raise(ErrorCategory::parameter, "heatmap bounds must have positive extent");
    Heatmap h;
    h.nx = nx;
    h.ny = ny;
    h.bounds = bounds;
    h.counts.assign(static_cast<std::size_t>(nx) * ny, 0);
    for (const Vec2& p : positions) {
        if (p.x < bounds.x0 || p.x > bounds.x1 || p.y < bounds.y0 || p.y > bounds.y1) {
            ++h.overflow;
            continue;
        }
        const int ix = std::min(
            static_cast<int>((p.x - bounds.x0) / (bounds.x1 - bounds.x0) * nx), nx - 1);
        const int iy = std::min(
            static_cast<int>((p.y - bounds.y0) / (bounds.y1 - bounds.y0) * ny), ny - 1);
        ++h.at(ix, iy);
    }
    return h;
}

MatchMetrics summarize(const BallTrack& ball, const std::array<PlayerTrack, 2>& players,
                       std::span<const ShotEvent> shots, const MetricsConfig& cfg) {
    check_fps(cfg.fps);
    MatchMetrics m;
    m.fps = cfg.fps;
    m.calibration_mode = cfg.scalar_calibration ? "scalar" : "homography";
    const bool court_space = std::any_of(ball.court_positions.begin(), ball.court_positions.end(),
                                         [](const std::optional<Vec2>& p) { return p.has_value(); });
    m.velocity_space = court_space ? "court" : "image";
    m.scale = cfg.scale;

    const bool scalar = cfg.scalar_calibration && cfg.scale.has_value();
    const auto interval_speed = [&](std::int64_t a,
                                    std::int64_t b) -> std::optional<SpeedMeasure> {
        if (b <= a) return std::nullopt;
        for (std::int64_t f = a; f <= b; ++f) {
            if (!ball.contains(f)) return std::nullopt;
            if (scalar ? !ball.positions[ball.index_of(f)].has_value()
                       : !ball.court_positions[ball.index_of(f)].has_value())
                return std::nullopt;
        }
        return scalar ? ball_speed_scalar(ball, a, b, *cfg.scale, cfg.fps)
                      : ball_speed(ball, a, b, cfg.fps);
    };

    for (std::size_t k = 0; k < shots.size(); ++k) {
        const ShotEvent& e = shots[k];
        ShotMetrics sm;
        sm.frame = e.frame_index;
        sm.time_s = static_cast<double>(e.frame_index) / cfg.fps;
        sm.striker = e.striker_id;
        sm.ball_court = e.ball_court;
        sm.ball_image = e.ball_image;
        sm.turn_angle_deg = e.turn_angle_deg;

        std::int64_t out_end = e.frame_index + kShotSpeedWindowFrames;
        if (k + 1 < shots.size()) out_end = std::min(out_end, shots[k + 1].frame_index);
        out_end = std::min(out_end, ball.end_frame() - 1);
        if (const auto sp = interval_speed(e.frame_index, out_end))
            sm.outgoing_speed_kmh = sp->chord_kmh;

        std::int64_t in_start = e.frame_index - kShotSpeedWindowFrames;
        if (k > 0) in_start = std::max(in_start, shots[k - 1].frame_index);
        in_start = std::max(in_start, ball.start_frame);
        if (const auto sp = interval_speed(in_start, e.frame_index))
            sm.incoming_speed_kmh = sp->chord_kmh;

        if (k + 1 < shots.size())
            sm.to_next_shot = interval_speed(e.frame_index, shots[k + 1].frame_index);
        m.shots.push_back(std::move(sm));
    }

    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t k = 0; k + 1 < shots.size(); ++k) {
            const std::int64_t a = shots[k].frame_index;
            const std::int64_t b = shots[k + 1].frame_index;
            const auto has_pos = [&](std::int64_t f) {
                return players[i].contains(f) &&
                       players[i].court_positions[players[i].index_of(f)].has_value();
            };
            if (has_pos(a) && has_pos(b))
                m.player_speeds[i].push_back(player_speed(players[i], a, b, cfg.fps));
        }
    }

    for (std::size_t k = 0; k < shots.size(); ++k) {
        if (shots[k].striker_id != 1 && shots[k].striker_id != 2) continue;
        const PlayerTrack& responder = players[shots[k].striker_id == 1 ? 1 : 0];
        const std::int64_t window_end = k + 1 < shots.size()
                                            ? shots[k + 1].frame_index
                                            : responder.start_frame +
                                                  static_cast<std::int64_t>(
                                                      responder.positions.size());
        if (const auto r = reaction_time(shots[k].frame_index, responder,
                                         cfg.movement_threshold_m, cfg.fps, window_end))
            m.reaction_times.push_back(*r);
    }

    // 0.5 m cells over the court plus a small apron; out-of-court positions
    // (players behind the baseline) land in the overflow counter.
    const Rect bounds{-5.5, -12.0, 5.5, 12.0};
    std::vector<Vec2> ball_points;
    for (const std::optional<Vec2>& p : ball.court_positions)
        if (p) ball_points.push_back(*p);
    m.ball_heatmap = heatmap(ball_points, cfg.heatmap_nx, cfg.heatmap_ny, bounds);
    for (std::size_t i = 0; i < 2; ++i) {
        std::vector<Vec2> pts;
        for (const std::optional<Vec2>& p : players[i].court_positions)
            if (p) pts.push_back(*p);
        m.player_heatmaps[i] = heatmap(pts, cfg.heatmap_nx, cfg.heatmap_ny, bounds);
    }

    for (std::size_t i = 0; i < 2; ++i) {
        PlayerSummary& ps = m.players[i];
        ps.player_id = static_cast<int>(i) + 1;
        double shot_speed_sum = 0.0;
        for (const ShotMetrics& s : m.shots) {
            if (s.striker != ps.player_id) continue;
            ++ps.shot_count;
            shot_speed_sum += s.outgoing_speed_kmh;
        }
        if (ps.shot_count > 0) ps.average_shot_speed_kmh = shot_speed_sum / ps.shot_count;
        double speed_sum = 0.0;
        for (const PlayerSpeedSample& s : m.player_speeds[i]) speed_sum += s.mean_speed_kmh;
        if (!m.player_speeds[i].empty())
            ps.average_speed_kmh = speed_sum / static_cast<double>(m.player_speeds[i].size());
        const auto& cp = players[i].court_positions;
        for (std::size_t f = 1; f < cp.size(); ++f)
            if (cp[f - 1] && cp[f]) ps.total_distance_m += distance(*cp[f - 1], *cp[f]);
    }
    return m;
}

std::string to_json(const MatchMetrics& m) {
    ordered_json obj;
    obj["fps"] = round9(m.fps);
    obj["calibration_mode"] = m.calibration_mode;
    obj["velocity_space"] = m.velocity_space;
    if (m.scale)
        obj["scale"] = {{"meters_per_pixel", round9(m.scale->meters_per_pixel)},
                        {"reference_used", m.scale->reference_used}};
    else
        obj["scale"] = nullptr;

    ordered_json shots = ordered_json::array();
    for (const ShotMetrics& s : m.shots) {
        ordered_json o;
        o["frame"] = s.frame;
        o["time_s"] = round9(s.time_s);
        o["striker"] = s.striker;
        o["ball_court"] = s.ball_court ? vec_json(*s.ball_court) : ordered_json(nullptr);
        o["ball_image"] = vec_json(s.ball_image);
        o["turn_angle_deg"] = round9(s.turn_angle_deg);
        o["incoming_speed_kmh"] = round9(s.incoming_speed_kmh);
        o["outgoing_speed_kmh"] = round9(s.outgoing_speed_kmh);
        o["to_next_shot"] = s.to_next_shot ? speed_json(*s.to_next_shot) : ordered_json(nullptr);
        shots.push_back(std::move(o));
    }
    obj["shots"] = std::move(shots);

    ordered_json speeds = ordered_json::array();
    for (const auto& series : m.player_speeds) {
        ordered_json list = ordered_json::array();
        for (const PlayerSpeedSample& s : series)
            list.push_back({{"frame_a", s.frame_a},
                            {"frame_b", s.frame_b},
                            {"mean_speed_kmh", round9(s.mean_speed_kmh)},
                            {"distance_m", round9(s.distance_m)}});
        speeds.push_back(std::move(list));
    }
    obj["player_speeds"] = std::move(speeds);

    ordered_json reactions = ordered_json::array();
    for (const ReactionSample& r : m.reaction_times)
        reactions.push_back({{"responder_id", r.responder_id},
                             {"shot_frame", r.shot_frame},
                             {"response_frame", r.response_frame},
                             {"seconds", round9(r.seconds)}});
    obj["reaction_times"] = std::move(reactions);

    ordered_json players = ordered_json::array();
    for (const PlayerSummary& p : m.players)
        players.push_back({{"player_id", p.player_id},
                           {"shot_count", p.shot_count},
                           {"average_shot_speed_kmh", round9(p.average_shot_speed_kmh)},
                           {"average_speed_kmh", round9(p.average_speed_kmh)},
                           {"total_distance_m", round9(p.total_distance_m)}});
    obj["players"] = std::move(players);

    obj["ball_heatmap"] = heatmap_json(m.ball_heatmap);
    obj["player_heatmaps"] =
        ordered_json::array({heatmap_json(m.player_heatmaps[0]), heatmap_json(m.player_heatmaps[1])});
    return obj.dump(2);
}

std::string shots_csv(const MatchMetrics& m) {
    std::string out =
        "frame,time_s,striker,ball_x_m,ball_y_m,turn_angle_deg,incoming_speed_kmh,"
        "outgoing_speed_kmh\n";
    for (const ShotMetrics& s : m.shots) {
        out += std::to_string(s.frame);
        out += ',';
        out += format9(s.time_s);
        out += ',';
        out += std::to_string(s.striker);
        out += ',';
        if (s.ball_court) {
            out += format9(s.ball_court->x);
            out += ',';
            out += format9(s.ball_court->y);
        } else {
            out += ',';
        }
        out += ',';
        out += format9(s.turn_angle_deg);
        out += ',';
        out += format9(s.incoming_speed_kmh);
        out += ',';
        out += format9(s.outgoing_speed_kmh);
        out += '\n';
    }
    return out;
}

std::string heatmap_csv(const Heatmap& h) {
    std::string out;
    for (int iy = 0; iy < h.ny; ++iy) {
        for (int ix = 0; ix < h.nx; ++ix) {
            if (ix > 0) out += ',';
            out += std::to_string(h.counts[static_cast<std::size_t>(iy) * h.nx + ix]);
        }
        out += '\n';
    }
    return out;
}

std::string minicourt_jsonl(const BallTrack& ball, const std::array<PlayerTrack, 2>& players) {
    std::int64_t first = ball.start_frame;
    std::int64_t last = ball.end_frame() - 1;
    for (const PlayerTrack& p : players) {
        if (p.positions.empty()) continue;
        first = std::min(first, p.start_frame);
        last = std::max(last, p.start_frame + static_cast<std::int64_t>(p.positions.size()) - 1);
    }
    std::string out;
    for (std::int64_t f = first; f <= last; ++f) {
        ordered_json o;
        o["frame"] = f;
        const auto ball_at = [&]() -> ordered_json {
            if (ball.contains(f) && ball.court_positions[ball.index_of(f)])
                return vec_json(*ball.court_positions[ball.index_of(f)]);
            return nullptr;
        };
        o["ball"] = ball_at();
        ordered_json ps = ordered_json::array();
        for (const PlayerTrack& p : players) {
            if (p.contains(f) && p.court_positions[p.index_of(f)])
                ps.push_back(vec_json(*p.court_positions[p.index_of(f)]));
            else
                ps.push_back(nullptr);
        }
        o["players"] = std::move(ps);
        out += o.dump();
        out += '\n';
    }
    return out;
}

}  // namespace courtmetrics
