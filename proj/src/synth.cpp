#include "courtmetrics/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include <json.hpp>

#include "courtmetrics/detail/jsonfmt.hpp"
#include "courtmetrics/errors.hpp"

namespace courtmetrics::synth {
namespace {

using detail::format9;
using detail::ordered_json;
using detail::round9;

constexpr double kApronM = 2.0;
constexpr double kBallBoxPx = 12.0;
constexpr double kBallConfidence = 0.97;
constexpr double kKeypointConfidence = 0.98;
/// Ball keeps its direction after the final shot but slows down, so the
/// speed step never reads as a turn and the tail stays near the court.
constexpr double kTailSpeedFactor = 0.25;

struct Apron {
    double x = 0.0;
    double y = 0.0;
};

Apron court_apron() {
    const CourtModel model = CourtModel::itf_standard();
    double max_x = 0.0, max_y = 0.0;
    for (const Vec2& p : model.boundary()) {
        max_x = std::max(max_x, std::abs(p.x));
        max_y = std::max(max_y, std::abs(p.y));
    }
    return {max_x + kApronM, max_y + kApronM};
}

void check_point(const Vec2& p, const Apron& apron, const char* what) {
    if (std::abs(p.x) > apron.x || std::abs(p.y) > apron.y)
        raise(ErrorCategory::script, std::string(what) + " (" + format9(p.x) + ", " +
                                         format9(p.y) + ") leaves the court apron");
}

Vec2 waypoint_position(const std::vector<PlayerWaypoint>& wps, std::int64_t frame) {
    if (wps.empty()) return {};
    if (frame <= wps.front().frame) return wps.front().position;
    if (frame >= wps.back().frame) return wps.back().position;
    for (std::size_t i = 1; i < wps.size(); ++i) {
        if (frame > wps[i].frame) continue;
        const PlayerWaypoint& a = wps[i - 1];
        const PlayerWaypoint& b = wps[i];
        const double t = static_cast<double>(frame - a.frame) /
                         static_cast<double>(b.frame - a.frame);
        return a.position + (b.position - a.position) * t;
    }
    return wps.back().position;
}

BBox box_from_foot(Vec2 foot, double w, double h) {
    return {foot.x - w / 2.0, foot.y - h, w, h};
}

ordered_json camera_json(const Homography& h) {
    const std::array<double, 9> m = h.row_major();
    ordered_json arr = ordered_json::array();
    for (double v : m) arr.push_back(v);
    return arr;
}

Homography camera_from_json(const nlohmann::json& arr) {
    if (!arr.is_array() || arr.size() != 9)
        raise(ErrorCategory::script, "camera must be a row-major 9-number array");
    Eigen::Matrix3d m;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) m(r, c) = arr[3 * r + c].get<double>();
    return Homography::from_matrix(m);
}

}  // namespace

double PortableRng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double PortableRng::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

double PortableRng::normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::int64_t PortableRng::uniform_int(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<double>(hi - lo + 1);
    return std::min(hi, lo + static_cast<std::int64_t>(uniform() * span));
}

RallyScript script_from_json(const std::string& text) {
    nlohmann::json obj = nlohmann::json::parse(text, nullptr, false);
    if (obj.is_discarded() || !obj.is_object())
        raise(ErrorCategory::parse, "rally script: malformed JSON");
    try {
        RallyScript s;
        s.name = obj.value("name", std::string("rally"));
        s.fps = obj.at("fps").get<double>();
        s.duration_frames = obj.at("duration_frames").get<std::int64_t>();
        s.image_width = obj.value("image_width", 1280);
        s.image_height = obj.value("image_height", 720);
        s.camera = camera_from_json(obj.at("camera"));
        for (const auto& e : obj.at("shots")) {
            ShotScript shot;
            shot.frame = e.at("frame").get<std::int64_t>();
            shot.striker = e.at("striker").get<int>();
            shot.launch = {e.at("launch").at("x").get<double>(),
                           e.at("launch").at("y").get<double>()};
            shot.target = {e.at("target").at("x").get<double>(),
                           e.at("target").at("y").get<double>()};
            shot.speed_ms = e.at("speed_ms").get<double>();
            shot.responder_delay_s = e.value("responder_delay_s", 0.0);
            s.shots.push_back(shot);
        }
        const auto& motion = obj.at("player_motion");
        if (!motion.is_array() || motion.size() != 2)
            raise(ErrorCategory::script, "player_motion must list both players");
        for (std::size_t i = 0; i < 2; ++i)
            for (const auto& e : motion[i])
                s.player_motion[i].push_back({e.at("frame").get<std::int64_t>(),
                                              {e.at("x").get<double>(),
                                               e.at("y").get<double>()}});
        if (obj.contains("feed_direction"))
            s.feed_direction = {obj["feed_direction"].at("x").get<double>(),
                                obj["feed_direction"].at("y").get<double>()};
        s.feed_speed_ms = obj.value("feed_speed_ms", 8.0);
        s.spectators = obj.value("spectators", 2);
        return s;
    } catch (const nlohmann::json::exception& e) {
        raise(ErrorCategory::script, std::string("rally script: ") + e.what());
    }
}

std::string script_to_json(const RallyScript& script) {
    ordered_json obj;
    obj["name"] = script.name;
    obj["fps"] = script.fps;
    obj["duration_frames"] = script.duration_frames;
    obj["image_width"] = script.image_width;
    obj["image_height"] = script.image_height;
    obj["camera"] = camera_json(script.camera);
    ordered_json shots = ordered_json::array();
    for (const ShotScript& s : script.shots)
        shots.push_back({{"frame", s.frame},
                         {"striker", s.striker},
                         {"launch", {{"x", s.launch.x}, {"y", s.launch.y}}},
                         {"target", {{"x", s.target.x}, {"y", s.target.y}}},
                         {"speed_ms", s.speed_ms},
                         {"responder_delay_s", s.responder_delay_s}});
    obj["shots"] = std::move(shots);
    ordered_json motion = ordered_json::array();
    for (const auto& wps : script.player_motion) {
        ordered_json list = ordered_json::array();
        for (const PlayerWaypoint& w : wps)
            list.push_back({{"frame", w.frame}, {"x", w.position.x}, {"y", w.position.y}});
        motion.push_back(std::move(list));
    }
    obj["player_motion"] = std::move(motion);
    obj["feed_direction"] = {{"x", script.feed_direction.x}, {"y", script.feed_direction.y}};
    obj["feed_speed_ms"] = script.feed_speed_ms;
    obj["spectators"] = script.spectators;
    return obj.dump(2);
}

std::string to_json(const GroundTruth& truth) {
    ordered_json obj;
    obj["fps"] = truth.fps;
    obj["camera"] = camera_json(truth.camera);
    obj["shot_frames"] = truth.shot_frames;
    obj["strikers"] = truth.strikers;
    ordered_json speeds = ordered_json::array();
    for (double s : truth.shot_speeds_ms) speeds.push_back(round9(s));
    obj["shot_speeds_ms"] = std::move(speeds);
    ordered_json reactions = ordered_json::array();
    for (const ReactionTruth& r : truth.reactions)
        reactions.push_back({{"responder_id", r.responder_id},
                             {"shot_frame", r.shot_frame},
                             {"delay_s", round9(r.delay_s)},
                             {"onset_frame", r.onset_frame}});
    obj["reactions"] = std::move(reactions);
    const auto points = [](const std::vector<Vec2>& pts) {
        ordered_json arr = ordered_json::array();
        for (const Vec2& p : pts) arr.push_back({round9(p.x), round9(p.y)});
        return arr;
    };
    obj["ball_court"] = points(truth.ball_court);
    obj["player_court"] =
        ordered_json::array({points(truth.player_court[0]), points(truth.player_court[1])});
    return obj.dump();
}

SynthResult generate_rally(const RallyScript& script) {
    if (!(script.fps > 0.0)) raise(ErrorCategory::script, "fps must be positive");
    if (script.duration_frames < 1) raise(ErrorCategory::script, "duration must be positive");
    if (script.image_width < 1 || script.image_height < 1)
        raise(ErrorCategory::script, "image dimensions must be positive");
    if (script.shots.empty()) raise(ErrorCategory::script, "a rally needs at least one shot");
    if (!(script.feed_speed_ms > 0.0))
        raise(ErrorCategory::script, "feed speed must be positive");
    if (norm(script.feed_direction) < 1e-12)
        raise(ErrorCategory::script, "feed direction must be non-zero");

    const Apron apron = court_apron();
    for (std::size_t k = 0; k < script.shots.size(); ++k) {
        const ShotScript& s = script.shots[k];
        if (s.striker != 1 && s.striker != 2)
            raise(ErrorCategory::script, "striker must be 1 or 2");
        if (k > 0 && s.striker == script.shots[k - 1].striker)
            raise(ErrorCategory::script, "strikers must alternate");
        if (k > 0 && s.frame <= script.shots[k - 1].frame)
            raise(ErrorCategory::script, "shot frames must be strictly increasing");
        if (s.frame < 0 || s.frame >= script.duration_frames)
            raise(ErrorCategory::script, "shot frame outside rally duration");
        if (!(s.speed_ms > 0.0)) raise(ErrorCategory::script, "shot speed must be positive");
        if (s.responder_delay_s < 0.0)
            raise(ErrorCategory::script, "responder delay must be non-negative");
        if (distance(s.launch, s.target) < 1e-9)
            raise(ErrorCategory::script, "shot target must differ from launch");
        check_point(s.launch, apron, "shot launch");
        check_point(s.target, apron, "shot target");
    }
    for (const auto& wps : script.player_motion) {
        for (std::size_t i = 0; i < wps.size(); ++i) {
            check_point(wps[i].position, apron, "player waypoint");
            if (i > 0 && wps[i].frame <= wps[i - 1].frame)
                raise(ErrorCategory::script, "player waypoints must be strictly increasing");
        }
    }
    // The straight segment leaving shot k must arrive at shot k+1's launch.
    for (std::size_t k = 0; k + 1 < script.shots.size(); ++k) {
        const ShotScript& a = script.shots[k];
        const ShotScript& b = script.shots[k + 1];
        const Vec2 dir = (a.target - a.launch) / distance(a.launch, a.target);
        const Vec2 arrival =
            a.launch + dir * (a.speed_ms * static_cast<double>(b.frame - a.frame) / script.fps);
        if (distance(arrival, b.launch) > 1e-6)
            raise(ErrorCategory::script,
                  "shot " + std::to_string(k + 1) + " launch does not continue shot " +
                      std::to_string(k) + "'s segment (off by " +
                      format9(distance(arrival, b.launch)) + " m)");
    }

    const std::size_t n = static_cast<std::size_t>(script.duration_frames);
    GroundTruth truth;
    truth.fps = script.fps;
    truth.camera = script.camera;
    truth.ball_court.resize(n);
    truth.player_court[0].resize(n);
    truth.player_court[1].resize(n);

    const Vec2 feed_dir = script.feed_direction / norm(script.feed_direction);
    const ShotScript& last = script.shots.back();
    const Vec2 last_dir = (last.target - last.launch) / distance(last.launch, last.target);
    const double last_len = distance(last.launch, last.target);
    const std::int64_t last_arrival =
        last.frame +
        static_cast<std::int64_t>(std::llround(last_len / last.speed_ms * script.fps));
    for (std::size_t f = 0; f < n; ++f) {
        const auto frame = static_cast<std::int64_t>(f);
        for (std::size_t i = 0; i < 2; ++i)
            truth.player_court[i][f] = waypoint_position(script.player_motion[i], frame);
        const ShotScript& first = script.shots.front();
        if (frame <= first.frame) {
            truth.ball_court[f] =
                first.launch -
                feed_dir * (script.feed_speed_ms *
                            static_cast<double>(first.frame - frame) / script.fps);
            continue;
        }
        std::size_t k = script.shots.size() - 1;
        while (script.shots[k].frame > frame) --k;
        const ShotScript& s = script.shots[k];
        const Vec2 dir = (s.target - s.launch) / distance(s.launch, s.target);
        if (k + 1 == script.shots.size() && frame > last_arrival) {
            const Vec2 arrival = s.launch + dir * (s.speed_ms *
                                                   static_cast<double>(last_arrival - s.frame) /
                                                   script.fps);
            truth.ball_court[f] =
                arrival + last_dir * (kTailSpeedFactor * s.speed_ms *
                                      static_cast<double>(frame - last_arrival) / script.fps);
        } else {
            truth.ball_court[f] =
                s.launch + dir * (s.speed_ms * static_cast<double>(frame - s.frame) / script.fps);
        }
    }

    for (const ShotScript& s : script.shots) {
        truth.shot_frames.push_back(s.frame);
        truth.strikers.push_back(s.striker);
        truth.shot_speeds_ms.push_back(s.speed_ms);
        const int responder = 3 - s.striker;
        ReactionTruth r;
        r.responder_id = responder;
        r.shot_frame = s.frame;
        r.delay_s = s.responder_delay_s;
        r.onset_frame = -1;
        const std::vector<Vec2>& track = truth.player_court[responder - 1];
        const Vec2 origin = track[static_cast<std::size_t>(s.frame)];
        for (std::size_t f = static_cast<std::size_t>(s.frame) + 1; f < n; ++f) {
            if (distance(track[f], origin) > 1e-12) {
                r.onset_frame = static_cast<std::int64_t>(f);
                break;
            }
        }
        truth.reactions.push_back(r);
    }

    const Homography court_to_image = invert(script.camera);
    DetectionStream stream;
    stream.header.fps = script.fps;
    stream.header.width = script.image_width;
    stream.header.height = script.image_height;
    stream.header.source = "synth:" + script.name;

    const CourtModel model = CourtModel::itf_standard();
    std::array<Vec2, kCourtKeypointCount> keypoint_image;
    for (std::size_t i = 0; i < kCourtKeypointCount; ++i)
        keypoint_image[i] = project(court_to_image, model.landmarks()[i].position);

    std::vector<Vec2> spectator_feet;
    for (int s = 0; s < script.spectators; ++s) {
        const double x = s % 2 == 0 ? 30.0 + 15.0 * s
                                    : static_cast<double>(script.image_width) - 30.0 - 15.0 * s;
        spectator_feet.push_back({x, 55.0 + 7.0 * (s % 3)});
    }

    for (std::size_t f = 0; f < n; ++f) {
        DetectionFrame frame;
        frame.frame_index = static_cast<std::int64_t>(f);
        const Vec2 p1_foot = project(court_to_image, truth.player_court[0][f]);
        const Vec2 p2_foot = project(court_to_image, truth.player_court[1][f]);
        frame.persons.push_back({box_from_foot(p1_foot, 56.0, 140.0), 0.95});
        frame.persons.push_back({box_from_foot(p2_foot, 40.0, 100.0), 0.93});
        for (const Vec2& foot : spectator_feet)
            frame.persons.push_back({box_from_foot(foot, 30.0, 60.0), 0.9});
        const Vec2 ball_image = project(court_to_image, truth.ball_court[f]);
        frame.ball = BallDetection{
            {ball_image.x - kBallBoxPx / 2.0, ball_image.y - kBallBoxPx / 2.0, kBallBoxPx,
             kBallBoxPx},
            kBallConfidence};
        std::array<CourtKeypoint, kCourtKeypointCount> kps;
        for (std::size_t i = 0; i < kCourtKeypointCount; ++i)
            kps[i] = {keypoint_image[i].x, keypoint_image[i].y, true, kKeypointConfidence};
        frame.keypoints = kps;
        stream.frames.push_back(std::move(frame));
    }
    return {std::move(stream), std::move(truth)};
}

DetectionStream corrupt(const DetectionStream& stream, const CorruptionConfig& cfg) {
    if (cfg.position_noise_sigma_px < 0.0)
        raise(ErrorCategory::parameter, "noise sigma must be non-negative");
    if (cfg.dropout_prob < 0.0 || cfg.dropout_prob >= 1.0)
        raise(ErrorCategory::parameter, "dropout probability must lie in [0, 1)");
    if (cfg.low_conf_prob < 0.0 || cfg.low_conf_prob >= 1.0)
        raise(ErrorCategory::parameter, "low-confidence probability must lie in [0, 1)");

    DetectionStream out = stream;
    if (cfg.position_noise_sigma_px == 0.0 && cfg.dropout_prob == 0.0 &&
        cfg.low_conf_prob == 0.0)
        return out;

    PortableRng rng(cfg.seed);
    const double sigma = cfg.position_noise_sigma_px;
    for (DetectionFrame& frame : out.frames) {
        if (frame.ball) {
            if (rng.uniform() < cfg.dropout_prob) {
                frame.ball.reset();
            } else {
                if (rng.uniform() < cfg.low_conf_prob) frame.ball->confidence = 0.2;
                if (sigma > 0.0) {
                    frame.ball->bbox.x += sigma * rng.normal();
                    frame.ball->bbox.y += sigma * rng.normal();
                }
            }
        }
        if (sigma > 0.0) {
            for (PersonDetection& person : frame.persons) {
                person.bbox.x += sigma * rng.normal();
                person.bbox.y += sigma * rng.normal();
            }
            if (frame.keypoints) {
                for (CourtKeypoint& kp : *frame.keypoints) {
                    kp.x += sigma * rng.normal();
                    kp.y += sigma * rng.normal();
                }
            }
        }
    }
    out.header.source += ":corrupt(seed=" + std::to_string(cfg.seed) +
                         ",sigma=" + format9(sigma) +
                         ",dropout=" + format9(cfg.dropout_prob) +
                         ",lowconf=" + format9(cfg.low_conf_prob) + ")";
    return out;
}

Homography make_broadcast_camera(std::uint64_t seed, double jitter_px) {
    std::array<Vec2, 4> image{{{200.0, 650.0}, {1080.0, 650.0}, {480.0, 150.0}, {800.0, 150.0}}};
    if (jitter_px > 0.0) {
        PortableRng rng(seed);
        for (Vec2& p : image) {
            p.x += jitter_px * rng.normal();
            p.y += jitter_px * rng.normal();
        }
    }
    // The four doubles-baseline corners are landmarks 0-3.
    std::array<std::optional<Vec2>, kCourtKeypointCount> keypoints;
    for (std::size_t i = 0; i < 4; ++i) keypoints[i] = image[i];
    return estimate_homography(keypoints, CourtModel::itf_standard()).image_to_court;
}

RallyScript make_rally_script(const RallyPlan& plan) {
    if (plan.shot_count < 2)
        raise(ErrorCategory::parameter, "a rally plan needs at least two shots");
    if (!(plan.fps > 0.0)) raise(ErrorCategory::parameter, "fps must be positive");
    if (!(plan.responder_speed_ms > 0.0))
        raise(ErrorCategory::parameter, "responder speed must be positive");
    if (!plan.shot_speeds_ms.empty() &&
        plan.shot_speeds_ms.size() != static_cast<std::size_t>(plan.shot_count))
        raise(ErrorCategory::parameter, "fixed speed list must match shot count");

    PortableRng rng(plan.seed);
    const double fps = plan.fps;
    RallyScript script;
    script.name = plan.name;
    script.fps = fps;
    script.camera = make_broadcast_camera();

    const std::int64_t lead = 10;
    Vec2 launch{rng.uniform(-3.0, 3.0), rng.uniform(-11.5, -9.0)};
    std::int64_t frame = lead;
    int striker = 1;  // first launch is in the near half
    for (int k = 0; k < plan.shot_count; ++k) {
        double speed;
        if (!plan.shot_speeds_ms.empty()) {
            speed = plan.shot_speeds_ms[static_cast<std::size_t>(k)];
        } else {
            const auto& band = k % 2 == 0 ? plan.fast_speed_band_ms : plan.slow_speed_band_ms;
            speed = rng.uniform(band[0], band[1]);
        }
        const double target_sign = launch.y < 0.0 ? 1.0 : -1.0;
        Vec2 target{rng.uniform(-4.0, 4.0), target_sign * rng.uniform(8.5, 11.5)};
        double dist = distance(launch, target);
        if (dist < 17.0) {  // keep inter-shot gaps clear of temporal suppression
            target = launch + (target - launch) * (17.0 / dist);
            dist = 17.0;
        }
        const auto seg_frames =
            std::max<std::int64_t>(1, std::llround(dist / speed * fps));
        const Vec2 dir = (target - launch) / dist;
        const Vec2 arrival = launch + dir * (speed * static_cast<double>(seg_frames) / fps);

        ShotScript shot;
        shot.frame = frame;
        shot.striker = striker;
        shot.launch = launch;
        shot.target = arrival;  // next launch continues this segment exactly
        shot.speed_ms = speed;
        shot.responder_delay_s =
            plan.responder_delay_s[static_cast<std::size_t>(striker == 1 ? 1 : 0)];
        script.shots.push_back(shot);

        launch = arrival;
        frame += seg_frames;
        striker = 3 - striker;
    }

    std::int64_t max_delay_frames = 0;
    for (const ShotScript& s : script.shots)
        max_delay_frames = std::max(
            max_delay_frames, static_cast<std::int64_t>(std::llround(s.responder_delay_s * fps)));
    script.duration_frames = frame + std::max<std::int64_t>(12, max_delay_frames + 8);

    // Player choreography. Each player stands a strike_offset beside the
    // launch of each of their shots; after the opponent strikes they hold for
    // the scripted delay, then move to the next strike position at (at least)
    // responder_speed so the first moving frame crosses the 0.3 m reaction
    // threshold.
    const double strike_offset = 0.6;
    for (int pid = 1; pid <= 2; ++pid) {
        std::vector<std::pair<std::int64_t, Vec2>> strikes;  // (frame, position)
        std::vector<std::size_t> shot_idx;
        for (std::size_t k = 0; k < script.shots.size(); ++k) {
            if (script.shots[k].striker != pid) continue;
            shot_idx.push_back(k);
            const Vec2 base = script.shots[k].launch;
            const Vec2 left{base.x - strike_offset, base.y};
            const Vec2 right{base.x + strike_offset, base.y};
            if (strikes.empty()) {
                strikes.emplace_back(script.shots[k].frame, right);
            } else {
                const Vec2 prev = strikes.back().second;
                strikes.emplace_back(script.shots[k].frame,
                                     distance(left, prev) >= distance(right, prev) ? left
                                                                                   : right);
            }
        }
        const auto delay_frames = static_cast<std::int64_t>(
            std::llround(plan.responder_delay_s[static_cast<std::size_t>(pid - 1)] * fps));

        std::vector<PlayerWaypoint>& wps = script.player_motion[static_cast<std::size_t>(pid - 1)];
        Vec2 pos;
        std::int64_t pos_frame = 0;
        if (shot_idx.front() == 0) {
            pos = strikes.front().second;  // opens the rally from the strike spot
        } else {
            pos = strikes.front().second - Vec2{2.0 * strike_offset, 0.0};
        }
        wps.push_back({0, pos});
        for (std::size_t j = 0; j < strikes.size(); ++j) {
            const auto [strike_frame, strike_pos] = strikes[j];
            if (distance(pos, strike_pos) < 1e-12) continue;  // already there
            const std::int64_t trigger = script.shots[shot_idx[j] - 1].frame;
            const std::int64_t hold_end = trigger + delay_frames - 1;
            if (hold_end <= pos_frame)
                raise(ErrorCategory::parameter,
                      "rally plan infeasible: reaction overlaps the previous move");
            const std::int64_t available = strike_frame - hold_end;
            if (available < 1)
                raise(ErrorCategory::parameter,
                      "rally plan infeasible: responder delay longer than the shot gap");
            const double dist = distance(pos, strike_pos);
            const auto move_frames = std::clamp<std::int64_t>(
                static_cast<std::int64_t>(dist / plan.responder_speed_ms * fps), 1, available);
            wps.push_back({hold_end, pos});
            wps.push_back({hold_end + move_frames, strike_pos});
            pos = strike_pos;
            pos_frame = hold_end + move_frames;
        }
        // React to the final shot too, if this player answers it.
        const ShotScript& final_shot = script.shots.back();
        if (final_shot.striker != pid) {
            const std::int64_t hold_end = final_shot.frame + delay_frames - 1;
            const double dir_x = pos.x > 0.0 ? -1.0 : 1.0;
            const Vec2 target{pos.x + dir_x * 2.0 * strike_offset, pos.y};
            const auto move_frames = std::max<std::int64_t>(
                1, static_cast<std::int64_t>(distance(pos, target) / plan.responder_speed_ms *
                                             fps));
            if (hold_end > pos_frame && hold_end + move_frames < script.duration_frames) {
                wps.push_back({hold_end, pos});
                wps.push_back({hold_end + move_frames, target});
            }
        }
    }
    return script;
}

}  // namespace courtmetrics::synth
