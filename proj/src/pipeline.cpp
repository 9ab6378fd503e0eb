#include "courtmetrics/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "courtmetrics/detail/jsonfmt.hpp"
#include "courtmetrics/errors.hpp"

namespace courtmetrics {
namespace {

using detail::ordered_json;
using detail::round9;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorCategory::io, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void validate_config(const PipelineConfig& cfg) {
    const auto fail = [](const std::string& what) {
        raise(ErrorCategory::config, "config: " + what);
    };
    if (!(cfg.low_conf >= 0.0 && cfg.low_conf <= 1.0)) fail("low_conf must lie in [0, 1]");
    if (!(cfg.angle_threshold_deg > 0.0 && cfg.angle_threshold_deg < 180.0))
        fail("angle_threshold_deg must lie in (0, 180)");
    if (!(cfg.speed_change_ratio >= 1.0)) fail("speed_change_ratio must be >= 1");
    if (!(cfg.min_gap_s >= 0.0)) fail("min_gap_s must be non-negative");
    if (!(cfg.margin_px >= 0.0)) fail("margin_px must be non-negative");
    if (!(cfg.movement_threshold_m >= 0.0)) fail("movement_threshold_m must be non-negative");
    if (cfg.max_gap_frames < 0) fail("max_gap_frames must be non-negative");
    if (!(cfg.max_strike_distance_m > 0.0)) fail("max_strike_distance_m must be positive");
    if (!(cfg.kalman.process_noise > 0.0)) fail("kalman.process_noise must be positive");
    if (!(cfg.kalman.measurement_noise > 0.0)) fail("kalman.measurement_noise must be positive");
    if (!(cfg.kalman.initial_variance > 0.0)) fail("kalman.initial_variance must be positive");
}

struct TomlValue {
    std::string raw;
    std::size_t line = 0;
};

[[noreturn]] void config_fail(std::size_t line, const std::string& what) {
    raise(ErrorCategory::config, "config line " + std::to_string(line) + ": " + what);
}

double toml_number(const TomlValue& v) {
    char* end = nullptr;
    const double value = std::strtod(v.raw.c_str(), &end);
    if (end != v.raw.c_str() + v.raw.size() || v.raw.empty())
        config_fail(v.line, "expected a number, got '" + v.raw + "'");
    return value;
}

int toml_int(const TomlValue& v) {
    const double value = toml_number(v);
    if (value != std::floor(value)) config_fail(v.line, "expected an integer");
    return static_cast<int>(value);
}

std::string toml_string(const TomlValue& v) {
    if (v.raw.size() < 2 || v.raw.front() != '"' || v.raw.back() != '"')
        config_fail(v.line, "expected a quoted string");
    return v.raw.substr(1, v.raw.size() - 2);
}

std::string trim(std::string s) {
    const auto begin = s.find_first_not_of(" \t");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

const char* to_string(CalibrationMode mode) {
    return mode == CalibrationMode::scalar ? "scalar" : "homography";
}

PipelineConfig parse_config_toml(const std::string& text) {
    PipelineConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        // Strip comments, respecting quoted strings.
        bool in_quotes = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') in_quotes = !in_quotes;
            if (line[i] == '#' && !in_quotes) {
                line.resize(i);
                break;
            }
        }
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') config_fail(line_no, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "thresholds" && section != "kalman" && section != "calibration" &&
                section != "court")
                config_fail(line_no, "unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) config_fail(line_no, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const TomlValue value{trim(line.substr(eq + 1)), line_no};
        if (key.empty() || value.raw.empty()) config_fail(line_no, "expected key = value");

        if (section == "thresholds") {
            if (key == "low_conf") cfg.low_conf = toml_number(value);
            else if (key == "angle_threshold_deg") cfg.angle_threshold_deg = toml_number(value);
            else if (key == "speed_change_ratio") cfg.speed_change_ratio = toml_number(value);
            else if (key == "min_gap_s") cfg.min_gap_s = toml_number(value);
            else if (key == "margin_px") cfg.margin_px = toml_number(value);
            else if (key == "movement_threshold_m") cfg.movement_threshold_m = toml_number(value);
            else if (key == "max_gap_frames") cfg.max_gap_frames = toml_int(value);
            else if (key == "max_strike_distance_m")
                cfg.max_strike_distance_m = toml_number(value);
            else config_fail(line_no, "unknown key thresholds." + key);
        } else if (section == "kalman") {
            if (key == "process_noise") cfg.kalman.process_noise = toml_number(value);
            else if (key == "measurement_noise") cfg.kalman.measurement_noise = toml_number(value);
            else if (key == "initial_variance") cfg.kalman.initial_variance = toml_number(value);
            else config_fail(line_no, "unknown key kalman." + key);
        } else if (section == "calibration") {
            if (key == "mode") {
                const std::string mode = toml_string(value);
                if (mode == "homography") cfg.calibration = CalibrationMode::homography;
                else if (mode == "scalar") cfg.calibration = CalibrationMode::scalar;
                else config_fail(line_no, "calibration.mode must be homography or scalar");
            } else {
                config_fail(line_no, "unknown key calibration." + key);
            }
        } else if (section == "court") {
            if (key == "model") cfg.court_model_path = toml_string(value);
            else config_fail(line_no, "unknown key court." + key);
        } else {
            config_fail(line_no, "key outside any section");
        }
    }
    validate_config(cfg);
    return cfg;
}

std::string effective_config_json(const PipelineConfig& cfg) {
    ordered_json obj;
    obj["thresholds"] = {{"low_conf", round9(cfg.low_conf)},
                         {"angle_threshold_deg", round9(cfg.angle_threshold_deg)},
                         {"speed_change_ratio", round9(cfg.speed_change_ratio)},
                         {"min_gap_s", round9(cfg.min_gap_s)},
                         {"margin_px", round9(cfg.margin_px)},
                         {"movement_threshold_m", round9(cfg.movement_threshold_m)},
                         {"max_gap_frames", cfg.max_gap_frames},
                         {"max_strike_distance_m", round9(cfg.max_strike_distance_m)}};
    obj["kalman"] = {{"process_noise", round9(cfg.kalman.process_noise)},
                     {"measurement_noise", round9(cfg.kalman.measurement_noise)},
                     {"initial_variance", round9(cfg.kalman.initial_variance)}};
    obj["calibration"] = {{"mode", to_string(cfg.calibration)}};
    obj["court"] = {{"model", cfg.court_model_path.empty() ? "itf-standard (built-in)"
                                                           : cfg.court_model_path}};
    return obj.dump(2);
}

std::string fnv1a64_hex(std::string_view bytes) {
    std::uint64_t hash = 14695981039346656037ull;
    for (const char c : bytes) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

CourtModel resolve_court_model(const PipelineConfig& cfg) {
    std::string path = cfg.court_model_path;
    if (path.empty()) {
        if (const char* env = std::getenv(kCourtModelEnvVar); env && *env) path = env;
    }
    if (path.empty()) return CourtModel::itf_standard();
    return CourtModel::from_json(read_file(path));
}

AnalysisArtifacts run_analyze(const DetectionStream& stream, const PipelineConfig& cfg,
                              const std::string& input_label, std::string_view input_bytes) {
    validate_config(cfg);
    if (stream.frames.empty())
        raise(ErrorCategory::empty_track, "stream contains no frames to analyze");
    const CourtModel model = resolve_court_model(cfg);
    const double fps = stream.header.fps;

    // Static-camera cadence: estimate on every frame that carries usable
    // keypoints, reuse the last estimate elsewhere, and backfill the frames
    // before the first estimate with that first estimate.
    const std::int64_t first = stream.frames.front().frame_index;
    const std::int64_t last = stream.frames.back().frame_index;
    const std::size_t span = static_cast<std::size_t>(last - first + 1);
    std::vector<std::optional<Homography>> frame_h(span);
    std::optional<Homography> first_estimate;
    std::optional<CalibrationScale> scale;
    for (const DetectionFrame& frame : stream.frames) {
        if (!frame.keypoints) continue;
        const auto points = visible_keypoints(*frame.keypoints);
        const std::size_t i = static_cast<std::size_t>(frame.frame_index - first);
        const int visible =
            static_cast<int>(std::count_if(points.begin(), points.end(),
                                           [](const auto& p) { return p.has_value(); }));
        if (visible >= 4) {
            try {
                frame_h[i] = estimate_homography(points, model).image_to_court;
                if (!first_estimate) first_estimate = frame_h[i];
            } catch (const Error&) {
                // Degenerate frame; the cadence falls back to the neighbors.
            }
        }
        if (!scale && points[0] && points[1]) {
            // Scalar reference: the near doubles baseline (landmarks 0-1)
            // measured in the image.
            scale = scale_from_reference(distance(*points[0], *points[1]), "doubles_width", model);
        }
    }
    if (cfg.calibration == CalibrationMode::homography && !first_estimate)
        raise(ErrorCategory::calibration_unavailable,
              "no frame yields a court homography (need >= 4 visible keypoints)");
    if (cfg.calibration == CalibrationMode::scalar && !scale)
        raise(ErrorCategory::calibration_unavailable,
              "scalar calibration needs the near baseline corners (landmarks 0 and 1)");
    std::optional<Homography> current = first_estimate;
    for (std::size_t i = 0; i < span; ++i) {
        if (frame_h[i]) current = frame_h[i];
        else frame_h[i] = current;
    }

    // Image-space court boundary for the player gate; a missing homography
    // (possible under scalar calibration) degrades to the whole image.
    std::vector<Vec2> boundary_image;
    if (first_estimate) {
        const Homography court_to_image = invert(*first_estimate);
        for (const Vec2& corner : model.boundary())
            boundary_image.push_back(project(court_to_image, corner));
    } else {
        const double w = stream.header.width;
        const double h = stream.header.height;
        boundary_image = {{0.0, 0.0}, {w, 0.0}, {w, h}, {0.0, h}};
    }

    auto [p1, p2] = identify_players(stream.frames, boundary_image, cfg.margin_px);
    auto [ball_start, samples] = extract_ball_samples(stream.frames);
    BallTrack ball = interpolate_ball(ball_start, samples, cfg.low_conf, cfg.max_gap_frames);
    ball = kalman_smooth(std::move(ball), cfg.kalman, fps);
    ball = project_track(std::move(ball), frame_h);
    p1 = project_track(std::move(p1), frame_h);
    p2 = project_track(std::move(p2), frame_h);

    EventConfig ecfg;
    ecfg.angle_threshold_deg = cfg.angle_threshold_deg;
    ecfg.speed_change_ratio = cfg.speed_change_ratio;
    ecfg.min_gap_frames = static_cast<int>(std::llround(cfg.min_gap_s * fps));
    std::vector<ShotEvent> shots = detect_shots(ball, ecfg, fps);
    for (ShotEvent& shot : shots)
        if (shot.ball_court)
            shot.striker_id = attribute_shot(shot.frame_index, *shot.ball_court, p1, p2,
                                             cfg.max_strike_distance_m);

    MetricsConfig mcfg;
    mcfg.fps = fps;
    mcfg.movement_threshold_m = cfg.movement_threshold_m;
    mcfg.scalar_calibration = cfg.calibration == CalibrationMode::scalar;
    if (mcfg.scalar_calibration) mcfg.scale = scale;
    const std::array<PlayerTrack, 2> players{std::move(p1), std::move(p2)};
    AnalysisArtifacts out;
    out.metrics = summarize(ball, players, shots, mcfg);

    out.files["metrics.json"] = to_json(out.metrics);
    out.files["shots.csv"] = shots_csv(out.metrics);
    out.files["heatmap_ball.csv"] = heatmap_csv(out.metrics.ball_heatmap);
    out.files["heatmap_player1.csv"] = heatmap_csv(out.metrics.player_heatmaps[0]);
    out.files["heatmap_player2.csv"] = heatmap_csv(out.metrics.player_heatmaps[1]);
    out.files["minicourt.jsonl"] = minicourt_jsonl(ball, players);

    const std::string effective = effective_config_json(cfg);
    ordered_json manifest;
    manifest["version"] = kVersion;
    manifest["input"] = {{"label", input_label},
                         {"bytes", input_bytes.size()},
                         {"fnv1a64", fnv1a64_hex(input_bytes)},
                         {"source", stream.header.source},
                         {"fps", round9(fps)},
                         {"width", stream.header.width},
                         {"height", stream.header.height},
                         {"frames", stream.frames.size()}};
    manifest["config"] = {{"fnv1a64", fnv1a64_hex(effective)},
                          {"effective", ordered_json::parse(effective)}};
    manifest["court_model"] = model.name();
    manifest["calibration"] = to_string(cfg.calibration);
    manifest["velocity_space"] = out.metrics.velocity_space;
    ordered_json names = ordered_json::array();
    for (const auto& [name, contents] : out.files) names.push_back(name);
    names.push_back("run_manifest.json");
    manifest["artifacts"] = std::move(names);
    out.files["run_manifest.json"] = manifest.dump(2);
    return out;
}

void write_artifacts(const AnalysisArtifacts& artifacts, const std::string& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) raise(ErrorCategory::io, "cannot create " + out_dir + ": " + ec.message());
    for (const auto& [name, contents] : artifacts.files) {
        const std::string path = out_dir + "/" + name;
        std::ofstream out(path, std::ios::binary);
        if (!out) raise(ErrorCategory::io, "cannot write " + path);
        out << contents;
        if (!out) raise(ErrorCategory::io, "short write to " + path);
    }
}

}  // namespace courtmetrics
