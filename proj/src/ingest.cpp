#include "courtmetrics/ingest.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "courtmetrics/detail/jsonfmt.hpp"
#include "courtmetrics/errors.hpp"

namespace courtmetrics {
namespace {

using nlohmann::json;
using detail::ordered_json;

[[noreturn]] void fail_line(ErrorCategory cat, std::size_t line_no, const std::string& what) {
    raise(cat, "line " + std::to_string(line_no) + ": " + what);
}

double require_number(const json& obj, const char* key, std::size_t line_no) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_number())
        fail_line(ErrorCategory::schema, line_no, std::string("missing or non-numeric \"") + key + '"');
    return it->get<double>();
}

double check_confidence(double c, std::size_t line_no, const char* owner) {
    if (!(c >= 0.0 && c <= 1.0))
        fail_line(ErrorCategory::schema, line_no,
                  std::string(owner) + " confidence " + detail::format9(c) + " outside [0,1]");
    return c;
}

BBox parse_bbox(const json& obj, std::size_t line_no, const char* owner) {
    auto it = obj.find("bbox");
    if (it == obj.end() || !it->is_array() || it->size() != 4 ||
        !std::all_of(it->begin(), it->end(), [](const json& v) { return v.is_number(); }))
        fail_line(ErrorCategory::schema, line_no,
                  std::string(owner) + " bbox must be a numeric [x,y,w,h] array");
    BBox b{(*it)[0].get<double>(), (*it)[1].get<double>(), (*it)[2].get<double>(),
           (*it)[3].get<double>()};
    if (!(b.w > 0.0 && b.h > 0.0))
        fail_line(ErrorCategory::schema, line_no,
                  std::string(owner) + " bbox width/height must be positive");
    return b;
}

json parse_line(const std::string& line, std::size_t line_no) {
    json value = json::parse(line, nullptr, false);
    if (value.is_discarded())
        fail_line(ErrorCategory::parse, line_no, "malformed JSON");
    if (!value.is_object())
        fail_line(ErrorCategory::parse, line_no, "expected a JSON object");
    return value;
}

StreamHeader parse_header(const json& obj, std::size_t line_no) {
    StreamHeader h;
    h.fps = require_number(obj, "fps", line_no);
    h.width = static_cast<int>(require_number(obj, "width", line_no));
    h.height = static_cast<int>(require_number(obj, "height", line_no));
    if (auto it = obj.find("source"); it != obj.end() && it->is_string())
        h.source = it->get<std::string>();
    if (!(h.fps > 0.0))
        fail_line(ErrorCategory::schema, line_no, "fps must be > 0");
    if (h.width <= 0 || h.height <= 0)
        fail_line(ErrorCategory::schema, line_no, "width/height must be > 0");
    return h;
}

DetectionFrame parse_frame(const json& obj, std::size_t line_no) {
    DetectionFrame f;
    auto fit = obj.find("frame");
    if (fit == obj.end() || !fit->is_number_integer())
        fail_line(ErrorCategory::schema, line_no, "missing integer \"frame\"");
    f.frame_index = fit->get<std::int64_t>();
    if (f.frame_index < 0)
        fail_line(ErrorCategory::schema, line_no, "frame index must be non-negative");

    if (auto it = obj.find("persons"); it != obj.end()) {
        if (!it->is_array())
            fail_line(ErrorCategory::schema, line_no, "\"persons\" must be an array");
        for (const json& p : *it) {
            PersonDetection d;
            d.bbox = parse_bbox(p, line_no, "person");
            d.confidence = check_confidence(require_number(p, "confidence", line_no), line_no, "person");
            f.persons.push_back(d);
        }
    }

    if (auto it = obj.find("ball"); it != obj.end() && !it->is_null()) {
        BallDetection d;
        d.bbox = parse_bbox(*it, line_no, "ball");
        d.confidence = check_confidence(require_number(*it, "confidence", line_no), line_no, "ball");
        f.ball = d;
    }

    if (auto it = obj.find("keypoints"); it != obj.end() && !it->is_null()) {
        if (!it->is_array() || it->size() != kCourtKeypointCount)
            fail_line(ErrorCategory::schema, line_no,
                      "frame " + std::to_string(f.frame_index) + ": keypoints list must have exactly " +
                          std::to_string(kCourtKeypointCount) + " entries");
        std::array<CourtKeypoint, kCourtKeypointCount> kps{};
        for (std::size_t i = 0; i < kCourtKeypointCount; ++i) {
            const json& k = (*it)[i];
            CourtKeypoint kp;
            kp.x = require_number(k, "x", line_no);
            kp.y = require_number(k, "y", line_no);
            if (auto vit = k.find("visible"); vit != k.end() && vit->is_boolean())
                kp.visible = vit->get<bool>();
            kp.confidence = check_confidence(require_number(k, "confidence", line_no), line_no, "keypoint");
            kps[i] = kp;
        }
        f.keypoints = kps;
    }
    return f;
}

ordered_json bbox_json(const BBox& b) {
    return ordered_json::array({b.x, b.y, b.w, b.h});
}

}  // namespace

DetectionStream parse_stream(std::string_view input) {
    DetectionStream stream;
    std::istringstream in{std::string(input)};
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        json obj = parse_line(line, line_no);
        if (!have_header) {
            stream.header = parse_header(obj, line_no);
            have_header = true;
            continue;
        }
        DetectionFrame frame = parse_frame(obj, line_no);
        if (!stream.frames.empty()) {
            const std::int64_t prev = stream.frames.back().frame_index;
            if (frame.frame_index == prev)
                fail_line(ErrorCategory::ordering, line_no,
                          "duplicate frame index " + std::to_string(frame.frame_index));
            if (frame.frame_index < prev)
                fail_line(ErrorCategory::ordering, line_no,
                          "frame index " + std::to_string(frame.frame_index) +
                              " decreases after " + std::to_string(prev));
        }
        stream.frames.push_back(std::move(frame));
    }
    if (!have_header)
        raise(ErrorCategory::parse, "empty input: expected a header line");
    return stream;
}

std::string serialize_stream(const DetectionStream& stream) {
    std::string out;
    ordered_json header;
    header["fps"] = stream.header.fps;
    header["width"] = stream.header.width;
    header["height"] = stream.header.height;
    header["source"] = stream.header.source;
    out += header.dump();
    out += '\n';
    for (const DetectionFrame& f : stream.frames) {
        ordered_json obj;
        obj["frame"] = f.frame_index;
        ordered_json persons = ordered_json::array();
        for (const PersonDetection& p : f.persons)
            persons.push_back({{"bbox", bbox_json(p.bbox)}, {"confidence", p.confidence}});
        obj["persons"] = std::move(persons);
        if (f.ball)
            obj["ball"] = {{"bbox", bbox_json(f.ball->bbox)}, {"confidence", f.ball->confidence}};
        if (f.keypoints) {
            ordered_json kps = ordered_json::array();
            for (const CourtKeypoint& k : *f.keypoints)
                kps.push_back({{"x", k.x}, {"y", k.y}, {"visible", k.visible},
                               {"confidence", k.confidence}});
            obj["keypoints"] = std::move(kps);
        }
        out += obj.dump();
        out += '\n';
    }
    return out;
}

ValidationReport validate_stream(const DetectionStream& stream) {
    ValidationReport report;
    report.frame_count = stream.frames.size();
    std::size_t with_ball = 0;
    std::size_t with_keypoints = 0;
    for (std::size_t i = 0; i < stream.frames.size(); ++i) {
        const DetectionFrame& f = stream.frames[i];
        if (f.ball) ++with_ball;
        if (f.keypoints) {
            const bool any_visible = std::any_of(f.keypoints->begin(), f.keypoints->end(),
                                                 [](const CourtKeypoint& k) { return k.visible; });
            if (any_visible) ++with_keypoints;
        }
        if (i > 0) {
            const std::int64_t prev = stream.frames[i - 1].frame_index;
            if (f.frame_index > prev + 1)
                report.gaps.push_back({prev + 1, f.frame_index - 1});
        }
    }
    if (!stream.frames.empty()) {
        report.ball_coverage = static_cast<double>(with_ball) / stream.frames.size();
        report.keypoint_coverage = static_cast<double>(with_keypoints) / stream.frames.size();
    } else {
        report.warnings.emplace_back("stream contains no frames");
    }
    if (with_keypoints == 0)
        report.warnings.emplace_back(
            "no visible court keypoints in any frame: court mapping is impossible");
    if (!stream.frames.empty() && with_ball == 0)
        report.warnings.emplace_back("no ball detections in any frame");
    return report;
}

std::string to_json(const ValidationReport& report) {
    ordered_json obj;
    obj["frame_count"] = report.frame_count;
    ordered_json gaps = ordered_json::array();
    for (const FrameGap& g : report.gaps)
        gaps.push_back({{"first", g.first}, {"last", g.last}});
    obj["gaps"] = std::move(gaps);
    obj["ball_coverage"] = detail::round9(report.ball_coverage);
    obj["keypoint_coverage"] = detail::round9(report.keypoint_coverage);
    obj["warnings"] = report.warnings;
    return obj.dump(2);
}

}  // namespace courtmetrics
