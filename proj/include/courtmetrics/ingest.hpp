#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "courtmetrics/geometry.hpp"

namespace courtmetrics {

/// Number of court landmarks carried by a detection stream.
inline constexpr std::size_t kCourtKeypointCount = 14;

/// Axis-aligned box in image pixels, origin top-left.
struct BBox {
    double x = 0.0;
    double y = 0.0;
    double w = 0.0;
    double h = 0.0;

    Vec2 center() const { return {x + w / 2.0, y + h / 2.0}; }
    /// Bottom-center, the ground contact point of a person box.
    Vec2 foot_point() const { return {x + w / 2.0, y + h}; }
};

struct PersonDetection {
    BBox bbox;
    double confidence = 0.0;
};

struct BallDetection {
    BBox bbox;
    double confidence = 0.0;
};

struct CourtKeypoint {
    double x = 0.0;
    double y = 0.0;
    bool visible = false;
    double confidence = 0.0;
};

/// One frame of raw detector output. Absent ball / keypoints are encoded by
/// empty optionals, never by sentinel coordinates.
struct DetectionFrame {
    std::int64_t frame_index = 0;
    std::vector<PersonDetection> persons;
    std::optional<BallDetection> ball;
    std::optional<std::array<CourtKeypoint, kCourtKeypointCount>> keypoints;
};

struct StreamHeader {
    double fps = 0.0;
    int width = 0;
    int height = 0;
    std::string source;
};

struct DetectionStream {
    StreamHeader header;
    std::vector<DetectionFrame> frames;
};

/// Parse the JSON Lines detection format (see docs/stream-format.md):
/// line 1 is the header object, every following non-empty line one frame.
/// Throws Error{parse} with the offending line number on malformed JSON,
/// Error{ordering} on duplicate or decreasing frame indices, and
/// Error{schema} on invariant violations (confidence range, bbox size,
/// keypoint count).
DetectionStream parse_stream(std::string_view input);

/// Inverse of parse_stream. parse_stream(serialize_stream(s)) == s for any
/// valid stream; floats use shortest round-trip formatting.
std::string serialize_stream(const DetectionStream& stream);

/// Inclusive range of frame indices absent from the stream.
struct FrameGap {
    std::int64_t first = 0;
    std::int64_t last = 0;
};

struct ValidationReport {
    std::size_t frame_count = 0;
    std::vector<FrameGap> gaps;
    double ball_coverage = 0.0;      // fraction of frames with a ball detection
    double keypoint_coverage = 0.0;  // fraction of frames with >=1 visible keypoint
    std::vector<std::string> warnings;
};

/// Pure, report-only pass over a parsed stream.
ValidationReport validate_stream(const DetectionStream& stream);

std::string to_json(const ValidationReport& report);

}  // namespace courtmetrics
