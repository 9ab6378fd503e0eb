#include <doctest.h>

#include <sstream>
#include <string>

#include "courtmetrics/errors.hpp"
#include "courtmetrics/ingest.hpp"

using namespace courtmetrics;

namespace {

const std::string kHeader = R"({"fps":30.0,"width":1280,"height":720,"source":"unit"})";

std::string lines(std::initializer_list<std::string> rows) {
    std::string out;
    for (const auto& row : rows) out += row + "\n";
    return out;
}

std::string keypoints_json(int count) {
    std::string out = "[";
    for (int i = 0; i < count; ++i) {
        if (i) out += ",";
        out += R"({"x":)" + std::to_string(100 + i) + R"(,"y":200,"visible":true,"confidence":0.9})";
    }
    return out + "]";
}

ErrorCategory category_of(const std::string& input) {
    try {
        parse_stream(input);
    } catch (const Error& e) {
        return e.category();
    }
    FAIL("expected parse_stream to throw");
    return ErrorCategory::io;
}

}  // namespace

TEST_CASE("header plus one valid frame round-trips every field") {
    const std::string input = lines(
        {kHeader,
         R"({"frame":3,"persons":[{"bbox":[10.5,20.25,30,40],"confidence":0.75}],)"
         R"("ball":{"bbox":[600,300,12,12],"confidence":0.9},"keypoints":)" + keypoints_json(14) +
             "}"});
    const DetectionStream s = parse_stream(input);
    CHECK(s.header.fps == 30.0);
    CHECK(s.header.width == 1280);
    CHECK(s.header.height == 720);
    CHECK(s.header.source == "unit");
    REQUIRE(s.frames.size() == 1);
    const DetectionFrame& f = s.frames[0];
    CHECK(f.frame_index == 3);
    REQUIRE(f.persons.size() == 1);
    CHECK(f.persons[0].bbox.x == 10.5);
    CHECK(f.persons[0].bbox.y == 20.25);
    CHECK(f.persons[0].bbox.w == 30.0);
    CHECK(f.persons[0].bbox.h == 40.0);
    CHECK(f.persons[0].confidence == 0.75);
    REQUIRE(f.ball.has_value());
    CHECK(f.ball->bbox.x == 600.0);
    CHECK(f.ball->confidence == 0.9);
    REQUIRE(f.keypoints.has_value());
    CHECK((*f.keypoints)[0].x == 100.0);
    CHECK((*f.keypoints)[13].x == 113.0);
    CHECK((*f.keypoints)[5].visible);
}

TEST_CASE("missing ball key becomes an explicit absent value") {
    const DetectionStream s = parse_stream(lines({kHeader, R"({"frame":0,"persons":[]})"}));
    REQUIRE(s.frames.size() == 1);
    CHECK_FALSE(s.frames[0].ball.has_value());
    CHECK_FALSE(s.frames[0].keypoints.has_value());
    CHECK(s.frames[0].persons.empty());
}

TEST_CASE("13 keypoints is a schema error naming the frame") {
    const std::string input =
        lines({kHeader, R"({"frame":7,"keypoints":)" + keypoints_json(13) + "}"});
    try {
        parse_stream(input);
        FAIL("expected schema error");
    } catch (const Error& e) {
        CHECK(e.category() == ErrorCategory::schema);
        CHECK(std::string(e.what()).find("frame 7") != std::string::npos);
        CHECK(std::string(e.what()).find("14") != std::string::npos);
    }
}

TEST_CASE("malformed line reports its line number") {
    const std::string input = lines({kHeader, R"({"frame":0})", "{not json"});
    try {
        parse_stream(input);
        FAIL("expected parse error");
    } catch (const Error& e) {
        CHECK(e.category() == ErrorCategory::parse);
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("duplicate and decreasing frame indices are ordering errors") {
    CHECK(category_of(lines({kHeader, R"({"frame":4})", R"({"frame":4})"})) ==
          ErrorCategory::ordering);
    CHECK(category_of(lines({kHeader, R"({"frame":4})", R"({"frame":2})"})) ==
          ErrorCategory::ordering);
}

TEST_CASE("schema violations are rejected") {
    // confidence out of [0,1]
    CHECK(category_of(lines({kHeader, R"({"frame":0,"ball":{"bbox":[1,1,2,2],"confidence":1.5}})"})) ==
          ErrorCategory::schema);
    // non-positive bbox size
    CHECK(category_of(lines(
              {kHeader, R"({"frame":0,"persons":[{"bbox":[1,1,0,2],"confidence":0.5}]})"})) ==
          ErrorCategory::schema);
    // negative frame index
    CHECK(category_of(lines({kHeader, R"({"frame":-1})"})) == ErrorCategory::schema);
    // bad header values
    CHECK(category_of(lines({R"({"fps":0,"width":1280,"height":720})"})) == ErrorCategory::schema);
    CHECK(category_of(lines({R"({"fps":30,"width":0,"height":720})"})) == ErrorCategory::schema);
    // empty input
    CHECK(category_of("") == ErrorCategory::parse);
}

TEST_CASE("parse then serialize is the identity on valid streams") {
    const std::string input = lines(
        {kHeader,
         R"({"frame":0,"persons":[{"bbox":[10.125,20,30,40],"confidence":0.5}],"ball":{"bbox":[600.4,300.7,12,12],"confidence":0.97}})",
         R"({"frame":2,"keypoints":)" + keypoints_json(14) + "}",
         R"({"frame":5,"persons":[]})"});
    const DetectionStream a = parse_stream(input);
    const std::string serialized = serialize_stream(a);
    const DetectionStream b = parse_stream(serialized);
    CHECK(serialize_stream(b) == serialized);  // fixed point after one pass
    REQUIRE(b.frames.size() == a.frames.size());
    for (std::size_t i = 0; i < a.frames.size(); ++i) {
        CHECK(b.frames[i].frame_index == a.frames[i].frame_index);
        CHECK(b.frames[i].persons.size() == a.frames[i].persons.size());
        CHECK(b.frames[i].ball.has_value() == a.frames[i].ball.has_value());
    }
    CHECK(b.frames[0].ball->bbox.x == a.frames[0].ball->bbox.x);  // shortest round-trip floats
    CHECK(b.frames[0].persons[0].bbox.x == 10.125);
    CHECK(b.header.fps == a.header.fps);
    CHECK(b.header.source == a.header.source);
}

TEST_CASE("frames come back in input order") {
    std::string input = kHeader + "\n";
    for (int f = 0; f < 50; f += 2) input += R"({"frame":)" + std::to_string(f) + "}\n";
    const DetectionStream s = parse_stream(input);
    REQUIRE(s.frames.size() == 25);
    for (std::size_t i = 0; i < s.frames.size(); ++i)
        CHECK(s.frames[i].frame_index == static_cast<std::int64_t>(2 * i));
}

TEST_CASE("validation: contiguous full-coverage stream") {
    std::string input = kHeader + "\n";
    for (int f = 0; f < 100; ++f)
        input += R"({"frame":)" + std::to_string(f) +
                 R"(,"ball":{"bbox":[600,300,12,12],"confidence":0.9}})" + "\n";
    const ValidationReport r = validate_stream(parse_stream(input));
    CHECK(r.frame_count == 100);
    CHECK(r.gaps.empty());
    CHECK(r.ball_coverage == 1.0);
    CHECK(r.keypoint_coverage == 0.0);
}

TEST_CASE("validation: frames {0,1,3} report gap (2,2)") {
    const ValidationReport r = validate_stream(
        parse_stream(lines({kHeader, R"({"frame":0})", R"({"frame":1})", R"({"frame":3})"})));
    REQUIRE(r.gaps.size() == 1);
    CHECK(r.gaps[0].first == 2);
    CHECK(r.gaps[0].last == 2);
}

TEST_CASE("validation: no keypoints anywhere warns that court mapping is impossible") {
    const ValidationReport r =
        validate_stream(parse_stream(lines({kHeader, R"({"frame":0})", R"({"frame":1})"})));
    CHECK(r.keypoint_coverage == 0.0);
    bool warned = false;
    for (const auto& w : r.warnings)
        if (w.find("court mapping is impossible") != std::string::npos) warned = true;
    CHECK(warned);
}

TEST_CASE("validation is pure: identical input gives identical report") {
    const std::string input = lines({kHeader, R"({"frame":0})", R"({"frame":9})"});
    const DetectionStream s = parse_stream(input);
    CHECK(to_json(validate_stream(s)) == to_json(validate_stream(s)));
}

TEST_CASE("keypoint visibility flags survive parsing") {
    std::string kps = "[";
    for (int i = 0; i < 14; ++i) {
        if (i) kps += ",";
        const bool vis = i % 2 == 0;
        kps += R"({"x":1,"y":2,"visible":)" + std::string(vis ? "true" : "false") +
               R"(,"confidence":0.8})";
    }
    kps += "]";
    const DetectionStream s =
        parse_stream(lines({kHeader, R"({"frame":0,"keypoints":)" + kps + "}"}));
    REQUIRE(s.frames[0].keypoints.has_value());
    CHECK((*s.frames[0].keypoints)[0].visible);
    CHECK_FALSE((*s.frames[0].keypoints)[1].visible);
}
