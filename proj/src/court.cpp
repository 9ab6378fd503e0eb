#include "courtmetrics/court.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <utility>

#include <json.hpp>

#include "courtmetrics/detail/jsonfmt.hpp"
#include "courtmetrics/errors.hpp"

namespace courtmetrics {
namespace {

using detail::ordered_json;

// ITF dimensions in meters. Court frame: origin at net center on the ground
// plane, x across the court, y along it.
constexpr double kDoublesHalfWidth = 5.485;   // doubles width 10.97
constexpr double kSinglesHalfWidth = 4.115;   // singles width 8.23
constexpr double kBaselineY = 11.885;         // court length 23.77
constexpr double kServiceLineY = 6.40;

/// Similarity transform taking a point set to centroid 0, mean radius sqrt(2).
Eigen::Matrix3d normalizing_transform(const std::vector<Vec2>& pts) {
    Vec2 centroid{0.0, 0.0};
    for (const Vec2& p : pts) centroid = centroid + p;
    centroid = centroid / static_cast<double>(pts.size());
    double mean_dist = 0.0;
    for (const Vec2& p : pts) mean_dist += distance(p, centroid);
    mean_dist /= static_cast<double>(pts.size());
    const double s = mean_dist > 1e-15 ? std::sqrt(2.0) / mean_dist : 1.0;
    Eigen::Matrix3d t;
    t << s, 0, -s * centroid.x, 0, s, -s * centroid.y, 0, 0, 1;
    return t;
}

Vec2 apply(const Eigen::Matrix3d& m, Vec2 p) {
    const Eigen::Vector3d v = m * Eigen::Vector3d(p.x, p.y, 1.0);
    return {v.x() / v.z(), v.y() / v.z()};
}

/// Plain DLT over pre-gathered correspondences; throws on degeneracy.
Eigen::Matrix3d dlt(const std::vector<Vec2>& image, const std::vector<Vec2>& court) {
    const Eigen::Matrix3d t_img = normalizing_transform(image);
    const Eigen::Matrix3d t_crt = normalizing_transform(court);
    const std::size_t n = image.size();
    Eigen::MatrixXd a(2 * n, 9);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 p = apply(t_img, image[i]);
        const Vec2 q = apply(t_crt, court[i]);
        a.row(2 * i) << -p.x, -p.y, -1, 0, 0, 0, q.x * p.x, q.x * p.y, q.x;
        a.row(2 * i + 1) << 0, 0, 0, -p.x, -p.y, -1, q.y * p.x, q.y * p.y, q.y;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
    const Eigen::VectorXd& sigma = svd.singularValues();
    // A non-unique null space means the correspondences do not pin down a
    // homography (collinear or repeated points).
    if (sigma(7) < 1e-9 * sigma(0))
        raise(ErrorCategory::degeneracy, "correspondences are degenerate (rank-deficient system)");
    const Eigen::VectorXd h = svd.matrixV().col(8);
    Eigen::Matrix3d hn;
    hn << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);
    Eigen::Matrix3d result = t_crt.inverse() * hn * t_img;
    if (std::abs(result(2, 2)) > 1e-12) result /= result(2, 2);
    if (std::abs(result.determinant()) <= 1e-12)
        raise(ErrorCategory::degeneracy, "estimated homography is singular");
    return result;
}

std::vector<double> reprojection_errors_px(const Eigen::Matrix3d& h,
                                           const std::vector<Vec2>& image,
                                           const std::vector<Vec2>& court) {
    const Eigen::Matrix3d inv = h.inverse();
    std::vector<double> errs(image.size());
    for (std::size_t i = 0; i < image.size(); ++i)
        errs[i] = distance(apply(inv, court[i]), image[i]);
    return errs;
}

}  // namespace

CourtModel::CourtModel(std::string name,
                       std::array<CourtLandmark, kCourtKeypointCount> landmarks,
                       std::vector<Vec2> boundary,
                       std::map<std::string, double> known_lengths)
    : name_(std::move(name)),
      landmarks_(std::move(landmarks)),
      boundary_(std::move(boundary)),
      known_lengths_(std::move(known_lengths)) {
    if (boundary_.size() < 3 || !polygon_is_convex(boundary_))
        raise(ErrorCategory::schema, "court boundary polygon must be simple and convex");
    for (const auto& [key, value] : known_lengths_)
        if (!(value > 0.0))
            raise(ErrorCategory::schema, "known length \"" + key + "\" must be positive");
}

CourtModel CourtModel::itf_standard() {
    const std::array<CourtLandmark, kCourtKeypointCount> landmarks{{
        {"doubles_near_left", {-kDoublesHalfWidth, -kBaselineY}},
        {"doubles_near_right", {kDoublesHalfWidth, -kBaselineY}},
        {"doubles_far_left", {-kDoublesHalfWidth, kBaselineY}},
        {"doubles_far_right", {kDoublesHalfWidth, kBaselineY}},
        {"singles_near_left", {-kSinglesHalfWidth, -kBaselineY}},
        {"singles_near_right", {kSinglesHalfWidth, -kBaselineY}},
        {"singles_far_left", {-kSinglesHalfWidth, kBaselineY}},
        {"singles_far_right", {kSinglesHalfWidth, kBaselineY}},
        {"service_near_left", {-kSinglesHalfWidth, -kServiceLineY}},
        {"service_near_right", {kSinglesHalfWidth, -kServiceLineY}},
        {"service_far_left", {-kSinglesHalfWidth, kServiceLineY}},
        {"service_far_right", {kSinglesHalfWidth, kServiceLineY}},
        {"service_center_near", {0.0, -kServiceLineY}},
        {"service_center_far", {0.0, kServiceLineY}},
    }};
    std::vector<Vec2> boundary{{-kDoublesHalfWidth, -kBaselineY},
                               {kDoublesHalfWidth, -kBaselineY},
                               {kDoublesHalfWidth, kBaselineY},
                               {-kDoublesHalfWidth, kBaselineY}};
    std::map<std::string, double> lengths{
        {"doubles_width", 2 * kDoublesHalfWidth},
        {"singles_width", 2 * kSinglesHalfWidth},
        {"court_length", 2 * kBaselineY},
        {"service_line_span", 2 * kServiceLineY},
    };
    return CourtModel("itf-standard", landmarks, std::move(boundary), std::move(lengths));
}

CourtModel CourtModel::from_json(const std::string& text) {
    nlohmann::json obj = nlohmann::json::parse(text, nullptr, false);
    if (obj.is_discarded() || !obj.is_object())
        raise(ErrorCategory::parse, "court model: malformed JSON");
    try {
        std::string name = obj.value("name", std::string("custom"));
        const auto& lm = obj.at("landmarks");
        if (!lm.is_array() || lm.size() != kCourtKeypointCount)
            raise(ErrorCategory::schema,
                  "court model must define exactly " + std::to_string(kCourtKeypointCount) +
                      " landmarks");
        std::array<CourtLandmark, kCourtKeypointCount> landmarks;
        for (std::size_t i = 0; i < kCourtKeypointCount; ++i) {
            landmarks[i].name = lm[i].at("name").get<std::string>();
            landmarks[i].position = {lm[i].at("x").get<double>(), lm[i].at("y").get<double>()};
        }
        std::vector<Vec2> boundary;
        for (const auto& p : obj.at("boundary"))
            boundary.push_back({p.at("x").get<double>(), p.at("y").get<double>()});
        std::map<std::string, double> lengths;
        for (const auto& [key, value] : obj.at("known_lengths").items())
            lengths[key] = value.get<double>();
        return CourtModel(std::move(name), landmarks, std::move(boundary), std::move(lengths));
    } catch (const nlohmann::json::exception& e) {
        raise(ErrorCategory::schema, std::string("court model: ") + e.what());
    }
}

std::string CourtModel::to_json() const {
    ordered_json obj;
    obj["name"] = name_;
    ordered_json lm = ordered_json::array();
    for (const CourtLandmark& l : landmarks_)
        lm.push_back({{"name", l.name}, {"x", l.position.x}, {"y", l.position.y}});
    obj["landmarks"] = std::move(lm);
    ordered_json boundary = ordered_json::array();
    for (const Vec2& p : boundary_) boundary.push_back({{"x", p.x}, {"y", p.y}});
    obj["boundary"] = std::move(boundary);
    obj["known_lengths"] = known_lengths_;
    return obj.dump(2);
}

double CourtModel::known_length(const std::string& key) const {
    auto it = known_lengths_.find(key);
    if (it == known_lengths_.end())
        raise(ErrorCategory::parameter, "unknown reference length \"" + key + '"');
    return it->second;
}

Homography Homography::from_matrix(const Eigen::Matrix3d& m) {
    Homography h{m};
    if (std::abs(h.matrix(2, 2)) > 1e-12) h.matrix /= h.matrix(2, 2);
    return h;
}

std::array<double, 9> Homography::row_major() const {
    std::array<double, 9> out;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) out[3 * r + c] = matrix(r, c);
    return out;
}

HomographyEstimate estimate_homography(std::span<const std::optional<Vec2>> keypoints,
                                       const CourtModel& model, const DltOptions& options) {
    if (keypoints.size() != kCourtKeypointCount)
        raise(ErrorCategory::parameter,
              "expected " + std::to_string(kCourtKeypointCount) + " optional keypoints, got " +
                  std::to_string(keypoints.size()));
    std::vector<Vec2> image, court;
    for (std::size_t i = 0; i < keypoints.size(); ++i) {
        if (!keypoints[i]) continue;
        image.push_back(*keypoints[i]);
        court.push_back(model.landmarks()[i].position);
    }
    if (image.size() < 4)
        raise(ErrorCategory::insufficient_correspondences,
              "homography needs at least 4 visible keypoints, got " +
                  std::to_string(image.size()));

    Eigen::Matrix3d h = dlt(image, court);
    std::vector<double> errs = reprojection_errors_px(h, image, court);

    if (options.robust_refit) {
        std::vector<Vec2> in_image, in_court;
        for (std::size_t i = 0; i < errs.size(); ++i) {
            if (errs[i] <= options.outlier_reprojection_px) {
                in_image.push_back(image[i]);
                in_court.push_back(court[i]);
            }
        }
        if (in_image.size() >= 4 && in_image.size() < image.size()) {
            h = dlt(in_image, in_court);
            image = std::move(in_image);
            court = std::move(in_court);
            errs = reprojection_errors_px(h, image, court);
        }
    }

    HomographyEstimate est;
    est.image_to_court = Homography::from_matrix(h);
    est.points_used = static_cast<int>(image.size());
    double sum = 0.0;
    for (double e : errs) sum += e;
    est.mean_reprojection_px = errs.empty() ? 0.0 : sum / static_cast<double>(errs.size());
    return est;
}

Vec2 project(const Homography& h, Vec2 p) {
    const Eigen::Vector3d v = h.matrix * Eigen::Vector3d(p.x, p.y, 1.0);
    if (std::abs(v.z()) < 1e-12)
        raise(ErrorCategory::point_at_infinity,
              "projection of (" + detail::format9(p.x) + ", " + detail::format9(p.y) +
                  ") maps to infinity");
    return {v.x() / v.z(), v.y() / v.z()};
}

Homography invert(const Homography& h) {
    if (std::abs(h.matrix.determinant()) <= 1e-12)
        raise(ErrorCategory::degeneracy, "cannot invert a singular homography");
    return Homography::from_matrix(h.matrix.inverse());
}

CalibrationScale scale_from_reference(double measured_px, const std::string& length_name,
                                      const CourtModel& model) {
    if (!(measured_px > 0.0))
        raise(ErrorCategory::domain, "reference length must be measured over a positive pixel span");
    CalibrationScale scale;
    scale.meters_per_pixel = model.known_length(length_name) / measured_px;
    scale.reference_used = length_name;
    return scale;
}

double pixel_to_meters(double distance_px, const CalibrationScale& scale) {
    if (distance_px < 0.0)
        raise(ErrorCategory::domain, "pixel distance must be non-negative");
    return distance_px * scale.meters_per_pixel;
}

bool point_in_or_near_court(Vec2 p, std::span<const Vec2> boundary, double margin_px) {
    if (margin_px < 0.0)
        raise(ErrorCategory::parameter, "margin must be non-negative");
    if (point_in_polygon(p, boundary)) return true;
    return distance_to_polygon_edges(p, boundary) <= margin_px;
}

std::array<std::optional<Vec2>, kCourtKeypointCount> visible_keypoints(
    const std::array<CourtKeypoint, kCourtKeypointCount>& detected, double min_confidence) {
    std::array<std::optional<Vec2>, kCourtKeypointCount> out;
    for (std::size_t i = 0; i < kCourtKeypointCount; ++i)
        if (detected[i].visible && detected[i].confidence >= min_confidence)
            out[i] = Vec2{detected[i].x, detected[i].y};
    return out;
}

}  // namespace courtmetrics
