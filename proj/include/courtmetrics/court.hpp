#pragma once

#include <Eigen/Dense>
#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "courtmetrics/geometry.hpp"
#include "courtmetrics/ingest.hpp"

namespace courtmetrics {

/// Detected keypoints below this confidence are treated as invisible when
/// estimating the homography.
inline constexpr double kKeypointMinConfidence = 0.5;

/// Reprojection gate (pixels) for the one-shot robust refit.
inline constexpr double kOutlierReprojectionPx = 10.0;

struct CourtLandmark {
    std::string name;
    Vec2 position;  // meters, canonical court frame
};

/// Canonical court geometry. The court frame has its origin at the center of
/// the net on the ground plane, x across the court and y along it, so the
/// baselines sit at y = +-11.885 m and the doubles sidelines at
/// x = +-5.485 m. Landmark indices 0-13 are fixed (docs/stream-format.md).
class CourtModel {
public:
    static CourtModel itf_standard();
    static CourtModel from_json(const std::string& text);
    std::string to_json() const;

    CourtModel(std::string name,
               std::array<CourtLandmark, kCourtKeypointCount> landmarks,
               std::vector<Vec2> boundary,
               std::map<std::string, double> known_lengths);

    const std::string& name() const { return name_; }
    const std::array<CourtLandmark, kCourtKeypointCount>& landmarks() const {
        return landmarks_;
    }
    std::span<const Vec2> boundary() const { return boundary_; }
    const std::map<std::string, double>& known_lengths() const {
        return known_lengths_;
    }
    double known_length(const std::string& key) const;

private:
    std::string name_;
    std::array<CourtLandmark, kCourtKeypointCount> landmarks_;
    std::vector<Vec2> boundary_;
    std::map<std::string, double> known_lengths_;
};

/// 3x3 projective map, image plane -> court plane. Normalized so the
/// bottom-right entry is 1 whenever it is nonzero.
struct Homography {
    Eigen::Matrix3d matrix = Eigen::Matrix3d::Identity();

    static Homography from_matrix(const Eigen::Matrix3d& m);
    /// Row-major 9-element export used by metric outputs.
    std::array<double, 9> row_major() const;
};

struct HomographyEstimate {
    Homography image_to_court;
    double mean_reprojection_px = 0.0;
    int points_used = 0;
};

struct DltOptions {
    bool robust_refit = true;
    double outlier_reprojection_px = kOutlierReprojectionPx;
};

/// Least-squares homography over all visible correspondences via the
/// normalized direct linear transform. `keypoints` holds one optional image
/// point per landmark index; at least 4 must be present and non-degenerate.
HomographyEstimate estimate_homography(
    std::span<const std::optional<Vec2>> keypoints, const CourtModel& model,
    const DltOptions& options = {});

/// Homogeneous application p' = H p followed by dehomogenization.
Vec2 project(const Homography& h, Vec2 p);

Homography invert(const Homography& h);

/// Pixel -> meter conversion factor derived from one known court length.
struct CalibrationScale {
    double meters_per_pixel = 0.0;
    std::string reference_used;
};

/// Build a scale from a reference length measured in the image.
CalibrationScale scale_from_reference(double measured_px,
                                      const std::string& length_name,
                                      const CourtModel& model);

double pixel_to_meters(double distance_px, const CalibrationScale& scale);

/// True iff p lies inside `boundary` or within margin_px of its edges.
bool point_in_or_near_court(Vec2 p, std::span<const Vec2> boundary,
                            double margin_px);

/// Convert one frame's detected keypoints into the optional-per-landmark
/// form consumed by estimate_homography, dropping invisible and
/// low-confidence points.
std::array<std::optional<Vec2>, kCourtKeypointCount> visible_keypoints(
    const std::array<CourtKeypoint, kCourtKeypointCount>& detected,
    double min_confidence = kKeypointMinConfidence);

}  // namespace courtmetrics
