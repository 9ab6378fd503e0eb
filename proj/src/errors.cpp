#include "courtmetrics/errors.hpp"

namespace courtmetrics {

const char* to_string(ErrorCategory category) {
    switch (category) {
        case ErrorCategory::io: return "io";
        case ErrorCategory::parse: return "parse";
        case ErrorCategory::ordering: return "ordering";
        case ErrorCategory::schema: return "schema";
        case ErrorCategory::insufficient_correspondences: return "insufficient_correspondences";
        case ErrorCategory::degeneracy: return "degeneracy";
        case ErrorCategory::point_at_infinity: return "point_at_infinity";
        case ErrorCategory::domain: return "domain";
        case ErrorCategory::parameter: return "parameter";
        case ErrorCategory::empty_track: return "empty_track";
        case ErrorCategory::interval: return "interval";
        case ErrorCategory::calibration_unavailable: return "calibration_unavailable";
        case ErrorCategory::script: return "script";
        case ErrorCategory::config: return "config";
    }
    return "unknown";
}

int exit_code(ErrorCategory category) {
    switch (category) {
        case ErrorCategory::io: return 2;
        case ErrorCategory::parse: return 3;
        case ErrorCategory::ordering: return 3;
        case ErrorCategory::schema: return 3;
        case ErrorCategory::config: return 4;
        case ErrorCategory::script: return 4;
        case ErrorCategory::parameter: return 4;
        case ErrorCategory::insufficient_correspondences: return 5;
        case ErrorCategory::degeneracy: return 5;
        case ErrorCategory::calibration_unavailable: return 5;
        case ErrorCategory::point_at_infinity: return 6;
        case ErrorCategory::domain: return 6;
        case ErrorCategory::empty_track: return 6;
        case ErrorCategory::interval: return 6;
    }
    return 1;
}

}  // namespace courtmetrics
