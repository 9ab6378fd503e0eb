#pragma once

#include <map>
#include <optional>
#include <string>

#include "courtmetrics/events.hpp"
#include "courtmetrics/ingest.hpp"
#include "courtmetrics/metrics.hpp"
#include "courtmetrics/tracking.hpp"

namespace courtmetrics {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kCourtModelEnvVar = "COURTMETRICS_COURT";

enum class CalibrationMode { homography, scalar };

const char* to_string(CalibrationMode mode);

/// Every tunable of the analyze pipeline, with defaults equal to the module
/// constants (single source of truth, asserted by tests).
struct PipelineConfig {
    double low_conf = kDefaultLowConfidence;
    double angle_threshold_deg = kDefaultAngleThresholdDeg;
    double speed_change_ratio = kDefaultSpeedChangeRatio;
    double min_gap_s = kDefaultMinGapSeconds;
    double margin_px = kDefaultMarginPx;
    double movement_threshold_m = kDefaultMovementThresholdM;
    int max_gap_frames = kDefaultMaxGapFrames;
    double max_strike_distance_m = kDefaultMaxStrikeDistanceM;
    KalmanParams kalman;
    CalibrationMode calibration = CalibrationMode::homography;
    std::string court_model_path;  // empty = built-in ITF standard model
};

/// Parse the TOML configuration (sections [thresholds], [kalman],
/// [calibration], [court]; see README). Unknown sections or keys and
/// out-of-domain values raise Error{config}.
PipelineConfig parse_config_toml(const std::string& text);

/// Canonical JSON rendering of the effective configuration; embedded in the
/// run manifest and hashed for auditability.
std::string effective_config_json(const PipelineConfig& cfg);

/// FNV-1a 64-bit over a byte string, hex-encoded. Used for manifest hashes.
std::string fnv1a64_hex(std::string_view bytes);

/// In-memory analysis products keyed by artifact file name.
struct AnalysisArtifacts {
    MatchMetrics metrics;
    std::map<std::string, std::string> files;  // name -> contents
};

/// Run the full pipeline on a parsed stream: homography estimation with the
/// static-camera cadence, player identification, ball interpolation and
/// smoothing, court projection, shot detection and attribution, metric
/// aggregation, and artifact rendering (metrics.json, shots.csv, heatmap
/// CSVs, minicourt.jsonl, run_manifest.json). `input_label` and
/// `input_bytes` only feed the manifest's provenance block.
AnalysisArtifacts run_analyze(const DetectionStream& stream,
                              const PipelineConfig& cfg,
                              const std::string& input_label = "",
                              std::string_view input_bytes = {});

/// Resolve the court model from (in priority order) the explicit config
/// path, the COURTMETRICS_COURT environment variable, or the built-in ITF
/// model.
CourtModel resolve_court_model(const PipelineConfig& cfg);

/// Write every artifact under out_dir, creating it if needed.
void write_artifacts(const AnalysisArtifacts& artifacts,
                     const std::string& out_dir);

}  // namespace courtmetrics
