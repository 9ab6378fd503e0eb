// Python bindings for the courtmetrics core. The surface is deliberately
// string-oriented (JSON/TOML/CSV in, JSON/CSV out) so the Python layer stays
// a thin veneer over the deterministic C++ pipeline.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "courtmetrics/errors.hpp"
#include "courtmetrics/ingest.hpp"
#include "courtmetrics/pipeline.hpp"
#include "courtmetrics/synth.hpp"

namespace py = pybind11;

namespace {

using namespace courtmetrics;

PipelineConfig make_config(const std::string& config_toml, const std::string& calibration) {
    PipelineConfig cfg;
    if (!config_toml.empty()) cfg = parse_config_toml(config_toml);
    if (calibration == "homography") cfg.calibration = CalibrationMode::homography;
    else if (calibration == "scalar") cfg.calibration = CalibrationMode::scalar;
    else if (!calibration.empty())
        raise(ErrorCategory::config, "calibration must be homography or scalar");
    return cfg;
}

py::dict analyze(const std::string& stream_text, const std::string& config_toml,
                 const std::string& calibration, const std::string& label) {
    const PipelineConfig cfg = make_config(config_toml, calibration);
    const DetectionStream stream = parse_stream(stream_text);
    const AnalysisArtifacts artifacts = run_analyze(stream, cfg, label, stream_text);
    py::dict out;
    for (const auto& [name, contents] : artifacts.files) out[py::str(name)] = py::str(contents);
    return out;
}

std::string validate(const std::string& stream_text) {
    return to_json(validate_stream(parse_stream(stream_text)));
}

std::string roundtrip(const std::string& stream_text) {
    return serialize_stream(parse_stream(stream_text));
}

std::string make_rally_script(std::uint64_t seed, int shot_count, double fps,
                              std::pair<double, double> responder_delay_s,
                              const std::vector<double>& shot_speeds_ms,
                              const std::string& name) {
    synth::RallyPlan plan;
    plan.seed = seed;
    plan.shot_count = shot_count;
    plan.fps = fps;
    plan.responder_delay_s = {responder_delay_s.first, responder_delay_s.second};
    plan.shot_speeds_ms = shot_speeds_ms;
    plan.name = name;
    return synth::script_to_json(synth::make_rally_script(plan));
}

py::tuple synth_rally(const std::string& script_json, double sigma, double dropout,
                      double low_conf, std::uint64_t seed) {
    const synth::RallyScript script = synth::script_from_json(script_json);
    synth::SynthResult result = synth::generate_rally(script);
    synth::CorruptionConfig corruption;
    corruption.position_noise_sigma_px = sigma;
    corruption.dropout_prob = dropout;
    corruption.low_conf_prob = low_conf;
    corruption.seed = seed;
    result.stream = synth::corrupt(result.stream, corruption);
    return py::make_tuple(serialize_stream(result.stream), to_json(result.truth));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "courtmetrics: deterministic tennis-match analytics core";
    m.attr("__version__") = kVersion;

    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            const std::string msg = std::string(to_string(e.category())) + ": " + e.what();
            PyErr_SetString(PyExc_ValueError, msg.c_str());
        }
    });

    m.def("analyze", &analyze, py::arg("stream_text"), py::arg("config_toml") = "",
          py::arg("calibration") = "", py::arg("label") = "",
          "Run the full pipeline; returns {artifact name: contents}.");
    m.def("validate", &validate, py::arg("stream_text"),
          "Parse and validate a stream; returns the JSON report.");
    m.def("roundtrip", &roundtrip, py::arg("stream_text"),
          "Parse then re-serialize a stream (canonical form).");
    m.def("default_config", [] { return effective_config_json(PipelineConfig{}); },
          "Effective configuration JSON for the built-in defaults.");
    m.def("itf_court", [] { return CourtModel::itf_standard().to_json(); },
          "Built-in ITF court model as JSON.");
    m.def("make_rally_script", &make_rally_script, py::arg("seed") = 1, py::arg("shot_count") = 8,
          py::arg("fps") = 30.0, py::arg("responder_delay_s") = std::pair<double, double>{0.25, 0.25},
          py::arg("shot_speeds_ms") = std::vector<double>{}, py::arg("name") = "rally",
          "Build a deterministic rally script; returns its JSON.");
    m.def("synth_rally", &synth_rally, py::arg("script_json"), py::arg("sigma") = 0.0,
          py::arg("dropout") = 0.0, py::arg("low_conf") = 0.0, py::arg("seed") = 0,
          "Render a script to (detections_jsonl, ground_truth_json).");
}
