// courtmetrics command-line front end: analyze / synth / validate.
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "courtmetrics/errors.hpp"
#include "courtmetrics/ingest.hpp"
#include "courtmetrics/pipeline.hpp"
#include "courtmetrics/synth.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) courtmetrics::raise(courtmetrics::ErrorCategory::io, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) courtmetrics::raise(courtmetrics::ErrorCategory::io, "cannot write " + path);
    out << contents;
    if (!out) courtmetrics::raise(courtmetrics::ErrorCategory::io, "short write to " + path);
}

struct AnalyzeArgs {
    std::string detections;
    std::string config;
    std::string out_dir;
    std::string calibration;
};

struct SynthArgs {
    std::string script;
    std::string out_dir;
    double sigma = 0.0;
    double dropout = 0.0;
    std::uint64_t seed = 0;
};

int run_analyze_cmd(const AnalyzeArgs& args) {
    using namespace courtmetrics;
    PipelineConfig cfg;
    if (!args.config.empty()) cfg = parse_config_toml(read_file(args.config));
    if (args.calibration == "homography") cfg.calibration = CalibrationMode::homography;
    else if (args.calibration == "scalar") cfg.calibration = CalibrationMode::scalar;
    else if (!args.calibration.empty())
        raise(ErrorCategory::config, "--calibration must be homography or scalar");
    const std::string bytes = read_file(args.detections);
    const DetectionStream stream = parse_stream(bytes);
    const AnalysisArtifacts artifacts =
        run_analyze(stream, cfg, std::filesystem::path(args.detections).filename().string(), bytes);
    write_artifacts(artifacts, args.out_dir);
    std::cout << "wrote " << artifacts.files.size() << " artifacts to " << args.out_dir << "\n";
    return 0;
}

int run_synth_cmd(const SynthArgs& args) {
    using namespace courtmetrics;
    const synth::RallyScript script = synth::script_from_json(read_file(args.script));
    synth::SynthResult result = synth::generate_rally(script);
    synth::CorruptionConfig corruption;
    corruption.position_noise_sigma_px = args.sigma;
    corruption.dropout_prob = args.dropout;
    corruption.seed = args.seed;
    result.stream = synth::corrupt(result.stream, corruption);
    std::error_code ec;
    std::filesystem::create_directories(args.out_dir, ec);
    if (ec) raise(ErrorCategory::io, "cannot create " + args.out_dir + ": " + ec.message());
    write_file(args.out_dir + "/detections.jsonl", serialize_stream(result.stream));
    write_file(args.out_dir + "/ground_truth.json", to_json(result.truth));
    std::cout << "wrote detections.jsonl and ground_truth.json to " << args.out_dir << "\n";
    return 0;
}

int run_validate_cmd(const std::string& detections) {
    using namespace courtmetrics;
    const DetectionStream stream = parse_stream(read_file(detections));
    std::cout << to_json(validate_stream(stream)) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"courtmetrics: deterministic tennis-match analytics"};
    app.require_subcommand(1);

    AnalyzeArgs analyze_args;
    CLI::App* analyze = app.add_subcommand("analyze", "Run the full pipeline on a detection stream");
    analyze->add_option("--detections", analyze_args.detections, "Detection stream (JSON Lines)")
        ->required();
    analyze->add_option("--config", analyze_args.config, "Pipeline configuration (TOML)");
    analyze->add_option("--out-dir", analyze_args.out_dir, "Artifact output directory")->required();
    analyze->add_option("--calibration", analyze_args.calibration,
                        "Override calibration mode: homography|scalar");

    SynthArgs synth_args;
    CLI::App* synth_cmd = app.add_subcommand("synth", "Render a rally script into a stream");
    synth_cmd->add_option("--script", synth_args.script, "Rally script (JSON)")->required();
    synth_cmd->add_option("--out-dir", synth_args.out_dir, "Output directory")->required();
    synth_cmd->add_option("--sigma", synth_args.sigma, "Gaussian pixel noise sigma");
    synth_cmd->add_option("--dropout", synth_args.dropout, "Ball dropout probability");
    synth_cmd->add_option("--seed", synth_args.seed, "Corruption random seed");

    std::string validate_detections;
    CLI::App* validate = app.add_subcommand("validate", "Check a stream and report coverage");
    validate->add_option("--detections", validate_detections, "Detection stream (JSON Lines)")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) return run_analyze_cmd(analyze_args);
        if (synth_cmd->parsed()) return run_synth_cmd(synth_args);
        return run_validate_cmd(validate_detections);
    } catch (const courtmetrics::Error& e) {
        std::cerr << "error[" << courtmetrics::to_string(e.category()) << "]: " << e.what() << "\n";
        return courtmetrics::exit_code(e.category());
    } catch (const std::exception& e) {
        std::cerr << "error[internal]: " << e.what() << "\n";
        return 1;
    }
}
