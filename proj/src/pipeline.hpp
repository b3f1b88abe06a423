#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "autoencoder.hpp"
#include "radar_config.hpp"
#include "scores.hpp"

namespace radar_ood {

// Frame counts per split plus the shared scene parameters. Scenes are cut into
// runs of frames_per_scene frames; the last run of a label may be shorter.
struct DatasetPlan {
    std::size_t train_id_frames = 2000;
    std::size_t val_id_frames = 500;
    std::size_t test_id_frames = 500;
    std::size_t test_ood_frames_per_class = 150;
    std::size_t frames_per_scene = 50;
    double noise_std = 0.05;
};

struct CalibrationPlan {
    double quantile = 0.95;
    ScoreKind kind = ScoreKind::Rec;
};

// Parsed from a single JSON document (schema version 1, unknown keys
// rejected). The seed must be explicit; there is no wall-clock fallback.
struct PipelineConfig {
    std::uint64_t seed = 0;
    RadarConfig radar;
    DatasetPlan dataset;
    TrainConfig train;
    CalibrationPlan calibration;
    std::filesystem::path out_dir = "out";
    std::string digest = "0";

    // Embedded in every text artifact so a file names the config that made it.
    std::string manifest() const { return "config=" + digest + " seed=" + std::to_string(seed); }
};

// Fixed artifact names under out_dir; stages address each other only through
// these files.
struct ArtifactPaths {
    std::filesystem::path train_adc, val_adc, test_adc;
    std::filesystem::path train_rdi, val_rdi, test_rdi;
    std::filesystem::path model, baseline_model;
    std::filesystem::path loss_csv, baseline_loss_csv;
    std::filesystem::path val_scores, test_scores, baseline_test_scores;
    std::filesystem::path threshold, report_text, report_json;
};

ArtifactPaths artifact_paths(const std::filesystem::path& out_dir);

std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);
// Digest of a file's raw bytes; IoError if it cannot be read.
std::string file_digest_hex(const std::filesystem::path& path);

// Parses and validates the schema; digest is taken over the document bytes.
PipelineConfig parse_config(const std::string& json_text);
PipelineConfig load_config(const std::filesystem::path& path);

// Each stage reads its declared inputs, writes its artifacts, and returns the
// lines a CLI front end would print. A missing upstream artifact is a
// FormatError (the file contract is broken), not an IoError.
std::vector<std::string> run_simulate(const PipelineConfig& cfg);
std::vector<std::string> run_preprocess(const PipelineConfig& cfg);
std::vector<std::string> run_train(const PipelineConfig& cfg, bool baseline);
std::vector<std::string> run_calibrate(const PipelineConfig& cfg);
std::vector<std::string> run_score(const PipelineConfig& cfg);
std::vector<std::string> run_evaluate(const PipelineConfig& cfg);

// Sniffs the magic and summarizes an RADC/RDIF/AEWT file without a config.
std::vector<std::string> run_inspect(const std::filesystem::path& path);

} // namespace radar_ood
