#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "autoencoder.hpp"
#include "dsp.hpp"

namespace radar_ood {

// OOD scores over range-Doppler images. Both scores are oriented so that
// higher means more out-of-distribution; samples below the calibrated
// threshold are accepted as in-distribution.

enum class ScoreKind : std::uint8_t { Rec = 0, Energy = 1 };
enum class Decision : std::uint8_t { Id = 0, Ood = 1 };

struct ScoreRecord {
    std::uint32_t frame_id = 0;
    SceneLabel label = SceneLabel::IdWalk;
    double s_rec = 0.0;
    double s_energy = 0.0;
};

struct Threshold {
    double value = 0.0;
    ScoreKind kind = ScoreKind::Rec;
    double quantile = 0.95;
};

// LogSumExp with max subtraction; throws DegenerateDataError on an empty or
// non-finite input.
double log_sum_exp(std::span<const double> values);

// Mean over the four patches of the per-patch mean squared reconstruction
// error; for a baseline model, MSE over the whole image. Needs decoder
// weights (ProtocolError otherwise).
double score_rec(const RangeDopplerImage& rdi, const Autoencoder& model);

// Element-wise sum of the four patch latents followed by LogSumExp over the
// 128 latent dimensions; for a baseline model, LSE of its single latent.
// Encoder-only weights suffice.
double score_energy(const RangeDopplerImage& rdi, const Autoencoder& model);

// Both scores per frame, in input order; each patch is encoded once and the
// results match the single-frame functions bit for bit.
std::vector<ScoreRecord> score_dataset(const std::vector<RangeDopplerImage>& rdis,
                                       const Autoencoder& model);

// Empirical quantile with linear interpolation between order statistics,
// computed over ID validation scores. quantile must lie strictly in (0,1).
Threshold calibrate_threshold(std::span<const double> id_validation_scores, double quantile,
                              ScoreKind kind);

// ID iff score < threshold (a score equal to the threshold is OOD).
Decision classify(double score, const Threshold& threshold);

const char* score_kind_name(ScoreKind kind); // "REC" / "ENERGY"
ScoreKind parse_score_kind(const std::string& name);

// CSV with header frame_id,label,score_rec,score_energy; scores printed with
// 9 significant digits; an optional "# manifest: ..." comment line leads.
void write_scores_csv(const std::filesystem::path& path, std::span<const ScoreRecord> records,
                      const std::string& manifest);
std::vector<ScoreRecord> read_scores_csv(const std::filesystem::path& path);

// Single line "kind,quantile,tau"; doubles round-trip exactly.
void write_threshold_file(const std::filesystem::path& path, const Threshold& threshold);
Threshold read_threshold_file(const std::filesystem::path& path);

} // namespace radar_ood
