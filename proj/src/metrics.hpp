#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "scores.hpp"

namespace radar_ood {

// Detection metrics over score records, oriented per the scoring contract:
// higher score means OOD. AUROC is the Mann-Whitney rank statistic (ties get
// half credit), AUPR is step-wise average precision with tied scores
// processed as one group.

struct MetricRow {
    double auroc = 0.0;
    double aupr_in = 0.0;
    double aupr_out = 0.0;
};

// Metrics of one model's record set for both score kinds.
struct Evaluation {
    MetricRow rec;
    MetricRow energy;
    std::size_t id_count = 0;
    std::size_t ood_count = 0;
};

// The desk-scale counterpart of the paper's comparison table: the patch
// model's two scores plus the full-image baseline's reconstruction score.
struct EvalReport {
    MetricRow pb_rec;
    MetricRow pb_energy;
    MetricRow baseline_rec;
    std::size_t id_count = 0;
    std::size_t ood_count = 0;
    std::uint64_t dataset_seed = 0;
    std::string weights_digest;
};

// Fraction of (ood, id) pairs ranked correctly; equals trapezoidal ROC area.
double auroc(std::span<const double> id_scores, std::span<const double> ood_scores);

// Average precision with higher == positive. For AUPR_IN pass negated scores
// with ID as the positive class; for AUPR_OUT pass raw scores with OOD
// positive.
double aupr(std::span<const double> positives, std::span<const double> negatives);

// Splits records by label and computes all three metrics per score kind.
// Throws DegenerateDataError unless both classes are present.
Evaluation evaluate(std::span<const ScoreRecord> records);

// Aligned three-row table (percent, two decimals) matching the paper's
// method/metric layout.
std::string render_report_table(const EvalReport& report);

// Machine-readable twin of the table with stable key order.
std::string report_to_json(const EvalReport& report);

} // namespace radar_ood
