#include "metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <vector>

#include "errors.hpp"

namespace radar_ood {

namespace {

std::string shortest(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void append_method(std::string& out, const char* name, const MetricRow& row, bool last) {
    out += "    \"";
    out += name;
    out += "\": {\"auroc\": " + shortest(row.auroc) + ", \"aupr_in\": " + shortest(row.aupr_in) +
           ", \"aupr_out\": " + shortest(row.aupr_out) + "}";
    out += last ? "\n" : ",\n";
}

} // namespace

double auroc(std::span<const double> id_scores, std::span<const double> ood_scores) {
    if (id_scores.empty() || ood_scores.empty())
        throw DegenerateDataError("auroc: both classes must be nonempty");

    std::vector<double> ood_sorted(ood_scores.begin(), ood_scores.end());
    std::sort(ood_sorted.begin(), ood_sorted.end());

    // per ID score: OOD scores above it win, equal ones give half credit
    std::uint64_t wins = 0, ties = 0;
    for (double v : id_scores) {
        const auto lo = std::lower_bound(ood_sorted.begin(), ood_sorted.end(), v);
        const auto hi = std::upper_bound(lo, ood_sorted.end(), v);
        wins += std::uint64_t(ood_sorted.end() - hi);
        ties += std::uint64_t(hi - lo);
    }
    const double pairs = double(id_scores.size()) * double(ood_scores.size());
    return (double(wins) + 0.5 * double(ties)) / pairs;
}

double aupr(std::span<const double> positives, std::span<const double> negatives) {
    if (positives.empty() || negatives.empty())
        throw DegenerateDataError("aupr: both classes must be nonempty");

    std::vector<double> pos(positives.begin(), positives.end());
    std::vector<double> neg(negatives.begin(), negatives.end());
    std::sort(pos.begin(), pos.end(), std::greater<>());
    std::sort(neg.begin(), neg.end(), std::greater<>());

    const double n_pos = double(pos.size());
    double ap = 0.0;
    std::size_t pi = 0, ni = 0, tp = 0, fp = 0;
    while (pi < pos.size() || ni < neg.size()) {
        // next threshold group: the largest unseen score on either side
        double v;
        if (pi == pos.size()) v = neg[ni];
        else if (ni == neg.size()) v = pos[pi];
        else v = std::max(pos[pi], neg[ni]);

        std::size_t tp_group = 0;
        while (pi < pos.size() && pos[pi] == v) ++pi, ++tp_group;
        while (ni < neg.size() && neg[ni] == v) ++ni, ++fp;
        tp += tp_group;

        if (tp_group > 0) ap += (double(tp_group) / n_pos) * (double(tp) / double(tp + fp));
    }
    return ap;
}

Evaluation evaluate(std::span<const ScoreRecord> records) {
    std::vector<double> id_rec, ood_rec, id_energy, ood_energy;
    for (const ScoreRecord& r : records) {
        if (is_id_label(r.label)) {
            id_rec.push_back(r.s_rec);
            id_energy.push_back(r.s_energy);
        } else {
            ood_rec.push_back(r.s_rec);
            ood_energy.push_back(r.s_energy);
        }
    }
    if (id_rec.empty() || ood_rec.empty())
        throw DegenerateDataError("evaluate: score set contains a single class");

    auto negated = [](const std::vector<double>& v) {
        std::vector<double> out(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) out[i] = -v[i];
        return out;
    };

    Evaluation ev;
    ev.id_count = id_rec.size();
    ev.ood_count = ood_rec.size();
    ev.rec.auroc = auroc(id_rec, ood_rec);
    ev.rec.aupr_out = aupr(ood_rec, id_rec);
    ev.rec.aupr_in = aupr(negated(id_rec), negated(ood_rec));
    ev.energy.auroc = auroc(id_energy, ood_energy);
    ev.energy.aupr_out = aupr(ood_energy, id_energy);
    ev.energy.aupr_in = aupr(negated(id_energy), negated(ood_energy));
    return ev;
}

std::string render_report_table(const EvalReport& report) {
    char buf[96];
    std::string out = "Method          AUROC    AUPR_IN   AUPR_OUT\n";
    const auto row = [&](const char* name, const MetricRow& r) {
        std::snprintf(buf, sizeof(buf), "%-14s %6.2f %9.2f %10.2f\n", name, 100.0 * r.auroc,
                      100.0 * r.aupr_in, 100.0 * r.aupr_out);
        out += buf;
    };
    row("PB-REC (Ours)", report.pb_rec);
    row("PB-LSE (Ours)", report.pb_energy);
    row("Baseline (AE)", report.baseline_rec);
    return out;
}

std::string report_to_json(const EvalReport& report) {
    std::string out = "{\n";
    out += "  \"dataset_seed\": " + std::to_string(report.dataset_seed) + ",\n";
    out += "  \"weights_digest\": \"" + report.weights_digest + "\",\n";
    out += "  \"id_count\": " + std::to_string(report.id_count) + ",\n";
    out += "  \"ood_count\": " + std::to_string(report.ood_count) + ",\n";
    out += "  \"methods\": {\n";
    append_method(out, "PB-REC", report.pb_rec, false);
    append_method(out, "PB-LSE", report.pb_energy, false);
    append_method(out, "Baseline-REC", report.baseline_rec, true);
    out += "  }\n}\n";
    return out;
}

} // namespace radar_ood
