#include "scores.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "errors.hpp"

namespace radar_ood {

namespace {

// One frame scored through the model with each patch encoded exactly once.
// want_rec controls whether the decoder runs at all, so encoder-only weight
// sets can produce energy scores.
void score_frame(const RangeDopplerImage& rdi, const Autoencoder& model, bool want_rec,
                 double* s_rec, double* s_energy) {
    if (model.baseline) {
        // Full-image variant: one latent, reconstruction error over all pixels.
        const Tensor image = rdi_to_tensor(rdi);
        const Tensor latent = model.encode(image);
        for (std::size_t j = 0; j < kLatentDim; ++j)
            if (!std::isfinite(latent.data[j]))
                throw DegenerateDataError("score: non-finite latent coordinate");
        if (want_rec) {
            const Tensor rec = model.decode(latent);
            double sum_sq = 0.0;
            for (std::size_t i = 0; i < rec.size(); ++i) {
                const double d = rec.data[i] - image.data[i];
                sum_sq += d * d;
            }
            if (s_rec) *s_rec = sum_sq / double(rec.size());
        }
        if (s_energy)
            *s_energy = log_sum_exp(std::span<const double>(latent.data.data(), kLatentDim));
        return;
    }

    const auto patches = split_patches(rdi);
    std::array<double, kLatentDim> summed{};
    double rec_total = 0.0;

    for (const Patch& patch : patches) {
        const Tensor latent = model.encode(patch.pixels);
        for (std::size_t j = 0; j < kLatentDim; ++j) {
            const double z = latent.data[j];
            if (!std::isfinite(z))
                throw DegenerateDataError("score: non-finite latent coordinate");
            summed[j] += z;
        }
        if (want_rec) {
            const Tensor rec = model.decode(latent);
            double sum_sq = 0.0;
            for (std::size_t i = 0; i < rec.size(); ++i) {
                const double d = rec.data[i] - patch.pixels.data[i];
                sum_sq += d * d;
            }
            rec_total += sum_sq / double(kPatchDim * kPatchDim);
        }
    }

    if (s_rec) *s_rec = rec_total / double(kPatchCount);
    if (s_energy) *s_energy = log_sum_exp(summed);
}

std::string format_score(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string format_exact(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

double parse_double(const std::string& field, const char* what) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last)
        throw FormatError(std::string("bad ") + what + " field: '" + field + "'");
    return v;
}

std::uint64_t parse_uint(const std::string& field, const char* what) {
    std::uint64_t v = 0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last)
        throw FormatError(std::string("bad ") + what + " field: '" + field + "'");
    return v;
}

} // namespace

double log_sum_exp(std::span<const double> values) {
    if (values.empty()) throw DegenerateDataError("log_sum_exp: empty input");
    double max_v = -std::numeric_limits<double>::infinity();
    for (double v : values) {
        if (!std::isfinite(v)) throw DegenerateDataError("log_sum_exp: non-finite input");
        max_v = std::max(max_v, v);
    }
    double acc = 0.0;
    for (double v : values) acc += std::exp(v - max_v);
    return max_v + std::log(acc);
}

double score_rec(const RangeDopplerImage& rdi, const Autoencoder& model) {
    double s = 0.0;
    score_frame(rdi, model, true, &s, nullptr);
    return s;
}

double score_energy(const RangeDopplerImage& rdi, const Autoencoder& model) {
    double s = 0.0;
    score_frame(rdi, model, false, nullptr, &s);
    return s;
}

std::vector<ScoreRecord> score_dataset(const std::vector<RangeDopplerImage>& rdis,
                                       const Autoencoder& model) {
    std::vector<ScoreRecord> records;
    records.reserve(rdis.size());
    for (const RangeDopplerImage& rdi : rdis) {
        ScoreRecord rec;
        rec.frame_id = rdi.frame_id;
        rec.label = rdi.label;
        score_frame(rdi, model, true, &rec.s_rec, &rec.s_energy);
        records.push_back(rec);
    }
    return records;
}

Threshold calibrate_threshold(std::span<const double> id_validation_scores, double quantile,
                              ScoreKind kind) {
    if (id_validation_scores.empty())
        throw DegenerateDataError("calibrate_threshold: no validation scores");
    if (!(quantile > 0.0) || !(quantile < 1.0))
        throw std::invalid_argument("calibrate_threshold: quantile must lie in (0,1)");

    std::vector<double> sorted(id_validation_scores.begin(), id_validation_scores.end());
    std::sort(sorted.begin(), sorted.end());

    const double pos = quantile * double(sorted.size() - 1);
    const std::size_t lo = std::size_t(pos);
    const double frac = pos - double(lo);

    Threshold t;
    t.kind = kind;
    t.quantile = quantile;
    t.value = lo + 1 < sorted.size() ? sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
                                     : sorted.back();
    return t;
}

Decision classify(double score, const Threshold& threshold) {
    return score < threshold.value ? Decision::Id : Decision::Ood;
}

const char* score_kind_name(ScoreKind kind) {
    return kind == ScoreKind::Rec ? "REC" : "ENERGY";
}

ScoreKind parse_score_kind(const std::string& name) {
    if (name == "REC") return ScoreKind::Rec;
    if (name == "ENERGY") return ScoreKind::Energy;
    throw FormatError("unknown score kind: '" + name + "'");
}

void write_scores_csv(const std::filesystem::path& path, std::span<const ScoreRecord> records,
                      const std::string& manifest) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());

    if (!manifest.empty()) out << "# manifest: " << manifest << "\n";
    out << "frame_id,label,score_rec,score_energy\n";
    for (const ScoreRecord& rec : records)
        out << rec.frame_id << ',' << unsigned(rec.label) << ',' << format_score(rec.s_rec) << ','
            << format_score(rec.s_energy) << "\n";

    out.flush();
    if (!out) throw IoError("write failed: " + path.string());
}

std::vector<ScoreRecord> read_scores_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path.string());

    std::vector<ScoreRecord> records;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line != "frame_id,label,score_rec,score_energy")
                throw FormatError("bad score CSV header: '" + line + "'");
            header_seen = true;
            continue;
        }
        const auto fields = split_fields(line);
        if (fields.size() != 4) throw FormatError("bad score CSV row: '" + line + "'");
        ScoreRecord rec;
        rec.frame_id = std::uint32_t(parse_uint(fields[0], "frame_id"));
        const std::uint64_t label = parse_uint(fields[1], "label");
        if (label > std::uint64_t(SceneLabel::OodRobotVacuum))
            throw FormatError("bad label value: '" + fields[1] + "'");
        rec.label = SceneLabel(label);
        rec.s_rec = parse_double(fields[2], "score_rec");
        rec.s_energy = parse_double(fields[3], "score_energy");
        records.push_back(rec);
    }
    if (!header_seen) throw FormatError("score CSV has no header: " + path.string());
    return records;
}

void write_threshold_file(const std::filesystem::path& path, const Threshold& threshold) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << score_kind_name(threshold.kind) << ',' << format_exact(threshold.quantile) << ','
        << format_exact(threshold.value) << "\n";
    out.flush();
    if (!out) throw IoError("write failed: " + path.string());
}

Threshold read_threshold_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw FormatError("empty threshold file: " + path.string());
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const auto fields = split_fields(line);
    if (fields.size() != 3) throw FormatError("bad threshold line: '" + line + "'");

    Threshold t;
    t.kind = parse_score_kind(fields[0]);
    t.quantile = parse_double(fields[1], "quantile");
    t.value = parse_double(fields[2], "tau");
    return t;
}

} // namespace radar_ood
