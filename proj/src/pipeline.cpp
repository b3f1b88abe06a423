#include "pipeline.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "binary_io.hpp"
#include "dataset_io.hpp"
#include "dsp.hpp"
#include "errors.hpp"
#include "metrics.hpp"
#include "radar_sim.hpp"
#include "rng.hpp"
#include "scene.hpp"
#include "weights_io.hpp"

namespace radar_ood {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& what) { throw FormatError("config: " + what); }

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const char* where) {
    for (const auto& item : obj.items()) {
        const bool known = std::any_of(allowed.begin(), allowed.end(),
                                       [&](const char* k) { return item.key() == k; });
        if (!known)
            config_error("unknown key \"" + item.key() + "\" in " + where);
    }
}

const json* find_key(const json& obj, const char* key) {
    const auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

double as_double(const json& v, const std::string& where) {
    if (!v.is_number())
        config_error(where + " must be a number");
    return v.get<double>();
}

std::uint64_t as_u64(const json& v, const std::string& where) {
    if (!v.is_number_unsigned())
        config_error(where + " must be a non-negative integer");
    return v.get<std::uint64_t>();
}

std::size_t as_count(const json& v, const std::string& where) {
    return std::size_t(as_u64(v, where));
}

bool as_bool(const json& v, const std::string& where) {
    if (!v.is_boolean())
        config_error(where + " must be a boolean");
    return v.get<bool>();
}

std::string as_string(const json& v, const std::string& where) {
    if (!v.is_string())
        config_error(where + " must be a string");
    return v.get<std::string>();
}

void parse_radar_block(const json& block, RadarConfig& radar) {
    reject_unknown_keys(block, {"n_tx", "n_rx", "f_s", "n_c", "n_s", "t_f", "t_c", "f_min", "f_max"},
                        "\"radar\"");
    if (const json* v = find_key(block, "n_tx")) radar.n_tx = as_count(*v, "radar.n_tx");
    if (const json* v = find_key(block, "n_rx")) radar.n_rx = as_count(*v, "radar.n_rx");
    if (const json* v = find_key(block, "f_s")) radar.f_s = as_double(*v, "radar.f_s");
    if (const json* v = find_key(block, "n_c")) radar.n_c = as_count(*v, "radar.n_c");
    if (const json* v = find_key(block, "n_s")) radar.n_s = as_count(*v, "radar.n_s");
    if (const json* v = find_key(block, "t_f")) radar.t_f = as_double(*v, "radar.t_f");
    if (const json* v = find_key(block, "t_c")) radar.t_c = as_double(*v, "radar.t_c");
    if (const json* v = find_key(block, "f_min")) radar.f_min = as_double(*v, "radar.f_min");
    if (const json* v = find_key(block, "f_max")) radar.f_max = as_double(*v, "radar.f_max");
    // The sweep bandwidth always follows the ramp endpoints.
    radar.bandwidth = radar.f_max - radar.f_min;
    try {
        radar.validate();
    } catch (const FormatError& e) {
        config_error(e.what());
    }
}

void parse_dataset_block(const json& block, DatasetPlan& plan) {
    reject_unknown_keys(block,
                        {"train_id_frames", "val_id_frames", "test_id_frames",
                         "test_ood_frames_per_class", "frames_per_scene", "noise_std"},
                        "\"dataset\"");
    if (const json* v = find_key(block, "train_id_frames"))
        plan.train_id_frames = as_count(*v, "dataset.train_id_frames");
    if (const json* v = find_key(block, "val_id_frames"))
        plan.val_id_frames = as_count(*v, "dataset.val_id_frames");
    if (const json* v = find_key(block, "test_id_frames"))
        plan.test_id_frames = as_count(*v, "dataset.test_id_frames");
    if (const json* v = find_key(block, "test_ood_frames_per_class"))
        plan.test_ood_frames_per_class = as_count(*v, "dataset.test_ood_frames_per_class");
    if (const json* v = find_key(block, "frames_per_scene"))
        plan.frames_per_scene = as_count(*v, "dataset.frames_per_scene");
    if (const json* v = find_key(block, "noise_std"))
        plan.noise_std = as_double(*v, "dataset.noise_std");
    if (plan.frames_per_scene == 0)
        config_error("dataset.frames_per_scene must be at least 1");
    if (!(plan.noise_std >= 0.0) || !std::isfinite(plan.noise_std))
        config_error("dataset.noise_std must be finite and non-negative");
}

void parse_train_block(const json& block, TrainConfig& train) {
    reject_unknown_keys(block, {"epochs", "batch_frames", "lr", "shuffle"}, "\"train\"");
    if (const json* v = find_key(block, "epochs")) train.epochs = as_count(*v, "train.epochs");
    if (const json* v = find_key(block, "batch_frames"))
        train.batch_frames = as_count(*v, "train.batch_frames");
    if (const json* v = find_key(block, "lr")) train.lr = as_double(*v, "train.lr");
    if (const json* v = find_key(block, "shuffle")) train.shuffle = as_bool(*v, "train.shuffle");
    if (train.epochs == 0)
        config_error("train.epochs must be at least 1");
    if (train.batch_frames == 0)
        config_error("train.batch_frames must be at least 1");
    if (!(train.lr > 0.0) || !std::isfinite(train.lr))
        config_error("train.lr must be finite and positive");
}

void parse_calibration_block(const json& block, CalibrationPlan& plan) {
    reject_unknown_keys(block, {"quantile", "score_kind"}, "\"calibration\"");
    if (const json* v = find_key(block, "quantile"))
        plan.quantile = as_double(*v, "calibration.quantile");
    if (const json* v = find_key(block, "score_kind")) {
        try {
            plan.kind = parse_score_kind(as_string(*v, "calibration.score_kind"));
        } catch (const FormatError& e) {
            config_error(e.what());
        }
    }
    if (!(plan.quantile > 0.0 && plan.quantile < 1.0))
        config_error("calibration.quantile must lie strictly between 0 and 1");
}

void parse_paths_block(const json& block, PipelineConfig& cfg) {
    reject_unknown_keys(block, {"out_dir"}, "\"paths\"");
    if (const json* v = find_key(block, "out_dir")) {
        const std::string dir = as_string(*v, "paths.out_dir");
        if (dir.empty())
            config_error("paths.out_dir must not be empty");
        cfg.out_dir = dir;
    }
}

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void require_upstream(const fs::path& path) {
    if (!fs::exists(path))
        throw FormatError("missing upstream file: " + path.string());
}

// "ID_WALK 2000, OOD_FAN 150, ..." in label code order, zero counts omitted.
std::string label_histogram(const std::vector<SceneLabel>& labels) {
    std::array<std::size_t, std::size(kAllLabels)> counts{};
    for (SceneLabel l : labels) counts[std::size_t(l)]++;
    std::string out;
    for (SceneLabel l : kAllLabels) {
        const std::size_t n = counts[std::size_t(l)];
        if (n == 0) continue;
        if (!out.empty()) out += ", ";
        out += label_name(l);
        out += ' ';
        out += std::to_string(n);
    }
    return out.empty() ? "empty" : out;
}

// One label's share of a split: scenes of frames_per_scene frames, the last
// one truncated, each scene seeded from (file seed, label, scene index).
void append_label_recipe(std::vector<RecipeEntry>& recipe, SceneLabel label, std::size_t count,
                         std::uint64_t file_seed, const PipelineConfig& cfg) {
    std::size_t done = 0;
    for (std::size_t idx = 0; done < count; ++idx) {
        const std::size_t n = std::min(cfg.dataset.frames_per_scene, count - done);
        const std::uint64_t scene_seed = derive_seed(file_seed, std::uint64_t(label) + 1, idx);
        recipe.push_back({make_scene(label, scene_seed, n, cfg.radar, cfg.dataset.noise_std), n});
        done += n;
    }
}

void write_loss_csv(const fs::path& path, const std::vector<double>& losses,
                    const std::string& manifest) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open " + path.string() + " for writing");
    out << "# manifest: " << manifest << "\n";
    out << "epoch,mean_loss\n";
    for (std::size_t i = 0; i < losses.size(); ++i)
        out << (i + 1) << ',' << format_double(losses[i]) << "\n";
    out.flush();
    if (!out)
        throw IoError("write failed: " + path.string());
}

double pick_score(const ScoreRecord& rec, ScoreKind kind) {
    return kind == ScoreKind::Rec ? rec.s_rec : rec.s_energy;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        lines.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    return lines;
}

} // namespace

ArtifactPaths artifact_paths(const fs::path& out_dir) {
    ArtifactPaths p;
    p.train_adc = out_dir / "train.radc";
    p.val_adc = out_dir / "val.radc";
    p.test_adc = out_dir / "test.radc";
    p.train_rdi = out_dir / "train.rdif";
    p.val_rdi = out_dir / "val.rdif";
    p.test_rdi = out_dir / "test.rdif";
    p.model = out_dir / "model.aewt";
    p.baseline_model = out_dir / "baseline.aewt";
    p.loss_csv = out_dir / "loss.csv";
    p.baseline_loss_csv = out_dir / "baseline_loss.csv";
    p.val_scores = out_dir / "val_scores.csv";
    p.test_scores = out_dir / "test_scores.csv";
    p.baseline_test_scores = out_dir / "baseline_test_scores.csv";
    p.threshold = out_dir / "threshold.txt";
    p.report_text = out_dir / "report.txt";
    p.report_json = out_dir / "report.json";
    return p;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string fnv1a64_hex(std::string_view bytes) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

std::string file_digest_hex(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return fnv1a64_hex(buf.str());
}

PipelineConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        config_error(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object())
        config_error("top level must be an object");
    reject_unknown_keys(doc, {"version", "seed", "radar", "dataset", "train", "calibration", "paths"},
                        "the top level");

    const json* version = find_key(doc, "version");
    if (!version)
        config_error("missing \"version\"");
    if (!version->is_number_unsigned() || version->get<std::uint64_t>() != 1)
        config_error("unsupported schema version (expected 1)");

    PipelineConfig cfg;
    const json* seed = find_key(doc, "seed");
    if (!seed)
        config_error("missing \"seed\"; seeds are explicit, there is no wall-clock default");
    cfg.seed = as_u64(*seed, "\"seed\"");

    if (const json* block = find_key(doc, "radar")) {
        if (!block->is_object()) config_error("\"radar\" must be an object");
        parse_radar_block(*block, cfg.radar);
    }
    if (const json* block = find_key(doc, "dataset")) {
        if (!block->is_object()) config_error("\"dataset\" must be an object");
        parse_dataset_block(*block, cfg.dataset);
    }
    if (const json* block = find_key(doc, "train")) {
        if (!block->is_object()) config_error("\"train\" must be an object");
        parse_train_block(*block, cfg.train);
    }
    if (const json* block = find_key(doc, "calibration")) {
        if (!block->is_object()) config_error("\"calibration\" must be an object");
        parse_calibration_block(*block, cfg.calibration);
    }
    if (const json* block = find_key(doc, "paths")) {
        if (!block->is_object()) config_error("\"paths\" must be an object");
        parse_paths_block(*block, cfg);
    }

    cfg.digest = fnv1a64_hex(json_text);
    return cfg;
}

PipelineConfig load_config(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot read config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::vector<std::string> run_simulate(const PipelineConfig& cfg) {
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec)
        throw IoError("cannot create output directory " + cfg.out_dir.string() + ": " + ec.message());
    const ArtifactPaths paths = artifact_paths(cfg.out_dir);
    const DatasetPlan& plan = cfg.dataset;

    struct Split {
        const char* name;
        const fs::path* path;
        std::vector<std::pair<SceneLabel, std::size_t>> mix;
        std::uint64_t stream;
    };
    const std::vector<Split> splits = {
        {"train", &paths.train_adc, {{SceneLabel::IdWalk, plan.train_id_frames}}, 1},
        {"val", &paths.val_adc, {{SceneLabel::IdWalk, plan.val_id_frames}}, 2},
        {"test",
         &paths.test_adc,
         {{SceneLabel::IdWalk, plan.test_id_frames},
          {SceneLabel::OodFan, plan.test_ood_frames_per_class},
          {SceneLabel::OodToyCar, plan.test_ood_frames_per_class},
          {SceneLabel::OodPendulum, plan.test_ood_frames_per_class},
          {SceneLabel::OodRobotVacuum, plan.test_ood_frames_per_class}},
         3},
    };

    std::vector<std::string> lines;
    for (const Split& split : splits) {
        const std::uint64_t file_seed = derive_seed(cfg.seed, split.stream);
        std::vector<RecipeEntry> recipe;
        for (const auto& [label, count] : split.mix)
            append_label_recipe(recipe, label, count, file_seed, cfg);
        AdcFrameSet set;
        if (recipe.empty()) {
            // all counts zero: an empty but well-formed frame file
            set.config = cfg.radar;
            set.seed = file_seed;
        } else {
            set = build_dataset(recipe, cfg.radar, file_seed);
        }
        save_adc(*split.path, set);
        lines.push_back(std::string(split.name) + ".radc: " + std::to_string(set.n_frames) +
                        " frames (" + label_histogram(set.labels) + ")");
    }
    return lines;
}

std::vector<std::string> run_preprocess(const PipelineConfig& cfg) {
    const ArtifactPaths paths = artifact_paths(cfg.out_dir);
    const std::array<std::tuple<const char*, const fs::path*, const fs::path*>, 3> jobs = {{
        {"train", &paths.train_adc, &paths.train_rdi},
        {"val", &paths.val_adc, &paths.val_rdi},
        {"test", &paths.test_adc, &paths.test_rdi},
    }};
    std::vector<std::string> lines;
    for (const auto& [name, in_path, out_path] : jobs) {
        require_upstream(*in_path);
        const AdcFrameSet set = load_adc(*in_path, cfg.radar);
        const std::vector<RangeDopplerImage> rdis = preprocess(set);
        save_rdis(*out_path, rdis);
        lines.push_back(std::string(name) + ".rdif: " + std::to_string(rdis.size()) + " images");
    }
    return lines;
}

std::vector<std::string> run_train(const PipelineConfig& cfg, bool baseline) {
    const ArtifactPaths paths = artifact_paths(cfg.out_dir);
    require_upstream(paths.train_rdi);
    const std::vector<RangeDopplerImage> rdis = load_rdis(paths.train_rdi);

    TrainConfig tc = cfg.train;
    tc.seed = derive_seed(cfg.seed, 10, baseline ? 1 : 0);
    const TrainResult result = baseline ? train_baseline(rdis, tc) : train(rdis, tc);

    const fs::path& weights_path = baseline ? paths.baseline_model : paths.model;
    save_weights(weights_path.string(), to_weights(result.model));
    write_loss_csv(baseline ? paths.baseline_loss_csv : paths.loss_csv, result.epoch_mean_loss,
                   cfg.manifest());

    std::vector<std::string> lines;
    lines.push_back(std::string(baseline ? "baseline" : "patch") + " model: trained " +
                    std::to_string(tc.epochs) + " epochs on " + std::to_string(rdis.size()) +
                    " frames");
    lines.push_back("final mean loss: " + format_double(result.epoch_mean_loss.back()));
    lines.push_back("weights: " + weights_path.string());
    return lines;
}

std::vector<std::string> run_calibrate(const PipelineConfig& cfg) {
    const ArtifactPaths paths = artifact_paths(cfg.out_dir);
    require_upstream(paths.val_rdi);
    require_upstream(paths.model);

    const Autoencoder model = from_weights(load_weights(paths.model.string()));
    const std::vector<RangeDopplerImage> rdis = load_rdis(paths.val_rdi);
    const std::vector<ScoreRecord> records = score_dataset(rdis, model);
    write_scores_csv(paths.val_scores, records, cfg.manifest());

    // The threshold only ever sees ID-labeled validation scores.
    std::vector<double> id_scores;
    id_scores.reserve(records.size());
    for (const ScoreRecord& rec : records)
        if (is_id_label(rec.label))
            id_scores.push_back(pick_score(rec, cfg.calibration.kind));
    const Threshold threshold =
        calibrate_threshold(id_scores, cfg.calibration.quantile, cfg.calibration.kind);
    write_threshold_file(paths.threshold, threshold);

    std::vector<std::string> lines;
    lines.push_back("val_scores.csv: " + std::to_string(records.size()) + " rows (" +
                    std::to_string(id_scores.size()) + " ID)");
    lines.push_back(std::string("threshold: kind=") + score_kind_name(threshold.kind) +
                    " quantile=" + format_double(threshold.quantile) +
                    " tau=" + format_double(threshold.value));
    return lines;
}

std::vector<std::string> run_score(const PipelineConfig& cfg) {
    const ArtifactPaths paths = artifact_paths(cfg.out_dir);
    require_upstream(paths.test_rdi);
    require_upstream(paths.model);
    require_upstream(paths.baseline_model);

    const std::vector<RangeDopplerImage> rdis = load_rdis(paths.test_rdi);
    const Autoencoder model = from_weights(load_weights(paths.model.string()));
    write_scores_csv(paths.test_scores, score_dataset(rdis, model), cfg.manifest());
    const Autoencoder baseline = from_weights(load_weights(paths.baseline_model.string()));
    write_scores_csv(paths.baseline_test_scores, score_dataset(rdis, baseline), cfg.manifest());

    std::vector<std::string> lines;
    lines.push_back("test_scores.csv: " + std::to_string(rdis.size()) + " rows");
    lines.push_back("baseline_test_scores.csv: " + std::to_string(rdis.size()) + " rows");
    return lines;
}

std::vector<std::string> run_evaluate(const PipelineConfig& cfg) {
    const ArtifactPaths paths = artifact_paths(cfg.out_dir);
    require_upstream(paths.test_scores);
    require_upstream(paths.baseline_test_scores);
    require_upstream(paths.threshold);
    require_upstream(paths.model);

    const std::vector<ScoreRecord> records = read_scores_csv(paths.test_scores);
    const std::vector<ScoreRecord> baseline_records = read_scores_csv(paths.baseline_test_scores);
    const Evaluation ev = evaluate(records);
    const Evaluation baseline_ev = evaluate(baseline_records);
    if (ev.id_count != baseline_ev.id_count || ev.ood_count != baseline_ev.ood_count)
        throw ProtocolError("evaluate: patch and baseline score files disagree on the test split");

    EvalReport report;
    report.pb_rec = ev.rec;
    report.pb_energy = ev.energy;
    report.baseline_rec = baseline_ev.rec;
    report.id_count = ev.id_count;
    report.ood_count = ev.ood_count;
    report.dataset_seed = cfg.seed;
    report.weights_digest = file_digest_hex(paths.model);

    const Threshold threshold = read_threshold_file(paths.threshold);
    std::size_t id_decisions = 0;
    std::size_t ood_decisions = 0;
    for (const ScoreRecord& rec : records) {
        if (classify(pick_score(rec, threshold.kind), threshold) == Decision::Id)
            ++id_decisions;
        else
            ++ood_decisions;
    }
    const std::string decisions =
        std::string("decisions at tau=") + format_double(threshold.value) + " (" +
        score_kind_name(threshold.kind) + "): ID " + std::to_string(id_decisions) + ", OOD " +
        std::to_string(ood_decisions);

    const std::string table = render_report_table(report);
    {
        std::ofstream out(paths.report_text, std::ios::binary);
        if (!out)
            throw IoError("cannot open " + paths.report_text.string() + " for writing");
        out << "# manifest: " << cfg.manifest() << "\n" << table << decisions << "\n";
        out.flush();
        if (!out)
            throw IoError("write failed: " + paths.report_text.string());
    }
    {
        std::ofstream out(paths.report_json, std::ios::binary);
        if (!out)
            throw IoError("cannot open " + paths.report_json.string() + " for writing");
        out << report_to_json(report);
        out.flush();
        if (!out)
            throw IoError("write failed: " + paths.report_json.string());
    }

    std::vector<std::string> lines = split_lines(table);
    lines.push_back(decisions);
    return lines;
}

namespace {

std::streamoff stream_size(std::istream& in) {
    const std::streamoff pos = in.tellg();
    in.seekg(0, std::ios::end);
    const std::streamoff size = in.tellg();
    in.seekg(pos);
    return size;
}

std::vector<std::string> inspect_adc(std::istream& in) {
    const std::streamoff total = stream_size(in);
    io::expect_magic(in, "RADC", "adc file");
    io::expect_version(in, 1, "adc file");
    const std::uint32_t n_frames = io::read_u32(in);
    const std::uint16_t n_rx = io::read_u16(in);
    const std::uint16_t n_c = io::read_u16(in);
    const std::uint16_t n_s = io::read_u16(in);
    const std::uint64_t seed = io::read_u64(in);
    const std::streamoff frame_bytes =
        1 + 8 + std::streamoff(n_rx) * std::streamoff(n_c) * std::streamoff(n_s) * 4;
    if (total != 24 + std::streamoff(n_frames) * frame_bytes)
        throw FormatError("adc file: size disagrees with the frame count");
    std::vector<SceneLabel> labels;
    labels.reserve(n_frames);
    for (std::uint32_t f = 0; f < n_frames; ++f) {
        labels.push_back(label_from_code(io::read_u8(in)));
        io::read_u64(in); // scene seed
        in.seekg(frame_bytes - 9, std::ios::cur);
    }
    std::vector<std::string> lines;
    lines.push_back("RADC v1: " + std::to_string(n_frames) + " frames, cube " +
                    std::to_string(n_rx) + "x" + std::to_string(n_c) + "x" + std::to_string(n_s) +
                    ", dataset seed " + std::to_string(seed));
    lines.push_back("labels: " + label_histogram(labels));
    return lines;
}

std::vector<std::string> inspect_rdi(std::istream& in) {
    const std::streamoff total = stream_size(in);
    io::expect_magic(in, "RDIF", "rdi file");
    io::expect_version(in, 1, "rdi file");
    const std::uint32_t n_images = io::read_u32(in);
    const std::streamoff image_bytes = 1 + 4 + std::streamoff(kRdiPixels) * 4;
    if (total != 10 + std::streamoff(n_images) * image_bytes)
        throw FormatError("rdi file: size disagrees with the image count");
    std::vector<SceneLabel> labels;
    labels.reserve(n_images);
    for (std::uint32_t i = 0; i < n_images; ++i) {
        labels.push_back(label_from_code(io::read_u8(in)));
        io::read_u32(in); // frame id
        in.seekg(image_bytes - 5, std::ios::cur);
    }
    std::vector<std::string> lines;
    lines.push_back("RDIF v1: " + std::to_string(n_images) + " images, 64x64 pixels");
    lines.push_back("labels: " + label_histogram(labels));
    return lines;
}

std::vector<std::string> inspect_weights(const fs::path& path) {
    const ModelWeights weights = load_weights(path.string());
    std::size_t params = 0;
    for (const auto& [name, tensor] : weights.tensors) params += tensor.size();
    std::vector<std::string> lines;
    lines.push_back("AEWT v1: " + std::to_string(weights.tensors.size()) + " tensors, " +
                    std::to_string(params) + " parameters (" + std::to_string(params * 4) +
                    " payload bytes), training seed " + std::to_string(weights.training_seed));
    for (const auto& [name, tensor] : weights.tensors) {
        std::string shape;
        for (std::size_t d = 0; d < tensor.shape.size(); ++d) {
            if (d) shape += ",";
            shape += std::to_string(tensor.shape[d]);
        }
        lines.push_back("  " + name + " (" + shape + ") " + std::to_string(tensor.size()));
    }
    return lines;
}

} // namespace

std::vector<std::string> run_inspect(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());
    char magic[4] = {};
    in.read(magic, 4);
    if (in.gcount() != 4)
        throw FormatError(path.string() + ": file too short for a format magic");
    in.seekg(0);
    const std::string kind(magic, 4);
    if (kind == "RADC") return inspect_adc(in);
    if (kind == "RDIF") return inspect_rdi(in);
    if (kind == "AEWT") {
        in.close();
        return inspect_weights(path);
    }
    throw FormatError(path.string() + ": unrecognized file format");
}

} // namespace radar_ood
