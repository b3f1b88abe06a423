#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "errors.hpp"
#include "pipeline.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Reconstruction-based OOD detection for FMCW range-Doppler radar"};
    app.require_subcommand(1);

    std::string config_path = "config.json";
    std::optional<std::uint64_t> seed_override;
    app.add_option("--config", config_path, "Pipeline config (JSON)")->capture_default_str();
    app.add_option("--seed", seed_override, "Override the config seed");

    bool baseline = false;
    std::string inspect_target;
    CLI::App* simulate = app.add_subcommand("simulate", "Generate labeled ADC frame files");
    CLI::App* preprocess = app.add_subcommand("preprocess", "Turn ADC frames into range-Doppler images");
    CLI::App* train = app.add_subcommand("train", "Train the patch autoencoder on the ID training split");
    train->add_flag("--baseline", baseline, "Train the full-image baseline variant instead");
    CLI::App* calibrate =
        app.add_subcommand("calibrate", "Score the validation split and fix the ID-quantile threshold");
    CLI::App* score = app.add_subcommand("score", "Score the test split with both trained models");
    CLI::App* evaluate = app.add_subcommand("evaluate", "Render the metrics report and decision counts");
    CLI::App* inspect = app.add_subcommand("inspect", "Describe an RADC/RDIF/AEWT file");
    inspect->add_option("file", inspect_target, "File to inspect")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        std::vector<std::string> lines;
        if (inspect->parsed()) {
            lines = radar_ood::run_inspect(inspect_target);
        } else {
            radar_ood::PipelineConfig cfg = radar_ood::load_config(config_path);
            if (seed_override) cfg.seed = *seed_override;
            if (simulate->parsed()) lines = radar_ood::run_simulate(cfg);
            else if (preprocess->parsed()) lines = radar_ood::run_preprocess(cfg);
            else if (train->parsed()) lines = radar_ood::run_train(cfg, baseline);
            else if (calibrate->parsed()) lines = radar_ood::run_calibrate(cfg);
            else if (score->parsed()) lines = radar_ood::run_score(cfg);
            else if (evaluate->parsed()) lines = radar_ood::run_evaluate(cfg);
        }
        for (const std::string& line : lines) std::cout << line << "\n";
        return 0;
    } catch (const radar_ood::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const radar_ood::FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const radar_ood::ProtocolError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const radar_ood::DegenerateDataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
