// noveltyscope <command> --config <path> [--seed N] [--fandom NAME] [--models 1-12] [--out DIR]
#include "noveltyscope/gam.hpp"
#include "noveltyscope/pipeline.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <typeinfo>

namespace ns = noveltyscope;

namespace {

std::string error_type(const std::exception& e) {
    if (dynamic_cast<const ns::SeparationError*>(&e)) return "SeparationError";
    if (dynamic_cast<const ns::GamError*>(&e)) return "GamError";
    if (dynamic_cast<const ns::RegressionError*>(&e)) return "RegressionError";
    if (dynamic_cast<const ns::StatsError*>(&e)) return "StatsError";
    if (dynamic_cast<const ns::TopicModelError*>(&e)) return "TopicModelError";
    if (dynamic_cast<const ns::OracleError*>(&e)) return "OracleError";
    if (dynamic_cast<const ns::CorpusError*>(&e)) return "CorpusError";
    if (dynamic_cast<const ns::ConfigError*>(&e)) return "ConfigError";
    if (dynamic_cast<const std::invalid_argument*>(&e)) return "InvalidArgument";
    return "Error";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Novelty scoring and reception analysis for fan-fiction corpora"};
    std::string command, config_path, fandom, models, out_dir;
    std::optional<std::uint64_t> seed;
    const auto names = ns::command_names();
    app.add_option("command", command, "One of: " + [&] {
        std::string s;
        for (const auto& n : names) s += (s.empty() ? "" : ", ") + n;
        return s;
    }())->required()->check(CLI::IsMember(names));
    app.add_option("--config", config_path, "INI configuration file")->required();
    app.add_option("--seed", seed, "Override the LDA, statistics and generator seeds");
    app.add_option("--fandom", fandom, "Restrict to one fandom");
    app.add_option("--models", models, "Models to run, e.g. 1-12, 5-8 or 1,3,9-12");
    app.add_option("--out", out_dir, "Output directory");
    CLI11_PARSE(app, argc, argv);

    const auto cmd = *ns::parse_command(command);
    ns::PipelineConfig cfg;
    try {
        cfg = ns::PipelineConfig::load(config_path);
        if (seed) cfg.lda.seed = cfg.stats_seed = cfg.synth.seed = *seed;
        if (!fandom.empty()) cfg.filter.fandoms = {fandom};
        if (!models.empty()) cfg.models = ns::parse_model_list(models);
        if (!out_dir.empty()) cfg.output_dir = out_dir;
    } catch (const std::exception& e) {
        std::cerr << ns::error_record(command, error_type(e), e.what(), {}) << "\n";
        return 2;
    }

    try {
        auto result = ns::run_command(cmd, cfg);
        std::cout << result.summary;
        std::cout << "wrote:\n";
        for (const auto& p : result.artifacts) std::cout << "  " << p.generic_string() << "\n";
        return 0;
    } catch (const std::exception& e) {
        const auto partial = ns::partial_outputs(cfg.output_dir);
        const auto record = ns::error_record(command, error_type(e), e.what(), partial);
        std::cerr << record << "\n";
        std::error_code ec;
        if (std::filesystem::is_directory(cfg.output_dir, ec)) {
            std::ofstream(cfg.output_dir / "error.json") << record << "\n";
        }
        return 1;
    }
}
