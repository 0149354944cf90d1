#pragma once

#include "noveltyscope/corpus.hpp"
#include "noveltyscope/synth.hpp"
#include "noveltyscope/topic_novelty.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace noveltyscope {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Resolved settings for every command.
struct PipelineConfig {
    std::filesystem::path input;
    std::filesystem::path output_dir = "noveltyscope_out";
    FilterSpec filter;
    int span_days = kDefaultSpanDays;
    std::size_t min_window = 10;
    LdaParams lda;
    int inference_iterations = 50;
    std::size_t lda_top_removal = 500;
    std::vector<double> bin_widths{0.1, 0.05};
    std::size_t n_boot = 1000;
    std::uint64_t stats_seed = 1;
    int k_term = 7;
    int k_topic = 5;
    double sp = 0.1;
    std::size_t pd_points = 101;
    double vif_threshold = 10.0;
    bool include_age = false;
    std::set<int> models{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    SynthConfig synth;

    // INI file with sections; relative paths resolve against the file's directory.
    // Unknown sections or keys are errors.
    static PipelineConfig load(const std::filesystem::path& path);
    static PipelineConfig parse(std::istream& in, const std::filesystem::path& base_dir = {});

    // Sorted key=value lines of every setting; the basis of hash().
    std::string canonical() const;
    std::uint64_t hash() const;
    std::string hash_hex() const;
    std::string seeds() const;
};

// "1-12", "5-8", "1,3,9-12". Throws ConfigError outside 1..12.
std::set<int> parse_model_list(std::string_view text);

enum class Command { ingest, score_term, score_topic, curves, regress, gam, synth, report };

std::string_view command_name(Command c);
std::optional<Command> parse_command(std::string_view name);
std::vector<std::string> command_names();

struct RunResult {
    std::vector<std::filesystem::path> artifacts;
    std::string summary;
};

// Runs one command. Outputs are staged as "<name>.partial" and renamed once the
// command succeeds; on failure the staged files stay behind and the exception propagates.
RunResult run_command(Command command, const PipelineConfig& config);

// One-line JSON error record.
std::string error_record(std::string_view command, std::string_view type, std::string_view message,
                         const std::vector<std::filesystem::path>& partial_outputs);

// Staged files left in the output directory by a failed run.
std::vector<std::filesystem::path> partial_outputs(const std::filesystem::path& dir);

// Score CSVs shared by score-term/score-topic and read back by later commands.
inline constexpr const char* kTermScoresFile = "term_scores.csv";
inline constexpr const char* kTopicScoresFile = "topic_scores.csv";
inline constexpr const char* kUnscored = "UNSCORED";

std::map<std::string, NoveltyRecord> read_scores(const std::filesystem::path& path);

}  // namespace noveltyscope
