#include "noveltyscope/pipeline.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

using namespace noveltyscope;
namespace fs = std::filesystem;

namespace {

PipelineConfig parse_text(const std::string& text, const fs::path& base = "/base") {
    std::istringstream in(text);
    return PipelineConfig::parse(in, base);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

const char* kSmall = R"([input]
corpus = corpus.jsonl
[output]
dir = out
[filter]
min_words = 50
max_words = 400
[lda]
topics = 4
iterations = 20
inference_iterations = 10
top_removal = 20
[stats]
n_boot = 50
[synth]
seed = 3
n_fandoms = 2
works_per_fandom = 80
topics = 3
words_per_topic = 40
common_words = 60
min_length = 60
max_length = 200
span_days = 500
lda_top_removal = 20
)";

}  // namespace

TEST_CASE("config defaults and relative paths") {
    auto c = parse_text("[input]\ncorpus = data/works.jsonl\n[output]\ndir = /abs/out\n");
    CHECK(c.input == fs::path("/base/data/works.jsonl"));
    CHECK(c.output_dir == fs::path("/abs/out"));
    CHECK(c.span_days == 183);
    CHECK(c.lda.topics == 100);
    CHECK(c.k_term == 7);
    CHECK(c.k_topic == 5);
    CHECK(c.sp == 0.1);
    CHECK(c.models.size() == 12);
    CHECK(c.seeds() == "lda=1,stats=1,synth=1");
}

TEST_CASE("config rejects unknown sections, keys and bad values") {
    CHECK_THROWS_AS(parse_text("[lda]\ntopcs = 5\n"), ConfigError);
    CHECK_THROWS_AS(parse_text("[ldaa]\ntopics = 5\n"), ConfigError);
    CHECK_THROWS_AS(parse_text("[lda]\ntopics = five\n"), ConfigError);
    CHECK_THROWS_AS(parse_text("[lda]\ntopics = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse_text("[stats]\nbin_widths = 0.1,1.5\n"), ConfigError);
    CHECK_THROWS_AS(parse_text("[filter]\nmin_words = 900\nmax_words = 800\n"), ConfigError);
    CHECK_THROWS_AS(parse_text("[link.likes]\nintercept = 1\n"), ConfigError);
    CHECK_THROWS_AS(PipelineConfig::load("/nonexistent/config.ini"), ConfigError);
}

TEST_CASE("config hash ignores paths and follows settings") {
    auto a = parse_text("[input]\ncorpus = a.jsonl\n[output]\ndir = x\n");
    auto b = parse_text("[input]\ncorpus = b.jsonl\n[output]\ndir = y\n", "/elsewhere");
    CHECK(a.hash() == b.hash());
    CHECK(a.hash_hex().size() == 16);
    auto c = parse_text("[lda]\nseed = 2\n");
    CHECK(c.hash() != a.hash());
    auto d = parse_text("[link.hits]\nintercept = 6\n");
    CHECK(d.hash() != a.hash());
}

TEST_CASE("model lists") {
    CHECK(parse_model_list("1-12").size() == 12);
    CHECK(parse_model_list("5-8") == std::set<int>{5, 6, 7, 8});
    CHECK(parse_model_list("1, 3,9-10") == std::set<int>{1, 3, 9, 10});
    CHECK_THROWS_AS(parse_model_list("0-3"), ConfigError);
    CHECK_THROWS_AS(parse_model_list("13"), ConfigError);
    CHECK_THROWS_AS(parse_model_list("4-2"), ConfigError);
    CHECK_THROWS_AS(parse_model_list(""), ConfigError);
}

TEST_CASE("command names round trip") {
    for (const auto& n : command_names()) {
        auto c = parse_command(n);
        REQUIRE(c);
        CHECK(command_name(*c) == n);
    }
    CHECK_FALSE(parse_command("fit"));
}

TEST_CASE("error record is one line of JSON") {
    auto line = error_record("regress", "RegressionError", "singular \"design\"\nmatrix", {"out/a.csv.partial"});
    CHECK(line.find('\n') == std::string::npos);
    auto j = nlohmann::json::parse(line);
    CHECK(j["status"] == "error");
    CHECK(j["command"] == "regress");
    CHECK(j["error_type"] == "RegressionError");
    CHECK(j["message"] == "singular \"design\"\nmatrix");
    CHECK(j["partial_outputs"].size() == 1);
}

TEST_CASE("commands on a small generated corpus") {
    const fs::path dir = fs::temp_directory_path() / "noveltyscope-test-pipeline";
    fs::remove_all(dir);
    fs::create_directories(dir);
    auto cfg = parse_text(kSmall, dir);

    CHECK_THROWS_AS(run_command(Command::ingest, cfg), ConfigError);
    CHECK_THROWS_AS(run_command(Command::curves, cfg), ConfigError);

    auto synth = run_command(Command::synth, cfg);
    CHECK(synth.artifacts.size() == 2);
    fs::copy_file(dir / "out" / "synthetic_corpus.jsonl", dir / "corpus.jsonl");
    run_command(Command::ingest, cfg);
    CHECK_THROWS_AS(run_command(Command::regress, cfg), ConfigError);

    run_command(Command::score_term, cfg);
    const std::string first = slurp(dir / "out" / kTermScoresFile);
    CHECK(first.rfind("# noveltyscope score-term config=" + cfg.hash_hex() + " seeds=lda=1,stats=1,synth=3\n", 0) == 0);
    run_command(Command::score_term, cfg);
    CHECK(slurp(dir / "out" / kTermScoresFile) == first);

    run_command(Command::score_topic, cfg);
    auto term = read_scores(dir / "out" / kTermScoresFile);
    auto topic = read_scores(dir / "out" / kTopicScoresFile);
    CHECK(term.size() == topic.size());
    CHECK(term.size() > 100);
    std::size_t scored = 0;
    for (const auto& [id, r] : term) {
        CHECK_FALSE(r.s_topic);
        REQUIRE(topic.count(id));
        CHECK(topic.at(id).window_size == r.window_size);
        if (r.s_term) {
            CHECK(*r.s_term >= 0.0);
            CHECK(*r.s_term <= 1.0);
            ++scored;
        }
    }
    CHECK(scored > 50);

    run_command(Command::curves, cfg);
    run_command(Command::report, cfg);
    CHECK(fs::exists(dir / "out" / "binned_curves.csv"));
    CHECK(slurp(dir / "out" / "report.txt").find("regress") != std::string::npos);
    CHECK(partial_outputs(dir / "out").empty());
    fs::remove_all(dir);
}
