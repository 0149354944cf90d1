#include "noveltyscope/pipeline.hpp"

#include "noveltyscope/gam.hpp"
#include "noveltyscope/random.hpp"
#include "noveltyscope/regression.hpp"
#include "noveltyscope/stats.hpp"
#include "noveltyscope/term_novelty.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <sstream>

namespace noveltyscope {

namespace fs = std::filesystem;

namespace {

// ---------------------------------------------------------------- formatting

std::string fmt(double x, int digits = 10) {
    if (std::isnan(x)) return "NA";
    if (std::isinf(x)) return x > 0 ? "Inf" : "-Inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

std::string exact(double x) { return fmt(x, 17); }

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string csv_row(const std::vector<std::string>& fields) {
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) line += (i ? "," : "") + csv_field(fields[i]);
    return line + "\n";
}

// Rows of a CSV stream, skipping '#' comment lines between records.
std::vector<std::vector<std::string>> read_csv(std::istream& in) {
    std::vector<std::vector<std::string>> rows;
    while (in.peek() != EOF) {
        if (in.peek() == '#') {
            in.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
            continue;
        }
        std::vector<std::string> row;
        std::string field;
        bool quoted = false, done = false;
        while (!done) {
            int c = in.get();
            if (c == EOF) {
                done = true;
            } else if (quoted) {
                if (c == '"') {
                    if (in.peek() == '"') {
                        field += '"';
                        in.get();
                    } else {
                        quoted = false;
                    }
                } else {
                    field += static_cast<char>(c);
                }
            } else if (c == '"') {
                quoted = true;
            } else if (c == ',') {
                row.push_back(std::move(field));
                field.clear();
            } else if (c == '\n') {
                done = true;
            } else if (c != '\r') {
                field += static_cast<char>(c);
            }
        }
        row.push_back(std::move(field));
        if (!(row.size() == 1 && row[0].empty())) rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<std::vector<std::string>> read_csv_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read " + path.string());
    return read_csv(in);
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? sep : "") + parts[i];
    return s;
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return "";
    auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

// ---------------------------------------------------------------- value parsing

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
    T value{};
    const std::string t = trim(text);
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        throw ConfigError("invalid value for " + key + ": '" + text + "'");
    }
    return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    throw ConfigError("invalid boolean for " + key + ": '" + text + "'");
}

Date parse_date(const std::string& key, const std::string& text) {
    auto d = Date::parse(trim(text));
    if (!d) throw ConfigError("invalid date for " + key + ": '" + text + "'");
    return *d;
}

// ---------------------------------------------------------------- config registry

struct Field {
    std::string section;
    std::string key;
    std::function<void(PipelineConfig&, const std::string&, const fs::path&)> set;
    std::function<std::string(const PipelineConfig&)> get;  // empty: excluded from the hash
};

template <typename T>
Field number_field(std::string section, std::string key, T PipelineConfig::*member) {
    std::string name = section + "." + key;
    return {section, key,
            [member, name](PipelineConfig& c, const std::string& v, const fs::path&) {
                c.*member = parse_number<T>(name, v);
            },
            [member](const PipelineConfig& c) {
                if constexpr (std::is_floating_point_v<T>) return exact(c.*member);
                else return std::to_string(c.*member);
            }};
}

template <typename T, typename Owner>
Field nested_field(std::string section, std::string key, std::function<Owner&(PipelineConfig&)> owner,
                   std::function<const Owner&(const PipelineConfig&)> cowner, T Owner::*member) {
    std::string name = section + "." + key;
    return {section, key,
            [owner, member, name](PipelineConfig& c, const std::string& v, const fs::path&) {
                owner(c).*member = parse_number<T>(name, v);
            },
            [cowner, member](const PipelineConfig& c) {
                if constexpr (std::is_floating_point_v<T>) return exact(cowner(c).*member);
                else return std::to_string(cowner(c).*member);
            }};
}

template <typename T>
Field synth_field(std::string key, T SynthConfig::*member) {
    return nested_field<T, SynthConfig>(
        "synth", std::move(key), [](PipelineConfig& c) -> SynthConfig& { return c.synth; },
        [](const PipelineConfig& c) -> const SynthConfig& { return c.synth; }, member);
}

template <typename T>
Field lda_field(std::string key, T LdaParams::*member) {
    return nested_field<T, LdaParams>(
        "lda", std::move(key), [](PipelineConfig& c) -> LdaParams& { return c.lda; },
        [](const PipelineConfig& c) -> const LdaParams& { return c.lda; }, member);
}

template <typename T>
Field filter_field(std::string key, T FilterSpec::*member) {
    return nested_field<T, FilterSpec>(
        "filter", std::move(key), [](PipelineConfig& c) -> FilterSpec& { return c.filter; },
        [](const PipelineConfig& c) -> const FilterSpec& { return c.filter; }, member);
}

std::string model_list_text(const std::set<int>& models) {
    std::vector<std::string> parts;
    for (int m : models) parts.push_back(std::to_string(m));
    return join(parts, ",");
}

// Link fields live in sections "link" (all responses) and "link.<response>".
void set_link_field(ReceptionLink& l, const std::string& key, const std::string& v, const std::string& name) {
    if (key == "shape") {
        auto s = parse_link_shape(trim(v));
        if (!s) throw ConfigError("invalid link shape for " + name + ": '" + v + "'");
        l.shape = *s;
        return;
    }
    static const std::map<std::string, double ReceptionLink::*> members{
        {"intercept", &ReceptionLink::intercept},
        {"term_slope", &ReceptionLink::term_slope},
        {"topic_slope", &ReceptionLink::topic_slope},
        {"topic_curvature", &ReceptionLink::topic_curvature},
        {"topic_center", &ReceptionLink::topic_center},
        {"uptick_start", &ReceptionLink::uptick_start},
        {"uptick_gain", &ReceptionLink::uptick_gain},
        {"frequent_relationship", &ReceptionLink::frequent_relationship},
        {"chapters", &ReceptionLink::chapters},
        {"noise_sd", &ReceptionLink::noise_sd},
        {"zero_intercept", &ReceptionLink::zero_intercept},
        {"zero_term", &ReceptionLink::zero_term},
        {"zero_topic", &ReceptionLink::zero_topic},
        {"zero_chapters", &ReceptionLink::zero_chapters},
    };
    auto it = members.find(key);
    if (it == members.end()) throw ConfigError("unknown key " + name);
    l.*(it->second) = parse_number<double>(name, v);
}

std::string link_canonical(const ReceptionLink& l) {
    return std::string(link_shape_name(l.shape)) + ";" + exact(l.intercept) + ";" + exact(l.term_slope) + ";" +
           exact(l.topic_slope) + ";" + exact(l.topic_curvature) + ";" + exact(l.topic_center) + ";" +
           exact(l.uptick_start) + ";" + exact(l.uptick_gain) + ";" + exact(l.frequent_relationship) + ";" +
           exact(l.chapters) + ";" + exact(l.noise_sd) + ";" + exact(l.zero_intercept) + ";" + exact(l.zero_term) +
           ";" + exact(l.zero_topic) + ";" + exact(l.zero_chapters);
}

fs::path resolve(const fs::path& base, const std::string& v) {
    fs::path p(trim(v));
    if (p.is_relative() && !base.empty()) p = base / p;
    return p.lexically_normal();
}

const std::vector<Field>& fields() {
    static const std::vector<Field> all = [] {
        std::vector<Field> f;
        f.push_back({"input", "corpus",
                     [](PipelineConfig& c, const std::string& v, const fs::path& b) { c.input = resolve(b, v); },
                     nullptr});
        f.push_back({"output", "dir",
                     [](PipelineConfig& c, const std::string& v, const fs::path& b) { c.output_dir = resolve(b, v); },
                     nullptr});
        f.push_back(filter_field("min_words", &FilterSpec::min_words));
        f.push_back(filter_field("max_words", &FilterSpec::max_words));
        f.push_back({"filter", "earliest_publish",
                     [](PipelineConfig& c, const std::string& v, const fs::path&) {
                         if (trim(v).empty() || trim(v) == "none") c.filter.earliest_publish.reset();
                         else c.filter.earliest_publish = parse_date("filter.earliest_publish", v);
                     },
                     [](const PipelineConfig& c) {
                         return c.filter.earliest_publish ? c.filter.earliest_publish->iso() : std::string("none");
                     }});
        f.push_back({"filter", "fandoms",
                     [](PipelineConfig& c, const std::string& v, const fs::path&) {
                         c.filter.fandoms.clear();
                         for (const auto& part : split(v, '|'))
                             if (!trim(part).empty()) c.filter.fandoms.insert(trim(part));
                     },
                     [](const PipelineConfig& c) {
                         return join(std::vector<std::string>(c.filter.fandoms.begin(), c.filter.fandoms.end()), "|");
                     }});
        f.push_back(number_field("novelty", "span_days", &PipelineConfig::span_days));
        f.push_back(number_field("novelty", "min_window", &PipelineConfig::min_window));
        f.push_back(lda_field("topics", &LdaParams::topics));
        f.push_back(lda_field("alpha", &LdaParams::alpha));
        f.push_back(lda_field("beta", &LdaParams::beta));
        f.push_back(lda_field("iterations", &LdaParams::iterations));
        f.push_back(lda_field("seed", &LdaParams::seed));
        f.push_back(number_field("lda", "inference_iterations", &PipelineConfig::inference_iterations));
        f.push_back(number_field("lda", "top_removal", &PipelineConfig::lda_top_removal));
        f.push_back({"stats", "bin_widths",
                     [](PipelineConfig& c, const std::string& v, const fs::path&) {
                         c.bin_widths.clear();
                         for (const auto& part : split(v, ','))
                             c.bin_widths.push_back(parse_number<double>("stats.bin_widths", part));
                     },
                     [](const PipelineConfig& c) {
                         std::vector<std::string> parts;
                         for (double w : c.bin_widths) parts.push_back(exact(w));
                         return join(parts, ",");
                     }});
        f.push_back(number_field("stats", "n_boot", &PipelineConfig::n_boot));
        f.push_back(number_field("stats", "seed", &PipelineConfig::stats_seed));
        f.push_back(number_field("stats", "k_term", &PipelineConfig::k_term));
        f.push_back(number_field("stats", "k_topic", &PipelineConfig::k_topic));
        f.push_back(number_field("stats", "sp", &PipelineConfig::sp));
        f.push_back(number_field("stats", "pd_points", &PipelineConfig::pd_points));
        f.push_back(number_field("stats", "vif_threshold", &PipelineConfig::vif_threshold));
        f.push_back({"stats", "include_age",
                     [](PipelineConfig& c, const std::string& v, const fs::path&) {
                         c.include_age = parse_bool("stats.include_age", v);
                     },
                     [](const PipelineConfig& c) { return std::string(c.include_age ? "true" : "false"); }});
        f.push_back({"models", "run",
                     [](PipelineConfig& c, const std::string& v, const fs::path&) { c.models = parse_model_list(v); },
                     [](const PipelineConfig& c) { return model_list_text(c.models); }});
        f.push_back(synth_field("seed", &SynthConfig::seed));
        f.push_back(synth_field("n_fandoms", &SynthConfig::n_fandoms));
        f.push_back(synth_field("works_per_fandom", &SynthConfig::works_per_fandom));
        f.push_back(synth_field("topics", &SynthConfig::topics));
        f.push_back(synth_field("words_per_topic", &SynthConfig::words_per_topic));
        f.push_back(synth_field("common_words", &SynthConfig::common_words));
        f.push_back(synth_field("topic_purity", &SynthConfig::topic_purity));
        f.push_back(synth_field("topic_popularity_decay", &SynthConfig::topic_popularity_decay));
        f.push_back(synth_field("doc_mix_max", &SynthConfig::doc_mix_max));
        f.push_back(synth_field("min_length", &SynthConfig::min_length));
        f.push_back(synth_field("max_length", &SynthConfig::max_length));
        f.push_back(synth_field("outlier_rate", &SynthConfig::outlier_rate));
        f.push_back(synth_field("span_days", &SynthConfig::span_days));
        f.push_back(synth_field("authors_per_fandom", &SynthConfig::authors_per_fandom));
        f.push_back(synth_field("relationships_per_fandom", &SynthConfig::relationships_per_fandom));
        f.push_back(synth_field("lda_top_removal", &SynthConfig::lda_top_removal));
        f.push_back(synth_field("novelty_window_days", &SynthConfig::novelty_window_days));
        f.push_back(synth_field("novelty_min_window", &SynthConfig::novelty_min_window));
        f.push_back({"synth", "start_date",
                     [](PipelineConfig& c, const std::string& v, const fs::path&) {
                         c.synth.start_date = parse_date("synth.start_date", v);
                     },
                     [](const PipelineConfig& c) { return c.synth.start_date.iso(); }});
        for (Response r : kResponses) {
            const std::string section = "link." + std::string(response_name(r));
            const auto idx = static_cast<std::size_t>(r);
            f.push_back({section, "*", nullptr, [idx](const PipelineConfig& c) {
                             return link_canonical(c.synth.links[idx]);
                         }});
        }
        return f;
    }();
    return all;
}

void apply_section(PipelineConfig& c, const std::string& section, const boost::property_tree::ptree& body,
                   const fs::path& base) {
    if (section == "link" || section.rfind("link.", 0) == 0) {
        std::vector<std::size_t> targets;
        if (section == "link") {
            targets = {0, 1, 2, 3};
        } else {
            auto r = parse_response(section.substr(5));
            if (!r) throw ConfigError("unknown section [" + section + "]");
            targets = {static_cast<std::size_t>(*r)};
        }
        for (const auto& [key, node] : body)
            for (auto t : targets) set_link_field(c.synth.links[t], key, node.data(), section + "." + key);
        return;
    }
    bool known_section = false;
    for (const auto& f : fields()) known_section |= f.section == section;
    if (!known_section) throw ConfigError("unknown section [" + section + "]");
    for (const auto& [key, node] : body) {
        auto it = std::find_if(fields().begin(), fields().end(),
                               [&](const Field& f) { return f.section == section && f.key == key && f.set; });
        if (it == fields().end()) throw ConfigError("unknown key " + section + "." + key);
        it->set(c, node.data(), base);
    }
}

}  // namespace

// ---------------------------------------------------------------- PipelineConfig

PipelineConfig PipelineConfig::parse(std::istream& in, const fs::path& base_dir) {
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.message() + " (line " + std::to_string(e.line()) + ")");
    }
    PipelineConfig c;
    // Whole-response link defaults first, so per-response sections override them.
    for (const auto& [section, body] : tree)
        if (section == "link") apply_section(c, section, body, base_dir);
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty()) throw ConfigError("config: key '" + section + "' outside a section");
        if (section != "link") apply_section(c, section, body, base_dir);
    }
    if (c.lda.topics == 0) throw ConfigError("lda.topics must be positive");
    if (c.lda.iterations <= 0 || c.inference_iterations <= 0) throw ConfigError("lda iterations must be positive");
    if (!(c.lda.alpha > 0) || !(c.lda.beta > 0)) throw ConfigError("lda.alpha and lda.beta must be positive");
    if (c.span_days <= 0) throw ConfigError("novelty.span_days must be positive");
    if (c.bin_widths.empty()) throw ConfigError("stats.bin_widths is empty");
    for (double w : c.bin_widths)
        if (!(w > 0) || w > 1) throw ConfigError("stats.bin_widths entries must be in (0, 1]");
    if (c.k_term < 3 || c.k_topic < 3) throw ConfigError("stats.k_term and stats.k_topic must be at least 3");
    if (c.sp < 0) throw ConfigError("stats.sp must be nonnegative");
    if (c.filter.min_words > c.filter.max_words) throw ConfigError("filter.min_words exceeds filter.max_words");
    return c;
}

PipelineConfig PipelineConfig::load(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    return parse(in, path.parent_path());
}

std::string PipelineConfig::canonical() const {
    std::vector<std::string> lines;
    for (const auto& f : fields())
        if (f.get) lines.push_back(f.section + "." + f.key + "=" + f.get(*this));
    std::sort(lines.begin(), lines.end());
    return join(lines, "\n") + "\n";
}

std::uint64_t PipelineConfig::hash() const { return fnv1a(canonical()); }

std::string PipelineConfig::hash_hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash()));
    return buf;
}

std::string PipelineConfig::seeds() const {
    return "lda=" + std::to_string(lda.seed) + ",stats=" + std::to_string(stats_seed) +
           ",synth=" + std::to_string(synth.seed);
}

std::set<int> parse_model_list(std::string_view text) {
    std::set<int> out;
    for (const auto& raw : split(text, ',')) {
        const std::string part = trim(raw);
        if (part.empty()) continue;
        auto dash = part.find('-');
        int lo = 0, hi = 0;
        if (dash == std::string::npos) {
            lo = hi = parse_number<int>("models", part);
        } else {
            lo = parse_number<int>("models", part.substr(0, dash));
            hi = parse_number<int>("models", part.substr(dash + 1));
        }
        if (lo < 1 || hi > 12 || lo > hi) throw ConfigError("model list must name models 1-12: '" + part + "'");
        for (int m = lo; m <= hi; ++m) out.insert(m);
    }
    if (out.empty()) throw ConfigError("empty model list");
    return out;
}

namespace {
constexpr std::pair<Command, const char*> kCommands[] = {
    {Command::ingest, "ingest"}, {Command::score_term, "score-term"}, {Command::score_topic, "score-topic"},
    {Command::curves, "curves"}, {Command::regress, "regress"},       {Command::gam, "gam"},
    {Command::synth, "synth"},   {Command::report, "report"},
};
}  // namespace

std::string_view command_name(Command c) {
    for (const auto& [cmd, name] : kCommands)
        if (cmd == c) return name;
    return "?";
}

std::optional<Command> parse_command(std::string_view name) {
    for (const auto& [cmd, n] : kCommands)
        if (name == n) return cmd;
    return std::nullopt;
}

std::vector<std::string> command_names() {
    std::vector<std::string> out;
    for (const auto& [cmd, n] : kCommands) out.emplace_back(n);
    return out;
}

std::string error_record(std::string_view command, std::string_view type, std::string_view message,
                         const std::vector<fs::path>& partial) {
    nlohmann::ordered_json j;
    j["status"] = "error";
    j["command"] = command;
    j["error_type"] = type;
    j["message"] = message;
    std::vector<std::string> files;
    for (const auto& p : partial) files.push_back(p.generic_string());
    j["partial_outputs"] = files;
    return j.dump();
}

std::vector<fs::path> partial_outputs(const fs::path& dir) {
    std::vector<fs::path> out;
    if (!fs::exists(dir)) return out;
    for (const auto& e : fs::recursive_directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".partial") out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

std::map<std::string, NoveltyRecord> read_scores(const fs::path& path) {
    auto rows = read_csv_file(path);
    if (rows.empty() || rows[0] != std::vector<std::string>{"work_id", "fandom", "publish_date", "s_term", "s_topic",
                                                             "window_size"}) {
        throw ConfigError("unexpected score file header in " + path.string());
    }
    std::map<std::string, NoveltyRecord> out;
    auto score = [&](const std::string& v) -> std::optional<double> {
        if (v.empty() || v == kUnscored) return std::nullopt;
        return parse_number<double>(path.string(), v);
    };
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.size() != 6) throw ConfigError("malformed row in " + path.string());
        NoveltyRecord rec;
        rec.work_id = r[0];
        rec.fandom = r[1];
        auto d = Date::parse(r[2]);
        if (!d) throw ConfigError("bad date in " + path.string());
        rec.publish_date = *d;
        rec.s_term = score(r[3]);
        rec.s_topic = score(r[4]);
        rec.window_size = parse_number<std::size_t>(path.string(), r[5]);
        out.emplace(rec.work_id, std::move(rec));
    }
    return out;
}

namespace {

// ---------------------------------------------------------------- artifacts

class Artifacts {
public:
    Artifacts(const PipelineConfig& cfg, Command cmd) : dir_(cfg.output_dir), cmd_(cmd) {
        header_ = "# noveltyscope " + std::string(command_name(cmd)) + " config=" + cfg.hash_hex() +
                  " seeds=" + cfg.seeds() + "\n";
        fs::create_directories(dir_);
    }

    std::ofstream open(const fs::path& relative, bool with_header = true) {
        const fs::path final_path = dir_ / relative;
        fs::create_directories(final_path.parent_path());
        fs::path staged = final_path;
        staged += ".partial";
        std::ofstream out(staged, std::ios::binary);
        if (!out) throw ConfigError("cannot write " + staged.string());
        if (with_header) out << header_;
        staged_.push_back(final_path);
        return out;
    }

    std::vector<fs::path> commit() {
        for (const auto& p : staged_) {
            fs::path staged = p;
            staged += ".partial";
            fs::rename(staged, p);
        }
        std::error_code ec;
        fs::remove(dir_ / "error.json", ec);
        return staged_;
    }

    const fs::path& dir() const { return dir_; }
    const std::string& header() const { return header_; }

private:
    fs::path dir_;
    Command cmd_;
    std::string header_;
    std::vector<fs::path> staged_;
};

// ---------------------------------------------------------------- population

struct Population {
    CorpusStore store;
    WorkSet filtered;
    std::vector<WorkSet> fandoms;  // sorted by fandom name; each ordered by (date, id)
};

std::unique_ptr<Population> load_population(const PipelineConfig& cfg) {
    if (cfg.input.empty()) throw ConfigError("no input corpus configured ([input] corpus)");
    if (!fs::exists(cfg.input)) throw ConfigError("input corpus not found: " + cfg.input.string());
    auto pop = std::make_unique<Population>();
    pop->store = ingest(cfg.input);
    for (const auto& f : cfg.filter.fandoms)
        if (!pop->store.has_fandom(f)) throw ConfigError("unknown fandom: " + f);
    pop->filtered = filter_works(pop->store, cfg.filter);
    std::map<std::string, WorkSet> by_fandom;
    for (const Work* w : pop->filtered.works) {
        auto& set = by_fandom[w->fandom];
        set.provenance = w->fandom;
        set.works.push_back(w);
    }
    for (auto& [name, set] : by_fandom) pop->fandoms.push_back(std::move(set));
    return pop;
}

std::string score_text(const std::optional<double>& s) { return s ? exact(*s) : std::string(kUnscored); }

void write_scores(std::ostream& out, const std::vector<NoveltyRecord>& records, bool term) {
    out << csv_row({"work_id", "fandom", "publish_date", "s_term", "s_topic", "window_size"});
    for (const auto& r : records) {
        out << csv_row({r.work_id, r.fandom, r.publish_date.iso(), term ? score_text(r.s_term) : "",
                        term ? "" : score_text(r.s_topic), std::to_string(r.window_size)});
    }
}

std::string fandom_slug(const std::string& fandom) {
    std::string s;
    for (unsigned char c : fandom) s += std::isalnum(c) ? static_cast<char>(std::tolower(c)) : '_';
    if (s.size() > 40) s.resize(40);
    char buf[12];
    std::snprintf(buf, sizeof buf, "-%08x", static_cast<unsigned>(fnv1a(fandom) & 0xffffffffu));
    return s + buf;
}

std::map<std::string, NoveltyRecord> merged_scores(const PipelineConfig& cfg) {
    const fs::path term_path = cfg.output_dir / kTermScoresFile;
    const fs::path topic_path = cfg.output_dir / kTopicScoresFile;
    if (!fs::exists(term_path)) throw ConfigError("missing " + term_path.string() + "; run score-term first");
    if (!fs::exists(topic_path)) throw ConfigError("missing " + topic_path.string() + "; run score-topic first");
    auto merged = read_scores(term_path);
    for (auto& [id, rec] : read_scores(topic_path)) {
        auto it = merged.find(id);
        if (it == merged.end()) merged.emplace(id, rec);
        else it->second.s_topic = rec.s_topic;
    }
    return merged;
}

struct Counted {
    std::size_t scored = 0, unscored = 0;
};

Counted count_scored(const std::vector<NoveltyRecord>& records, bool term) {
    Counted c;
    for (const auto& r : records) ((term ? r.s_term : r.s_topic) ? c.scored : c.unscored)++;
    return c;
}

// ---------------------------------------------------------------- commands

RunResult cmd_ingest(const PipelineConfig& cfg) {
    auto pop = load_population(cfg);
    Artifacts art(cfg, Command::ingest);
    std::ostringstream summary;
    summary << "input: " << cfg.input.filename().generic_string() << "\n";
    summary << "records accepted: " << pop->store.size() << "\n";
    summary << "records rejected: " << pop->store.rejects().size() << "\n";
    summary << "filter: " << cfg.filter.describe() << "\n";
    summary << "works after filter: " << pop->filtered.size() << "\n";
    summary << "fandoms:\n";
    for (const auto& set : pop->fandoms) summary << "  " << set.provenance << ": " << set.size() << "\n";
    {
        auto out = art.open("ingest_summary.txt");
        out << summary.str();
    }
    {
        auto out = art.open("rejects.jsonl");
        write_rejects(pop->store, out);
    }
    {
        auto out = art.open("filtered_works.csv");
        out << csv_row({"work_id", "fandom", "publish_date", "word_count", "chapters"});
        for (const auto& set : pop->fandoms)
            for (const Work* w : set.works)
                out << csv_row({w->id, w->fandom, w->publish_date.iso(), std::to_string(w->word_count),
                                std::to_string(w->chapters)});
    }
    return {art.commit(), summary.str()};
}

RunResult cmd_score_term(const PipelineConfig& cfg) {
    auto pop = load_population(cfg);
    Artifacts art(cfg, Command::score_term);
    TermNoveltyOptions opts;
    opts.span_days = cfg.span_days;
    opts.min_window = cfg.min_window;
    std::vector<NoveltyRecord> all;
    std::ostringstream summary;
    summary << "term novelty (span " << cfg.span_days << " days, min window " << cfg.min_window << ")\n";
    for (const auto& set : pop->fandoms) {
        auto recs = score_term(set, opts);
        auto c = count_scored(recs, true);
        summary << "  " << set.provenance << ": " << c.scored << " scored, " << c.unscored << " unscored\n";
        all.insert(all.end(), recs.begin(), recs.end());
    }
    {
        auto out = art.open(kTermScoresFile);
        write_scores(out, all, true);
    }
    return {art.commit(), summary.str()};
}

RunResult cmd_score_topic(const PipelineConfig& cfg) {
    auto pop = load_population(cfg);
    Artifacts art(cfg, Command::score_topic);
    TopicNoveltyOptions opts;
    opts.span_days = cfg.span_days;
    opts.min_window = cfg.min_window;
    opts.inference_iterations = cfg.inference_iterations;
    const VocabPolicy policy{"lda", true, cfg.lda_top_removal};
    std::vector<NoveltyRecord> all;
    std::ostringstream summary;
    summary << "topic novelty (K=" << cfg.lda.topics << ", alpha=" << fmt(cfg.lda.alpha) << ", beta="
            << fmt(cfg.lda.beta) << ", " << cfg.lda.iterations << " sweeps, span " << cfg.span_days << " days)\n";
    for (const auto& set : pop->fandoms) {
        LdaParams params = cfg.lda;
        params.seed = derive_seed(cfg.lda.seed, fnv1a(set.provenance));
        opts.seed = params.seed;
        std::vector<NoveltyRecord> recs;
        try {
            auto model = fit_lda(set, params, policy);
            {
                auto out = art.open(fs::path("lda") / (fandom_slug(set.provenance) + ".lda"));
                save_model(model, out);
            }
            recs = score_topic(set, model, opts);
            auto c = count_scored(recs, false);
            summary << "  " << set.provenance << ": vocabulary " << model.vocab_size() << ", " << c.scored
                    << " scored, " << c.unscored << " unscored\n";
        } catch (const TopicModelError& e) {
            // Too little text to fit a model: every work of the fandom stays unscored.
            for (const Work* w : set.works)
                recs.push_back({w->id, w->fandom, w->publish_date, std::nullopt, std::nullopt,
                                window_range(set, w->publish_date, cfg.span_days).second -
                                    window_range(set, w->publish_date, cfg.span_days).first});
            summary << "  " << set.provenance << ": no model (" << e.what() << "), " << recs.size()
                    << " unscored\n";
        }
        all.insert(all.end(), recs.begin(), recs.end());
    }
    {
        auto out = art.open(kTopicScoresFile);
        write_scores(out, all, false);
    }
    return {art.commit(), summary.str()};
}

std::vector<double> per_chapter(const std::vector<const Work*>& works, Response r) {
    std::vector<double> v;
    v.reserve(works.size());
    for (const Work* w : works) v.push_back(per_chapter_response(*w).get(r));
    return v;
}

RunResult cmd_curves(const PipelineConfig& cfg) {
    auto pop = load_population(cfg);
    auto scores = merged_scores(cfg);
    Artifacts art(cfg, Command::curves);
    std::vector<const Work*> works;
    std::vector<std::string> fandoms;
    for (const auto& set : pop->fandoms)
        for (const Work* w : set.works) {
            works.push_back(w);
            fandoms.push_back(w->fandom);
        }
    std::ostringstream summary;
    summary << "binned curves (bootstrap " << cfg.n_boot << ")\n";
    auto out = art.open("binned_curves.csv");
    out << csv_row({"response", "novelty", "bin_width", "bin", "lo", "hi", "count", "mean_z", "ci_lo", "ci_hi"});
    for (Response r : kResponses) {
        auto z = log_zscore_by_fandom(per_chapter(works, r), fandoms);
        for (const char* novelty : {"term", "topic"}) {
            std::vector<double> x, y;
            for (std::size_t i = 0; i < works.size(); ++i) {
                auto it = scores.find(works[i]->id);
                if (it == scores.end() || !z[i]) continue;
                const auto& s = std::string(novelty) == "term" ? it->second.s_term : it->second.s_topic;
                if (!s) continue;
                x.push_back(*s);
                y.push_back(*z[i]);
            }
            for (double width : cfg.bin_widths) {
                const std::string key = std::string(response_name(r)) + "/" + novelty + "/" + exact(width);
                auto curve = binned_curve(x, y, width, cfg.n_boot, derive_seed(cfg.stats_seed, fnv1a(key)));
                for (std::size_t b = 0; b < curve.bins(); ++b) {
                    out << csv_row({std::string(response_name(r)), novelty, fmt(width), std::to_string(b),
                                    fmt(curve.edges[b]), fmt(curve.edges[b + 1]), std::to_string(curve.count[b]),
                                    fmt(curve.mean[b]), fmt(curve.ci_lo[b]), fmt(curve.ci_hi[b])});
                }
                if (width == cfg.bin_widths.front()) {
                    summary << "  " << response_name(r) << " vs " << novelty << " (n=" << x.size() << "):";
                    for (std::size_t b = 0; b < curve.bins(); ++b) summary << " " << fmt(curve.mean[b], 3);
                    summary << "\n";
                }
            }
        }
    }
    out.close();
    return {art.commit(), summary.str()};
}

std::vector<int> selected(const std::set<int>& models, int lo, int hi) {
    std::vector<int> out;
    for (int m : models)
        if (m >= lo && m <= hi) out.push_back(m);
    return out;
}

void write_coef_rows(std::ostream& out, int model, Response r, const std::string& stage,
                     const std::vector<std::string>& names, const Eigen::VectorXd& coef, const Eigen::VectorXd& se) {
    for (Eigen::Index j = 0; j < coef.size(); ++j) {
        out << csv_row({std::to_string(model), std::string(response_name(r)), stage, names[j], fmt(coef(j)),
                        fmt(se(j)), fmt(coef(j) - 1.96 * se(j)), fmt(coef(j) + 1.96 * se(j))});
    }
}

RunResult cmd_regress(const PipelineConfig& cfg) {
    auto pop = load_population(cfg);
    auto scores = merged_scores(cfg);
    auto rows = scored_works(pop->filtered, scores);
    if (rows.empty()) throw RegressionError("no works carry both novelty scores");
    Artifacts art(cfg, Command::regress);
    const auto ctx = make_context(pop->store, pop->filtered);
    std::ostringstream summary;
    summary << "two-part regression on " << rows.size() << " works\n";

    // Correlations and VIF over the full candidate set, age included.
    auto candidate = build_design(rows, scores, {false, true}, ctx);
    {
        std::vector<std::string> names;
        std::vector<Eigen::Index> cols;
        for (const char* n : {"s_term", "s_topic", "chapters", "author_work_count", "age_days"}) {
            auto j = *candidate.column(n);
            if (candidate.x.col(j).maxCoeff() != candidate.x.col(j).minCoeff()) {
                names.emplace_back(n);
                cols.push_back(j);
            }
        }
        auto out = art.open("correlations.csv");
        if (cols.size() >= 2 && candidate.x.rows() >= 2) {
            Eigen::MatrixXd data(candidate.x.rows(), static_cast<Eigen::Index>(cols.size()));
            for (std::size_t c = 0; c < cols.size(); ++c) data.col(c) = candidate.x.col(cols[c]);
            auto corr = correlation_matrix(data);
            std::vector<std::string> header{"variable"};
            header.insert(header.end(), names.begin(), names.end());
            out << csv_row(header);
            for (std::size_t a = 0; a < names.size(); ++a) {
                std::vector<std::string> row{names[a]};
                for (std::size_t b = 0; b < names.size(); ++b) row.push_back(fmt(corr(a, b)));
                out << csv_row(row);
            }
        }
    }
    {
        auto report = vif(candidate, cfg.vif_threshold);
        auto out = art.open("vif.csv");
        out << csv_row({"variable", "vif", "flagged"});
        for (std::size_t i = 0; i < report.names.size(); ++i) {
            const bool flagged = report.values[i] > cfg.vif_threshold;
            out << csv_row({report.names[i], fmt(report.values[i]), flagged ? "yes" : "no"});
        }
        summary << "  VIF above " << fmt(cfg.vif_threshold) << ": "
                << (report.flagged.empty() ? std::string("none") : join(report.flagged, ", ")) << "\n";
        summary << "  age_days " << (cfg.include_age ? "included" : "excluded") << " in models\n";
    }

    auto models = selected(cfg.models, 1, 8);
    std::optional<DesignMatrix> plain, squared;
    auto coef_out = art.open("coefficients.csv");
    coef_out << csv_row({"model_id", "response", "stage", "term", "estimate", "se", "ci_lo", "ci_hi"});
    auto text_out = art.open("regression_summary.txt");
    for (int m : models) {
        const bool sq = m > 4;
        const Response r = kResponses[(m - 1) % 4];
        auto& design = sq ? squared : plain;
        if (!design) design = build_design(rows, scores, {sq, cfg.include_age}, ctx);
        auto fit = fit_two_part(*design, per_chapter(rows, r), r, sq);
        if (fit.stage1) write_coef_rows(coef_out, m, r, "logit", fit.stage1->names, fit.stage1->coef, fit.stage1->se);
        write_coef_rows(coef_out, m, r, "ols", fit.stage2.names, fit.stage2.coef, fit.stage2.se);

        text_out << "model " << m << ": ln(" << response_name(r) << " per chapter)" << (sq ? " with squares" : "")
                 << "\n";
        text_out << "  rows " << fit.n_total << ", nonzero " << fit.n_nonzero << "\n";
        if (fit.stage1) {
            text_out << "  stage 1 logit: " << (fit.stage1->converged ? "converged" : "not converged") << " after "
                     << fit.stage1->iterations << " iterations, gradient " << fmt(fit.stage1->gradient_norm, 3)
                     << "\n";
        } else {
            text_out << "  stage 1 logit: skipped (no zero outcomes)\n";
        }
        text_out << "  stage 2 OLS: R2 " << fmt(fit.stage2.r2, 6) << ", sigma2 " << fmt(fit.stage2.sigma2, 6)
                 << ", n " << fit.stage2.n << "\n";
        if (!fit.stage1_dropped.empty())
            text_out << "  left out of stage 1 (constant or perfectly predicting): " << join(fit.stage1_dropped, ", ")
                     << "\n";
        if (!fit.dropped.empty()) text_out << "  dropped (constant): " << join(fit.dropped, ", ") << "\n";
        for (Eigen::Index j = 0; j < fit.stage2.coef.size(); ++j) {
            const auto& name = fit.stage2.names[j];
            if (name.rfind("s_", 0) != 0) continue;
            text_out << "  " << name << " " << fmt(fit.stage2.coef(j), 6) << " [" << fmt(fit.stage2.ci_lo(j), 6)
                     << ", " << fmt(fit.stage2.ci_hi(j), 6) << "]\n";
        }
        summary << "  model " << m << " (" << response_name(r) << (sq ? ", squares" : "") << "): R2 "
                << fmt(fit.stage2.r2, 4) << ", s_term " << fmt(fit.stage2.coef(1), 4) << ", s_topic "
                << fmt(fit.stage2.coef(2), 4) << "\n";
    }
    if (plain || squared) {
        const auto& d = plain ? *plain : *squared;
        text_out << "reference levels:";
        for (const auto& [family, level] : d.reference_levels) text_out << " " << family << "=" << level << ";";
        text_out << "\n";
    }
    coef_out.close();
    text_out.close();
    return {art.commit(), summary.str()};
}

RunResult cmd_gam(const PipelineConfig& cfg) {
    auto pop = load_population(cfg);
    auto scores = merged_scores(cfg);
    auto rows = scored_works(pop->filtered, scores);
    if (rows.empty()) throw RegressionError("no works carry both novelty scores");
    Artifacts art(cfg, Command::gam);
    const auto ctx = make_context(pop->store, pop->filtered);
    auto design = build_design(rows, scores, {false, cfg.include_age}, ctx);
    const GamOptions opts{cfg.k_term, cfg.k_topic, cfg.sp};
    const auto grid = uniform_grid(0.0, 1.0, cfg.pd_points);

    std::ostringstream summary;
    summary << "GAM (k_term=" << cfg.k_term << ", k_topic=" << cfg.k_topic << ", sp=" << fmt(cfg.sp) << ")\n";
    auto pd_out = art.open("partial_dependence.csv");
    pd_out << csv_row({"model_id", "response", "variable", "x", "value", "se", "ci_lo", "ci_hi", "extrapolated"});
    auto coef_out = art.open("gam_coefficients.csv");
    coef_out << csv_row({"model_id", "response", "stage", "term", "estimate", "se", "ci_lo", "ci_hi"});
    auto text_out = art.open("gam_summary.txt");
    for (int m : selected(cfg.models, 9, 12)) {
        const Response r = kResponses[m - 9];
        auto fit = fit_gam(design, per_chapter(rows, r), r, opts);
        const Eigen::Index lin = static_cast<Eigen::Index>(fit.linear_names.size());
        write_coef_rows(coef_out, m, r, "linear", fit.linear_names, fit.coef.head(lin),
                        fit.vp.diagonal().head(lin).cwiseSqrt());
        text_out << "model " << m << ": " << response_name(r) << " per chapter (nonzero rows, untransformed)\n";
        text_out << "  n " << fit.n << ", edf " << fmt(fit.edf, 6) << ", sigma2 " << fmt(fit.sigma2, 6) << "\n";
        for (const auto& s : fit.smooths) {
            text_out << "  smooth " << s.variable << ": k " << s.k << ", sp " << fmt(s.sp) << ", range ["
                     << fmt(s.basis.lo(), 6) << ", " << fmt(s.basis.hi(), 6) << "]\n";
            auto pd = partial_dependence(fit, s.variable, grid);
            for (std::size_t i = 0; i < pd.grid.size(); ++i) {
                pd_out << csv_row({std::to_string(m), std::string(response_name(r)), s.variable, fmt(pd.grid[i]),
                                   fmt(pd.value[i]), fmt(pd.se[i]), fmt(pd.ci_lo[i]), fmt(pd.ci_hi[i]),
                                   pd.extrapolated[i] ? "yes" : "no"});
            }
        }
        if (!fit.dropped.empty()) text_out << "  dropped (constant): " << join(fit.dropped, ", ") << "\n";
        summary << "  model " << m << " (" << response_name(r) << "): n " << fit.n << ", edf " << fmt(fit.edf, 4)
                << "\n";
    }
    pd_out.close();
    coef_out.close();
    text_out.close();
    return {art.commit(), summary.str()};
}

RunResult cmd_synth(const PipelineConfig& cfg) {
    Artifacts art(cfg, Command::synth);
    auto corpus = generate(cfg.synth);
    {
        // The corpus keeps the plain ingest format; provenance lives in the sidecar.
        auto out = art.open("synthetic_corpus.jsonl", false);
        write_corpus(corpus, out);
    }
    {
        auto out = art.open("ground_truth.jsonl", false);
        nlohmann::ordered_json prov;
        prov["config_hash"] = cfg.hash_hex();
        prov["seeds"] = cfg.seeds();
        std::ostringstream truth;
        write_ground_truth(corpus, cfg.synth, truth);
        const std::string text = truth.str();
        auto nl = text.find('\n');
        auto header = nlohmann::ordered_json::parse(text.substr(0, nl));
        header["provenance"] = prov;
        out << header.dump() << text.substr(nl);
    }
    std::ostringstream summary;
    summary << "synthetic corpus: " << corpus.works.size() << " works in " << cfg.synth.n_fandoms << " fandoms, "
            << cfg.synth.topics << " planted topics each, seed " << cfg.synth.seed << "\n";
    return {art.commit(), summary.str()};
}

// ---------------------------------------------------------------- report

std::string section_title(const std::string& t) { return "\n" + t + "\n" + std::string(t.size(), '-') + "\n"; }

std::vector<std::vector<std::string>> maybe_rows(const fs::path& p) {
    if (!fs::exists(p)) return {};
    return read_csv_file(p);
}

std::string file_body(const fs::path& p) {
    std::ifstream in(p);
    std::string line, out;
    while (std::getline(in, line))
        if (line.rfind("#", 0) != 0) out += line + "\n";
    return out;
}

RunResult cmd_report(const PipelineConfig& cfg) {
    const fs::path& dir = cfg.output_dir;
    if (!fs::exists(dir)) throw ConfigError("output directory " + dir.string() + " does not exist");
    Artifacts art(cfg, Command::report);
    std::ostringstream r;
    r << "noveltyscope report\n";
    r << "config hash " << cfg.hash_hex() << ", seeds " << cfg.seeds() << "\n";
    auto missing = [&](const char* file, const char* cmd) {
        r << "(" << file << " not found; run `noveltyscope " << cmd << "`)\n";
    };

    r << section_title("Corpus");
    if (fs::exists(dir / "ingest_summary.txt")) r << file_body(dir / "ingest_summary.txt");
    else missing("ingest_summary.txt", "ingest");

    r << section_title("Novelty scores");
    for (const auto& [file, column, cmd] : {std::tuple{kTermScoresFile, 3, "score-term"},
                                            std::tuple{kTopicScoresFile, 4, "score-topic"}}) {
        auto rows = maybe_rows(dir / file);
        if (rows.empty()) {
            missing(file, cmd);
            continue;
        }
        std::map<std::string, std::vector<double>> by_fandom;
        std::map<std::string, std::size_t> unscored;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const auto& v = rows[i][column];
            if (v == kUnscored) ++unscored[rows[i][1]];
            else by_fandom[rows[i][1]].push_back(parse_number<double>(file, v));
            by_fandom[rows[i][1]];
        }
        r << (column == 3 ? "s_term" : "s_topic") << " by fandom (scored, unscored, mean, median):\n";
        for (auto& [f, v] : by_fandom) {
            std::sort(v.begin(), v.end());
            double mean = 0;
            for (double x : v) mean += x;
            r << "  " << f << ": " << v.size() << ", " << unscored[f] << ", "
              << (v.empty() ? "NA" : fmt(mean / static_cast<double>(v.size()), 4)) << ", "
              << (v.empty() ? "NA" : fmt(quantile_sorted(v, 0.5), 4)) << "\n";
        }
    }

    r << section_title("Binned reception curves");
    {
        auto rows = maybe_rows(dir / "binned_curves.csv");
        if (rows.empty()) {
            missing("binned_curves.csv", "curves");
        } else {
            std::map<std::tuple<std::string, std::string, std::string>, std::vector<std::string>> lines;
            for (std::size_t i = 1; i < rows.size(); ++i) {
                const auto& row = rows[i];
                lines[{row[2], row[0], row[1]}].push_back(row[7]);
            }
            for (const auto& [key, means] : lines) {
                const auto& [width, resp, nov] = key;
                r << "  width " << width << ", " << resp << " vs " << nov << ": " << join(means, " ") << "\n";
            }
        }
    }

    r << section_title("Correlations of numeric predictors");
    if (fs::exists(dir / "correlations.csv")) r << file_body(dir / "correlations.csv");
    else missing("correlations.csv", "regress");
    if (fs::exists(dir / "vif.csv")) r << "\nVIF:\n" << file_body(dir / "vif.csv");

    r << section_title("Two-part regression coefficients");
    {
        auto rows = maybe_rows(dir / "coefficients.csv");
        if (rows.empty()) {
            missing("coefficients.csv", "regress");
        } else {
            r << "model response stage term estimate [95% CI]\n";
            for (std::size_t i = 1; i < rows.size(); ++i) {
                const auto& row = rows[i];
                if (row[3].rfind("s_", 0) != 0 && row[3] != kStage1Column) continue;
                r << "  " << row[0] << " " << row[1] << " " << row[2] << " " << row[3] << " " << row[4] << " ["
                  << row[6] << ", " << row[7] << "]\n";
            }
        }
    }

    r << section_title("GAM partial dependence");
    {
        auto rows = maybe_rows(dir / "partial_dependence.csv");
        if (rows.empty()) {
            missing("partial_dependence.csv", "gam");
        } else {
            std::map<std::pair<std::string, std::string>, std::vector<std::string>> lines;
            for (std::size_t i = 1; i < rows.size(); ++i) {
                const auto& row = rows[i];
                if (row[8] == "yes") continue;
                lines[{row[0] + " " + row[1], row[2]}].push_back(row[3] + ":" + fmt(std::stod(row[4]), 3));
            }
            for (const auto& [key, pts] : lines) {
                // Every tenth grid point keeps the line short.
                std::vector<std::string> thin;
                for (std::size_t i = 0; i < pts.size(); i += std::max<std::size_t>(1, pts.size() / 10))
                    thin.push_back(pts[i]);
                r << "  model " << key.first << ", " << key.second << ": " << join(thin, " ") << "\n";
            }
        }
    }
    const std::string text = r.str();
    {
        auto out = art.open("report.txt");
        out << text;
    }
    return {art.commit(), text};
}

}  // namespace

RunResult run_command(Command command, const PipelineConfig& config) {
    switch (command) {
        case Command::ingest: return cmd_ingest(config);
        case Command::score_term: return cmd_score_term(config);
        case Command::score_topic: return cmd_score_topic(config);
        case Command::curves: return cmd_curves(config);
        case Command::regress: return cmd_regress(config);
        case Command::gam: return cmd_gam(config);
        case Command::synth: return cmd_synth(config);
        case Command::report: return cmd_report(config);
    }
    throw ConfigError("unknown command");
}

}  // namespace noveltyscope
