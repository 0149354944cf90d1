#pragma once

#include "noveltyscope/date.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace noveltyscope {

struct Work {
    std::string id;
    std::string fandom;
    std::string author;
    std::string title;
    std::string text;
    std::size_t word_count = 0;  // derived from text by count_tokens()
    std::uint32_t chapters = 1;
    Date publish_date;
    Date update_date;  // completion date for finished works, last edit otherwise
    std::string rating;
    std::string category;
    std::vector<std::string> archive_warnings;
    std::vector<std::string> relationships;
    std::uint64_t kudos = 0;
    std::uint64_t comments = 0;
    std::uint64_t hits = 0;
    std::uint64_t bookmarks = 0;
};

enum class Response { kudos, hits, comments, bookmarks };

inline constexpr Response kResponses[] = {Response::kudos, Response::hits, Response::comments,
                                          Response::bookmarks};

std::string_view response_name(Response r);
std::optional<Response> parse_response(std::string_view name);
std::uint64_t response_count(const Work& w, Response r);

struct ResponseVector {
    double kudos_pc = 0;
    double hits_pc = 0;
    double comments_pc = 0;
    double bookmarks_pc = 0;

    double get(Response r) const;
};

ResponseVector per_chapter_response(const Work& work);

// Non-owning, ordered by (publish_date, id).
struct WorkSet {
    std::vector<const Work*> works;
    std::string provenance;

    std::size_t size() const { return works.size(); }
    bool empty() const { return works.empty(); }
};

struct Reject {
    std::size_t line = 0;  // 1-based
    std::string field;
    std::string reason;
    std::string raw;
};

class CorpusError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct FilterSpec {
    std::size_t min_words = 500;
    std::size_t max_words = 1500;
    std::optional<Date> earliest_publish = Date(2010, 1, 1);
    std::set<std::string> fandoms;  // empty: all

    std::string describe() const;
};

class CorpusStore {
public:
    CorpusStore() = default;

    // Validates and adds one record; on failure the reject is recorded and false returned.
    bool add(Work work, std::size_t line, std::string raw);
    void add_reject(Reject r) { rejects_.push_back(std::move(r)); }

    const std::vector<Work>& works() const { return works_; }
    const std::vector<Reject>& rejects() const { return rejects_; }
    std::size_t size() const { return works_.size(); }

    const Work* find(std::string_view id) const;
    std::vector<std::string> fandoms() const;

    // Works of one fandom ordered by (publish_date, id); empty for unknown fandoms.
    WorkSet fandom_works(std::string_view fandom) const;
    bool has_fandom(std::string_view fandom) const;

    WorkSet all() const;

    // Number of works in the whole store credited to each author.
    std::unordered_map<std::string, std::size_t> author_work_counts() const;

private:
    std::vector<Work> works_;
    std::vector<Reject> rejects_;
    std::unordered_map<std::string, std::size_t> by_id_;
};

// Line-delimited JSON ingestion. Throws CorpusError if the file cannot be read.
CorpusStore ingest(const std::filesystem::path& path);
CorpusStore ingest_lines(std::istream& in);

// Canonical single-line serialization in schema key order.
std::string serialize_work(const Work& w);
void export_works(const WorkSet& works, std::ostream& out);
void write_rejects(const CorpusStore& store, std::ostream& out);

WorkSet filter_works(const WorkSet& works, const FilterSpec& criteria);
WorkSet filter_works(const CorpusStore& store, const FilterSpec& criteria);

inline constexpr int kDefaultSpanDays = 183;

// Same-fandom works published in [focal.publish_date - span_days, focal.publish_date).
WorkSet trailing_window(const CorpusStore& store, const Work& focal, int span_days = kDefaultSpanDays);
// Same rule restricted to an already ordered single-fandom set (e.g. a filtered one).
WorkSet trailing_window(const WorkSet& fandom_set, const Work& focal, int span_days = kDefaultSpanDays);

// Index range [first, last) of the trailing window inside an ordered single-fandom set.
std::pair<std::size_t, std::size_t> window_range(const WorkSet& fandom_set, const Date& focal_date,
                                                 int span_days);

void sort_works(std::vector<const Work*>& works);

}  // namespace noveltyscope
