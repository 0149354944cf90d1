#include "noveltyscope/corpus.hpp"

#include "noveltyscope/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

namespace noveltyscope {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr std::string_view kKeys[] = {"id",       "fandom",      "author",     "title",
                                      "text",     "chapters",    "publish_date", "update_date",
                                      "rating",   "category",    "archive_warnings",
                                      "relationships", "kudos",  "comments",   "hits",
                                      "bookmarks"};

struct FieldError {
    std::string field;
    std::string reason;
};

std::string get_string(const json& obj, const char* key) {
    const auto& v = obj.at(key);
    if (!v.is_string()) throw FieldError{key, "expected string"};
    return v.get<std::string>();
}

std::uint64_t get_count(const json& obj, const char* key) {
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) throw FieldError{key, "expected integer"};
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    auto x = v.get<std::int64_t>();
    if (x < 0) throw FieldError{key, std::string(key) + " >= 0 violated"};
    return static_cast<std::uint64_t>(x);
}

Date get_date(const json& obj, const char* key) {
    const auto& v = obj.at(key);
    if (!v.is_string()) throw FieldError{key, "expected ISO-8601 date string"};
    auto d = Date::parse(v.get<std::string>());
    if (!d) throw FieldError{key, "invalid ISO-8601 date"};
    return *d;
}

std::vector<std::string> get_string_array(const json& obj, const char* key) {
    const auto& v = obj.at(key);
    if (!v.is_array()) throw FieldError{key, "expected array of strings"};
    std::vector<std::string> out;
    out.reserve(v.size());
    for (const auto& e : v) {
        if (!e.is_string()) throw FieldError{key, "expected array of strings"};
        out.push_back(e.get<std::string>());
    }
    return out;
}

Work parse_work(const json& obj) {
    if (!obj.is_object()) throw FieldError{"", "record is not a JSON object"};
    for (auto key : kKeys) {
        if (!obj.contains(key)) throw FieldError{std::string(key), "missing key"};
    }
    for (const auto& [key, _] : obj.items()) {
        if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys)) {
            throw FieldError{key, "unexpected key"};
        }
    }
    Work w;
    w.id = get_string(obj, "id");
    if (w.id.empty()) throw FieldError{"id", "empty id"};
    w.fandom = get_string(obj, "fandom");
    w.author = get_string(obj, "author");
    w.title = get_string(obj, "title");
    w.text = get_string(obj, "text");
    auto chapters = get_count(obj, "chapters");
    if (chapters < 1) throw FieldError{"chapters", "chapters >= 1 violated"};
    if (chapters > UINT32_MAX) throw FieldError{"chapters", "chapters out of range"};
    w.chapters = static_cast<std::uint32_t>(chapters);
    w.publish_date = get_date(obj, "publish_date");
    w.update_date = get_date(obj, "update_date");
    if (w.update_date < w.publish_date) {
        throw FieldError{"update_date", "publish_date <= update_date violated"};
    }
    w.rating = get_string(obj, "rating");
    w.category = get_string(obj, "category");
    w.archive_warnings = get_string_array(obj, "archive_warnings");
    w.relationships = get_string_array(obj, "relationships");
    w.kudos = get_count(obj, "kudos");
    w.comments = get_count(obj, "comments");
    w.hits = get_count(obj, "hits");
    w.bookmarks = get_count(obj, "bookmarks");
    w.word_count = count_tokens(w.text);
    return w;
}

bool by_date_then_id(const Work* a, const Work* b) {
    if (a->publish_date != b->publish_date) return a->publish_date < b->publish_date;
    return a->id < b->id;
}

}  // namespace

std::string_view response_name(Response r) {
    switch (r) {
        case Response::kudos: return "kudos";
        case Response::hits: return "hits";
        case Response::comments: return "comments";
        case Response::bookmarks: return "bookmarks";
    }
    return "?";
}

std::optional<Response> parse_response(std::string_view name) {
    for (auto r : kResponses) {
        if (response_name(r) == name) return r;
    }
    return std::nullopt;
}

std::uint64_t response_count(const Work& w, Response r) {
    switch (r) {
        case Response::kudos: return w.kudos;
        case Response::hits: return w.hits;
        case Response::comments: return w.comments;
        case Response::bookmarks: return w.bookmarks;
    }
    return 0;
}

double ResponseVector::get(Response r) const {
    switch (r) {
        case Response::kudos: return kudos_pc;
        case Response::hits: return hits_pc;
        case Response::comments: return comments_pc;
        case Response::bookmarks: return bookmarks_pc;
    }
    return 0;
}

ResponseVector per_chapter_response(const Work& work) {
    const double ch = work.chapters;
    return {static_cast<double>(work.kudos) / ch, static_cast<double>(work.hits) / ch,
            static_cast<double>(work.comments) / ch, static_cast<double>(work.bookmarks) / ch};
}

std::string FilterSpec::describe() const {
    std::string s = "words in [" + std::to_string(min_words) + ", " + std::to_string(max_words) + "]";
    if (earliest_publish) s += "; published >= " + earliest_publish->iso();
    if (!fandoms.empty()) {
        s += "; fandoms {";
        bool first = true;
        for (const auto& f : fandoms) {
            if (!first) s += ", ";
            s += f;
            first = false;
        }
        s += "}";
    }
    return s;
}

bool CorpusStore::add(Work work, std::size_t line, std::string raw) {
    if (by_id_.contains(work.id)) {
        rejects_.push_back({line, "id", "duplicate id " + work.id, std::move(raw)});
        return false;
    }
    by_id_.emplace(work.id, works_.size());
    works_.push_back(std::move(work));
    return true;
}

const Work* CorpusStore::find(std::string_view id) const {
    auto it = by_id_.find(std::string(id));
    return it == by_id_.end() ? nullptr : &works_[it->second];
}

std::vector<std::string> CorpusStore::fandoms() const {
    std::set<std::string> names;
    for (const auto& w : works_) names.insert(w.fandom);
    return {names.begin(), names.end()};
}

bool CorpusStore::has_fandom(std::string_view fandom) const {
    return std::any_of(works_.begin(), works_.end(), [&](const Work& w) { return w.fandom == fandom; });
}

WorkSet CorpusStore::fandom_works(std::string_view fandom) const {
    WorkSet set;
    set.provenance = "fandom=" + std::string(fandom);
    for (const auto& w : works_) {
        if (w.fandom == fandom) set.works.push_back(&w);
    }
    sort_works(set.works);
    return set;
}

WorkSet CorpusStore::all() const {
    WorkSet set;
    set.provenance = "all";
    for (const auto& w : works_) set.works.push_back(&w);
    sort_works(set.works);
    return set;
}

std::unordered_map<std::string, std::size_t> CorpusStore::author_work_counts() const {
    std::unordered_map<std::string, std::size_t> counts;
    for (const auto& w : works_) ++counts[w.author];
    return counts;
}

void sort_works(std::vector<const Work*>& works) {
    std::sort(works.begin(), works.end(), by_date_then_id);
}

CorpusStore ingest_lines(std::istream& in) {
    CorpusStore store;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            store.add_reject({line_no, "", std::string("malformed JSON: ") + e.what(), line});
            continue;
        }
        try {
            store.add(parse_work(obj), line_no, line);
        } catch (const FieldError& e) {
            store.add_reject({line_no, e.field, e.reason, line});
        }
    }
    return store;
}

CorpusStore ingest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CorpusError("cannot read corpus file " + path.string());
    return ingest_lines(in);
}

std::string serialize_work(const Work& w) {
    ordered_json obj;
    obj["id"] = w.id;
    obj["fandom"] = w.fandom;
    obj["author"] = w.author;
    obj["title"] = w.title;
    obj["text"] = w.text;
    obj["chapters"] = w.chapters;
    obj["publish_date"] = w.publish_date.iso();
    obj["update_date"] = w.update_date.iso();
    obj["rating"] = w.rating;
    obj["category"] = w.category;
    obj["archive_warnings"] = w.archive_warnings;
    obj["relationships"] = w.relationships;
    obj["kudos"] = w.kudos;
    obj["comments"] = w.comments;
    obj["hits"] = w.hits;
    obj["bookmarks"] = w.bookmarks;
    return obj.dump(-1, ' ', false, json::error_handler_t::replace);
}

void export_works(const WorkSet& works, std::ostream& out) {
    for (const Work* w : works.works) out << serialize_work(*w) << '\n';
}

void write_rejects(const CorpusStore& store, std::ostream& out) {
    for (const auto& r : store.rejects()) {
        ordered_json obj;
        auto parsed = json::parse(r.raw, nullptr, false);
        if (parsed.is_object()) {
            for (const auto& [k, v] : parsed.items()) obj[k] = v;
        } else {
            obj["raw"] = r.raw;
        }
        obj["line"] = r.line;
        if (!r.field.empty()) obj["field"] = r.field;
        obj["reason"] = r.reason;
        out << obj.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
    }
}

WorkSet filter_works(const WorkSet& works, const FilterSpec& c) {
    WorkSet out;
    out.provenance = works.provenance + " | " + c.describe();
    for (const Work* w : works.works) {
        if (w->word_count < c.min_words || w->word_count > c.max_words) continue;
        if (c.earliest_publish && w->publish_date < *c.earliest_publish) continue;
        if (!c.fandoms.empty() && !c.fandoms.contains(w->fandom)) continue;
        out.works.push_back(w);
    }
    sort_works(out.works);
    return out;
}

WorkSet filter_works(const CorpusStore& store, const FilterSpec& criteria) {
    return filter_works(store.all(), criteria);
}

std::pair<std::size_t, std::size_t> window_range(const WorkSet& fandom_set, const Date& focal_date,
                                                 int span_days) {
    const auto& v = fandom_set.works;
    const Date start = focal_date.minus_days(span_days);
    auto lo = std::lower_bound(v.begin(), v.end(), start,
                               [](const Work* w, const Date& d) { return w->publish_date < d; });
    auto hi = std::lower_bound(lo, v.end(), focal_date,
                               [](const Work* w, const Date& d) { return w->publish_date < d; });
    return {static_cast<std::size_t>(lo - v.begin()), static_cast<std::size_t>(hi - v.begin())};
}

WorkSet trailing_window(const WorkSet& fandom_set, const Work& focal, int span_days) {
    WorkSet out;
    out.provenance = "window(" + focal.id + ", " + std::to_string(span_days) + "d)";
    auto [lo, hi] = window_range(fandom_set, focal.publish_date, span_days);
    for (std::size_t i = lo; i < hi; ++i) {
        const Work* w = fandom_set.works[i];
        if (w->fandom == focal.fandom && w != &focal && w->id != focal.id) out.works.push_back(w);
    }
    return out;
}

WorkSet trailing_window(const CorpusStore& store, const Work& focal, int span_days) {
    return trailing_window(store.fandom_works(focal.fandom), focal, span_days);
}

}  // namespace noveltyscope
