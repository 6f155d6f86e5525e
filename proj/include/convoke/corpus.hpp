#pragma once
// Publication corpus: record schema, validation, JSONL load/store, cohort files.
//
// Corpus file format: UTF-8, one JSON object per line, exactly the fields of
// PublicationRecord in snake_case. Unknown fields are rejected unless lenient.
// Cohort file format: header line `# name=<str> start=<year>`, then one
// author id per line.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "convoke/io.hpp"

namespace convoke {

using AuthorId = std::string;
using Eid = std::string;

struct YearRange {
    int from = -100000;
    int to = 100000;

    bool contains(int year) const { return year >= from && year <= to; }
    bool operator==(const YearRange&) const = default;

    // "1996:2021"
    static YearRange parse(const std::string& text) {
        auto parts = split(text, ':');
        if (parts.size() != 2) {
            throw Error("bad year range '" + text + "' (expected FROM:TO)");
        }
        try {
            YearRange r{std::stoi(trim(parts[0])), std::stoi(trim(parts[1]))};
            if (r.from > r.to) {
                throw Error("bad year range '" + text + "' (FROM > TO)");
            }
            return r;
        } catch (const std::invalid_argument&) {
            throw Error("bad year range '" + text + "'");
        }
    }
};

enum class Doctype { article, review, conference, other };
enum class Sector { academic, corporate, government, other };

inline const char* to_string(Doctype d) {
    switch (d) {
        case Doctype::article: return "article";
        case Doctype::review: return "review";
        case Doctype::conference: return "conference";
        default: return "other";
    }
}

inline const char* to_string(Sector s) {
    switch (s) {
        case Sector::academic: return "academic";
        case Sector::corporate: return "corporate";
        case Sector::government: return "government";
        default: return "other";
    }
}

inline std::optional<Doctype> parse_doctype(const std::string& s) {
    if (s == "article") return Doctype::article;
    if (s == "review") return Doctype::review;
    if (s == "conference") return Doctype::conference;
    if (s == "other") return Doctype::other;
    return std::nullopt;
}

inline std::optional<Sector> parse_sector(const std::string& s) {
    if (s == "academic") return Sector::academic;
    if (s == "corporate") return Sector::corporate;
    if (s == "government") return Sector::government;
    if (s == "other") return Sector::other;
    return std::nullopt;
}

struct PublicationRecord {
    Eid eid;
    int year = 0;
    std::vector<AuthorId> authors;          // ordered, no duplicates
    long long citations = 0;
    std::string field;                      // subject code
    Doctype doctype = Doctype::article;
    std::set<std::string> countries;        // ISO alpha-2, upper case; empty = unknown
    std::set<Sector> sectors;               // empty = unknown
    long long patent_citations = 0;
    long long policy_citations = 0;
    long long blog_mentions = 0;
    long long news_mentions = 0;
    long long tweet_mentions = 0;

    bool operator==(const PublicationRecord&) const = default;

    bool has_author(const AuthorId& a) const {
        return std::find(authors.begin(), authors.end(), a) != authors.end();
    }
    bool international() const { return countries.size() >= 2; }
    bool academic_corporate() const {
        return sectors.count(Sector::academic) > 0 && sectors.count(Sector::corporate) > 0;
    }
};

inline int current_calendar_year() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    return tm.tm_year + 1900;
}

// ---------------------------------------------------------------------------
// Record validation

struct ValidationOutcome {
    std::optional<PublicationRecord> record;   // set iff violations empty
    std::vector<std::string> violations;
    std::vector<std::string> warnings;
    std::vector<std::string> missing_counters; // counters defaulted to 0
};

namespace detail {

inline const std::vector<std::string>& record_field_names() {
    static const std::vector<std::string> names = {
        "eid", "year", "authors", "citations", "field", "doctype",
        "countries", "sectors", "patent_citations", "policy_citations",
        "blog_mentions", "news_mentions", "tweet_mentions"};
    return names;
}

inline bool read_counter(const nlohmann::json& raw, const char* key, long long& out,
                         std::vector<std::string>& violations) {
    const auto& v = raw.at(key);
    if (!v.is_number_integer()) {
        violations.push_back(std::string("field '") + key + "' must be an integer");
        return false;
    }
    long long n = v.get<long long>();
    if (n < 0) {
        violations.push_back(std::string("negative counter '") + key + "'");
        return false;
    }
    out = n;
    return true;
}

} // namespace detail

// Normalizes a syntactically parsed record or returns the full violation list.
// Diagnostics are the return channel; this never throws on bad content.
inline ValidationOutcome validate_record(const nlohmann::json& raw, bool lenient = false) {
    ValidationOutcome out;
    auto& violations = out.violations;

    if (!raw.is_object()) {
        violations.push_back("record is not an object");
        return out;
    }

    for (auto it = raw.begin(); it != raw.end(); ++it) {
        const auto& names = detail::record_field_names();
        if (std::find(names.begin(), names.end(), it.key()) == names.end()) {
            if (lenient) {
                out.warnings.push_back("ignoring unknown field '" + it.key() + "'");
            } else {
                violations.push_back("unknown field '" + it.key() + "'");
            }
        }
    }

    PublicationRecord rec;

    if (!raw.contains("eid") || !raw.at("eid").is_string() ||
        raw.at("eid").get<std::string>().empty()) {
        violations.push_back("missing or empty 'eid'");
    } else {
        rec.eid = raw.at("eid").get<std::string>();
    }

    if (!raw.contains("year") || !raw.at("year").is_number_integer()) {
        violations.push_back("field 'year' must be an integer");
    } else {
        rec.year = raw.at("year").get<int>();
        int max_year = current_calendar_year() + 1;
        if (rec.year < 1800 || rec.year > max_year) {
            violations.push_back("year " + std::to_string(rec.year) + " outside [1800, " +
                                 std::to_string(max_year) + "]");
        }
    }

    if (!raw.contains("authors") || !raw.at("authors").is_array()) {
        violations.push_back("field 'authors' must be an array");
    } else {
        std::set<AuthorId> seen;
        bool dup = false;
        for (const auto& a : raw.at("authors")) {
            if (!a.is_string() || a.get<std::string>().empty()) {
                violations.push_back("author ids must be non-empty strings");
                break;
            }
            auto id = a.get<std::string>();
            if (seen.insert(id).second) {
                rec.authors.push_back(id);   // first occurrence order
            } else {
                dup = true;
            }
        }
        if (dup) {
            out.warnings.push_back("duplicate author ids collapsed");
        }
        if (rec.authors.empty() && violations.empty()) {
            violations.push_back("empty author list");
        }
    }

    if (!raw.contains("citations")) {
        violations.push_back("missing field 'citations'");
    } else {
        detail::read_counter(raw, "citations", rec.citations, violations);
    }

    if (!raw.contains("field") || !raw.at("field").is_string()) {
        violations.push_back("field 'field' must be a string");
    } else {
        rec.field = raw.at("field").get<std::string>();
    }

    if (!raw.contains("doctype") || !raw.at("doctype").is_string()) {
        violations.push_back("field 'doctype' must be a string");
    } else {
        auto dt = parse_doctype(raw.at("doctype").get<std::string>());
        if (!dt) {
            violations.push_back("unknown doctype '" + raw.at("doctype").get<std::string>() + "'");
        } else {
            rec.doctype = *dt;
        }
    }

    if (raw.contains("countries")) {
        if (!raw.at("countries").is_array()) {
            violations.push_back("field 'countries' must be an array");
        } else {
            for (const auto& c : raw.at("countries")) {
                if (!c.is_string()) {
                    violations.push_back("country codes must be strings");
                    break;
                }
                std::string code = c.get<std::string>();
                std::transform(code.begin(), code.end(), code.begin(),
                               [](unsigned char ch) { return std::toupper(ch); });
                bool alpha2 = code.size() == 2 && std::isalpha(static_cast<unsigned char>(code[0])) &&
                              std::isalpha(static_cast<unsigned char>(code[1]));
                if (!alpha2) {
                    violations.push_back("invalid country code '" + c.get<std::string>() + "'");
                } else {
                    rec.countries.insert(code);
                }
            }
        }
    }

    if (raw.contains("sectors")) {
        if (!raw.at("sectors").is_array()) {
            violations.push_back("field 'sectors' must be an array");
        } else {
            for (const auto& s : raw.at("sectors")) {
                if (!s.is_string()) {
                    violations.push_back("sectors must be strings");
                    break;
                }
                auto sec = parse_sector(s.get<std::string>());
                if (!sec) {
                    violations.push_back("unknown sector '" + s.get<std::string>() + "'");
                } else {
                    rec.sectors.insert(*sec);
                }
            }
        }
    }

    const std::pair<const char*, long long PublicationRecord::*> counters[] = {
        {"patent_citations", &PublicationRecord::patent_citations},
        {"policy_citations", &PublicationRecord::policy_citations},
        {"blog_mentions", &PublicationRecord::blog_mentions},
        {"news_mentions", &PublicationRecord::news_mentions},
        {"tweet_mentions", &PublicationRecord::tweet_mentions},
    };
    for (const auto& [key, member] : counters) {
        if (raw.contains(key)) {
            detail::read_counter(raw, key, rec.*member, violations);
        } else {
            out.missing_counters.push_back(key);   // defaults to 0, reported as coverage
        }
    }

    if (violations.empty()) {
        out.record = std::move(rec);
    }
    return out;
}

inline nlohmann::ordered_json record_to_json(const PublicationRecord& rec) {
    nlohmann::ordered_json j;
    j["eid"] = rec.eid;
    j["year"] = rec.year;
    j["authors"] = rec.authors;
    j["citations"] = rec.citations;
    j["field"] = rec.field;
    j["doctype"] = to_string(rec.doctype);
    j["countries"] = rec.countries;   // std::set keeps this sorted
    auto sectors = nlohmann::ordered_json::array();
    for (Sector s : rec.sectors) {
        sectors.push_back(to_string(s));
    }
    j["sectors"] = sectors;
    j["patent_citations"] = rec.patent_citations;
    j["policy_citations"] = rec.policy_citations;
    j["blog_mentions"] = rec.blog_mentions;
    j["news_mentions"] = rec.news_mentions;
    j["tweet_mentions"] = rec.tweet_mentions;
    return j;
}

// ---------------------------------------------------------------------------
// Corpus

// Immutable after construction. Records are kept sorted by eid; the author
// index maps each author to the indices of their records.
class Corpus {
public:
    Corpus() = default;

    explicit Corpus(std::vector<PublicationRecord> records) : records_(std::move(records)) {
        std::sort(records_.begin(), records_.end(),
                  [](const PublicationRecord& a, const PublicationRecord& b) { return a.eid < b.eid; });
        for (size_t i = 1; i < records_.size(); ++i) {
            if (records_[i].eid == records_[i - 1].eid) {
                throw Error("duplicate eid '" + records_[i].eid + "' in corpus");
            }
        }
        rebuild_index();
    }

    const std::vector<PublicationRecord>& records() const { return records_; }
    size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }

    const std::map<AuthorId, std::vector<std::uint32_t>>& author_index() const { return index_; }
    size_t author_count() const { return index_.size(); }

    const PublicationRecord* find(const Eid& eid) const {
        auto it = std::lower_bound(records_.begin(), records_.end(), eid,
                                   [](const PublicationRecord& r, const Eid& e) { return r.eid < e; });
        if (it == records_.end() || it->eid != eid) {
            return nullptr;
        }
        return &*it;
    }

    const std::vector<std::uint32_t>* records_of(const AuthorId& author) const {
        auto it = index_.find(author);
        return it == index_.end() ? nullptr : &it->second;
    }

    std::optional<YearRange> year_range() const {
        if (records_.empty()) {
            return std::nullopt;
        }
        int lo = records_.front().year, hi = records_.front().year;
        for (const auto& r : records_) {
            lo = std::min(lo, r.year);
            hi = std::max(hi, r.year);
        }
        return YearRange{lo, hi};
    }

    // What rebuild_index would produce; exposed so the stored index can be audited.
    std::map<AuthorId, std::vector<std::uint32_t>> derive_index() const {
        std::map<AuthorId, std::vector<std::uint32_t>> idx;
        for (std::uint32_t i = 0; i < records_.size(); ++i) {
            for (const auto& a : records_[i].authors) {
                idx[a].push_back(i);
            }
        }
        return idx;
    }

    bool operator==(const Corpus& other) const { return records_ == other.records_; }

private:
    void rebuild_index() { index_ = derive_index(); }

    std::vector<PublicationRecord> records_;
    std::map<AuthorId, std::vector<std::uint32_t>> index_;
};

// ---------------------------------------------------------------------------
// Corpus file IO

struct LoadOptions {
    bool lenient = false;
};

struct LoadIssue {
    size_t line = 0;
    std::string message;
};

struct LoadReport {
    size_t total_lines = 0;
    size_t accepted = 0;
    std::vector<LoadIssue> syntax_errors;        // fatal unless lenient
    std::vector<LoadIssue> rejected;             // validation failures, skipped
    std::vector<LoadIssue> warnings;
    std::map<std::string, size_t> missing_counter_tallies;
};

struct LoadResult {
    Corpus corpus;
    LoadReport report;
};

inline LoadResult load_corpus(const std::filesystem::path& path, LoadOptions opts = {}) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot read corpus file: " + path.string());
    }

    LoadReport report;
    std::vector<PublicationRecord> records;
    std::map<Eid, size_t> eid_lines;
    std::string line;
    size_t lineno = 0;

    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) {
            continue;
        }
        ++report.total_lines;

        nlohmann::json raw = nlohmann::json::parse(line, nullptr, false);
        if (raw.is_discarded()) {
            report.syntax_errors.push_back({lineno, "unparseable line"});
            continue;
        }

        ValidationOutcome v = validate_record(raw, opts.lenient);
        for (const auto& w : v.warnings) {
            report.warnings.push_back({lineno, w});
        }
        for (const auto& c : v.missing_counters) {
            ++report.missing_counter_tallies[c];
        }
        if (!v.record) {
            std::string msg;
            for (const auto& viol : v.violations) {
                if (!msg.empty()) {
                    msg += "; ";
                }
                msg += viol;
            }
            report.rejected.push_back({lineno, msg});
            continue;
        }

        auto [it, fresh] = eid_lines.emplace(v.record->eid, lineno);
        if (!fresh) {
            throw Error("duplicate eid '" + v.record->eid + "' at lines " +
                        std::to_string(it->second) + " and " + std::to_string(lineno));
        }
        records.push_back(std::move(*v.record));
        ++report.accepted;
    }

    if (!opts.lenient && !report.syntax_errors.empty()) {
        std::string msg = std::to_string(report.syntax_errors.size()) +
                          " unparseable line(s) (first at line " +
                          std::to_string(report.syntax_errors.front().line) +
                          "); rerun with --lenient to skip them";
        throw Error(msg);
    }

    return {Corpus(std::move(records)), std::move(report)};
}

// Canonical form: records sorted by eid, fixed field order, one per line.
inline std::string corpus_to_jsonl(const Corpus& corpus) {
    std::string out;
    for (const auto& rec : corpus.records()) {
        out += record_to_json(rec).dump();
        out += '\n';
    }
    return out;
}

inline void write_corpus(const Corpus& corpus, const std::filesystem::path& path) {
    atomic_write_file(path, corpus_to_jsonl(corpus));
}

// ---------------------------------------------------------------------------
// Cohort files

struct CohortSpec {
    std::string name;
    std::set<AuthorId> members;
    int program_start_year = 0;

    bool operator==(const CohortSpec&) const = default;
};

inline CohortSpec load_cohort(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot read cohort file: " + path.string());
    }
    CohortSpec spec;
    std::string line;
    bool have_header = false;
    size_t lineno = 0;
    static const std::regex header_re(R"(^#\s*name=(.+?)\s+start=(-?\d+)\s*$)");

    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty()) {
            continue;
        }
        if (t[0] == '#') {
            std::smatch m;
            if (std::regex_match(t, m, header_re)) {
                spec.name = m[1];
                spec.program_start_year = std::stoi(m[2]);
                have_header = true;
            }
            continue;
        }
        spec.members.insert(t);
    }
    if (!have_header) {
        throw Error("cohort file missing header '# name=<str> start=<year>': " + path.string());
    }
    if (spec.members.empty()) {
        throw Error("cohort file has no members: " + path.string());
    }
    return spec;
}

inline std::string cohort_to_text(const CohortSpec& spec) {
    std::string out = "# name=" + spec.name + " start=" + std::to_string(spec.program_start_year) + "\n";
    for (const auto& m : spec.members) {
        out += m;
        out += '\n';
    }
    return out;
}

inline void write_cohort(const CohortSpec& spec, const std::filesystem::path& path) {
    atomic_write_file(path, cohort_to_text(spec));
}

} // namespace convoke
