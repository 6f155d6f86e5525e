#pragma once
// Per-author career covariates derived from a corpus, the co-author candidate
// pool, and covariate distribution exports.

#include <map>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "convoke/corpus.hpp"
#include "convoke/histogram.hpp"

namespace convoke {

struct AuthorProfile {
    AuthorId author;
    int first_pub_year = 0;          // min year over authored records
    long long scholarly_output = 0;  // count of authored records
    long long coauthor_count = 0;    // unique other authors across authored records
    long long citation_total = 0;    // sum of citations over authored records

    bool operator==(const AuthorProfile&) const = default;
};

enum class Covariate { first_pub_year, scholarly_output, coauthor_count, citation_total };

inline const char* to_string(Covariate c) {
    switch (c) {
        case Covariate::first_pub_year: return "first_pub_year";
        case Covariate::scholarly_output: return "scholarly_output";
        case Covariate::coauthor_count: return "coauthor_count";
        default: return "citation_total";
    }
}

inline std::optional<Covariate> parse_covariate(const std::string& s) {
    if (s == "first_pub_year" || s == "year") return Covariate::first_pub_year;
    if (s == "scholarly_output" || s == "out" || s == "output") return Covariate::scholarly_output;
    if (s == "coauthor_count" || s == "coauth") return Covariate::coauthor_count;
    if (s == "citation_total" || s == "cites") return Covariate::citation_total;
    return std::nullopt;
}

inline double covariate_value(const AuthorProfile& p, Covariate c) {
    switch (c) {
        case Covariate::first_pub_year: return static_cast<double>(p.first_pub_year);
        case Covariate::scholarly_output: return static_cast<double>(p.scholarly_output);
        case Covariate::coauthor_count: return static_cast<double>(p.coauthor_count);
        default: return static_cast<double>(p.citation_total);
    }
}

struct ProfileSet {
    std::map<AuthorId, AuthorProfile> profiles;
    std::vector<AuthorId> missing;   // requested authors absent from the corpus
};

inline AuthorProfile profile_of(const Corpus& corpus, const AuthorId& author,
                                const std::vector<std::uint32_t>& record_indices) {
    AuthorProfile p;
    p.author = author;
    std::unordered_set<std::string_view> coauthors;
    bool first = true;
    for (std::uint32_t idx : record_indices) {
        const auto& rec = corpus.records()[idx];
        if (first || rec.year < p.first_pub_year) {
            p.first_pub_year = rec.year;
            first = false;
        }
        ++p.scholarly_output;
        p.citation_total += rec.citations;
        for (const auto& a : rec.authors) {
            if (a != author) {
                coauthors.insert(a);
            }
        }
    }
    p.coauthor_count = static_cast<long long>(coauthors.size());
    return p;
}

// Unknown authors land in `missing`, never silently dropped.
inline ProfileSet derive_profiles(const Corpus& corpus, const std::set<AuthorId>& authors) {
    ProfileSet out;
    for (const auto& a : authors) {
        const auto* recs = corpus.records_of(a);
        if (!recs) {
            out.missing.push_back(a);
            continue;
        }
        out.profiles.emplace(a, profile_of(corpus, a, *recs));
    }
    return out;
}

inline std::map<AuthorId, AuthorProfile> derive_all_profiles(const Corpus& corpus) {
    std::map<AuthorId, AuthorProfile> out;
    for (const auto& [author, recs] : corpus.author_index()) {
        out.emplace(author, profile_of(corpus, author, recs));
    }
    return out;
}

struct CandidatePool {
    std::set<AuthorId> candidates;                 // disjoint from the cohort
    std::map<AuthorId, long long> provenance;      // shared-publication counts
};

// Everyone who co-authored with a cohort member, minus the cohort itself.
inline CandidatePool coauthor_pool(const Corpus& corpus, const CohortSpec& cohort) {
    CandidatePool pool;
    std::set<std::uint32_t> cohort_records;
    for (const auto& member : cohort.members) {
        if (const auto* recs = corpus.records_of(member)) {
            cohort_records.insert(recs->begin(), recs->end());
        }
    }
    for (std::uint32_t idx : cohort_records) {
        for (const auto& a : corpus.records()[idx].authors) {
            if (cohort.members.count(a) == 0) {
                pool.candidates.insert(a);
                ++pool.provenance[a];
            }
        }
    }
    if (pool.candidates.empty()) {
        throw Error("cohort has no external co-authors");
    }
    return pool;
}

// Per-group binned counts with shared edges (Figure-1-style export).
inline HistogramTable distribution_export(const std::map<AuthorId, AuthorProfile>& profiles,
                                          Covariate covariate,
                                          const std::vector<std::pair<std::string, std::set<AuthorId>>>& groups,
                                          HistogramOptions opts = {}) {
    if (groups.empty()) {
        throw Error("distribution export needs at least one group");
    }
    std::vector<LabelledValues> labelled;
    for (const auto& [label, ids] : groups) {
        LabelledValues lv;
        lv.label = label;
        for (const auto& id : ids) {
            auto it = profiles.find(id);
            if (it == profiles.end()) {
                throw Error("covariate '" + std::string(to_string(covariate)) +
                            "' absent: no profile for author '" + id + "' in group '" + label + "'");
            }
            lv.values.push_back(covariate_value(it->second, covariate));
        }
        labelled.push_back(std::move(lv));
    }
    return build_histogram(labelled, opts);
}

inline std::string profiles_to_tsv(const std::map<AuthorId, AuthorProfile>& profiles,
                                   const std::set<AuthorId>* cohort = nullptr) {
    std::string out = "author\tfirst_pub_year\tscholarly_output\tcoauthor_count\tcitation_total";
    out += cohort ? "\tgroup\n" : "\n";
    for (const auto& [id, p] : profiles) {
        out += id + "\t" + std::to_string(p.first_pub_year) + "\t" +
               std::to_string(p.scholarly_output) + "\t" + std::to_string(p.coauthor_count) +
               "\t" + std::to_string(p.citation_total);
        if (cohort) {
            out += cohort->count(id) ? "\tcohort" : "\tpool";
        }
        out += "\n";
    }
    return out;
}

inline std::map<AuthorId, AuthorProfile> profiles_from_tsv(const std::string& text) {
    std::map<AuthorId, AuthorProfile> out;
    size_t lineno = 0;
    for (const auto& raw : split(text, '\n')) {
        ++lineno;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line.rfind("author\t", 0) == 0) {
            continue;
        }
        auto cols = split(line, '\t');
        if (cols.size() != 5 && cols.size() != 6) {
            throw Error("profiles tsv line " + std::to_string(lineno) +
                        ": expected 5 or 6 columns, got " + std::to_string(cols.size()));
        }
        try {
            AuthorProfile p;
            p.author = cols[0];
            p.first_pub_year = std::stoi(cols[1]);
            p.scholarly_output = std::stoll(cols[2]);
            p.coauthor_count = std::stoll(cols[3]);
            p.citation_total = std::stoll(cols[4]);
            if (!out.emplace(p.author, p).second) {
                throw Error("profiles tsv line " + std::to_string(lineno) +
                            ": duplicate author '" + p.author + "'");
            }
        } catch (const Error&) {
            throw;
        } catch (const std::exception&) {
            throw Error("profiles tsv line " + std::to_string(lineno) + ": bad number");
        }
    }
    return out;
}

inline std::string pool_to_text(const CandidatePool& pool) {
    std::string out = "author\tshared_publications\n";
    for (const auto& id : pool.candidates) {
        auto it = pool.provenance.find(id);
        long long shared = it == pool.provenance.end() ? 0 : it->second;
        out += id + "\t" + std::to_string(shared) + "\n";
    }
    return out;
}

inline CandidatePool pool_from_text(const std::string& text) {
    CandidatePool pool;
    size_t lineno = 0;
    for (const auto& raw : split(text, '\n')) {
        ++lineno;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line.rfind("author\t", 0) == 0) {
            continue;
        }
        auto cols = split(line, '\t');
        if (cols.size() != 2) {
            throw Error("pool file line " + std::to_string(lineno) +
                        ": expected author\\tshared_publications");
        }
        try {
            pool.candidates.insert(cols[0]);
            pool.provenance[cols[0]] = std::stoll(cols[1]);
        } catch (const std::exception&) {
            throw Error("pool file line " + std::to_string(lineno) + ": bad count");
        }
    }
    if (pool.candidates.empty()) {
        throw Error("pool file lists no candidates");
    }
    return pool;
}

} // namespace convoke
