#pragma once
// Seeded synthetic corpora with a plantable convening intervention: authors
// publish via per-year Poisson counts, co-authors join probabilistically,
// and intra-cohort joining is boosted after the program start year. All
// samplers are implemented here so a (config, seed) pair is reproducible
// across platforms within this implementation.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "convoke/corpus.hpp"
#include "convoke/io.hpp"

namespace convoke {

inline constexpr const char* kSynthCohortName = "synthetic-cohort";

// Fixed altmetric intensities (per publication); echoed into the manifest.
inline constexpr double kSynthPatentRate = 0.03;
inline constexpr double kSynthPolicyRate = 0.015;
inline constexpr double kSynthBlogRate = 0.12;
inline constexpr double kSynthNewsRate = 0.08;
inline constexpr double kSynthTweetRate = 1.6;

// Career starts are staggered uniformly over the first min(10, n_years)
// simulated years so first_pub_year varies across authors.
inline constexpr int kSynthMaxStagger = 10;

struct LognormalParams {
    double mu = 1.0;
    double sigma = 1.0;
    bool operator==(const LognormalParams&) const = default;
};

struct SynthConfig {
    int n_authors = 300;
    int n_cohort = 25;
    YearRange years{1985, 2024};
    int program_start_year = 1997;
    double base_collab_prob = 0.004;
    double cohort_boost = 3.0; // multiplier on intra-cohort joining after program start
    double pubs_per_author_year = 0.5;
    std::vector<std::string> fields = {"neuro", "genetics", "cs"};
    std::map<std::string, LognormalParams> citation_lognormal = {
        {"neuro", {1.1, 1.2}}, {"genetics", {1.4, 1.0}}, {"cs", {0.8, 1.3}}};
    double intl_prob = 0.4;
    double corp_prob = 0.05;
    unsigned long long seed = 42;

    bool operator==(const SynthConfig&) const = default;
};

inline void validate_synth_config(const SynthConfig& cfg) {
    std::vector<std::string> problems;
    if (cfg.n_authors < 1) {
        problems.push_back("n_authors must be at least 1");
    }
    if (cfg.n_cohort < 1 || cfg.n_cohort > cfg.n_authors) {
        problems.push_back("n_cohort must lie in [1, n_authors]");
    }
    if (cfg.years.from > cfg.years.to) {
        problems.push_back("years range is empty");
    }
    if (cfg.years.from < 1800 || cfg.years.to > current_calendar_year() + 1) {
        problems.push_back("years must lie within [1800, next calendar year]");
    }
    for (double p : {cfg.base_collab_prob, cfg.intl_prob, cfg.corp_prob}) {
        if (p < 0 || p > 1) {
            problems.push_back("probabilities must lie in [0,1]");
            break;
        }
    }
    if (cfg.cohort_boost < 1) {
        problems.push_back("cohort_boost must be >= 1");
    }
    if (cfg.base_collab_prob * cfg.cohort_boost > 1) {
        problems.push_back("base_collab_prob * cohort_boost exceeds 1");
    }
    if (cfg.pubs_per_author_year < 0) {
        problems.push_back("pubs_per_author_year must be >= 0");
    }
    if (cfg.pubs_per_author_year * cfg.n_authors == 0) {
        problems.push_back("config generates no publications");
    }
    if (cfg.fields.empty()) {
        problems.push_back("fields list is empty");
    }
    for (const auto& f : cfg.fields) {
        auto it = cfg.citation_lognormal.find(f);
        if (it == cfg.citation_lognormal.end()) {
            problems.push_back("no citation_lognormal entry for field '" + f + "'");
        } else if (it->second.sigma < 0) {
            problems.push_back("citation sigma for field '" + f + "' is negative");
        }
    }
    if (!problems.empty()) {
        std::string msg = "invalid synth config:";
        for (const auto& p : problems) {
            msg += "\n  - " + p;
        }
        throw Error(msg);
    }
}

// ---------------------------------------------------------------------------
// Config file format: `key = value` lines, '#' comments, unknown keys rejected,
// omitted keys keep their defaults.

inline std::string synth_config_to_text(const SynthConfig& cfg) {
    auto real = [](double x) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", x);
        return std::string(buf);
    };
    std::string out;
    out += "n_authors = " + std::to_string(cfg.n_authors) + "\n";
    out += "n_cohort = " + std::to_string(cfg.n_cohort) + "\n";
    out += "years = " + std::to_string(cfg.years.from) + ":" + std::to_string(cfg.years.to) +
           "\n";
    out += "program_start_year = " + std::to_string(cfg.program_start_year) + "\n";
    out += "base_collab_prob = " + real(cfg.base_collab_prob) + "\n";
    out += "cohort_boost = " + real(cfg.cohort_boost) + "\n";
    out += "pubs_per_author_year = " + real(cfg.pubs_per_author_year) + "\n";
    std::string fields;
    for (const auto& f : cfg.fields) {
        fields += (fields.empty() ? "" : ",") + f;
    }
    out += "fields = " + fields + "\n";
    std::string ln;
    for (const auto& f : cfg.fields) {
        const auto& p = cfg.citation_lognormal.at(f);
        ln += (ln.empty() ? "" : ",") + f + ":" + real(p.mu) + ":" + real(p.sigma);
    }
    out += "citation_lognormal = " + ln + "\n";
    out += "intl_prob = " + real(cfg.intl_prob) + "\n";
    out += "corp_prob = " + real(cfg.corp_prob) + "\n";
    out += "seed = " + std::to_string(cfg.seed) + "\n";
    return out;
}

inline SynthConfig parse_synth_config(const std::string& text) {
    SynthConfig cfg;
    cfg.fields.clear();
    cfg.citation_lognormal.clear();
    bool saw_fields = false, saw_lognormal = false;
    int lineno = 0;
    for (const auto& raw : split(text, '\n')) {
        ++lineno;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') {
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error("synth config line " + std::to_string(lineno) +
                        ": expected 'key = value', got '" + line + "'");
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "n_authors") {
                cfg.n_authors = std::stoi(value);
            } else if (key == "n_cohort") {
                cfg.n_cohort = std::stoi(value);
            } else if (key == "years") {
                cfg.years = YearRange::parse(value);
            } else if (key == "program_start_year") {
                cfg.program_start_year = std::stoi(value);
            } else if (key == "base_collab_prob") {
                cfg.base_collab_prob = std::stod(value);
            } else if (key == "cohort_boost") {
                cfg.cohort_boost = std::stod(value);
            } else if (key == "pubs_per_author_year") {
                cfg.pubs_per_author_year = std::stod(value);
            } else if (key == "fields") {
                saw_fields = true;
                for (const auto& f : split(value, ',')) {
                    if (!trim(f).empty()) {
                        cfg.fields.push_back(trim(f));
                    }
                }
            } else if (key == "citation_lognormal") {
                saw_lognormal = true;
                for (const auto& entry : split(value, ',')) {
                    auto parts = split(trim(entry), ':');
                    if (parts.size() != 3) {
                        throw Error("expected field:mu:sigma, got '" + trim(entry) + "'");
                    }
                    cfg.citation_lognormal[trim(parts[0])] = {std::stod(parts[1]),
                                                              std::stod(parts[2])};
                }
            } else if (key == "intl_prob") {
                cfg.intl_prob = std::stod(value);
            } else if (key == "corp_prob") {
                cfg.corp_prob = std::stod(value);
            } else if (key == "seed") {
                cfg.seed = std::stoull(value);
            } else {
                throw Error("unknown key '" + key + "'");
            }
        } catch (const Error&) {
            throw;
        } catch (const std::exception&) {
            throw Error("synth config line " + std::to_string(lineno) + ": bad value '" +
                        value + "' for key '" + key + "'");
        }
    }
    SynthConfig defaults;
    if (!saw_fields) {
        cfg.fields = defaults.fields;
    }
    if (!saw_lognormal) {
        cfg.citation_lognormal = defaults.citation_lognormal;
    }
    validate_synth_config(cfg);
    return cfg;
}

// ---------------------------------------------------------------------------
// Samplers

namespace detail {

inline double next_unit(std::mt19937_64& rng) { // [0, 1)
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Box-Muller, always consuming exactly two uniforms.
inline double normal_sample(std::mt19937_64& rng) {
    double u1 = next_unit(rng);
    double u2 = next_unit(rng);
    if (u1 < 1e-300) {
        u1 = 1e-300;
    }
    constexpr double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

inline long long poisson_sample(std::mt19937_64& rng, double mean) {
    if (mean <= 0) {
        return 0;
    }
    if (mean > 50) { // normal approximation keeps the uniform budget bounded
        double draw = mean + std::sqrt(mean) * normal_sample(rng);
        return std::max(0ll, static_cast<long long>(std::llround(draw)));
    }
    const double limit = std::exp(-mean);
    long long k = 0;
    double product = 1.0;
    do {
        ++k;
        product *= next_unit(rng);
    } while (product > limit);
    return k - 1;
}

inline std::size_t pick_index(std::mt19937_64& rng, std::size_t n) {
    auto idx = static_cast<std::size_t>(next_unit(rng) * static_cast<double>(n));
    return idx >= n ? n - 1 : idx;
}

} // namespace detail

inline AuthorId synth_author_id(int i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "SA%05d", i);
    return buf;
}

// ---------------------------------------------------------------------------
// Analytic expectations. Densities equal per-pair edge probabilities because
// every pair in a class has the same marginal probability of ever co-authoring.

struct ExpectedStats {
    double publications = 0;
    double cohort_pair_edge_prob = 0;     // both endpoints in the cohort
    double mixed_pair_edge_prob = 0;      // one endpoint in the cohort
    double background_pair_edge_prob = 0; // neither endpoint
    double cohort_density = 0;
    double background_density = 0;
};

namespace detail {

// Joining probability for a paper led by (or joined with) the other side of
// the pair: boosted only when both are cohort members and the year has
// reached the program start.
inline double link_prob(const SynthConfig& cfg, bool a_cohort, bool b_cohort, int year) {
    double p = cfg.base_collab_prob;
    if (a_cohort && b_cohort && year >= cfg.program_start_year) {
        p *= cfg.cohort_boost;
    }
    return p;
}

// P(pair of classes (ci, cj) shares at least one publication by the final
// year), integrating exactly over the uniform career-start offsets of the
// pair and of every third party.
inline double pair_edge_prob(const SynthConfig& cfg, bool ci, bool cj) {
    const int n_years = cfg.years.to - cfg.years.from + 1;
    const int w = std::min(kSynthMaxStagger, n_years);
    const double rate = cfg.pubs_per_author_year;

    // Third-party counts by class, excluding the pair itself.
    const int cohort_others = cfg.n_cohort - (ci ? 1 : 0) - (cj ? 1 : 0);
    const int background_others =
        (cfg.n_authors - cfg.n_cohort) - (ci ? 0 : 1) - (cj ? 0 : 1);

    double no_edge = 0;
    for (int oi = 0; oi < w; ++oi) {
        for (int oj = 0; oj < w; ++oj) {
            const int pair_start = std::max(oi, oj);
            double direct = 0;
            for (int y = pair_start; y < n_years; ++y) {
                direct += 2.0 * rate * link_prob(cfg, ci, cj, cfg.years.from + y);
            }
            double survive = std::exp(-direct);
            for (bool ck : {true, false}) {
                int count = ck ? cohort_others : background_others;
                if (count <= 0) {
                    continue;
                }
                double mean_k = 0; // E over the third party's own start offset
                for (int ok = 0; ok < w; ++ok) {
                    double lambda = 0;
                    for (int y = std::max(pair_start, ok); y < n_years; ++y) {
                        int year = cfg.years.from + y;
                        lambda += rate * link_prob(cfg, ci, ck, year) *
                                  link_prob(cfg, cj, ck, year);
                    }
                    mean_k += std::exp(-lambda);
                }
                mean_k /= static_cast<double>(w);
                survive *= std::pow(mean_k, count);
            }
            no_edge += survive;
        }
    }
    no_edge /= static_cast<double>(w) * static_cast<double>(w);
    return 1.0 - no_edge;
}

} // namespace detail

inline ExpectedStats expected_stats(const SynthConfig& cfg) {
    validate_synth_config(cfg);
    ExpectedStats s;
    const int n_years = cfg.years.to - cfg.years.from + 1;
    const int w = std::min(kSynthMaxStagger, n_years);
    s.publications = static_cast<double>(cfg.n_authors) * cfg.pubs_per_author_year *
                     (static_cast<double>(n_years) - static_cast<double>(w - 1) / 2.0);
    if (cfg.n_cohort >= 2) {
        s.cohort_pair_edge_prob = detail::pair_edge_prob(cfg, true, true);
    }
    if (cfg.n_cohort >= 1 && cfg.n_authors - cfg.n_cohort >= 1) {
        s.mixed_pair_edge_prob = detail::pair_edge_prob(cfg, true, false);
    }
    if (cfg.n_authors - cfg.n_cohort >= 2) {
        s.background_pair_edge_prob = detail::pair_edge_prob(cfg, false, false);
    }
    s.cohort_density = s.cohort_pair_edge_prob;
    s.background_density = s.background_pair_edge_prob;
    return s;
}

// ---------------------------------------------------------------------------
// Generation

struct SynthOutput {
    Corpus corpus;
    CohortSpec cohort;
    nlohmann::ordered_json manifest;
};

// Draw order is fixed: career offsets first; then per year (ascending), per
// author (ascending), the paper count, and per paper the co-author sweep,
// field, citation normal, country and sector coins, and the five altmetric
// counters. Changing this order changes every seeded corpus.
inline SynthOutput generate(const SynthConfig& cfg) {
    validate_synth_config(cfg);
    std::mt19937_64 rng(cfg.seed);
    const int n_years = cfg.years.to - cfg.years.from + 1;
    const int stagger = std::min(kSynthMaxStagger, n_years);

    std::vector<int> start_offset(static_cast<std::size_t>(cfg.n_authors));
    for (auto& o : start_offset) {
        o = static_cast<int>(detail::pick_index(rng, static_cast<std::size_t>(stagger)));
    }
    std::vector<AuthorId> ids;
    ids.reserve(static_cast<std::size_t>(cfg.n_authors));
    for (int i = 0; i < cfg.n_authors; ++i) {
        ids.push_back(synth_author_id(i));
    }

    std::vector<PublicationRecord> records;
    long long eid_counter = 0;
    for (int yidx = 0; yidx < n_years; ++yidx) {
        const int year = cfg.years.from + yidx;
        for (int i = 0; i < cfg.n_authors; ++i) {
            if (start_offset[static_cast<std::size_t>(i)] > yidx) {
                continue;
            }
            const bool i_cohort = i < cfg.n_cohort;
            long long papers = detail::poisson_sample(rng, cfg.pubs_per_author_year);
            for (long long paper = 0; paper < papers; ++paper) {
                PublicationRecord rec;
                char eid[32];
                std::snprintf(eid, sizeof(eid), "2-s2.0-SYN%08lld", eid_counter++);
                rec.eid = eid;
                rec.year = year;
                rec.authors.push_back(ids[static_cast<std::size_t>(i)]);
                for (int j = 0; j < cfg.n_authors; ++j) {
                    if (j == i || start_offset[static_cast<std::size_t>(j)] > yidx) {
                        continue;
                    }
                    double p = detail::link_prob(cfg, i_cohort, j < cfg.n_cohort, year);
                    if (detail::next_unit(rng) < p) {
                        rec.authors.push_back(ids[static_cast<std::size_t>(j)]);
                    }
                }
                rec.field = cfg.fields[detail::pick_index(rng, cfg.fields.size())];
                const auto& ln = cfg.citation_lognormal.at(rec.field);
                double z = detail::normal_sample(rng);
                double cites = std::floor(std::exp(ln.mu + ln.sigma * z));
                rec.citations =
                    cites < 0 ? 0
                              : static_cast<long long>(std::min(cites, 9.0e15));
                rec.doctype = Doctype::article;
                rec.countries.insert("CA");
                if (detail::next_unit(rng) < cfg.intl_prob) {
                    rec.countries.insert("US");
                }
                rec.sectors.insert(Sector::academic);
                if (detail::next_unit(rng) < cfg.corp_prob) {
                    rec.sectors.insert(Sector::corporate);
                }
                rec.patent_citations = detail::poisson_sample(rng, kSynthPatentRate);
                rec.policy_citations = detail::poisson_sample(rng, kSynthPolicyRate);
                rec.blog_mentions = detail::poisson_sample(rng, kSynthBlogRate);
                rec.news_mentions = detail::poisson_sample(rng, kSynthNewsRate);
                rec.tweet_mentions = detail::poisson_sample(rng, kSynthTweetRate);
                records.push_back(std::move(rec));
            }
        }
    }

    SynthOutput out{Corpus(std::move(records)), CohortSpec{}, nlohmann::ordered_json()};
    out.cohort.name = kSynthCohortName;
    out.cohort.program_start_year = cfg.program_start_year;
    for (int i = 0; i < cfg.n_cohort; ++i) {
        out.cohort.members.insert(ids[static_cast<std::size_t>(i)]);
    }

    auto expected = expected_stats(cfg);
    nlohmann::ordered_json manifest;
    manifest["generator"] = "convoke-synth";
    manifest["config"] = synth_config_to_text(cfg);
    manifest["expected"]["publications"] = expected.publications;
    manifest["expected"]["cohort_pair_edge_prob"] = expected.cohort_pair_edge_prob;
    manifest["expected"]["mixed_pair_edge_prob"] = expected.mixed_pair_edge_prob;
    manifest["expected"]["background_pair_edge_prob"] = expected.background_pair_edge_prob;
    manifest["altmetric_rates"]["patents"] = kSynthPatentRate;
    manifest["altmetric_rates"]["policy"] = kSynthPolicyRate;
    manifest["altmetric_rates"]["blogs"] = kSynthBlogRate;
    manifest["altmetric_rates"]["news"] = kSynthNewsRate;
    manifest["altmetric_rates"]["tweets"] = kSynthTweetRate;
    nlohmann::ordered_json starts;
    for (int i = 0; i < cfg.n_authors; ++i) {
        starts[ids[static_cast<std::size_t>(i)]] =
            cfg.years.from + start_offset[static_cast<std::size_t>(i)];
    }
    manifest["career_start"] = std::move(starts);
    manifest["realized"]["publications"] = out.corpus.records().size();
    manifest["realized"]["authors"] = out.corpus.author_index().size();
    out.manifest = std::move(manifest);
    return out;
}

} // namespace convoke
