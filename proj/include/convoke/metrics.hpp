#pragma once
// The Table 1 indicator panel: FWCI baselines with a sparse-cell fallback
// chain, top-1% thresholds, collaboration percentages and altmetric sums,
// computed over deduplicated publication sets at group or author level.

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "convoke/corpus.hpp"
#include "convoke/histogram.hpp"
#include "convoke/io.hpp"

namespace convoke {

inline constexpr long long kMinCellSize = 5; // below this a baseline cell falls back

struct BaselineCell {
    double mean_citations = 0;
    long long p99_threshold = 0; // nearest-rank 99th percentile of citations
    long long n = 0;
};

namespace detail {

// Nearest-rank: the value at ascending position ceil(0.99*n), zero-based and
// clamped to the last element. A 100-element 0..99 cell thus thresholds at 99
// and a singleton cell at its only value.
inline long long p99_nearest_rank(std::vector<long long> values) {
    std::sort(values.begin(), values.end());
    const long long n = static_cast<long long>(values.size());
    long long idx = std::min(n - 1, (99 * n + 99) / 100);
    return values[static_cast<std::size_t>(idx)];
}

inline BaselineCell make_cell(const std::vector<long long>& citations) {
    BaselineCell cell;
    cell.n = static_cast<long long>(citations.size());
    long long total = 0;
    for (long long c : citations) {
        total += c;
    }
    cell.mean_citations = static_cast<double>(total) / static_cast<double>(cell.n);
    cell.p99_threshold = p99_nearest_rank(citations);
    return cell;
}

} // namespace detail

class BaselineTable {
  public:
    using FullKey = std::tuple<std::string, int, Doctype>;
    using YearDoctypeKey = std::pair<int, Doctype>;

    BaselineTable() = default;
    BaselineTable(std::map<FullKey, BaselineCell> full,
                  std::map<YearDoctypeKey, BaselineCell> by_year_doctype,
                  std::map<int, BaselineCell> by_year, YearRange window)
        : full_(std::move(full)), by_year_doctype_(std::move(by_year_doctype)),
          by_year_(std::move(by_year)), window_(window) {}

    struct Resolved {
        const BaselineCell* cell = nullptr;
        int fallback_level = 0; // 0 = (field,year,doctype), 1 = (year,doctype), 2 = (year)
    };

    Resolved resolve(const PublicationRecord& rec) const {
        auto full = full_.find({rec.field, rec.year, rec.doctype});
        if (full != full_.end() && full->second.n >= kMinCellSize) {
            return {&full->second, 0};
        }
        auto yd = by_year_doctype_.find({rec.year, rec.doctype});
        if (yd != by_year_doctype_.end() && yd->second.n >= kMinCellSize) {
            return {&yd->second, 1};
        }
        auto y = by_year_.find(rec.year);
        if (y != by_year_.end()) {
            return {&y->second, 2};
        }
        throw Error("no baseline cell covers year " + std::to_string(rec.year) +
                    " (baseline window " + std::to_string(window_.from) + ":" +
                    std::to_string(window_.to) + ")");
    }

    const std::map<FullKey, BaselineCell>& full_cells() const { return full_; }
    const YearRange& window() const { return window_; }
    bool empty() const { return by_year_.empty(); }

  private:
    std::map<FullKey, BaselineCell> full_;
    std::map<YearDoctypeKey, BaselineCell> by_year_doctype_;
    std::map<int, BaselineCell> by_year_;
    YearRange window_;
};

inline BaselineTable build_baselines(const Corpus& corpus, YearRange window = {}) {
    std::map<BaselineTable::FullKey, std::vector<long long>> full;
    std::map<BaselineTable::YearDoctypeKey, std::vector<long long>> yd;
    std::map<int, std::vector<long long>> y;
    for (const auto& rec : corpus.records()) {
        if (!window.contains(rec.year)) {
            continue;
        }
        full[{rec.field, rec.year, rec.doctype}].push_back(rec.citations);
        yd[{rec.year, rec.doctype}].push_back(rec.citations);
        y[rec.year].push_back(rec.citations);
    }
    if (y.empty()) {
        throw Error("no publications in the baseline window " + std::to_string(window.from) +
                    ":" + std::to_string(window.to));
    }
    std::map<BaselineTable::FullKey, BaselineCell> full_cells;
    std::map<BaselineTable::YearDoctypeKey, BaselineCell> yd_cells;
    std::map<int, BaselineCell> y_cells;
    for (const auto& [key, cites] : full) {
        full_cells[key] = detail::make_cell(cites);
    }
    for (const auto& [key, cites] : yd) {
        yd_cells[key] = detail::make_cell(cites);
    }
    for (const auto& [key, cites] : y) {
        y_cells[key] = detail::make_cell(cites);
    }
    return BaselineTable(std::move(full_cells), std::move(yd_cells), std::move(y_cells), window);
}

inline double fwci(const PublicationRecord& rec, const BaselineTable& baselines) {
    auto resolved = baselines.resolve(rec);
    if (resolved.cell->mean_citations == 0) {
        if (rec.citations == 0) {
            return 1.0;
        }
        throw Error("publication '" + rec.eid +
                    "' has citations but its baseline cell mean is zero");
    }
    return static_cast<double>(rec.citations) / resolved.cell->mean_citations;
}

inline bool in_top1pct(const PublicationRecord& rec, const BaselineTable& baselines) {
    return rec.citations >= baselines.resolve(rec).cell->p99_threshold;
}

// ---------------------------------------------------------------------------
// Publication sets

enum class SetLevel { group, author };

struct PublicationSet {
    std::set<Eid> eids;
    std::string owner;
    SetLevel level = SetLevel::group;
    std::vector<std::string> warnings;
};

inline PublicationSet group_publication_set(const Corpus& corpus,
                                            const std::set<AuthorId>& members,
                                            YearRange window = {},
                                            const std::string& owner = "group") {
    if (members.empty()) {
        throw Error("publication set requires at least one member");
    }
    PublicationSet set;
    set.owner = owner;
    set.level = SetLevel::group;
    for (const auto& m : members) {
        const auto* recs = corpus.records_of(m);
        if (!recs) {
            continue; // a member with no records contributes nothing
        }
        for (std::uint32_t idx : *recs) {
            const auto& rec = corpus.records()[idx];
            if (window.contains(rec.year)) {
                set.eids.insert(rec.eid);
            }
        }
    }
    if (set.eids.empty()) {
        set.warnings.push_back("publication set for '" + owner + "' is empty in window " +
                               std::to_string(window.from) + ":" + std::to_string(window.to));
    }
    return set;
}

struct OverlapReport {
    long long both = 0;
    long long only_a = 0;
    long long only_b = 0;
    double jaccard_pct = 0; // 100 * |A ∩ B| / |A ∪ B|
};

inline OverlapReport overlap(const PublicationSet& a, const PublicationSet& b) {
    OverlapReport report;
    for (const auto& eid : a.eids) {
        if (b.eids.count(eid)) {
            report.both++;
        } else {
            report.only_a++;
        }
    }
    report.only_b = static_cast<long long>(b.eids.size()) - report.both;
    long long uni = report.both + report.only_a + report.only_b;
    report.jaccard_pct = uni == 0 ? 0.0 : 100.0 * static_cast<double>(report.both) /
                                              static_cast<double>(uni);
    return report;
}

// ---------------------------------------------------------------------------
// The panel

struct CoverageNotes {
    long long unknown_country_records = 0;  // excluded from intl% denominator
    long long unknown_sector_records = 0;   // excluded from acad-corp% denominator
    long long fallback_baseline_records = 0;
};

struct MetricsPanel {
    long long publication_count = 0; // |set|; context, not one of the 14 indicators
    long long citation_count = 0;
    double citations_per_publication = 0;
    double cited_publications_pct = 0;
    double fwci = 0; // mean per-publication FWCI
    long long top1pct_count = 0;
    double intl_collab_pct = 0;
    double intl_collab_impact = 0;
    double acad_corp_pct = 0;
    double acad_corp_impact = 0;
    long long citing_patents = 0;
    long long policy_citations = 0;
    long long blog_mentions = 0;
    long long news_mentions = 0;
    long long tweets = 0;
    CoverageNotes coverage;
    std::vector<std::string> warnings;
};

inline MetricsPanel panel(const PublicationSet& set, const Corpus& corpus,
                          const BaselineTable& baselines) {
    MetricsPanel p;
    p.warnings = set.warnings;
    p.publication_count = static_cast<long long>(set.eids.size());
    if (set.eids.empty()) {
        p.warnings.push_back("empty publication set for '" + set.owner + "': all-zero panel");
        return p;
    }
    long long cited = 0, intl_n = 0, intl_cites = 0, known_country = 0;
    long long acad_corp_n = 0, acad_corp_cites = 0, known_sector = 0;
    double fwci_sum = 0;
    for (const auto& eid : set.eids) {
        const auto* rec = corpus.find(eid);
        if (rec == nullptr) {
            throw Error("publication '" + eid + "' is in the set but not in the corpus");
        }
        p.citation_count += rec->citations;
        if (rec->citations > 0) {
            ++cited;
        }
        auto resolved = baselines.resolve(*rec);
        if (resolved.fallback_level > 0) {
            ++p.coverage.fallback_baseline_records;
        }
        fwci_sum += fwci(*rec, baselines);
        if (in_top1pct(*rec, baselines)) {
            ++p.top1pct_count;
        }
        if (rec->countries.empty()) {
            ++p.coverage.unknown_country_records;
        } else {
            ++known_country;
            if (rec->international()) {
                ++intl_n;
                intl_cites += rec->citations;
            }
        }
        if (rec->sectors.empty()) {
            ++p.coverage.unknown_sector_records;
        } else {
            ++known_sector;
            if (rec->academic_corporate()) {
                ++acad_corp_n;
                acad_corp_cites += rec->citations;
            }
        }
        p.citing_patents += rec->patent_citations;
        p.policy_citations += rec->policy_citations;
        p.blog_mentions += rec->blog_mentions;
        p.news_mentions += rec->news_mentions;
        p.tweets += rec->tweet_mentions;
    }
    const double n = static_cast<double>(set.eids.size());
    p.citations_per_publication = static_cast<double>(p.citation_count) / n;
    p.cited_publications_pct = 100.0 * static_cast<double>(cited) / n;
    p.fwci = fwci_sum / n;
    p.intl_collab_pct =
        known_country == 0
            ? 0.0
            : 100.0 * static_cast<double>(intl_n) / static_cast<double>(known_country);
    p.intl_collab_impact =
        intl_n == 0 ? 0.0 : static_cast<double>(intl_cites) / static_cast<double>(intl_n);
    p.acad_corp_pct =
        known_sector == 0
            ? 0.0
            : 100.0 * static_cast<double>(acad_corp_n) / static_cast<double>(known_sector);
    p.acad_corp_impact = acad_corp_n == 0 ? 0.0
                                          : static_cast<double>(acad_corp_cites) /
                                                static_cast<double>(acad_corp_n);
    if (known_country == 0) {
        p.warnings.push_back("no records with known countries: intl% denominator empty");
    }
    if (known_sector == 0) {
        p.warnings.push_back("no records with known sectors: acad-corp% denominator empty");
    }
    return p;
}

// ---------------------------------------------------------------------------
// Time series and author level

enum class PanelMetric { citation_count, citations_per_publication, fwci };

inline std::string to_string(PanelMetric m) {
    switch (m) {
    case PanelMetric::citation_count:
        return "citation_count";
    case PanelMetric::citations_per_publication:
        return "citations_per_publication";
    case PanelMetric::fwci:
        return "fwci";
    }
    return "";
}

inline PanelMetric parse_panel_metric(const std::string& s) {
    if (s == "citation_count") {
        return PanelMetric::citation_count;
    }
    if (s == "citations_per_publication" || s == "cpp") {
        return PanelMetric::citations_per_publication;
    }
    if (s == "fwci") {
        return PanelMetric::fwci;
    }
    throw Error("unknown panel metric '" + s +
                "' (expected citation_count, cpp or fwci)");
}

inline std::vector<std::pair<int, double>>
timeseries(const Corpus& corpus, const std::set<AuthorId>& members,
           const BaselineTable& baselines, PanelMetric metric, const std::vector<int>& years) {
    auto set = group_publication_set(corpus, members);
    std::map<int, std::vector<const PublicationRecord*>> by_year;
    for (const auto& eid : set.eids) {
        const auto* rec = corpus.find(eid);
        by_year[rec->year].push_back(rec);
    }
    std::vector<std::pair<int, double>> out;
    out.reserve(years.size());
    for (int y : years) {
        auto it = by_year.find(y);
        if (it == by_year.end()) {
            out.emplace_back(y, 0.0);
            continue;
        }
        double value = 0;
        const double n = static_cast<double>(it->second.size());
        switch (metric) {
        case PanelMetric::citation_count:
            for (const auto* rec : it->second) {
                value += static_cast<double>(rec->citations);
            }
            break;
        case PanelMetric::citations_per_publication:
            for (const auto* rec : it->second) {
                value += static_cast<double>(rec->citations);
            }
            value /= n;
            break;
        case PanelMetric::fwci:
            for (const auto* rec : it->second) {
                value += fwci(*rec, baselines);
            }
            value /= n;
            break;
        }
        out.emplace_back(y, value);
    }
    return out;
}

inline std::string timeseries_to_tsv(const std::vector<std::pair<int, double>>& series,
                                     PanelMetric metric) {
    std::string out = "year\t" + to_string(metric) + "\n";
    for (const auto& [year, value] : series) {
        out += std::to_string(year) + "\t" + format_fixed(value, 6) + "\n";
    }
    return out;
}

struct AuthorPanels {
    std::map<AuthorId, MetricsPanel> by_author;
};

// Shared publications count once per author here, by design: the group view
// dedups, the author view does not.
inline AuthorPanels author_level_panels(const Corpus& corpus, const std::set<AuthorId>& authors,
                                        const BaselineTable& baselines, YearRange window = {}) {
    AuthorPanels panels;
    for (const auto& a : authors) {
        if (corpus.author_index().count(a) == 0) {
            throw Error("author '" + a + "' has no publications in the corpus");
        }
        auto set = group_publication_set(corpus, {a}, window, a);
        set.level = SetLevel::author;
        panels.by_author.emplace(a, panel(set, corpus, baselines));
    }
    return panels;
}

inline double panel_metric_value(const MetricsPanel& p, PanelMetric m) {
    switch (m) {
    case PanelMetric::citation_count:
        return static_cast<double>(p.citation_count);
    case PanelMetric::citations_per_publication:
        return p.citations_per_publication;
    case PanelMetric::fwci:
        return p.fwci;
    }
    return 0;
}

inline HistogramTable
author_metric_distribution(const AuthorPanels& panels, PanelMetric metric,
                           const std::map<std::string, std::set<AuthorId>>& groups,
                           const HistogramOptions& opts = {}) {
    std::vector<LabelledValues> series;
    for (const auto& [label, members] : groups) {
        LabelledValues lv;
        lv.label = label;
        for (const auto& a : members) {
            auto it = panels.by_author.find(a);
            if (it == panels.by_author.end()) {
                throw Error("no author-level panel for '" + a + "'");
            }
            lv.values.push_back(panel_metric_value(it->second, metric));
        }
        series.push_back(std::move(lv));
    }
    return build_histogram(series, opts);
}

} // namespace convoke
