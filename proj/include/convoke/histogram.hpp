#pragma once
// Shared-edge histograms with five-number summaries. Bin edges are computed
// over the union of all groups so overlaid distributions stay comparable.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "convoke/io.hpp"

namespace convoke {

struct SummaryStats {
    double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
    size_t n = 0;
};

// Quantile with linear interpolation between closest ranks (R type 7).
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) {
        return 0.0;
    }
    if (sorted.size() == 1) {
        return sorted[0];
    }
    double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    size_t lo = static_cast<size_t>(std::floor(h));
    size_t hi = std::min(lo + 1, sorted.size() - 1);
    double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

inline SummaryStats summarize(std::vector<double> values) {
    SummaryStats s;
    if (values.empty()) {
        return s;
    }
    std::sort(values.begin(), values.end());
    s.n = values.size();
    s.min = values.front();
    s.max = values.back();
    s.q1 = quantile_sorted(values, 0.25);
    s.median = quantile_sorted(values, 0.50);
    s.q3 = quantile_sorted(values, 0.75);
    return s;
}

struct LabelledValues {
    std::string label;
    std::vector<double> values;
};

struct HistogramOptions {
    int bins = 40;
    bool freedman_diaconis = false;
};

struct HistogramTable {
    std::vector<double> edges;   // size bins+1; degenerate range gives {v, v}

    struct GroupRow {
        std::string label;
        std::vector<long long> counts;   // size bins
        SummaryStats stats;
    };
    std::vector<GroupRow> groups;

    size_t bin_count() const { return edges.size() < 2 ? (edges.empty() ? 0 : 1) : edges.size() - 1; }

    // bin index of the group's median value
    size_t median_bin(size_t group) const {
        return locate(groups.at(group).stats.median);
    }

    size_t locate(double x) const {
        if (edges.size() < 2) {
            return 0;
        }
        double lo = edges.front(), hi = edges.back();
        if (hi <= lo) {
            return 0;
        }
        double w = (hi - lo) / static_cast<double>(edges.size() - 1);
        auto idx = static_cast<long long>(std::floor((x - lo) / w));
        idx = std::clamp<long long>(idx, 0, static_cast<long long>(edges.size()) - 2);
        return static_cast<size_t>(idx);
    }
};

inline HistogramTable build_histogram(const std::vector<LabelledValues>& groups,
                                      HistogramOptions opts = {}) {
    if (groups.empty()) {
        throw Error("histogram needs at least one group");
    }
    std::vector<double> all;
    for (const auto& g : groups) {
        if (g.values.empty()) {
            throw Error("histogram group '" + g.label + "' is empty");
        }
        all.insert(all.end(), g.values.begin(), g.values.end());
    }
    double lo = *std::min_element(all.begin(), all.end());
    double hi = *std::max_element(all.begin(), all.end());

    int bins = std::max(1, opts.bins);
    if (opts.freedman_diaconis && hi > lo) {
        std::sort(all.begin(), all.end());
        double iqr = quantile_sorted(all, 0.75) - quantile_sorted(all, 0.25);
        if (iqr > 0) {
            double width = 2.0 * iqr / std::cbrt(static_cast<double>(all.size()));
            bins = std::clamp(static_cast<int>(std::ceil((hi - lo) / width)), 1, 1000);
        } else {
            bins = 1;
        }
    }

    HistogramTable table;
    if (hi <= lo) {
        table.edges = {lo, lo};   // single degenerate bin
    } else {
        table.edges.resize(static_cast<size_t>(bins) + 1);
        for (int k = 0; k <= bins; ++k) {
            table.edges[static_cast<size_t>(k)] = lo + (hi - lo) * k / static_cast<double>(bins);
        }
    }

    for (const auto& g : groups) {
        HistogramTable::GroupRow row;
        row.label = g.label;
        row.counts.assign(std::max<size_t>(table.bin_count(), 1), 0);
        for (double v : g.values) {
            ++row.counts[table.locate(v)];
        }
        row.stats = summarize(g.values);
        table.groups.push_back(std::move(row));
    }
    return table;
}

// Delimited export: columns group, bin_lo, bin_hi, count; summary stats
// appended as comment lines.
inline std::string histogram_to_tsv(const HistogramTable& table) {
    std::string out = "group\tbin_lo\tbin_hi\tcount\n";
    for (const auto& g : table.groups) {
        for (size_t b = 0; b < g.counts.size(); ++b) {
            double lo = table.edges.size() < 2 ? table.edges.front() : table.edges[b];
            double hi = table.edges.size() < 2 ? table.edges.front() : table.edges[b + 1];
            out += g.label + "\t" + format_fixed(lo, 6) + "\t" + format_fixed(hi, 6) + "\t" +
                   std::to_string(g.counts[b]) + "\n";
        }
    }
    for (const auto& g : table.groups) {
        out += "# group=" + g.label + " n=" + std::to_string(g.stats.n) +
               " min=" + format_fixed(g.stats.min, 6) + " q1=" + format_fixed(g.stats.q1, 6) +
               " median=" + format_fixed(g.stats.median, 6) + " q3=" + format_fixed(g.stats.q3, 6) +
               " max=" + format_fixed(g.stats.max, 6) + "\n";
    }
    return out;
}

} // namespace convoke
