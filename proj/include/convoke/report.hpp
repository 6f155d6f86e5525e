#pragma once
// Panel reports: a round-trippable machine format (one metric per row) and
// the human two-column comparison table with its three section headers.

#include <array>
#include <cstdlib>
#include <string>
#include <vector>

#include "convoke/io.hpp"
#include "convoke/metrics.hpp"

namespace convoke {

namespace detail {

enum class PanelValueKind { count, ratio1, ratio2 }; // decimals used by the human table

struct PanelRowSpec {
    const char* key;          // machine name
    const char* display_name; // Table 1 wording
    PanelValueKind kind;
    long long MetricsPanel::* count_field;
    double MetricsPanel::* ratio_field;
};

inline const std::array<PanelRowSpec, 14>& panel_rows() {
    static const std::array<PanelRowSpec, 14> rows = {{
        {"citation_count", "Citation Count", PanelValueKind::count, &MetricsPanel::citation_count,
         nullptr},
        {"citations_per_publication", "Citations per Publication", PanelValueKind::ratio1,
         nullptr, &MetricsPanel::citations_per_publication},
        {"cited_publications_pct", "Cited Publications (%)", PanelValueKind::ratio1, nullptr,
         &MetricsPanel::cited_publications_pct},
        {"fwci", "Field-Weighted Citation Impact", PanelValueKind::ratio2, nullptr,
         &MetricsPanel::fwci},
        {"top1pct_count", "Output in Top 1% Citation Percentiles", PanelValueKind::count,
         &MetricsPanel::top1pct_count, nullptr},
        {"intl_collab_pct", "International Collaboration (%)", PanelValueKind::ratio1, nullptr,
         &MetricsPanel::intl_collab_pct},
        {"intl_collab_impact", "International Collaboration Impact", PanelValueKind::ratio1,
         nullptr, &MetricsPanel::intl_collab_impact},
        {"acad_corp_pct", "Academic-Corporate Collaboration (%)", PanelValueKind::ratio1,
         nullptr, &MetricsPanel::acad_corp_pct},
        {"acad_corp_impact", "Academic-Corporate Collaboration Impact", PanelValueKind::ratio1,
         nullptr, &MetricsPanel::acad_corp_impact},
        {"citing_patents", "Citing-Patents Count", PanelValueKind::count,
         &MetricsPanel::citing_patents, nullptr},
        {"policy_citations", "Policy Citations", PanelValueKind::count,
         &MetricsPanel::policy_citations, nullptr},
        {"blog_mentions", "Blog mentions", PanelValueKind::count, &MetricsPanel::blog_mentions,
         nullptr},
        {"news_mentions", "News mentions", PanelValueKind::count, &MetricsPanel::news_mentions,
         nullptr},
        {"tweets", "Tweets", PanelValueKind::count, &MetricsPanel::tweets, nullptr},
    }};
    return rows;
}

// Section header -> first row index in panel_rows().
inline const std::array<std::pair<const char*, std::size_t>, 3>& panel_sections() {
    static const std::array<std::pair<const char*, std::size_t>, 3> sections = {{
        {"Quality of Output", 0},
        {"International Collaboration", 5},
        {"Reach beyond Academia", 7},
    }};
    return sections;
}

inline std::string human_value(const PanelRowSpec& row, const MetricsPanel& p) {
    switch (row.kind) {
    case PanelValueKind::count:
        return format_count(p.*(row.count_field));
    case PanelValueKind::ratio1:
        return format_fixed(p.*(row.ratio_field), 1);
    case PanelValueKind::ratio2:
        return format_fixed(p.*(row.ratio_field), 2);
    }
    return "";
}

inline std::string machine_value(const PanelRowSpec& row, const MetricsPanel& p) {
    if (row.count_field != nullptr) {
        return std::to_string(p.*(row.count_field));
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", p.*(row.ratio_field));
    return buf;
}

} // namespace detail

// --------------------------------------------------------------------------
// Machine format

inline std::string panel_to_tsv(const MetricsPanel& p) {
    std::string out = "metric\tvalue\n";
    out += "publication_count\t" + std::to_string(p.publication_count) + "\n";
    for (const auto& row : detail::panel_rows()) {
        out += std::string(row.key) + "\t" + detail::machine_value(row, p) + "\n";
    }
    out += "coverage_unknown_country\t" + std::to_string(p.coverage.unknown_country_records) +
           "\n";
    out += "coverage_unknown_sector\t" + std::to_string(p.coverage.unknown_sector_records) +
           "\n";
    out += "coverage_fallback_baseline\t" +
           std::to_string(p.coverage.fallback_baseline_records) + "\n";
    return out;
}

inline MetricsPanel panel_from_tsv(const std::string& text) {
    MetricsPanel p;
    std::vector<std::string> required;
    required.push_back("publication_count");
    for (const auto& row : detail::panel_rows()) {
        required.push_back(row.key);
    }
    std::vector<std::string> seen;
    for (const auto& raw_line : split(text, '\n')) {
        std::string line = trim(raw_line);
        if (line.empty() || line[0] == '#' || line == "metric\tvalue") {
            continue;
        }
        auto cols = split(line, '\t');
        if (cols.size() != 2) {
            throw Error("malformed panel row '" + line + "'");
        }
        const std::string& key = cols[0];
        const std::string& value = cols[1];
        seen.push_back(key);
        if (key == "publication_count") {
            p.publication_count = std::stoll(value);
        } else if (key == "coverage_unknown_country") {
            p.coverage.unknown_country_records = std::stoll(value);
        } else if (key == "coverage_unknown_sector") {
            p.coverage.unknown_sector_records = std::stoll(value);
        } else if (key == "coverage_fallback_baseline") {
            p.coverage.fallback_baseline_records = std::stoll(value);
        } else {
            bool known = false;
            for (const auto& row : detail::panel_rows()) {
                if (key == row.key) {
                    if (row.count_field != nullptr) {
                        p.*(row.count_field) = std::stoll(value);
                    } else {
                        p.*(row.ratio_field) = std::strtod(value.c_str(), nullptr);
                    }
                    known = true;
                    break;
                }
            }
            if (!known) {
                throw Error("unknown panel metric '" + key + "'");
            }
        }
    }
    for (const auto& key : required) {
        if (std::find(seen.begin(), seen.end(), key) == seen.end()) {
            throw Error("panel file is missing metric '" + key + "'");
        }
    }
    return p;
}

// --------------------------------------------------------------------------
// Comparison reports

inline std::string comparison_to_tsv(const MetricsPanel& a, const MetricsPanel& b,
                                     const std::string& label_a, const std::string& label_b) {
    std::string out = "metric\t" + label_a + "\t" + label_b + "\n";
    out += "publication_count\t" + std::to_string(a.publication_count) + "\t" +
           std::to_string(b.publication_count) + "\n";
    for (const auto& row : detail::panel_rows()) {
        out += std::string(row.key) + "\t" + detail::machine_value(row, a) + "\t" +
               detail::machine_value(row, b) + "\n";
    }
    return out;
}

// Two-column table mirroring the published panel layout: three section
// headers, indented metric names, right-aligned value columns.
inline std::string render_comparison(const MetricsPanel& a, const MetricsPanel& b,
                                     const std::string& label_a, const std::string& label_b) {
    const auto& rows = detail::panel_rows();
    std::vector<std::string> values_a, values_b;
    for (const auto& row : rows) {
        values_a.push_back(detail::human_value(row, a));
        values_b.push_back(detail::human_value(row, b));
    }
    std::size_t name_width = 0;
    for (const auto& row : rows) {
        name_width = std::max(name_width, 2 + std::string(row.display_name).size());
    }
    auto column_width = [](const std::string& label, const std::vector<std::string>& values) {
        std::size_t w = label.size();
        for (const auto& v : values) {
            w = std::max(w, v.size());
        }
        return w + 3;
    };
    const std::size_t width_a = column_width(label_a, values_a);
    const std::size_t width_b = column_width(label_b, values_b);

    auto pad_left = [](const std::string& s, std::size_t w) {
        return std::string(w - s.size(), ' ') + s;
    };
    auto pad_right = [](const std::string& s, std::size_t w) {
        return s + std::string(w - s.size(), ' ');
    };

    std::string out;
    out += pad_right("", name_width) + pad_left(label_a, width_a) + pad_left(label_b, width_b) +
           "\n";
    const auto& sections = detail::panel_sections();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (const auto& [title, start] : sections) {
            if (start == i) {
                out += std::string(title) + "\n";
            }
        }
        out += pad_right("  " + std::string(rows[i].display_name), name_width) +
               pad_left(values_a[i], width_a) + pad_left(values_b[i], width_b) + "\n";
    }
    return out;
}

inline std::string overlap_to_text(const OverlapReport& report, const std::string& label_a,
                                   const std::string& label_b) {
    long long uni = report.both + report.only_a + report.only_b;
    std::string out;
    out += "overlap " + label_a + " vs " + label_b + "\n";
    out += "  shared publications: " + format_count(report.both) + " of " + format_count(uni) +
           " (" + format_fixed(report.jaccard_pct, 1) + "%)\n";
    out += "  only " + label_a + ": " + format_count(report.only_a) + "\n";
    out += "  only " + label_b + ": " + format_count(report.only_b) + "\n";
    return out;
}

} // namespace convoke
