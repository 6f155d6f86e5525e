#pragma once
// Cumulative co-authorship networks among a member group at year cutoffs,
// simple-graph density, and circular-layout figure export (SVG and DOT).

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "convoke/corpus.hpp"
#include "convoke/io.hpp"

namespace convoke {

using EdgePair = std::pair<AuthorId, AuthorId>; // first < second

struct EdgeData {
    long long weight = 0; // |eids|
    std::set<Eid> eids;
    int first_year = 0; // earliest shared publication year
};

struct CoAuthorNetwork {
    std::vector<AuthorId> nodes; // every member, ascending; isolated nodes kept
    std::vector<AuthorId> missing_members; // members with no corpus records (warning)
    std::map<EdgePair, EdgeData> edges;
    int cutoff_year = 0;
};

inline CoAuthorNetwork build_network(const Corpus& corpus, const std::set<AuthorId>& members,
                                     int cutoff_year) {
    if (members.size() < 2) {
        throw Error("a co-authorship network needs at least 2 members, got " +
                    std::to_string(members.size()));
    }
    CoAuthorNetwork net;
    net.cutoff_year = cutoff_year;
    net.nodes.assign(members.begin(), members.end());
    for (const auto& m : members) {
        if (corpus.author_index().count(m) == 0) {
            net.missing_members.push_back(m);
        }
    }
    for (const auto& rec : corpus.records()) {
        if (rec.year > cutoff_year) {
            continue;
        }
        std::vector<AuthorId> on_record;
        for (const auto& a : rec.authors) {
            if (members.count(a)) {
                on_record.push_back(a);
            }
        }
        std::sort(on_record.begin(), on_record.end());
        for (std::size_t i = 0; i < on_record.size(); ++i) {
            for (std::size_t j = i + 1; j < on_record.size(); ++j) {
                auto& e = net.edges[{on_record[i], on_record[j]}];
                if (e.eids.empty() || rec.year < e.first_year) {
                    e.first_year = rec.year;
                }
                e.eids.insert(rec.eid);
                e.weight = static_cast<long long>(e.eids.size());
            }
        }
    }
    return net;
}

// Simple-graph density: realized node pairs over possible pairs; edge
// multiplicities are rendering weights only.
inline double density(const CoAuthorNetwork& net) {
    const double n = static_cast<double>(net.nodes.size());
    if (n < 2) {
        throw Error("density needs at least 2 nodes");
    }
    return static_cast<double>(net.edges.size()) / (n * (n - 1) / 2.0);
}

inline std::vector<std::pair<int, double>>
density_series(const Corpus& corpus, const std::set<AuthorId>& members,
               const std::vector<int>& years) {
    for (std::size_t i = 1; i < years.size(); ++i) {
        if (years[i] < years[i - 1]) {
            throw Error("cutoff years must be sorted ascending");
        }
    }
    std::vector<std::pair<int, double>> series;
    series.reserve(years.size());
    for (int y : years) {
        series.emplace_back(y, density(build_network(corpus, members, y)));
    }
    return series;
}

inline std::string density_series_to_tsv(const std::vector<std::pair<int, double>>& series) {
    std::string out = "year\tdensity\n";
    for (const auto& [year, d] : series) {
        out += std::to_string(year) + "\t" + format_fixed(d, 6) + "\n";
    }
    return out;
}

struct FigureStyle {
    std::string palette = "cohort";
};

struct LayoutPoint {
    AuthorId author;
    double x = 0; // unit circle
    double y = 0;
};

struct LayoutChord {
    AuthorId a;
    AuthorId b;
    long long weight = 0;
    double opacity = 0; // 0.2 + 0.8 * log1p(w)/log1p(max_w)
};

struct LayoutFigure {
    std::vector<LayoutPoint> points; // node order = ascending AuthorId
    std::vector<LayoutChord> chords;
    std::string color;
    std::string label;
    int cutoff_year = 0;
};

inline std::string palette_color(const std::string& palette) {
    if (palette == "cohort") {
        return "#b2182b";
    }
    if (palette == "control") {
        return "#2166ac";
    }
    if (palette == "neutral") {
        return "#4d4d4d";
    }
    throw Error("unsupported style palette '" + palette +
                "' (expected cohort, control or neutral)");
}

// Node k of n sits at angle 2*pi*k/n measured clockwise from 12 o'clock;
// positions depend only on the member list, never on the edge set, so figures
// at different cutoffs are directly comparable.
inline LayoutFigure render_circular(const CoAuthorNetwork& net, const FigureStyle& style = {}) {
    LayoutFigure fig;
    fig.color = palette_color(style.palette);
    fig.cutoff_year = net.cutoff_year;
    const double n = static_cast<double>(net.nodes.size());
    const double two_pi = 8.0 * std::atan(1.0);
    for (std::size_t k = 0; k < net.nodes.size(); ++k) {
        double angle = two_pi * static_cast<double>(k) / n;
        fig.points.push_back({net.nodes[k], std::sin(angle), std::cos(angle)});
    }
    long long max_w = 0;
    for (const auto& [pair, e] : net.edges) {
        max_w = std::max(max_w, e.weight);
    }
    for (const auto& [pair, e] : net.edges) {
        LayoutChord c;
        c.a = pair.first;
        c.b = pair.second;
        c.weight = e.weight;
        c.opacity = 0.2 + 0.8 * std::log1p(static_cast<double>(e.weight)) /
                              std::log1p(static_cast<double>(max_w));
        fig.chords.push_back(c);
    }
    fig.label = style.palette + " · cutoff " + std::to_string(net.cutoff_year) + " · " +
                std::to_string(net.nodes.size()) + " nodes · " +
                std::to_string(net.edges.size()) + " edges";
    return fig;
}

namespace detail {

inline double svg_x(double x) {
    return 300.0 + 260.0 * x;
}
inline double svg_y(double y) {
    return 300.0 - 260.0 * y;
}

} // namespace detail

inline std::string to_svg(const LayoutFigure& fig) {
    std::map<AuthorId, const LayoutPoint*> at;
    for (const auto& p : fig.points) {
        at[p.author] = &p;
    }
    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" height=\"600\" "
           "viewBox=\"0 0 600 600\">\n";
    svg += "<rect width=\"600\" height=\"600\" fill=\"#ffffff\"/>\n";
    svg += "<g stroke=\"" + fig.color + "\" stroke-width=\"1.2\">\n";
    for (const auto& c : fig.chords) {
        const auto* pa = at.at(c.a);
        const auto* pb = at.at(c.b);
        svg += "<line x1=\"" + format_fixed(detail::svg_x(pa->x), 3) + "\" y1=\"" +
               format_fixed(detail::svg_y(pa->y), 3) + "\" x2=\"" +
               format_fixed(detail::svg_x(pb->x), 3) + "\" y2=\"" +
               format_fixed(detail::svg_y(pb->y), 3) + "\" stroke-opacity=\"" +
               format_fixed(c.opacity, 4) + "\"/>\n";
    }
    svg += "</g>\n<g fill=\"" + fig.color + "\">\n";
    for (const auto& p : fig.points) {
        svg += "<circle cx=\"" + format_fixed(detail::svg_x(p.x), 3) + "\" cy=\"" +
               format_fixed(detail::svg_y(p.y), 3) + "\" r=\"3\"/>\n";
    }
    svg += "</g>\n";
    svg += "<text x=\"300\" y=\"592\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"13\" fill=\"#333333\">" +
           fig.label + "</text>\n";
    svg += "</svg>\n";
    return svg;
}

inline std::string to_dot(const LayoutFigure& fig) {
    std::string dot = "graph coauthors {\n";
    dot += "  layout=circo;\n  node [shape=point, color=\"" + fig.color + "\"];\n";
    dot += "  label=\"" + fig.label + "\";\n";
    for (const auto& p : fig.points) {
        dot += "  \"" + p.author + "\";\n";
    }
    for (const auto& c : fig.chords) {
        dot += "  \"" + c.a + "\" -- \"" + c.b + "\" [weight=" + std::to_string(c.weight) +
               "];\n";
    }
    dot += "}\n";
    return dot;
}

// One line per shared publication on each edge: author_a author_b eid year.
inline std::string adjacency_to_text(const CoAuthorNetwork& net, const Corpus& corpus) {
    std::string out;
    for (const auto& [pair, e] : net.edges) {
        for (const auto& eid : e.eids) {
            const auto* rec = corpus.find(eid);
            if (rec == nullptr) {
                throw Error("edge publication '" + eid + "' is not in the corpus");
            }
            out += pair.first + " " + pair.second + " " + eid + " " + std::to_string(rec->year) +
                   "\n";
        }
    }
    return out;
}

} // namespace convoke
