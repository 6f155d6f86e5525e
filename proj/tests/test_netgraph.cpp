#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>

#include "convoke/netgraph.hpp"

#include "support/oracles.hpp"
#include "support/random_corpus.hpp"

using namespace convoke;

namespace {

PublicationRecord rec(std::string eid, int year, std::vector<AuthorId> authors) {
    PublicationRecord r;
    r.eid = std::move(eid);
    r.year = year;
    r.authors = std::move(authors);
    r.field = "physics";
    return r;
}

} // namespace

TEST_CASE("cutoff is inclusive of the cutoff year", "[netgraph]") {
    Corpus corpus({rec("2-s2.0-1", 1990, {"a", "b"})});
    auto before = build_network(corpus, {"a", "b"}, 1989);
    CHECK(before.edges.empty());
    auto at = build_network(corpus, {"a", "b"}, 1990);
    REQUIRE(at.edges.size() == 1);
    const auto& e = at.edges.at({"a", "b"});
    CHECK(e.weight == 1);
    CHECK(e.first_year == 1990);
    CHECK(e.eids == std::set<Eid>{"2-s2.0-1"});
}

TEST_CASE("one shared record makes a clique", "[netgraph]") {
    Corpus corpus({rec("2-s2.0-9", 2005, {"c", "a", "b"})});
    auto net = build_network(corpus, {"a", "b", "c"}, 2010);
    REQUIRE(net.edges.size() == 3);
    for (const auto& [pair, e] : net.edges) {
        CHECK(e.weight == 1);
        CHECK(e.eids == std::set<Eid>{"2-s2.0-9"});
    }
    CHECK(density(net) == 1.0);
}

TEST_CASE("network equals the brute-force double loop", "[netgraph]") {
    std::mt19937_64 rng(616);
    for (int trial = 0; trial < 30; ++trial) {
        testsupport::RandomCorpusParams params;
        params.n_records = 30;
        params.n_authors = 12;
        Corpus corpus = testsupport::random_corpus(rng, params);
        std::set<AuthorId> members;
        for (int i = 0; i < 8; ++i) {
            members.insert(testsupport::author_name(i));
        }
        int cutoff = corpus.year_range() ? corpus.year_range()->from +
                                               static_cast<int>(rng() % 12)
                                         : 2000;
        auto net = build_network(corpus, members, cutoff);
        auto expected = oracles::brute_network(corpus, members, cutoff);
        REQUIRE(net.edges.size() == expected.size());
        for (const auto& [pair, want] : expected) {
            REQUIRE(net.edges.count(pair) == 1);
            const auto& have = net.edges.at(pair);
            CHECK(have.weight == want.weight);
            CHECK(have.eids == want.eids);
            CHECK(have.first_year == want.first_year);
        }
    }
}

TEST_CASE("edgeless networks have density zero", "[netgraph]") {
    Corpus corpus({rec("2-s2.0-1", 2000, {"a"}), rec("2-s2.0-2", 2000, {"b"})});
    auto net = build_network(corpus, {"a", "b"}, 2010);
    CHECK(density(net) == 0.0);
}

TEST_CASE("500 planted pairs among 93 members give density 500/4278", "[netgraph]") {
    std::vector<AuthorId> members;
    for (int i = 0; i < 93; ++i) {
        char buf[8];
        std::snprintf(buf, sizeof(buf), "m%03d", i);
        members.push_back(buf);
    }
    std::vector<std::pair<int, int>> all_pairs;
    for (int i = 0; i < 93; ++i) {
        for (int j = i + 1; j < 93; ++j) {
            all_pairs.emplace_back(i, j);
        }
    }
    REQUIRE(all_pairs.size() == 4278);
    std::mt19937_64 rng(17);
    std::shuffle(all_pairs.begin(), all_pairs.end(), rng);
    std::vector<PublicationRecord> records;
    for (int k = 0; k < 500; ++k) {
        records.push_back(rec("2-s2.0-" + std::to_string(k), 2000,
                              {members[all_pairs[k].first], members[all_pairs[k].second]}));
    }
    Corpus corpus(records);
    auto net = build_network(corpus, {members.begin(), members.end()}, 2001);
    CHECK(net.edges.size() == 500);
    CHECK(density(net) == Catch::Approx(500.0 / 4278.0).epsilon(1e-15));
}

TEST_CASE("density series is monotone and cutoffs are cumulative", "[netgraph]") {
    std::mt19937_64 rng(2021);
    for (int trial = 0; trial < 10; ++trial) {
        testsupport::RandomCorpusParams params;
        params.n_records = 60;
        params.n_authors = 15;
        Corpus corpus = testsupport::random_corpus(rng, params);
        std::set<AuthorId> members;
        for (int i = 0; i < 9; ++i) {
            members.insert(testsupport::author_name(i));
        }
        auto range = corpus.year_range();
        REQUIRE(range.has_value());
        std::vector<int> years;
        for (int y = range->from - 1; y <= range->to + 1; ++y) {
            years.push_back(y);
        }
        auto series = density_series(corpus, members, years);
        REQUIRE(series.size() == years.size());
        for (std::size_t i = 1; i < series.size(); ++i) {
            CHECK(series[i].second >= series[i - 1].second);
            auto prev = build_network(corpus, members, years[i - 1]);
            auto next = build_network(corpus, members, years[i]);
            for (const auto& [pair, e] : prev.edges) {
                REQUIRE(next.edges.count(pair) == 1);
                CHECK(next.edges.at(pair).eids.size() >= e.eids.size());
            }
        }
    }
}

TEST_CASE("a single shared record steps the series once", "[netgraph]") {
    Corpus corpus({rec("2-s2.0-1", 1990, {"a", "b"}), rec("2-s2.0-2", 1975, {"a"}),
                   rec("2-s2.0-3", 2019, {"b"})});
    auto series = density_series(corpus, {"a", "b"}, {1980, 1995, 2020});
    REQUIRE(series.size() == 3);
    CHECK(series[0].second == 0.0);
    CHECK(series[1].second > 0.0);
    CHECK(series[2].second == series[1].second);
}

TEST_CASE("unsorted cutoffs are rejected", "[netgraph]") {
    Corpus corpus({rec("2-s2.0-1", 1990, {"a", "b"})});
    REQUIRE_THROWS_WITH(density_series(corpus, {"a", "b"}, {2000, 1990}),
                        Catch::Matchers::ContainsSubstring("sorted ascending"));
}

TEST_CASE("tiny member lists are rejected, absent members are isolated", "[netgraph]") {
    Corpus corpus({rec("2-s2.0-1", 1990, {"a", "b"})});
    CHECK_THROWS_AS(build_network(corpus, {"a"}, 2000), Error);
    auto net = build_network(corpus, {"a", "b", "ghost"}, 2000);
    CHECK(net.nodes.size() == 3);
    REQUIRE(net.missing_members.size() == 1);
    CHECK(net.missing_members[0] == "ghost");
    CHECK(net.edges.size() == 1);
    CHECK(density(net) == Catch::Approx(1.0 / 3.0));
}

TEST_CASE("weight conservation over records", "[netgraph]") {
    std::mt19937_64 rng(31337);
    for (int trial = 0; trial < 10; ++trial) {
        testsupport::RandomCorpusParams params;
        params.n_records = 40;
        params.n_authors = 10;
        Corpus corpus = testsupport::random_corpus(rng, params);
        std::set<AuthorId> members;
        for (int i = 0; i < 10; ++i) {
            members.insert(testsupport::author_name(i));
        }
        auto net = build_network(corpus, members, 100000);
        long long total_weight = 0;
        for (const auto& [pair, e] : net.edges) {
            total_weight += e.weight;
        }
        long long expected = 0;
        for (const auto& r : corpus.records()) {
            long long k = 0;
            for (const auto& a : r.authors) {
                if (members.count(a)) {
                    ++k;
                }
            }
            expected += k * (k - 1) / 2;
        }
        CHECK(total_weight == expected);
    }
}

TEST_CASE("four nodes land on the compass points", "[netgraph]") {
    Corpus corpus({rec("2-s2.0-1", 2000, {"a", "b", "c", "d"})});
    auto net = build_network(corpus, {"a", "b", "c", "d"}, 2005);
    auto fig = render_circular(net);
    REQUIRE(fig.points.size() == 4);
    CHECK(fig.points[0].x == Catch::Approx(0.0).margin(1e-12));
    CHECK(fig.points[0].y == Catch::Approx(1.0).margin(1e-12));
    CHECK(fig.points[1].x == Catch::Approx(1.0).margin(1e-12));
    CHECK(fig.points[1].y == Catch::Approx(0.0).margin(1e-12));
    CHECK(fig.points[2].x == Catch::Approx(0.0).margin(1e-12));
    CHECK(fig.points[2].y == Catch::Approx(-1.0).margin(1e-12));
    CHECK(fig.points[3].x == Catch::Approx(-1.0).margin(1e-12));
    CHECK(fig.points[3].y == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("every node sits on the unit circle", "[netgraph]") {
    std::mt19937_64 rng(8);
    testsupport::RandomCorpusParams params;
    params.n_records = 30;
    params.n_authors = 17;
    Corpus corpus = testsupport::random_corpus(rng, params);
    std::set<AuthorId> members;
    for (int i = 0; i < 17; ++i) {
        members.insert(testsupport::author_name(i));
    }
    auto fig = render_circular(build_network(corpus, members, 100000));
    for (const auto& p : fig.points) {
        CHECK(p.x * p.x + p.y * p.y == Catch::Approx(1.0).margin(1e-9));
    }
}

TEST_CASE("node positions are identical across cutoffs", "[netgraph]") {
    Corpus corpus({rec("2-s2.0-1", 1990, {"a", "b"}), rec("2-s2.0-2", 2005, {"b", "c"}),
                   rec("2-s2.0-3", 2015, {"a", "c"})});
    std::set<AuthorId> members{"a", "b", "c"};
    auto early = render_circular(build_network(corpus, members, 1995));
    auto late = render_circular(build_network(corpus, members, 2020));
    REQUIRE(early.points.size() == late.points.size());
    for (std::size_t i = 0; i < early.points.size(); ++i) {
        CHECK(early.points[i].author == late.points[i].author);
        CHECK(early.points[i].x == late.points[i].x);
        CHECK(early.points[i].y == late.points[i].y);
    }
    CHECK(early.chords.size() == 1);
    CHECK(late.chords.size() == 3);
}

TEST_CASE("figure files are byte-deterministic", "[netgraph]") {
    std::mt19937_64 rng_a(5150), rng_b(5150);
    testsupport::RandomCorpusParams params;
    params.n_records = 25;
    params.n_authors = 9;
    Corpus ca = testsupport::random_corpus(rng_a, params);
    Corpus cb = testsupport::random_corpus(rng_b, params);
    std::set<AuthorId> members;
    for (int i = 0; i < 9; ++i) {
        members.insert(testsupport::author_name(i));
    }
    auto fa = render_circular(build_network(ca, members, 100000));
    auto fb = render_circular(build_network(cb, members, 100000));
    CHECK(to_svg(fa) == to_svg(fb));
    CHECK(to_dot(fa) == to_dot(fb));
    CHECK(adjacency_to_text(build_network(ca, members, 100000), ca) ==
          adjacency_to_text(build_network(cb, members, 100000), cb));
}

TEST_CASE("edge opacity grows with weight", "[netgraph]") {
    std::vector<PublicationRecord> records;
    for (int k = 0; k < 5; ++k) {
        records.push_back(rec("2-s2.0-h" + std::to_string(k), 2000 + k, {"a", "b"}));
    }
    records.push_back(rec("2-s2.0-solo", 2000, {"b", "c"}));
    Corpus corpus(records);
    auto fig = render_circular(build_network(corpus, {"a", "b", "c"}, 2010));
    REQUIRE(fig.chords.size() == 2);
    const LayoutChord* heavy = nullptr;
    const LayoutChord* light = nullptr;
    for (const auto& c : fig.chords) {
        (c.weight == 5 ? heavy : light) = &c;
    }
    REQUIRE(heavy != nullptr);
    REQUIRE(light != nullptr);
    CHECK(heavy->opacity == Catch::Approx(1.0));
    CHECK(light->opacity > 0.2);
    CHECK(light->opacity < heavy->opacity);
}

TEST_CASE("unsupported palettes are rejected", "[netgraph]") {
    Corpus corpus({rec("2-s2.0-1", 1990, {"a", "b"})});
    auto net = build_network(corpus, {"a", "b"}, 2000);
    FigureStyle style;
    style.palette = "sparkle";
    REQUIRE_THROWS_WITH(render_circular(net, style),
                        Catch::Matchers::ContainsSubstring("unsupported style palette"));
    CHECK(palette_color("control") == "#2166ac");
}

TEST_CASE("SVG and DOT carry the expected structure", "[netgraph]") {
    Corpus corpus({rec("2-s2.0-1", 1990, {"a", "b"}), rec("2-s2.0-2", 1993, {"a", "b"})});
    auto net = build_network(corpus, {"a", "b", "c"}, 2000);
    FigureStyle style;
    style.palette = "control";
    auto fig = render_circular(net, style);
    auto svg = to_svg(fig);
    CHECK(svg.find("<svg xmlns=\"http://www.w3.org/2000/svg\"") == 0);
    CHECK(std::count(svg.begin(), svg.end(), '\n') > 5);
    CHECK(svg.find("<circle") != std::string::npos);
    CHECK(svg.find("<line") != std::string::npos);
    CHECK(svg.find("#2166ac") != std::string::npos);
    auto dot = to_dot(fig);
    CHECK(dot.find("graph coauthors {") == 0);
    CHECK(dot.find("\"a\" -- \"b\" [weight=2];") != std::string::npos);
    CHECK(dot.find("\"c\";") != std::string::npos);
    auto adjacency = adjacency_to_text(net, corpus);
    CHECK(adjacency == "a b 2-s2.0-1 1990\na b 2-s2.0-2 1993\n");
}
