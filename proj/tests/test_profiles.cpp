#include <catch2/catch_amalgamated.hpp>

#include <limits>
#include <random>
#include <set>

#include "convoke/profiles.hpp"

#include "support/oracles.hpp"
#include "support/random_corpus.hpp"

using namespace convoke;

namespace {

PublicationRecord rec(std::string eid, int year, std::vector<AuthorId> authors,
                      long long citations = 0) {
    PublicationRecord r;
    r.eid = std::move(eid);
    r.year = year;
    r.authors = std::move(authors);
    r.citations = citations;
    r.field = "physics";
    return r;
}

CohortSpec cohort_of(std::set<AuthorId> members, int start = 2000) {
    CohortSpec spec;
    spec.name = "cohort";
    spec.members = std::move(members);
    spec.program_start_year = start;
    return spec;
}

} // namespace

TEST_CASE("profile of an author spans all of their records", "[profiles]") {
    Corpus corpus({
        rec("2-s2.0-1", 1990, {"alice", "bob"}, 7),
        rec("2-s2.0-2", 1985, {"alice"}, 3),
    });
    auto profiles = derive_profiles(corpus, {"alice"});
    REQUIRE(profiles.missing.empty());
    const auto& p = profiles.profiles.at("alice");
    CHECK(p.first_pub_year == 1985);
    CHECK(p.scholarly_output == 2);
    CHECK(p.coauthor_count == 1);
    CHECK(p.citation_total == 10);
}

TEST_CASE("sole authorship yields zero co-authors", "[profiles]") {
    std::vector<PublicationRecord> records;
    for (int i = 0; i < 5; ++i) {
        records.push_back(rec("2-s2.0-" + std::to_string(i), 2000 + i, {"solo"}, i));
    }
    Corpus corpus(records);
    auto profiles = derive_profiles(corpus, {"solo"});
    const auto& p = profiles.profiles.at("solo");
    CHECK(p.coauthor_count == 0);
    CHECK(p.scholarly_output == 5);
    CHECK(p.first_pub_year == 2000);
}

TEST_CASE("derived profiles match a brute-force recount", "[profiles]") {
    std::mt19937_64 rng(4242);
    testsupport::RandomCorpusParams params;
    params.n_records = 50;
    params.n_authors = 14;
    Corpus corpus = testsupport::random_corpus(rng, params);

    auto expected = oracles::brute_profiles(corpus);
    auto got = derive_all_profiles(corpus);
    REQUIRE(got.size() == expected.size());
    for (const auto& [author, want] : expected) {
        const auto& have = got.at(author);
        CHECK(have.first_pub_year == want.first_pub_year);
        CHECK(have.scholarly_output == want.scholarly_output);
        CHECK(have.coauthor_count == want.coauthor_count);
        CHECK(have.citation_total == want.citation_total);
    }
}

TEST_CASE("authors absent from the corpus are reported, not dropped", "[profiles]") {
    Corpus corpus({rec("2-s2.0-1", 2001, {"alice"})});
    auto profiles = derive_profiles(corpus, {"alice", "ghost"});
    CHECK(profiles.profiles.size() == 1);
    CHECK(profiles.missing == std::vector<AuthorId>{"ghost"});
}

TEST_CASE("co-author pool equals the brute-force set difference", "[profiles]") {
    Corpus corpus({
        rec("2-s2.0-1", 2001, {"m1", "x", "y"}),
        rec("2-s2.0-2", 2002, {"m2", "y", "z"}),
        rec("2-s2.0-3", 2003, {"u", "v"}),
    });
    auto pool = coauthor_pool(corpus, cohort_of({"m1", "m2"}));
    CHECK(pool.candidates == std::set<AuthorId>{"x", "y", "z"});
    CHECK(pool.candidates == oracles::brute_pool(corpus, {"m1", "m2"}));
    CHECK(pool.provenance.at("y") == 2);
    CHECK(pool.provenance.at("x") == 1);
}

TEST_CASE("pool is always disjoint from the cohort", "[profiles]") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 10; ++trial) {
        testsupport::RandomCorpusParams params;
        params.n_records = 60;
        params.n_authors = 25;
        Corpus corpus = testsupport::random_corpus(rng, params);
        std::set<AuthorId> members;
        for (int i = 0; i < 5; ++i) {
            members.insert(testsupport::author_name(i));
        }
        CandidatePool pool;
        try {
            pool = coauthor_pool(corpus, cohort_of(members));
        } catch (const Error&) {
            continue; // no external co-authors this trial
        }
        for (const auto& a : pool.candidates) {
            CHECK(members.count(a) == 0);
        }
        CHECK(pool.candidates == oracles::brute_pool(corpus, members));
    }
}

TEST_CASE("cohort whose members only co-author with each other has no pool", "[profiles]") {
    Corpus corpus({rec("2-s2.0-1", 2001, {"m1", "m2"})});
    REQUIRE_THROWS_WITH(coauthor_pool(corpus, cohort_of({"m1", "m2"})),
                        Catch::Matchers::ContainsSubstring("no external co-authors"));
}

TEST_CASE("pool subtraction at catalogue scale", "[profiles]") {
    // One enormous author list: every identified author shares a record with
    // the cohort, so the pool is exactly everyone minus the cohort.
    std::vector<AuthorId> everyone;
    everyone.reserve(26177);
    for (int i = 0; i < 26177; ++i) {
        everyone.push_back("au" + std::to_string(100000 + i));
    }
    std::set<AuthorId> members(everyone.begin(), everyone.begin() + 93);
    Corpus corpus({rec("2-s2.0-big", 2010, everyone)});
    auto pool = coauthor_pool(corpus, cohort_of(members));
    CHECK(pool.candidates.size() == 26177u - 93u);
}

TEST_CASE("profile additivity across a corpus split", "[profiles]") {
    std::mt19937_64 rng(7);
    testsupport::RandomCorpusParams params;
    params.n_records = 80;
    params.n_authors = 18;
    Corpus whole = testsupport::random_corpus(rng, params);

    std::vector<PublicationRecord> first_half, second_half;
    for (size_t i = 0; i < whole.records().size(); ++i) {
        (i % 2 == 0 ? first_half : second_half).push_back(whole.records()[i]);
    }
    Corpus a(first_half), b(second_half);
    auto whole_profiles = derive_all_profiles(whole);
    auto pa = oracles::brute_profiles(a);
    auto pb = oracles::brute_profiles(b);

    for (const auto& [author, want] : whole_profiles) {
        bool in_a = pa.count(author) > 0;
        bool in_b = pb.count(author) > 0;
        REQUIRE((in_a || in_b));
        long long output = 0, citations = 0;
        int first = std::numeric_limits<int>::max();
        if (in_a) {
            output += pa[author].scholarly_output;
            citations += pa[author].citation_total;
            first = std::min(first, pa[author].first_pub_year);
        }
        if (in_b) {
            output += pb[author].scholarly_output;
            citations += pb[author].citation_total;
            first = std::min(first, pb[author].first_pub_year);
        }
        CHECK(want.scholarly_output == output);
        CHECK(want.citation_total == citations);
        CHECK(want.first_pub_year == first);

        // Co-author sets merge by union, not by sum.
        std::set<AuthorId> merged;
        for (const Corpus* part : {&a, &b}) {
            for (const auto& r : part->records()) {
                if (!r.has_author(author)) {
                    continue;
                }
                for (const auto& other : r.authors) {
                    if (other != author) {
                        merged.insert(other);
                    }
                }
            }
        }
        CHECK(want.coauthor_count == static_cast<long long>(merged.size()));
    }
}

TEST_CASE("covariate names parse including aliases", "[profiles]") {
    CHECK(parse_covariate("first_pub_year") == Covariate::first_pub_year);
    CHECK(parse_covariate("year") == Covariate::first_pub_year);
    CHECK(parse_covariate("scholarly_output") == Covariate::scholarly_output);
    CHECK(parse_covariate("output") == Covariate::scholarly_output);
    CHECK(parse_covariate("coauthor_count") == Covariate::coauthor_count);
    CHECK(parse_covariate("citation_total") == Covariate::citation_total);
    CHECK_FALSE(parse_covariate("h_index").has_value());
    for (auto c : {Covariate::first_pub_year, Covariate::scholarly_output,
                   Covariate::coauthor_count, Covariate::citation_total}) {
        CHECK(parse_covariate(to_string(c)) == c);
    }
}

TEST_CASE("distribution export puts a lone author in a single occupied bin", "[profiles]") {
    Corpus corpus({rec("2-s2.0-1", 2001, {"alice"}, 12)});
    auto profiles = derive_all_profiles(corpus);
    HistogramOptions opts;
    opts.bins = 10;
    auto table = distribution_export(profiles, Covariate::citation_total,
                                     {{"cohort", {"alice"}}}, opts);
    REQUIRE(table.groups.size() == 1);
    long long total = 0;
    int occupied = 0;
    for (auto c : table.groups[0].counts) {
        total += c;
        if (c > 0) {
            ++occupied;
        }
    }
    CHECK(total == 1);
    CHECK(occupied == 1);
    CHECK(table.groups[0].stats.median == 12.0);
}

TEST_CASE("identical groups export identical histogram rows", "[profiles]") {
    std::mt19937_64 rng(11);
    testsupport::RandomCorpusParams params;
    params.n_records = 40;
    params.n_authors = 12;
    Corpus corpus = testsupport::random_corpus(rng, params);
    auto profiles = derive_all_profiles(corpus);
    std::set<AuthorId> everyone;
    for (const auto& [a, _] : profiles) {
        everyone.insert(a);
    }
    auto table = distribution_export(profiles, Covariate::scholarly_output,
                                     {{"left", everyone}, {"right", everyone}}, {});
    REQUIRE(table.groups.size() == 2);
    CHECK(table.groups[0].counts == table.groups[1].counts);
    CHECK(table.groups[0].stats.median == table.groups[1].stats.median);
}

TEST_CASE("a shifted group lands in higher bins", "[profiles]") {
    // Cohort members publish strictly more than pool members; the cohort's
    // median bin must sit above the pool's.
    std::vector<PublicationRecord> records;
    int eid = 0;
    for (int i = 0; i < 6; ++i) {
        for (int k = 0; k < 3; ++k) { // pool authors: 3 papers each
            records.push_back(
                rec("2-s2.0-" + std::to_string(eid++), 2000 + k, {"pool" + std::to_string(i)}));
        }
        for (int k = 0; k < 13; ++k) { // cohort authors: 13 papers each
            records.push_back(
                rec("2-s2.0-" + std::to_string(eid++), 2000 + k, {"coh" + std::to_string(i)}));
        }
    }
    Corpus corpus(records);
    auto profiles = derive_all_profiles(corpus);
    std::set<AuthorId> cohort, pool;
    for (int i = 0; i < 6; ++i) {
        cohort.insert("coh" + std::to_string(i));
        pool.insert("pool" + std::to_string(i));
    }
    auto table = distribution_export(profiles, Covariate::scholarly_output,
                                     {{"cohort", cohort}, {"pool", pool}}, {});
    REQUIRE(table.groups.size() == 2);
    CHECK(table.median_bin(0) > table.median_bin(1));
}

TEST_CASE("distribution export requires every member to have a profile", "[profiles]") {
    Corpus corpus({rec("2-s2.0-1", 2001, {"alice"})});
    auto profiles = derive_all_profiles(corpus);
    CHECK_THROWS_AS(distribution_export(profiles, Covariate::scholarly_output,
                                        {{"cohort", {"alice", "ghost"}}}, {}),
                    Error);
}

TEST_CASE("profiles serialize to a readable TSV", "[profiles]") {
    Corpus corpus({
        rec("2-s2.0-1", 1999, {"alice", "bob"}, 4),
        rec("2-s2.0-2", 2003, {"bob"}, 1),
    });
    auto profiles = derive_all_profiles(corpus);
    std::set<AuthorId> cohort{"alice"};
    std::string tsv = profiles_to_tsv(profiles, &cohort);
    CHECK(tsv.find("author\tfirst_pub_year\tscholarly_output\tcoauthor_count\t"
                   "citation_total\tgroup\n") == 0);
    CHECK(tsv.find("alice\t1999\t1\t1\t4\tcohort\n") != std::string::npos);
    CHECK(tsv.find("bob\t1999\t2\t1\t5\tpool\n") != std::string::npos);
}

TEST_CASE("profiles TSV round-trips with and without the group column", "[profiles]") {
    std::mt19937_64 rng(31);
    testsupport::RandomCorpusParams params;
    params.n_records = 40;
    params.n_authors = 10;
    Corpus corpus = testsupport::random_corpus(rng, params);
    auto profiles = derive_all_profiles(corpus);

    CHECK(profiles_from_tsv(profiles_to_tsv(profiles)) == profiles);
    std::set<AuthorId> cohort{testsupport::author_name(0), testsupport::author_name(1)};
    CHECK(profiles_from_tsv(profiles_to_tsv(profiles, &cohort)) == profiles);
}

TEST_CASE("malformed profile TSVs are rejected", "[profiles]") {
    const std::string header =
        "author\tfirst_pub_year\tscholarly_output\tcoauthor_count\tcitation_total\n";
    CHECK_THROWS_AS(profiles_from_tsv(header + "a\t1999\t2\t1\t5\n" + "a\t2001\t1\t0\t2\n"),
                    Error);
    CHECK_THROWS_AS(profiles_from_tsv(header + "a\t1999\ttwo\t1\t5\n"), Error);
    CHECK_THROWS_AS(profiles_from_tsv(header + "a\t1999\t2\n"), Error);
}

TEST_CASE("candidate pool text round-trips", "[profiles]") {
    Corpus corpus({
        rec("2-s2.0-1", 2001, {"m1", "x", "y"}),
        rec("2-s2.0-2", 2002, {"m2", "y"}),
    });
    auto pool = coauthor_pool(corpus, cohort_of({"m1", "m2"}));
    auto parsed = pool_from_text(pool_to_text(pool));
    CHECK(parsed.candidates == pool.candidates);
    CHECK(parsed.provenance == pool.provenance);
    CHECK_THROWS_WITH(pool_from_text("author\tshared_publications\n"),
                      Catch::Matchers::ContainsSubstring("no candidates"));
}
