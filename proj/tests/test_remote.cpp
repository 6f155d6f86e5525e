#include <catch2/catch_amalgamated.hpp>

#include "convoke/remote.hpp"

using namespace convoke;

namespace {

nlohmann::json stub_record(const std::string& eid) {
    return nlohmann::json{{"eid", eid},
                          {"year", 2000},
                          {"authors", {"A1"}},
                          {"citations", 0},
                          {"field", "F"},
                          {"doctype", "article"}};
}

// Scripted client: fixed pages, optional per-cursor failure counts.
class StubSource : public RemoteSource {
public:
    std::vector<std::vector<std::string>> pages;          // eids per page
    std::map<int, int> failures_before_success;           // page index -> count
    std::chrono::milliseconds interval{10};
    int requests = 0;
    bool drift_on_last_page = false;

    std::chrono::milliseconds min_request_interval() const override { return interval; }

    RawPage fetch_page(const std::vector<AuthorId>&, YearRange, const std::string& cursor) override {
        ++requests;
        int idx = cursor.empty() ? 0 : std::stoi(cursor);
        auto fail = failures_before_success.find(idx);
        if (fail != failures_before_success.end() && fail->second > 0) {
            --fail->second;
            throw TransportError("stubbed outage");
        }
        RawPage page;
        if (idx < static_cast<int>(pages.size())) {
            for (const auto& eid : pages[idx]) {
                page.records.push_back(stub_record(eid));
            }
            if (drift_on_last_page && idx == static_cast<int>(pages.size()) - 1) {
                page.records.push_back(nlohmann::json::array({1, 2, 3}));
            }
        }
        if (idx + 1 < static_cast<int>(pages.size())) {
            page.next_cursor = std::to_string(idx + 1);
        }
        return page;
    }
};

struct SleepRecorder {
    std::vector<std::chrono::milliseconds> sleeps;
    SleepFn fn() {
        return [this](std::chrono::milliseconds d) { sleeps.push_back(d); };
    }
};

} // namespace

TEST_CASE("zero pages yield an empty completed stream", "[remote]") {
    StubSource src;
    src.pages = {{}};
    SleepRecorder rec;
    auto report = fetch_remote(src, {"A1"}, {}, rec.fn());
    CHECK(report.completed);
    CHECK(report.records.empty());
    CHECK(report.retries == 0);
}

TEST_CASE("pages arrive in order", "[remote]") {
    StubSource src;
    src.pages = {{"E1", "E2"}, {"E3", "E4"}, {"E5", "E6"}};
    SleepRecorder rec;
    auto report = fetch_remote(src, {"A1"}, {}, rec.fn());
    REQUIRE(report.completed);
    REQUIRE(report.records.size() == 6);
    for (int i = 0; i < 6; ++i) {
        CHECK(report.records[i].at("eid") == "E" + std::to_string(i + 1));
    }
    CHECK(report.pages == 3);
    // rate limit honored between the three requests
    CHECK(rec.sleeps.size() == 2);
}

TEST_CASE("transient failures are retried with backoff", "[remote]") {
    StubSource src;
    src.pages = {{"E1", "E2"}, {"E3", "E4"}, {"E5", "E6"}};
    src.failures_before_success[1] = 2;
    SleepRecorder rec;
    auto report = fetch_remote(src, {"A1"}, {}, rec.fn());
    REQUIRE(report.completed);
    CHECK(report.records.size() == 6);
    CHECK(report.retries == 2);
}

TEST_CASE("persistent failure aborts with partial progress", "[remote]") {
    StubSource src;
    src.pages = {{"E1", "E2"}, {"E3"}};
    src.failures_before_success[1] = 100;   // never recovers
    SleepRecorder rec;
    auto report = fetch_remote(src, {"A1"}, {}, rec.fn());
    CHECK_FALSE(report.completed);
    CHECK(report.records.size() == 2);   // first page kept
    CHECK(report.retries == kMaxFetchRetries);
    CHECK(report.resume_cursor == "1");
    CHECK(report.abort_reason.find("transport failure") != std::string::npos);

    // exponential backoff: sleeps grow across the retry ladder
    REQUIRE(rec.sleeps.size() >= 2);
    CHECK(rec.sleeps.back() > rec.sleeps.front());
}

TEST_CASE("schema drift aborts without retry", "[remote]") {
    StubSource src;
    src.pages = {{"E1"}, {"E2"}};
    src.drift_on_last_page = true;
    SleepRecorder rec;
    auto report = fetch_remote(src, {"A1"}, {}, rec.fn());
    CHECK_FALSE(report.completed);
    CHECK(report.abort_reason.find("schema drift") != std::string::npos);
    CHECK(report.retries == 0);
    CHECK(report.records.size() == 1);
}

TEST_CASE("re-fetching the same cursor is idempotent", "[remote]") {
    StubSource src;
    src.pages = {{"E1", "E2"}, {"E3"}};
    auto a = src.fetch_page({"A1"}, {}, "0");
    auto b = src.fetch_page({"A1"}, {}, "0");
    CHECK(a.records == b.records);
    CHECK(a.next_cursor == b.next_cursor);
}
