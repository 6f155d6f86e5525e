#pragma once
// Remote-source client contract for live ingestion. The library ships no
// concrete backend; callers implement RemoteSource (paged requests, opaque
// cursor, declared rate limit) and fetch_remote drives it.

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "convoke/corpus.hpp"

namespace convoke {

struct TransportError : Error {
    using Error::Error;
};

struct RawPage {
    std::vector<nlohmann::json> records;
    std::optional<std::string> next_cursor;   // nullopt = exhausted
};

class RemoteSource {
public:
    virtual ~RemoteSource() = default;

    // Minimum spacing between consecutive requests.
    virtual std::chrono::milliseconds min_request_interval() const = 0;

    // Empty cursor requests the first page. Re-fetching a cursor must yield
    // identical records. Throws TransportError on transient failure.
    virtual RawPage fetch_page(const std::vector<AuthorId>& query, YearRange window,
                               const std::string& cursor) = 0;
};

struct FetchReport {
    std::vector<nlohmann::json> records;   // page order preserved
    int pages = 0;
    int retries = 0;
    bool completed = false;
    std::string abort_reason;
    std::string resume_cursor;             // cursor to retry from after an abort
};

using SleepFn = std::function<void(std::chrono::milliseconds)>;

inline void default_sleep(std::chrono::milliseconds d) {
    if (d.count() > 0) {
        std::this_thread::sleep_for(d);
    }
}

namespace detail {

// Required keys and JSON shapes checked before records enter validation.
// A page that breaks these has drifted from the agreed schema and fetching
// must stop rather than retry.
inline bool page_schema_ok(const RawPage& page) {
    for (const auto& rec : page.records) {
        if (!rec.is_object()) {
            return false;
        }
        if (!rec.contains("eid") || !rec.at("eid").is_string()) {
            return false;
        }
        if (!rec.contains("authors") || !rec.at("authors").is_array()) {
            return false;
        }
        if (!rec.contains("year")) {
            return false;
        }
    }
    return true;
}

} // namespace detail

inline constexpr int kMaxFetchRetries = 5;

inline FetchReport fetch_remote(RemoteSource& client, const std::vector<AuthorId>& query,
                                YearRange window, SleepFn sleep = default_sleep) {
    FetchReport report;
    std::string cursor;
    bool first_request = true;
    auto interval = client.min_request_interval();

    while (true) {
        RawPage page;
        if (!first_request) {
            sleep(interval);
        }
        first_request = false;
        int attempt = 0;
        while (true) {
            try {
                page = client.fetch_page(query, window, cursor);
                break;
            } catch (const TransportError& e) {
                if (attempt >= kMaxFetchRetries) {
                    report.abort_reason = std::string("transport failure after ") +
                                          std::to_string(kMaxFetchRetries) +
                                          " retries: " + e.what();
                    report.resume_cursor = cursor;
                    return report;
                }
                auto backoff = std::chrono::milliseconds(100LL << attempt);
                sleep(std::max(backoff, interval));
                ++attempt;
                ++report.retries;
            }
        }

        if (!detail::page_schema_ok(page)) {
            report.abort_reason = "page schema drift at cursor '" + cursor + "'";
            report.resume_cursor = cursor;
            return report;
        }

        ++report.pages;
        for (auto& rec : page.records) {
            report.records.push_back(std::move(rec));
        }
        if (!page.next_cursor) {
            report.completed = true;
            return report;
        }
        cursor = *page.next_cursor;
    }
}

} // namespace convoke
