#pragma once

#include "colink/ingestion.hpp"

#include <atomic>
#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace colink {

// Connection settings for a backlink provider exposing
//
//   GET <base_url>/v1/referring-domains?domain=<root>&page=<n>&page_size=<k>
//   Authorization: Bearer <credential>
//
// answering 200 with {"items": [{"domain": "...", "country": "NL"|null}, ...]}.
// Pages are numbered from 1; an empty "items" array ends the listing.
struct ProviderConfig {
    std::string base_url;
    std::string credential;
    std::size_t page_size = 1000;
    int max_attempts = 5;
    std::chrono::milliseconds initial_backoff{500};
    std::chrono::milliseconds max_backoff{30'000};
    std::chrono::seconds timeout{30};
};

struct ReferringDomainEntry {
    std::string domain;
    std::optional<std::string> country;
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;

class ProviderClient {
public:
    // The sleeper defaults to std::this_thread::sleep_for; tests pass a
    // recorder to avoid real delays.
    explicit ProviderClient(ProviderConfig config, Sleeper sleeper = {});

    // One page with retries. 401/403 throw Error(auth_failure) immediately.
    // 429 waits for Retry-After (capped by max_backoff), 5xx and connection
    // failures back off exponentially; once max_attempts is exhausted the
    // call throws Error(rate_limited) or Error(transport_error).
    std::vector<ReferringDomainEntry> fetch_page(std::string_view root_domain, std::size_t page);

    const ProviderConfig& config() const noexcept { return config_; }

    std::size_t requests() const noexcept { return requests_; }
    std::size_t retries() const noexcept { return retries_; }

private:
    ProviderConfig config_;
    Sleeper sleeper_;
    std::string scheme_host_port_;
    std::string path_prefix_;
    std::atomic<std::size_t> requests_{0};
    std::atomic<std::size_t> retries_{0};
};

// Walks all pages for one project and reduces them to relations. Entries
// whose domain cannot be parsed are skipped with a warning; self-links
// are dropped.
RelationSet fetch_referring_domains(const ProjectSite& project, ProviderClient& client,
                                    const SuffixRuleSet& rules);

// Fetches every project with at most `workers` concurrent requests. The
// first failure cancels outstanding work and is rethrown.
RelationSet fetch_portfolio(const Portfolio& portfolio, ProviderClient& client, const SuffixRuleSet& rules,
                            std::size_t workers);

} // namespace colink
