#include "colink/provider.hpp"
#include "colink/error.hpp"
#include "colink/log.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>

namespace colink {

namespace {

std::string url_encode(std::string_view s)
{
    static constexpr char hex[] = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : s) {
        if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' || c == '.'
            || c == '_' || c == '~') {
            out += static_cast<char>(c);
        } else {
            out += '%';
            out += hex[c >> 4];
            out += hex[c & 0xF];
        }
    }
    return out;
}

std::vector<ReferringDomainEntry> parse_page(const std::string& body)
{
    std::vector<ReferringDomainEntry> entries;
    try {
        auto doc = nlohmann::json::parse(body);
        for (const auto& item : doc.at("items")) {
            ReferringDomainEntry e;
            e.domain = item.at("domain").get<std::string>();
            if (auto c = item.find("country"); c != item.end() && c->is_string() && !c->get<std::string>().empty())
                e.country = c->get<std::string>();
            entries.push_back(std::move(e));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::transport_error, std::string("malformed provider response: ") + e.what());
    }
    return entries;
}

std::chrono::milliseconds backoff_delay(const ProviderConfig& cfg, int attempt)
{
    auto delay = cfg.initial_backoff;
    for (int i = 1; i < attempt && delay < cfg.max_backoff; ++i)
        delay *= 2;
    return std::min(delay, cfg.max_backoff);
}

} // namespace

ProviderClient::ProviderClient(ProviderConfig config, Sleeper sleeper)
    : config_(std::move(config)), sleeper_(std::move(sleeper))
{
    if (!sleeper_)
        sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
    if (config_.max_attempts < 1)
        throw Error(Errc::invalid_config, "provider max_attempts must be at least 1");
    if (config_.page_size == 0)
        throw Error(Errc::invalid_config, "provider page_size must be positive");

    auto sep = config_.base_url.find("://");
    if (sep == std::string::npos)
        throw Error(Errc::invalid_config, "provider base URL '" + config_.base_url + "' needs a scheme");
    auto path = config_.base_url.find('/', sep + 3);
    scheme_host_port_ = config_.base_url.substr(0, path);
    if (path != std::string::npos)
        path_prefix_ = config_.base_url.substr(path);
    while (!path_prefix_.empty() && path_prefix_.back() == '/')
        path_prefix_.pop_back();
}

std::vector<ReferringDomainEntry> ProviderClient::fetch_page(std::string_view root_domain, std::size_t page)
{
    const std::string target = path_prefix_ + "/v1/referring-domains?domain=" + url_encode(root_domain)
                               + "&page=" + std::to_string(page) + "&page_size=" + std::to_string(config_.page_size);

    Errc last = Errc::transport_error;
    std::string last_detail;
    for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
        if (attempt > 1)
            ++retries_;
        ++requests_;

        httplib::Client http(scheme_host_port_);
        http.set_connection_timeout(config_.timeout);
        http.set_read_timeout(config_.timeout);
        httplib::Headers headers{{"Accept", "application/json"}};
        if (!config_.credential.empty())
            headers.emplace("Authorization", "Bearer " + config_.credential);

        auto res = http.Get(target, headers);
        std::chrono::milliseconds wait = backoff_delay(config_, attempt);
        if (!res) {
            last = Errc::transport_error;
            last_detail = "request failed: " + httplib::to_string(res.error());
        } else if (res->status == 200) {
            return parse_page(res->body);
        } else if (res->status == 401 || res->status == 403) {
            throw Error(Errc::auth_failure, "provider rejected credential (HTTP " + std::to_string(res->status) + ")");
        } else if (res->status == 429) {
            last = Errc::rate_limited;
            last_detail = "rate limited";
            if (res->has_header("Retry-After")) {
                try {
                    wait = std::min<std::chrono::milliseconds>(
                        std::chrono::seconds(std::stol(res->get_header_value("Retry-After"))), config_.max_backoff);
                } catch (const std::exception&) {
                    // keep exponential delay for HTTP-date or junk values
                }
            }
        } else if (res->status >= 500) {
            last = Errc::transport_error;
            last_detail = "HTTP " + std::to_string(res->status);
        } else {
            throw Error(Errc::transport_error, "provider returned HTTP " + std::to_string(res->status) + " for "
                                                   + std::string(root_domain));
        }
        if (attempt < config_.max_attempts)
            sleeper_(wait);
    }
    throw Error(last, "giving up on " + std::string(root_domain) + " page " + std::to_string(page) + " after "
                          + std::to_string(config_.max_attempts) + " attempts: " + last_detail);
}

RelationSet fetch_referring_domains(const ProjectSite& project, ProviderClient& client, const SuffixRuleSet& rules)
{
    RelationSet out;
    for (std::size_t page = 1;; ++page) {
        auto entries = client.fetch_page(project.root_domain, page);
        if (entries.empty())
            break;
        for (auto& e : entries) {
            try {
                auto parsed = split_domain(normalize_host(e.domain), rules);
                if (parsed.root_domain == project.root_domain)
                    continue;
                std::optional<std::string> country;
                if (e.country && e.country->size() == 2) {
                    country = *e.country;
                    std::transform(country->begin(), country->end(), country->begin(),
                                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
                }
                out.insert(LinkRelation{std::move(parsed.root_domain), std::move(parsed.public_suffix),
                                        project.project_id, std::move(country)});
            } catch (const Error& err) {
                warn("skipping referring domain '" + e.domain + "' for " + project.project_id + ": " + err.what());
            }
        }
    }
    return out;
}

RelationSet fetch_portfolio(const Portfolio& portfolio, ProviderClient& client, const SuffixRuleSet& rules,
                            std::size_t workers)
{
    const auto& projects = portfolio.projects();
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(projects.size(), 1));

    std::vector<RelationSet> partial(projects.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto work = [&] {
        for (;;) {
            if (failed)
                return;
            auto i = next++;
            if (i >= projects.size())
                return;
            try {
                partial[i] = fetch_referring_domains(projects[i], client, rules);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
                failed = true;
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back(work);
    }
    if (first_error)
        std::rethrow_exception(first_error);

    RelationSet merged;
    for (const auto& p : partial)
        merged.merge(p);
    return merged;
}

} // namespace colink
