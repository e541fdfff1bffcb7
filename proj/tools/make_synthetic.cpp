// Generates the bundled synthetic portfolio: 121 project sites in six
// planted topic groups, backlink exports whose referring domains link
// mostly within one group, and the files naming the planted groups.
//
//   make_synthetic <output-dir> [seed]

#include "colink/csv.hpp"
#include "colink/date.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace std::chrono;
using colink::Date;

namespace {

constexpr int project_count = 121;
constexpr int topic_count = 6;
constexpr int external_domain_count = 5150;

struct Rng {
    std::mt19937_64 engine;

    explicit Rng(std::uint64_t seed) : engine(seed) {}

    std::uint64_t below(std::uint64_t n) { return engine() % n; }
    double unit() { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }
    bool chance(double p) { return unit() < p; }

    template <typename T>
    const T& pick(const std::vector<T>& v) { return v[below(v.size())]; }
};

std::string make_label(Rng& rng, int syllables)
{
    static const std::vector<std::string> onsets{"b", "c", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t",
                                                 "v", "z", "br", "cl", "st", "tr", "gr"};
    static const std::vector<std::string> vowels{"a", "e", "i", "o", "u", "ia", "eo", "ai"};
    std::string out;
    for (int i = 0; i < syllables; ++i)
        out += rng.pick(onsets) + rng.pick(vowels);
    return out;
}

struct Project {
    std::string id;
    std::string domain;
    int topic = 0;
    Date start;
    double attention = 1.0;
};

struct Referrer {
    std::string domain;
    std::string country; // provider country, may be empty
    int topic = 0;
    std::vector<int> targets;
};

// Allowed ccTLDs, with a few multi-label registrations.
const std::vector<std::string> eu_cctlds{"at", "be", "bg", "hr", "cy", "cz", "dk", "ee", "fi", "fr", "de",
                                         "de", "de", "gr", "hu", "ie", "it", "it", "lv", "lt", "lu", "mt",
                                         "nl", "nl", "nl", "pl", "pt", "ro", "sk", "si", "es", "es", "se",
                                         "co.uk", "ac.uk", "org.uk", "uk", "no", "ch", "is", "il", "rs",
                                         "com.tr", "ac.at", "ua"};
const std::vector<std::string> eu_countries{"DE", "NL", "FR", "ES", "IT", "BE", "AT", "SE", "DK", "FI",
                                            "PT", "GB", "IE", "PL", "CH", "NO"};
// Suffixes whose domains the default allowlist rejects.
const std::vector<std::string> foreign_suffixes{"us", "ca", "jp", "co.jp", "com.au", "com.br", "cn", "in", "ru", "mx"};
const std::vector<std::string> generic_suffixes{"org", "net", "info"};

std::string url_for(Rng& rng, const std::string& domain)
{
    static const std::vector<std::string> hosts{"", "", "www.", "www.", "blog.", "news.", "WWW."};
    static const std::vector<std::string> paths{"/", "", "/about", "/partners", "/news/2020/item", "/projects?id=3",
                                                "/links#eu", "/en/page.html"};
    static const std::vector<std::string> schemes{"https://", "https://", "http://", "HTTPS://", "//"};
    std::string host = rng.pick(hosts) + domain;
    if (rng.chance(0.03))
        host += ".";
    std::string url = rng.pick(schemes) + host;
    if (rng.chance(0.04))
        url += ":8080";
    return url + rng.pick(paths);
}

} // namespace

int main(int argc, char** argv)
{
    if (argc < 2) {
        std::cerr << "usage: make_synthetic <output-dir> [seed]\n";
        return 1;
    }
    const fs::path out_dir = argv[1];
    const std::uint64_t seed = argc > 2 ? std::stoull(argv[2]) : 20210113;
    fs::create_directories(out_dir);
    Rng rng(seed);

    const Date snapshot = colink::parse_date("2021-01-13");
    const sys_days first_start = sys_days{colink::parse_date("2015-01-01")};
    const sys_days last_start = sys_days{colink::parse_date("2020-10-01")};

    // Projects: 109 of 121 on .eu.
    std::vector<Project> projects;
    std::set<std::string> used;
    std::vector<std::string> other_tlds{"org", "org", "org", "org", "org", "org", "net", "net", "com", "com", "de", "nl"};
    for (int i = 0; i < project_count; ++i) {
        Project p;
        p.id = "p" + std::string(i < 9 ? "00" : (i < 99 ? "0" : "")) + std::to_string(i + 1);
        p.topic = i % topic_count;
        const std::string tld = i < project_count - static_cast<int>(other_tlds.size())
                                    ? "eu"
                                    : other_tlds[static_cast<std::size_t>(i - (project_count - static_cast<int>(other_tlds.size())))];
        do {
            p.domain = make_label(rng, 2) + "-project." + tld;
        } while (!used.insert(p.domain).second);
        const auto span = (last_start - first_start).count();
        p.start = Date{first_start + days{static_cast<int>(rng.below(static_cast<std::uint64_t>(span)))}};
        const double years = static_cast<double>((sys_days{snapshot} - sys_days{p.start}).count()) / 365.0;
        p.attention = 0.6 + 0.35 * years + 3.0 * rng.unit() * rng.unit();
        projects.push_back(std::move(p));
    }

    std::vector<std::vector<int>> by_topic(topic_count);
    for (int i = 0; i < project_count; ++i)
        by_topic[static_cast<std::size_t>(projects[static_cast<std::size_t>(i)].topic)].push_back(i);

    auto weighted_pick = [&](const std::vector<int>& pool) {
        double total = 0;
        for (int i : pool)
            total += projects[static_cast<std::size_t>(i)].attention;
        double r = rng.unit() * total;
        for (int i : pool) {
            r -= projects[static_cast<std::size_t>(i)].attention;
            if (r <= 0)
                return i;
        }
        return pool.back();
    };

    // External referring domains.
    std::vector<Referrer> referrers;
    std::vector<int> all_projects(project_count);
    for (int i = 0; i < project_count; ++i)
        all_projects[static_cast<std::size_t>(i)] = i;
    for (int d = 0; d < external_domain_count; ++d) {
        Referrer r;
        r.topic = static_cast<int>(rng.below(topic_count));
        std::string suffix;
        const double kind = rng.unit();
        if (kind < 0.175) {
            suffix = "com";
            r.country = rng.chance(0.85) ? rng.pick(eu_countries) : (rng.chance(0.5) ? "US" : "");
        } else if (kind < 0.27) {
            suffix = "eu";
        } else if (kind < 0.36) {
            suffix = "org";
            r.country = rng.chance(0.85) ? rng.pick(eu_countries) : "";
        } else if (kind < 0.42) {
            suffix = rng.pick(generic_suffixes);
            r.country = rng.chance(0.8) ? rng.pick(eu_countries) : "";
        } else if (kind < 0.50) {
            suffix = rng.pick(foreign_suffixes);
        } else {
            suffix = rng.pick(eu_cctlds);
            if (rng.chance(0.1))
                r.country = rng.pick(eu_countries);
        }
        do {
            r.domain = make_label(rng, 2 + static_cast<int>(rng.below(3))) + "." + suffix;
        } while (!used.insert(r.domain).second);

        int degree = 1;
        while (degree < 9 && rng.chance(0.55))
            ++degree;
        std::set<int> targets;
        for (int k = 0; k < degree * 3 && static_cast<int>(targets.size()) < degree; ++k) {
            const auto& pool = rng.chance(0.9) ? by_topic[static_cast<std::size_t>(r.topic)] : all_projects;
            targets.insert(weighted_pick(pool));
        }
        r.targets.assign(targets.begin(), targets.end());
        referrers.push_back(std::move(r));
    }

    // Internal links between project sites (mostly within the topic).
    std::vector<std::pair<int, int>> internal;
    for (int i = 0; i < project_count; ++i) {
        if (rng.chance(0.15))
            continue;
        const int links = 2 + static_cast<int>(rng.below(24));
        std::set<int> targets;
        for (int k = 0; k < links; ++k) {
            const auto& pool = rng.chance(0.85) ? by_topic[static_cast<std::size_t>(projects[static_cast<std::size_t>(i)].topic)] : all_projects;
            int t = weighted_pick(pool);
            // About a fifth of the projects are never linked from other project sites.
            if (t % 5 == 4)
                continue;
            if (t != i)
                targets.insert(t);
        }
        for (int t : targets)
            internal.emplace_back(i, t);
    }

    // Backlink rows: several URLs per relation, self-links and junk rows.
    std::vector<colink::csv::Row> rows;
    auto crawl = [&] { return rng.chance(0.7) ? colink::format_date(snapshot) : std::string(); };
    for (const auto& r : referrers)
        for (int t : r.targets) {
            const int copies = 1 + static_cast<int>(rng.below(4));
            for (int c = 0; c < copies; ++c)
                rows.push_back({url_for(rng, r.domain), projects[static_cast<std::size_t>(t)].id, r.country, crawl()});
        }
    for (auto [src, dst] : internal) {
        const auto& s = projects[static_cast<std::size_t>(src)];
        const std::string country = s.domain.ends_with(".eu") || s.domain.ends_with(".de") || s.domain.ends_with(".nl")
                                        ? ""
                                        : eu_countries[static_cast<std::size_t>(src) % eu_countries.size()];
        const int copies = 1 + static_cast<int>(rng.below(3));
        for (int c = 0; c < copies; ++c)
            rows.push_back({url_for(rng, s.domain), projects[static_cast<std::size_t>(dst)].id, country, crawl()});
    }
    for (const auto& p : projects)
        if (rng.chance(0.5))
            rows.push_back({url_for(rng, p.domain), p.id, "", crawl()});
    const std::vector<std::string> junk{"mailto:office@example.org", "", "https://192.168.10.4/index", "not a url",
                                        "https://[2001:db8::1]/", "javascript:void(0)", "https://bad..host.org/"};
    for (const auto& j : junk)
        rows.push_back({j, projects[rng.below(projects.size())].id, "", ""});
    rows.push_back({"https://orphan-site.org/", "p999", "DE", ""});

    for (std::size_t i = rows.size(); i > 1; --i)
        std::swap(rows[i - 1], rows[rng.below(i)]);

    const std::string parts[] = {"backlinks_a.csv", "backlinks_b.csv", "backlinks_c.csv"};
    for (std::size_t k = 0; k < 3; ++k) {
        std::ofstream out(out_dir / parts[k], std::ios::binary);
        colink::csv::write_row(out, {"source_url", "target_project", "provider_country", "crawl_date"});
        for (std::size_t i = k; i < rows.size(); i += 3)
            colink::csv::write_row(out, rows[i]);
    }

    {
        std::ofstream out(out_dir / "portfolio.csv", std::ios::binary);
        colink::csv::write_row(out, {"project_id", "root_domain", "start_date", "end_date", "title"});
        for (const auto& p : projects) {
            const sys_days end = sys_days{p.start} + days{365 * 3};
            const std::string end_text = end < sys_days{snapshot} ? colink::format_date(Date{end}) : "";
            colink::csv::write_row(out, {p.id, p.domain, colink::format_date(p.start), end_text,
                                         "Synthetic project " + p.id + ", topic " + std::to_string(p.topic + 1)});
        }
    }
    {
        std::ofstream out(out_dir / "planted_projects.csv", std::ios::binary);
        colink::csv::write_row(out, {"project_id", "topic"});
        for (const auto& p : projects)
            colink::csv::write_row(out, {p.id, std::to_string(p.topic + 1)});
    }
    {
        std::ofstream out(out_dir / "planted_domains.csv", std::ios::binary);
        colink::csv::write_row(out, {"referring_domain", "topic"});
        std::vector<std::pair<std::string, int>> sorted;
        for (const auto& r : referrers)
            sorted.emplace_back(r.domain, r.topic + 1);
        std::sort(sorted.begin(), sorted.end());
        for (const auto& [d, t] : sorted)
            colink::csv::write_row(out, {d, std::to_string(t)});
    }
    {
        std::ofstream out(out_dir / "config.ini", std::ios::binary);
        out << "# Synthetic portfolio pipeline configuration.\n"
               "portfolio_file = portfolio.csv\n"
               "snapshot_date = 2021-01-13\n"
               "suffix_rules = ../suffix_rules.txt\n"
               "allowlist = ../allowlist.txt\n"
               "tld_country_map = ../country_tld.csv\n"
               "backlink_csv = backlinks_a.csv, backlinks_b.csv, backlinks_c.csv\n"
               "banned_tlds = com\n"
               "cluster_resolution = 1.0\n"
               "cluster_seed = 42\n"
               "cluster_restarts = 10\n"
               "output_dir = out\n";
    }
    std::cout << "wrote " << rows.size() << " backlink rows for " << projects.size() << " projects to " << out_dir
              << '\n';
    return 0;
}
