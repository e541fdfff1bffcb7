#include "colink/csv.hpp"
#include "colink/date.hpp"
#include "colink/error.hpp"
#include "colink/ingestion.hpp"
#include "colink/snapshot.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

using namespace colink;
using colink::testing::TempDir;
using colink::testing::write_file;

namespace {

const char* backlink_header = "source_url,target_project,provider_country,crawl_date\n";

Portfolio small_portfolio()
{
    Portfolio p;
    p.add({"P", "proj-p.eu", parse_date("2018-01-01"), std::nullopt, "Project P"});
    p.add({"Q", "proj-q.eu", parse_date("2019-06-01"), parse_date("2020-06-01"), "Project Q"});
    return p;
}

std::set<std::pair<std::string, std::string>> pairs_of(const RelationSet& set)
{
    std::set<std::pair<std::string, std::string>> out;
    for (const auto& r : set)
        out.emplace(r.referring_domain, r.project_id);
    return out;
}

} // namespace

TEST_CASE("dates parse strictly and format back")
{
    CHECK(format_date(parse_date("2021-01-13")) == "2021-01-13");
    CHECK(format_date(parse_date("2020-02-29")) == "2020-02-29");
    CHECK_THROWS_AS(parse_date("2021-02-29"), Error);
    CHECK_THROWS_AS(parse_date("2021-1-13"), Error);
    CHECK_THROWS_AS(parse_date("13/01/2021"), Error);
    CHECK_THROWS_AS(parse_date(""), Error);
}

TEST_CASE("csv reader handles quoting, CRLF and BOM")
{
    std::istringstream in("\xEF\xBB\xBF" "a,b\r\n\"x, y\",\"say \"\"hi\"\"\"\n\"multi\nline\",z\n,\n");
    csv::Reader r(in);
    CHECK(*r.next() == csv::Row{"a", "b"});
    CHECK(*r.next() == csv::Row{"x, y", "say \"hi\""});
    CHECK(*r.next() == csv::Row{"multi\nline", "z"});
    CHECK(r.line() == 3);
    CHECK(*r.next() == csv::Row{"", ""});
    CHECK_FALSE(r.next());

    CHECK(csv::join({"plain", "a,b", "q\"q"}) == "plain,\"a,b\",\"q\"\"q\"");

    std::istringstream bad("\"open,field\n");
    csv::Reader rb(bad);
    CHECK_THROWS_AS(rb.next(), Error);
}

TEST_CASE("portfolio loading")
{
    TempDir tmp;
    const SuffixRuleSet rules;
    write_file(tmp / "ok.csv", "project_id,root_domain,start_date,end_date,title\n"
                               "b,Proj-B.eu,2016-03-01,2019-02-28,\"B, the second\"\n"
                               "a,proj-a.org,2015-01-13,,A\n");
    auto portfolio = load_portfolio(tmp / "ok.csv", rules);
    REQUIRE(portfolio.size() == 2);
    CHECK(portfolio.projects()[0].project_id == "a");
    CHECK(portfolio.find("b")->root_domain == "proj-b.eu");
    CHECK(portfolio.find("b")->title == "B, the second");
    CHECK(portfolio.find("b")->end_date == parse_date("2019-02-28"));
    CHECK_FALSE(portfolio.find("a")->end_date);
    CHECK(portfolio.find("zzz") == nullptr);

    auto code = [&](const std::string& body) {
        write_file(tmp / "x.csv", body);
        try {
            load_portfolio(tmp / "x.csv", rules);
        } catch (const Error& e) {
            return e.code();
        }
        return Errc::io_error;
    };
    const std::string header = "project_id,root_domain,start_date,end_date,title\n";
    CHECK(code("id,domain\n") == Errc::schema_mismatch);
    CHECK(code(header + "a,a.eu,2020-01-01,,A\na,b.eu,2020-01-01,,B\n") == Errc::invalid_config);
    CHECK(code(header + "a,a.eu,2020-01-01,2019-01-01,A\n") == Errc::invalid_config);
    CHECK(code(header + "a,www.a.eu,2020-01-01,,A\n") == Errc::invalid_config);
    CHECK(code(header + "a,a.eu,2020-13-01,,A\n") == Errc::invalid_config);
    CHECK(code(header + ",a.eu,2020-01-01,,A\n") == Errc::invalid_config);
    CHECK_THROWS_AS(load_portfolio(tmp / "nope.csv", rules), Error);
}

TEST_CASE("import collapses backlinks to one relation per referring domain and project")
{
    TempDir tmp;
    write_file(tmp / "b.csv", std::string(backlink_header) + "https://a.org/x,P,,\nhttps://a.org/y,P,,\nhttp://a.org,P,,\n");
    auto result = import_backlinks_csv(tmp / "b.csv", small_portfolio(), SuffixRuleSet{});
    REQUIRE(result.relations.size() == 1);
    const auto& r = *result.relations.begin();
    CHECK(r.referring_domain == "a.org");
    CHECK(r.referring_tld == "org");
    CHECK(r.project_id == "P");
    CHECK(result.stats.rows_read == 3);
    CHECK(result.stats.rows_rejected == 0);
    CHECK(result.stats.relations_emitted == 1);
    CHECK(result.stats.dedup_ratio() == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("import of a header-only file")
{
    TempDir tmp;
    write_file(tmp / "e.csv", backlink_header);
    auto result = import_backlinks_csv(tmp / "e.csv", small_portfolio(), SuffixRuleSet{});
    CHECK(result.relations.empty());
    CHECK(result.stats.rows_read == 0);
    CHECK(result.stats.rows_rejected == 0);
}

TEST_CASE("import matches a set-of-pairs oracle and counts bad rows")
{
    TempDir tmp;
    const std::vector<std::pair<std::string, std::string>> rows{
        {"https://www.alpha.de/page", "P"}, {"http://alpha.de", "Q"}, {"https://news.beta.nl/x?y", "P"},
        {"mailto:someone@beta.nl", "Q"},    {"https://beta.nl/", "P"},
    };
    std::string body = backlink_header;
    for (const auto& [url, project] : rows)
        body += url + "," + project + ",,\n";
    write_file(tmp / "f.csv", body);
    auto result = import_backlinks_csv(tmp / "f.csv", small_portfolio(), SuffixRuleSet{});

    // Oracle: take the last two labels of every parseable host by hand.
    std::set<std::pair<std::string, std::string>> expected;
    for (const auto& [url, project] : rows) {
        if (url.rfind("mailto:", 0) == 0)
            continue;
        auto host = url.substr(url.find("//") + 2);
        host = host.substr(0, host.find_first_of("/?"));
        auto last = host.rfind('.');
        auto prev = host.rfind('.', last - 1);
        expected.emplace(prev == std::string::npos ? host : host.substr(prev + 1), project);
    }
    CHECK(pairs_of(result.relations) == expected);
    CHECK(expected.size() == 3);
    CHECK(result.stats.rows_read == 5);
    CHECK(result.stats.rows_rejected == 1);
}

TEST_CASE("import drops self-links and rejects bad rows without aborting")
{
    TempDir tmp;
    write_file(tmp / "g.csv", std::string(backlink_header)
                                  + "https://www.proj-p.eu/news,P,,\n"   // self-link
                                  + "https://proj-p.eu/partners,Q,,\n"   // internal, kept
                                  + "https://x.org/,UNKNOWN,,\n"         // unknown project
                                  + "https://x.org/,P,Germany,\n"        // bad country
                                  + "https://x.org/,P,de,2021-02-30\n"   // bad date
                                  + "https://x.org/,P,de\n"              // wrong field count
                                  + "https://y.org/,P,de,2021-01-13\n"); // ok
    auto result = import_backlinks_csv(tmp / "g.csv", small_portfolio(), SuffixRuleSet{});
    CHECK(result.stats.rows_read == 7);
    CHECK(result.stats.self_links_dropped == 1);
    CHECK(result.stats.rows_rejected == 4);
    CHECK(result.relations.size() == 2);
    CHECK(result.relations.contains("proj-p.eu", "Q"));
    CHECK_FALSE(result.relations.contains("proj-p.eu", "P"));
    for (const auto& r : result.relations)
        if (r.referring_domain == "y.org")
            CHECK(r.country == "DE");
}

TEST_CASE("import file and schema errors")
{
    TempDir tmp;
    CHECK_THROWS_AS(import_backlinks_csv(tmp / "none.csv", small_portfolio(), SuffixRuleSet{}), Error);
    write_file(tmp / "h.csv", "url,project\nhttps://a.org,P\n");
    try {
        import_backlinks_csv(tmp / "h.csv", small_portfolio(), SuffixRuleSet{});
        FAIL("expected schema mismatch");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::schema_mismatch);
    }
}

TEST_CASE("import is idempotent under duplication and independent of row order")
{
    TempDir tmp;
    std::mt19937_64 rng(3);
    const std::vector<std::string> domains{"a.org", "b.de", "c.nl", "d.eu", "e.com", "proj-p.eu"};
    std::vector<std::string> rows;
    for (int i = 0; i < 60; ++i) {
        const auto& d = domains[rng() % domains.size()];
        std::string country = (rng() % 3 == 0) ? std::string(1, static_cast<char>('A' + rng() % 3)) + "T" : "";
        rows.push_back("https://www." + d + "/p" + std::to_string(i) + "," + (rng() % 2 ? "P" : "Q") + "," + country
                       + ",\n");
    }
    auto body = [&](const std::vector<std::string>& rs) {
        std::string b = backlink_header;
        for (const auto& r : rs)
            b += r;
        return b;
    };
    write_file(tmp / "once.csv", body(rows));
    auto doubled = rows;
    doubled.insert(doubled.end(), rows.begin(), rows.end());
    write_file(tmp / "twice.csv", body(doubled));
    auto shuffled = rows;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    write_file(tmp / "shuffled.csv", body(shuffled));

    const auto portfolio = small_portfolio();
    auto once = import_backlinks_csv(tmp / "once.csv", portfolio, SuffixRuleSet{}).relations;
    CHECK(import_backlinks_csv(tmp / "twice.csv", portfolio, SuffixRuleSet{}).relations == once);
    CHECK(import_backlinks_csv(tmp / "shuffled.csv", portfolio, SuffixRuleSet{}).relations == once);
    for (const auto& r : once)
        CHECK(r.referring_domain != portfolio.find(r.project_id)->root_domain);
}

TEST_CASE("relation set keeps the smallest country whatever the arrival order")
{
    RelationSet a, b;
    a.insert({"x.org", "org", "P", std::nullopt});
    a.insert({"x.org", "org", "P", "NL"});
    a.insert({"x.org", "org", "P", "DE"});
    b.insert({"x.org", "org", "P", "DE"});
    b.insert({"x.org", "org", "P", "NL"});
    b.insert({"x.org", "org", "P", std::nullopt});
    CHECK(a == b);
    CHECK(a.begin()->country == "DE");

    RelationSet m1 = a, m2 = b;
    RelationSet extra;
    extra.insert({"y.org", "org", "Q", std::nullopt});
    m1.merge(extra);
    extra.merge(m2);
    CHECK(m1 == extra);
}

TEST_CASE("snapshot store round-trips deterministically")
{
    RelationSet set;
    const std::vector<LinkRelation> fixture{
        {"a.org", "org", "P", std::nullopt}, {"a.org", "org", "Q", "NL"}, {"b.de", "de", "P", std::nullopt},
        {"c.co.uk", "co.uk", "Q", "GB"},     {"d.eu", "eu", "P", "BE"},   {"e.com", "com", "Q", "US"},
        {"f.nl", "nl", "P", std::nullopt},
    };
    // Insert in reverse to show the file order does not follow insertion.
    for (auto it = fixture.rbegin(); it != fixture.rend(); ++it)
        set.insert(*it);

    TempDir tmp;
    const auto date = parse_date("2021-01-13");
    auto m1 = write_snapshot(set, date, tmp / "s1");
    auto m2 = write_snapshot(set, date, tmp / "s2");
    CHECK(m1.relation_count == 7);
    CHECK(m1.domain_count == 6);
    CHECK(m1.project_count == 2);
    CHECK(m1.relations_sha256 == m2.relations_sha256);
    CHECK(colink::testing::read_file(tmp / "s1" / "relations.csv") == colink::testing::read_file(tmp / "s2" / "relations.csv"));
    CHECK(colink::testing::read_file(tmp / "s1" / "manifest.json") == colink::testing::read_file(tmp / "s2" / "manifest.json"));

    auto text = colink::testing::read_file(tmp / "s1" / "relations.csv");
    CHECK(text.rfind("referring_domain,referring_tld,project_id,country\na.org,org,P,\na.org,org,Q,NL\n", 0) == 0);

    auto snap = read_snapshot(tmp / "s1");
    CHECK(snap.relations == set);
    CHECK(snap.manifest == m1);

    write_file(tmp / "s1" / "relations.csv", text + "z.org,org,P,\n");
    try {
        read_snapshot(tmp / "s1");
        FAIL("expected digest mismatch");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::io_error);
    }
    try {
        read_snapshot(tmp / "absent");
        FAIL("expected missing snapshot");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::file_not_found);
    }
}
