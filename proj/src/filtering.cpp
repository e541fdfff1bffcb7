#include "colink/filtering.hpp"
#include "colink/error.hpp"

#include <algorithm>
#include <fstream>
#include <map>

namespace colink {

void CountryAllowlist::add_country(std::string_view code)
{
    if (code.size() != 2 || !std::all_of(code.begin(), code.end(), [](char c) { return c >= 'A' && c <= 'Z'; }))
        throw Error(Errc::invalid_config, "allowlist country '" + std::string(code) + "' must be two uppercase letters");
    codes.emplace(code);
}

void CountryAllowlist::add_tld(std::string_view tld)
{
    if (tld.empty() || tld.front() == '.' || tld.back() == '.'
        || std::any_of(tld.begin(), tld.end(), [](char c) { return c >= 'A' && c <= 'Z'; }))
        throw Error(Errc::invalid_config, "allowlist TLD '" + std::string(tld) + "' must be lowercase without dots at the ends");
    extra_tlds.emplace(tld);
}

CountryAllowlist load_allowlist(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(Errc::file_not_found, "cannot open allowlist " + path.string());
    CountryAllowlist allow;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line.erase(0, line.find_first_not_of(" \t\r"));
        line.erase(line.find_last_not_of(" \t\r") + 1);
        if (line.empty())
            continue;
        const auto where = path.string() + ":" + std::to_string(lineno) + ": ";
        try {
            if (line.rfind("country:", 0) == 0)
                allow.add_country(line.substr(8));
            else if (line.rfind("tld:", 0) == 0)
                allow.add_tld(line.substr(4));
            else
                throw Error(Errc::invalid_config, "expected 'country:XX' or 'tld:xx'");
        } catch (const Error& e) {
            throw Error(Errc::invalid_config, where + e.what());
        }
    }
    return allow;
}

bool passes_country_filter(const LinkRelation& r, const CountryAllowlist& allow, const CountryTldTable& tld_map)
{
    if (r.country && allow.codes.count(*r.country))
        return true;
    if (auto c = country_of_tld(r.referring_tld, tld_map); c && allow.codes.count(*c))
        return true;
    return allow.extra_tlds.count(r.referring_tld) != 0;
}

RelationSet filter_by_country(const RelationSet& relations, const CountryAllowlist& allow,
                              const CountryTldTable& tld_map)
{
    RelationSet out;
    for (const auto& r : relations)
        if (passes_country_filter(r, allow, tld_map))
            out.insert(r);
    return out;
}

RelationSet exclude_tlds(const RelationSet& relations, const std::set<std::string, std::less<>>& banned)
{
    RelationSet out;
    for (const auto& r : relations)
        if (!banned.count(r.referring_tld))
            out.insert(r);
    return out;
}

std::vector<std::pair<std::string, std::vector<std::string>>> duplicate_portfolio_domains(const Portfolio& portfolio)
{
    std::map<std::string, std::vector<std::string>> owners;
    for (const auto& p : portfolio.projects())
        owners[p.root_domain].push_back(p.project_id);
    std::vector<std::pair<std::string, std::vector<std::string>>> dups;
    for (auto& [domain, ids] : owners)
        if (ids.size() > 1)
            dups.emplace_back(domain, std::move(ids));
    return dups;
}

std::vector<ClassifiedRelation> classify_relations(const RelationSet& relations, const Portfolio& portfolio)
{
    std::map<std::string_view, std::string_view> owner;
    for (const auto& p : portfolio.projects()) {
        auto [it, added] = owner.emplace(p.root_domain, p.project_id);
        if (!added)
            throw Error(Errc::duplicate_portfolio_domain, "projects '" + std::string(it->second) + "' and '"
                                                              + p.project_id + "' share root domain '" + p.root_domain
                                                              + "'");
    }
    std::vector<ClassifiedRelation> out;
    out.reserve(relations.size());
    for (const auto& r : relations) {
        auto it = owner.find(r.referring_domain);
        bool internal = it != owner.end() && it->second != r.project_id;
        out.push_back({r, internal ? Origin::internal : Origin::external});
    }
    return out;
}

} // namespace colink
