#pragma once

#include "colink/domain.hpp"
#include "colink/ingestion.hpp"

#include <filesystem>
#include <set>
#include <string>
#include <vector>

namespace colink {

struct CountryAllowlist {
    std::set<std::string, std::less<>> codes;      // uppercase ISO alpha-2
    std::set<std::string, std::less<>> extra_tlds; // lowercase suffixes

    // Throw Error(invalid_config) on malformed values.
    void add_country(std::string_view code);
    void add_tld(std::string_view tld);
};

// Lines `country:XX` or `tld:xx`; '#' comments and blank lines ignored.
CountryAllowlist load_allowlist(const std::filesystem::path& path);

// Keeps a relation when its provider country is allowed, when the country
// implied by its TLD is allowed, or when the TLD itself is an extra TLD.
bool passes_country_filter(const LinkRelation& relation, const CountryAllowlist& allow,
                           const CountryTldTable& tld_map);

RelationSet filter_by_country(const RelationSet& relations, const CountryAllowlist& allow,
                              const CountryTldTable& tld_map);

RelationSet exclude_tlds(const RelationSet& relations, const std::set<std::string, std::less<>>& banned);

enum class Origin { internal, external };

struct ClassifiedRelation {
    LinkRelation relation;
    Origin origin;
};

// Internal means the referring domain is another portfolio project's site.
// Throws Error(duplicate_portfolio_domain) when two projects share a root.
std::vector<ClassifiedRelation> classify_relations(const RelationSet& relations, const Portfolio& portfolio);

// Every (root_domain, [project_id...]) that is claimed by more than one project.
std::vector<std::pair<std::string, std::vector<std::string>>> duplicate_portfolio_domains(const Portfolio& portfolio);

} // namespace colink
