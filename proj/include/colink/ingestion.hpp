#pragma once

#include "colink/date.hpp"
#include "colink/domain.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace colink {

struct ProjectSite {
    std::string project_id;
    std::string root_domain;
    Date start_date;
    std::optional<Date> end_date;
    std::string title;
};

// Projects keyed and ordered by project_id.
class Portfolio {
public:
    Portfolio() = default;

    // Throws Error(invalid_config) on an empty or repeated project_id, or an
    // end date before the start date. Repeated root domains are accepted here
    // and reported by classify_relations / validation.
    void add(ProjectSite site);

    const ProjectSite* find(std::string_view project_id) const;

    const std::vector<ProjectSite>& projects() const noexcept { return projects_; }
    std::size_t size() const noexcept { return projects_.size(); }
    bool empty() const noexcept { return projects_.empty(); }

private:
    std::vector<ProjectSite> projects_;
};

// CSV `project_id,root_domain,start_date,end_date,title`. Each root_domain
// must be the registrable domain of itself under `rules`.
Portfolio load_portfolio(const std::filesystem::path& path, const SuffixRuleSet& rules);

struct BacklinkRecord {
    std::string source_url;
    std::string target_project;
    std::optional<std::string> provider_country;
    std::optional<Date> crawl_date;
};

struct LinkRelation {
    std::string referring_domain;
    std::string referring_tld;
    std::string project_id;
    std::optional<std::string> country;

    friend bool operator==(const LinkRelation&, const LinkRelation&) = default;
};

// Relations unique on (referring_domain, project_id), iterated in that order.
// When the same pair arrives with different country metadata the smallest
// non-empty code is kept, so the merged set never depends on arrival order.
class RelationSet {
public:
    using Key = std::pair<std::string, std::string>;
    using Map = std::map<Key, LinkRelation>;

    // Returns true when a new pair was added.
    bool insert(LinkRelation relation);
    void merge(const RelationSet& other);

    std::size_t size() const noexcept { return map_.size(); }
    bool empty() const noexcept { return map_.empty(); }
    bool contains(std::string_view domain, std::string_view project) const;

    auto begin() const { return ValueIterator{map_.begin()}; }
    auto end() const { return ValueIterator{map_.end()}; }

    friend bool operator==(const RelationSet& a, const RelationSet& b) { return a.map_ == b.map_; }

private:
    struct ValueIterator {
        Map::const_iterator it;
        using value_type = LinkRelation;
        using difference_type = std::ptrdiff_t;
        using reference = const LinkRelation&;
        using pointer = const LinkRelation*;
        using iterator_category = std::forward_iterator_tag;
        reference operator*() const { return it->second; }
        pointer operator->() const { return &it->second; }
        ValueIterator& operator++() { ++it; return *this; }
        ValueIterator operator++(int) { auto t = *this; ++it; return t; }
        friend bool operator==(const ValueIterator&, const ValueIterator&) = default;
    };

    Map map_;
};

struct ImportStats {
    std::size_t rows_read = 0;
    std::size_t rows_rejected = 0;
    std::size_t self_links_dropped = 0;
    std::size_t relations_emitted = 0;

    // Relations per accepted, non-self-link row (1.0 means no duplicates).
    double dedup_ratio() const noexcept;

    ImportStats& operator+=(const ImportStats& other);
};

// Builds the relation for a single backlink row, or nullopt for a self-link.
// Throws Error for unparseable URLs or unknown target projects.
std::optional<LinkRelation> relation_from_backlink(const BacklinkRecord& record, const Portfolio& portfolio,
                                                   const SuffixRuleSet& rules);

struct ImportResult {
    RelationSet relations;
    ImportStats stats;
};

// Reads a backlink export with header
// `source_url,target_project,provider_country,crawl_date`. Header problems
// throw Error(schema_mismatch); bad rows are counted in stats.rows_rejected.
ImportResult import_backlinks_csv(const std::filesystem::path& path, const Portfolio& portfolio,
                                  const SuffixRuleSet& rules);

} // namespace colink
