#include "colink/ingestion.hpp"
#include "colink/csv.hpp"
#include "colink/error.hpp"

#include <algorithm>
#include <fstream>

namespace colink {

namespace {

std::optional<std::string> normalize_country(std::string_view raw)
{
    if (raw.empty())
        return std::nullopt;
    if (raw.size() != 2 || !std::all_of(raw.begin(), raw.end(), [](char c) {
            return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
        }))
        throw Error(Errc::invalid_record, "country code '" + std::string(raw) + "' is not ISO alpha-2");
    std::string out(raw);
    for (char& c : out)
        if (c >= 'a' && c <= 'z')
            c = static_cast<char>(c - 'a' + 'A');
    return out;
}

} // namespace

// --- Portfolio -------------------------------------------------------------

void Portfolio::add(ProjectSite site)
{
    if (site.project_id.empty())
        throw Error(Errc::invalid_config, "project_id must not be empty");
    if (site.end_date && *site.end_date < site.start_date)
        throw Error(Errc::invalid_config, "project '" + site.project_id + "' ends before it starts");
    auto it = std::lower_bound(projects_.begin(), projects_.end(), site.project_id,
                               [](const ProjectSite& p, const std::string& id) { return p.project_id < id; });
    if (it != projects_.end() && it->project_id == site.project_id)
        throw Error(Errc::invalid_config, "duplicate project_id '" + site.project_id + "'");
    projects_.insert(it, std::move(site));
}

const ProjectSite* Portfolio::find(std::string_view project_id) const
{
    auto it = std::lower_bound(projects_.begin(), projects_.end(), project_id,
                               [](const ProjectSite& p, std::string_view id) { return p.project_id < id; });
    if (it != projects_.end() && it->project_id == project_id)
        return &*it;
    return nullptr;
}

Portfolio load_portfolio(const std::filesystem::path& path, const SuffixRuleSet& rules)
{
    std::ifstream in(path);
    if (!in)
        throw Error(Errc::file_not_found, "cannot open portfolio file " + path.string());
    csv::Reader reader(in);
    auto header = reader.next();
    if (!header || *header != csv::Row{"project_id", "root_domain", "start_date", "end_date", "title"})
        throw Error(Errc::schema_mismatch,
                    path.string() + ": expected header 'project_id,root_domain,start_date,end_date,title'");

    Portfolio portfolio;
    while (auto row = reader.next()) {
        const auto where = path.string() + ":" + std::to_string(reader.line()) + ": ";
        if (row->size() == 1 && (*row)[0].empty())
            continue;
        if (row->size() != 5)
            throw Error(Errc::invalid_config, where + "expected 5 fields");
        try {
            ProjectSite site;
            site.project_id = (*row)[0];
            auto host = normalize_host((*row)[1]);
            auto parsed = split_domain(host, rules);
            if (parsed.root_domain != host)
                throw Error(Errc::invalid_config, "root_domain '" + (*row)[1] + "' is not registrable (root is '"
                                                      + parsed.root_domain + "')");
            site.root_domain = parsed.root_domain;
            site.start_date = parse_date((*row)[2]);
            if (!(*row)[3].empty())
                site.end_date = parse_date((*row)[3]);
            site.title = (*row)[4];
            portfolio.add(std::move(site));
        } catch (const Error& e) {
            throw Error(Errc::invalid_config, where + e.what());
        }
    }
    return portfolio;
}

// --- RelationSet -----------------------------------------------------------

bool RelationSet::insert(LinkRelation relation)
{
    Key key{relation.referring_domain, relation.project_id};
    auto [it, added] = map_.try_emplace(std::move(key), relation);
    if (!added) {
        auto& kept = it->second.country;
        if (relation.country && (!kept || *relation.country < *kept))
            kept = relation.country;
    }
    return added;
}

void RelationSet::merge(const RelationSet& other)
{
    for (const auto& r : other)
        insert(r);
}

bool RelationSet::contains(std::string_view domain, std::string_view project) const
{
    return map_.count(Key{std::string(domain), std::string(project)}) != 0;
}

// --- import ---------------------------------------------------------------

double ImportStats::dedup_ratio() const noexcept
{
    const auto usable = rows_read - rows_rejected - self_links_dropped;
    return usable == 0 ? 1.0 : static_cast<double>(relations_emitted) / static_cast<double>(usable);
}

ImportStats& ImportStats::operator+=(const ImportStats& other)
{
    rows_read += other.rows_read;
    rows_rejected += other.rows_rejected;
    self_links_dropped += other.self_links_dropped;
    relations_emitted += other.relations_emitted;
    return *this;
}

std::optional<LinkRelation> relation_from_backlink(const BacklinkRecord& record, const Portfolio& portfolio,
                                                   const SuffixRuleSet& rules)
{
    const ProjectSite* project = portfolio.find(record.target_project);
    if (!project)
        throw Error(Errc::invalid_record, "unknown target project '" + record.target_project + "'");
    auto parsed = split_domain(normalize_host(record.source_url), rules);
    if (parsed.root_domain == project->root_domain)
        return std::nullopt;
    return LinkRelation{std::move(parsed.root_domain), std::move(parsed.public_suffix), project->project_id,
                        record.provider_country};
}

ImportResult import_backlinks_csv(const std::filesystem::path& path, const Portfolio& portfolio,
                                  const SuffixRuleSet& rules)
{
    std::ifstream in(path);
    if (!in)
        throw Error(Errc::file_not_found, "cannot open backlink file " + path.string());
    csv::Reader reader(in);
    auto header = reader.next();
    if (!header || *header != csv::Row{"source_url", "target_project", "provider_country", "crawl_date"})
        throw Error(Errc::schema_mismatch,
                    path.string() + ": expected header 'source_url,target_project,provider_country,crawl_date'");

    ImportResult result;
    auto& stats = result.stats;
    for (;;) {
        std::optional<csv::Row> row;
        try {
            row = reader.next();
        } catch (const Error&) {
            // Unterminated quote swallows the rest of the file.
            ++stats.rows_read;
            ++stats.rows_rejected;
            break;
        }
        if (!row)
            break;
        if (row->size() == 1 && (*row)[0].empty())
            continue;
        ++stats.rows_read;
        try {
            if (row->size() != 4)
                throw Error(Errc::invalid_record, "expected 4 fields");
            BacklinkRecord record{(*row)[0], (*row)[1], normalize_country((*row)[2]), std::nullopt};
            if (!(*row)[3].empty())
                record.crawl_date = parse_date((*row)[3]);
            if (auto relation = relation_from_backlink(record, portfolio, rules))
                result.relations.insert(std::move(*relation));
            else
                ++stats.self_links_dropped;
        } catch (const Error&) {
            ++stats.rows_rejected;
        }
    }
    stats.relations_emitted = result.relations.size();
    return result;
}

} // namespace colink
