#include "colink/snapshot.hpp"
#include "colink/csv.hpp"
#include "colink/digest.hpp"
#include "colink/error.hpp"
#include "fs_util.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace colink {

namespace fs = std::filesystem;


std::string render_relations_csv(const RelationSet& relations)
{
    std::ostringstream out;
    csv::write_row(out, {"referring_domain", "referring_tld", "project_id", "country"});
    for (const auto& r : relations)
        csv::write_row(out, {r.referring_domain, r.referring_tld, r.project_id, r.country.value_or("")});
    return out.str();
}

SnapshotManifest write_snapshot(const RelationSet& relations, Date snapshot_date, const fs::path& dir)
{
    detail::ensure_directory(dir);

    const auto body = render_relations_csv(relations);
    std::set<std::string_view> domains, projects;
    for (const auto& r : relations) {
        domains.insert(r.referring_domain);
        projects.insert(r.project_id);
    }

    SnapshotManifest manifest{snapshot_date, relations.size(), domains.size(), projects.size(), sha256_hex(body)};
    nlohmann::ordered_json doc;
    doc["snapshot_date"] = format_date(snapshot_date);
    doc["relation_count"] = manifest.relation_count;
    doc["domain_count"] = manifest.domain_count;
    doc["project_count"] = manifest.project_count;
    doc["relations_file"] = snapshot_relations_file;
    doc["relations_sha256"] = manifest.relations_sha256;

    detail::write_text_file(dir / snapshot_relations_file, body);
    detail::write_text_file(dir / snapshot_manifest_file, doc.dump(2) + "\n");
    return manifest;
}

Snapshot read_snapshot(const fs::path& dir)
{
    const auto manifest_path = dir / snapshot_manifest_file;
    const auto relations_path = dir / snapshot_relations_file;
    std::ifstream min(manifest_path);
    if (!min)
        throw Error(Errc::file_not_found, "snapshot manifest not found: " + manifest_path.string());

    Snapshot snap;
    try {
        auto doc = nlohmann::json::parse(min);
        snap.manifest.snapshot_date = parse_date(doc.at("snapshot_date").get<std::string>());
        snap.manifest.relation_count = doc.at("relation_count").get<std::size_t>();
        snap.manifest.domain_count = doc.at("domain_count").get<std::size_t>();
        snap.manifest.project_count = doc.at("project_count").get<std::size_t>();
        snap.manifest.relations_sha256 = doc.at("relations_sha256").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::io_error, "malformed snapshot manifest " + manifest_path.string() + ": " + e.what());
    }

    if (!fs::exists(relations_path))
        throw Error(Errc::file_not_found, "snapshot relations not found: " + relations_path.string());
    if (sha256_file(relations_path) != snap.manifest.relations_sha256)
        throw Error(Errc::io_error, "snapshot digest mismatch for " + relations_path.string());

    std::ifstream in(relations_path);
    csv::Reader reader(in);
    auto header = reader.next();
    if (!header || *header != csv::Row{"referring_domain", "referring_tld", "project_id", "country"})
        throw Error(Errc::schema_mismatch, relations_path.string() + ": unexpected header");
    while (auto row = reader.next()) {
        if (row->size() != 4)
            throw Error(Errc::io_error, relations_path.string() + ":" + std::to_string(reader.line())
                                            + ": expected 4 fields");
        LinkRelation r{(*row)[0], (*row)[1], (*row)[2], std::nullopt};
        if (!(*row)[3].empty())
            r.country = (*row)[3];
        snap.relations.insert(std::move(r));
    }
    if (snap.relations.size() != snap.manifest.relation_count)
        throw Error(Errc::io_error, "snapshot relation count disagrees with manifest");
    return snap;
}

} // namespace colink
