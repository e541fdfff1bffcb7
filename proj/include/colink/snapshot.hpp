#pragma once

#include "colink/date.hpp"
#include "colink/ingestion.hpp"

#include <filesystem>
#include <string>

namespace colink {

inline constexpr const char* snapshot_relations_file = "relations.csv";
inline constexpr const char* snapshot_manifest_file = "manifest.json";

struct SnapshotManifest {
    Date snapshot_date;
    std::size_t relation_count = 0;
    std::size_t domain_count = 0;
    std::size_t project_count = 0;
    std::string relations_sha256;

    friend bool operator==(const SnapshotManifest&, const SnapshotManifest&) = default;
};

struct Snapshot {
    RelationSet relations;
    SnapshotManifest manifest;
};

// Serializes relations as CSV (`referring_domain,referring_tld,project_id,country`,
// rows in (domain, project) order) plus manifest.json. Output bytes depend
// only on the relation set and date. Throws Error(io_error).
SnapshotManifest write_snapshot(const RelationSet& relations, Date snapshot_date, const std::filesystem::path& dir);

// Throws Error(file_not_found) when either file is missing and
// Error(io_error) when the relation file does not match the manifest digest.
Snapshot read_snapshot(const std::filesystem::path& dir);

std::string render_relations_csv(const RelationSet& relations);

} // namespace colink
