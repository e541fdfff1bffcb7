#pragma once

#include "colink/date.hpp"
#include "colink/domain.hpp"
#include "colink/filtering.hpp"
#include "colink/ingestion.hpp"
#include "colink/metrics.hpp"
#include "colink/provider.hpp"
#include "colink/snapshot.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace colink {

struct ProviderSettings {
    std::string base_url;
    std::string credential_env = "COLINK_PROVIDER_TOKEN";
    std::size_t page_size = 1000;
    int retry_cap = 5;
    std::size_t workers = 4;
};

struct PipelineConfig {
    std::filesystem::path portfolio_file;
    std::optional<Date> snapshot_date;
    std::filesystem::path suffix_rules;
    std::filesystem::path allowlist;
    std::filesystem::path tld_country_map;
    std::set<std::string, std::less<>> banned_tlds{"com"};
    std::vector<std::filesystem::path> backlink_csv;
    std::optional<ProviderSettings> provider;
    double cluster_resolution = 1.0;
    std::uint64_t cluster_seed = 42;
    unsigned cluster_restarts = 10;
    std::filesystem::path output_dir = "colink-out";
};

// Defaults with the bundled rule, allowlist and TLD tables. The
// COLINK_DATA_DIR environment variable overrides the bundled location.
PipelineConfig default_config();

// `key = value` lines, '#' comments. Relative paths are resolved against the
// directory holding the file. Throws Error(file_not_found) or
// Error(invalid_config).
PipelineConfig load_config(const std::filesystem::path& path);

// Applies one `key = value` setting; `base` anchors relative paths.
void apply_setting(PipelineConfig& config, std::string_view key, std::string_view value,
                   const std::filesystem::path& base);

struct PipelineInputs {
    Portfolio portfolio;
    SuffixRuleSet rules;
    CountryAllowlist allowlist;
    CountryTldTable tld_map;
};

PipelineInputs load_inputs(const PipelineConfig& config);

// Every problem found, not just the first; empty means the config is usable.
std::vector<std::string> validate_config(const PipelineConfig& config);

struct IngestOutcome {
    ImportStats stats;
    SnapshotManifest manifest;
    std::size_t provider_retries = 0;
};

std::filesystem::path snapshot_dir(const PipelineConfig& config);

// Reads CSV exports and/or queries the provider, then writes the snapshot.
IngestOutcome run_ingest(const PipelineConfig& config, const std::vector<std::filesystem::path>& csv_sources,
                         bool fetch, Sleeper sleeper = {});

struct NetworkOutcome {
    std::string name;
    bool written = false;
    std::size_t nodes = 0;
    std::size_t edges = 0;
    std::uint32_t clusters = 0;
    double quality = 0;
};

struct AnalyzeOutcome {
    PortfolioSummary summary;
    std::vector<NetworkOutcome> networks;
};

inline constexpr const char* run_manifest_file = "run_manifest.json";
inline constexpr const char* run_timestamp_file = "run_timestamp.txt";

// Country filter, classification, metrics, the three networks, clustering
// and every export. Output bytes depend only on inputs and parameters,
// apart from run_timestamp.txt.
AnalyzeOutcome run_analyze(const PipelineConfig& config);

// Entry point for the `colink` executable. Exit codes: 0 ok, 1 usage,
// 2 config, 3 io, 4 provider.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace colink
