#pragma once

#include "colink/clustering.hpp"
#include "colink/metrics.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace colink {

struct DocumentNode {
    std::uint32_t id = 0; // 1-based, contiguous
    std::string label;
    std::uint32_t cluster = 0;
    std::uint64_t weight = 0; // sum of incident edge strengths

    friend bool operator==(const DocumentNode&, const DocumentNode&) = default;
};

struct DocumentEdge {
    std::uint32_t a = 0; // a < b
    std::uint32_t b = 0;
    std::uint64_t strength = 0;

    friend bool operator==(const DocumentEdge&, const DocumentEdge&) = default;
};

struct NetworkDocument {
    std::vector<DocumentNode> nodes;
    std::vector<DocumentEdge> edges;

    friend bool operator==(const NetworkDocument&, const NetworkDocument&) = default;
};

// Nodes numbered from 1 in label order; edges sorted with the lower id first.
NetworkDocument to_network_document(const ClusteredNetwork& network);

// Inverse of the structural part of to_network_document.
CoOccurrenceMatrix to_matrix(const NetworkDocument& doc);

// Throws Error(invalid_record) when ids, labels or edges break the
// document invariants.
void check_document(const NetworkDocument& doc);

// VOSviewer map file: header `id<TAB>label<TAB>cluster<TAB>weight<Links>`,
// one row per node. Network file: headerless `id<TAB>id<TAB>strength` rows.
// Labels containing tab, CR or LF throw Error(invalid_label).
void write_vosviewer(const NetworkDocument& doc, const std::filesystem::path& map_path,
                     const std::filesystem::path& network_path);

NetworkDocument read_vosviewer(const std::filesystem::path& map_path, const std::filesystem::path& network_path);

// Pajek .net with `*Vertices n`, quoted labels and an `*Edges` section of
// `a b w` lines. Labels with a double quote, CR or LF are rejected with
// Error(invalid_label); Pajek has no escape for embedded quotes.
void write_pajek(const NetworkDocument& doc, const std::filesystem::path& path);

// Pajek partition (.clu): `*Vertices n` followed by one cluster per line.
void write_pajek_partition(const NetworkDocument& doc, const std::filesystem::path& path);

// Reads a .net written by write_pajek (and optionally its .clu). Node
// weights are recomputed from the edges; clusters stay 0 without a
// partition file.
NetworkDocument read_pajek(const std::filesystem::path& net_path,
                           const std::optional<std::filesystem::path>& partition_path = std::nullopt);

inline constexpr const char* metrics_csv_file = "metrics.csv";
inline constexpr const char* summary_json_file = "summary.json";
inline constexpr const char* tld_frequency_file = "tld_frequency.csv";

// metrics.csv, summary.json and tld_frequency.csv under dir.
void write_reports(const std::vector<ProjectMetrics>& metrics, const TldFrequency& tld_table,
                   const std::filesystem::path& dir);

std::string render_metrics_csv(const std::vector<ProjectMetrics>& metrics);
std::string render_summary_json(const PortfolioSummary& summary);
std::string render_tld_frequency_csv(const TldFrequency& table);

std::vector<ProjectMetrics> read_metrics_csv(const std::filesystem::path& path);
TldFrequency read_tld_frequency_csv(const std::filesystem::path& path);

// Shortest decimal text that parses back to the same double.
std::string format_real(double value);

} // namespace colink
