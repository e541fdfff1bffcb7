#pragma once

#include "colink/date.hpp"
#include "colink/filtering.hpp"
#include "colink/ingestion.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace colink {

struct ProjectMetrics {
    std::string project_id;
    std::size_t total_referrers = 0;
    std::size_t internal_referrers = 0;
    // nullopt when the project has no referrers at all.
    std::optional<double> internal_share;
    std::int64_t age_days = 0;

    friend bool operator==(const ProjectMetrics&, const ProjectMetrics&) = default;
};

// Whole days from start to snapshot. Negative spans are clamped to 0 with
// a warning.
std::int64_t project_age_days(Date start, Date snapshot);

// One entry per portfolio project in project_id order, including projects
// without any relation.
std::vector<ProjectMetrics> compute_project_metrics(const std::vector<ClassifiedRelation>& classified,
                                                    const Portfolio& portfolio, Date snapshot);

struct TldCount {
    std::string suffix;
    std::size_t distinct_domains = 0;

    friend bool operator==(const TldCount&, const TldCount&) = default;
};

// Sorted by count descending, then suffix ascending.
struct TldFrequency {
    std::vector<TldCount> rows;

    friend bool operator==(const TldFrequency&, const TldFrequency&) = default;
};

// Counts distinct referring domains per suffix; a domain linking several
// projects is counted once.
TldFrequency tld_frequency(const RelationSet& relations);

// Average ranks (1-based) with ties sharing the mean of their positions.
std::vector<double> average_ranks(std::span<const double> values);

// Pearson correlation of average ranks. Throws Error(length_mismatch) when
// sizes differ or n < 2, and Error(degenerate_input) for a constant or
// non-finite vector.
double spearman_rank_correlation(std::span<const double> xs, std::span<const double> ys);

struct PortfolioSummary {
    std::size_t project_count = 0;
    std::size_t undefined_share_count = 0;
    // Mean and max over projects with a defined share.
    std::optional<double> mean_internal_share;
    std::optional<double> max_internal_share;
    std::string max_internal_share_project;
    // Projects not referred to by any other portfolio project.
    std::size_t zero_internal_count = 0;
    std::size_t total_relations = 0;
    std::size_t internal_relations = 0;
    // Age in days against total referrers over all projects; nullopt when
    // degenerate (fewer than two projects or a constant vector).
    std::optional<double> spearman_age_vs_referrers;

    friend bool operator==(const PortfolioSummary&, const PortfolioSummary&) = default;
};

PortfolioSummary summarize(const std::vector<ProjectMetrics>& metrics);

} // namespace colink
