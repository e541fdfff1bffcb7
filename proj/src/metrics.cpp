#include "colink/metrics.hpp"
#include "colink/error.hpp"
#include "colink/log.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace colink {

std::int64_t project_age_days(Date start, Date snapshot)
{
    auto days = (std::chrono::sys_days{snapshot} - std::chrono::sys_days{start}).count();
    if (days < 0) {
        warn("snapshot " + format_date(snapshot) + " precedes start date " + format_date(start)
             + "; age clamped to 0");
        return 0;
    }
    return days;
}

std::vector<ProjectMetrics> compute_project_metrics(const std::vector<ClassifiedRelation>& classified,
                                                    const Portfolio& portfolio, Date snapshot)
{
    std::map<std::string_view, std::pair<std::size_t, std::size_t>> counts;
    for (const auto& c : classified) {
        auto& [total, internal] = counts[c.relation.project_id];
        ++total;
        if (c.origin == Origin::internal)
            ++internal;
    }

    std::vector<ProjectMetrics> out;
    out.reserve(portfolio.size());
    for (const auto& p : portfolio.projects()) {
        ProjectMetrics m;
        m.project_id = p.project_id;
        if (auto it = counts.find(p.project_id); it != counts.end())
            std::tie(m.total_referrers, m.internal_referrers) = it->second;
        if (m.total_referrers > 0)
            m.internal_share = static_cast<double>(m.internal_referrers) / static_cast<double>(m.total_referrers);
        m.age_days = project_age_days(p.start_date, snapshot);
        out.push_back(std::move(m));
    }
    return out;
}

TldFrequency tld_frequency(const RelationSet& relations)
{
    std::map<std::string_view, std::set<std::string_view>> domains;
    for (const auto& r : relations)
        domains[r.referring_tld].insert(r.referring_domain);

    TldFrequency table;
    for (const auto& [suffix, set] : domains)
        table.rows.push_back({std::string(suffix), set.size()});
    std::stable_sort(table.rows.begin(), table.rows.end(), [](const TldCount& a, const TldCount& b) {
        return a.distinct_domains != b.distinct_domains ? a.distinct_domains > b.distinct_domains
                                                        : a.suffix < b.suffix;
    });
    return table;
}

std::vector<double> average_ranks(std::span<const double> values)
{
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });

    std::vector<double> ranks(values.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]])
            ++j;
        // Positions i..j (0-based) share rank mean(i+1 .. j+1).
        const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k)
            ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

double spearman_rank_correlation(std::span<const double> xs, std::span<const double> ys)
{
    if (xs.size() != ys.size())
        throw Error(Errc::length_mismatch, "spearman inputs differ in length (" + std::to_string(xs.size()) + " vs "
                                               + std::to_string(ys.size()) + ")");
    if (xs.size() < 2)
        throw Error(Errc::length_mismatch, "spearman needs at least two observations");
    auto finite = [](std::span<const double> v) { return std::all_of(v.begin(), v.end(), [](double d) { return std::isfinite(d); }); };
    if (!finite(xs) || !finite(ys))
        throw Error(Errc::degenerate_input, "spearman inputs must be finite");

    const auto rx = average_ranks(xs);
    const auto ry = average_ranks(ys);
    // Mean rank is (n+1)/2 regardless of ties.
    const double mean = 0.5 * static_cast<double>(xs.size() + 1);
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        const double dx = rx[i] - mean, dy = ry[i] - mean;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0 || syy == 0)
        throw Error(Errc::degenerate_input, "spearman input vector is constant");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

PortfolioSummary summarize(const std::vector<ProjectMetrics>& metrics)
{
    PortfolioSummary s;
    s.project_count = metrics.size();
    double sum = 0;
    std::size_t defined = 0;
    for (const auto& m : metrics) {
        s.total_relations += m.total_referrers;
        s.internal_relations += m.internal_referrers;
        if (m.internal_referrers == 0)
            ++s.zero_internal_count;
        if (!m.internal_share) {
            ++s.undefined_share_count;
            continue;
        }
        ++defined;
        sum += *m.internal_share;
        if (!s.max_internal_share || *m.internal_share > *s.max_internal_share) {
            s.max_internal_share = m.internal_share;
            s.max_internal_share_project = m.project_id;
        }
    }
    if (defined > 0)
        s.mean_internal_share = sum / static_cast<double>(defined);

    std::vector<double> ages, totals;
    for (const auto& m : metrics) {
        ages.push_back(static_cast<double>(m.age_days));
        totals.push_back(static_cast<double>(m.total_referrers));
    }
    try {
        s.spearman_age_vs_referrers = spearman_rank_correlation(ages, totals);
    } catch (const Error&) {
        s.spearman_age_vs_referrers.reset();
    }
    return s;
}

} // namespace colink
