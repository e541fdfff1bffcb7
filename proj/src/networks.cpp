#include "colink/networks.hpp"
#include "colink/error.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

namespace colink {

namespace {

void check_sorted_unique(const std::vector<std::string>& ids, const char* side)
{
    for (std::size_t i = 1; i < ids.size(); ++i)
        if (!(ids[i - 1] < ids[i]))
            throw Error(Errc::invalid_record, std::string(side) + " node list must be sorted and unique");
}

// Accumulates pair counts for every pair of members of each group.
CoOccurrenceMatrix count_pairs(std::vector<std::string> node_ids,
                               const std::vector<std::vector<std::uint32_t>>& groups)
{
    const std::uint64_t n = node_ids.size();
    CoOccurrenceMatrix m(std::move(node_ids));
    std::unordered_map<std::uint64_t, std::uint64_t> acc;
    for (const auto& g : groups)
        for (std::size_t a = 0; a < g.size(); ++a)
            for (std::size_t b = a + 1; b < g.size(); ++b)
                ++acc[g[a] * n + g[b]];

    std::vector<std::pair<std::uint64_t, std::uint64_t>> flat(acc.begin(), acc.end());
    std::sort(flat.begin(), flat.end());
    for (auto [key, w] : flat)
        m.add(static_cast<std::uint32_t>(key / n), static_cast<std::uint32_t>(key % n), w);
    return m;
}

} // namespace

BipartiteIncidence::BipartiteIncidence(std::vector<std::string> left, std::vector<std::string> right,
                                       std::vector<Edge> edges)
    : left_(std::move(left)), right_(std::move(right)), edges_(std::move(edges))
{
    check_sorted_unique(left_, "left");
    check_sorted_unique(right_, "right");
    for (auto [l, r] : edges_)
        if (l >= left_.size() || r >= right_.size())
            throw Error(Errc::invalid_record, "incidence edge index out of range");
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

std::vector<std::uint32_t> BipartiteIncidence::left_degrees() const
{
    std::vector<std::uint32_t> deg(left_.size());
    for (auto [l, r] : edges_)
        ++deg[l];
    return deg;
}

std::vector<std::uint32_t> BipartiteIncidence::right_degrees() const
{
    std::vector<std::uint32_t> deg(right_.size());
    for (auto [l, r] : edges_)
        ++deg[r];
    return deg;
}

BipartiteIncidence build_incidence(const std::vector<ClassifiedRelation>& classified, OriginFilter filter)
{
    auto keep = [filter](Origin o) {
        return filter == OriginFilter::both || (filter == OriginFilter::internal) == (o == Origin::internal);
    };
    std::set<std::string> left_set, right_set;
    for (const auto& c : classified)
        if (keep(c.origin)) {
            left_set.insert(c.relation.referring_domain);
            right_set.insert(c.relation.project_id);
        }
    std::vector<std::string> left(left_set.begin(), left_set.end());
    std::vector<std::string> right(right_set.begin(), right_set.end());

    auto index_of = [](const std::vector<std::string>& v, const std::string& s) {
        return static_cast<std::uint32_t>(std::lower_bound(v.begin(), v.end(), s) - v.begin());
    };
    std::vector<BipartiteIncidence::Edge> edges;
    for (const auto& c : classified)
        if (keep(c.origin))
            edges.emplace_back(index_of(left, c.relation.referring_domain), index_of(right, c.relation.project_id));
    return BipartiteIncidence(std::move(left), std::move(right), std::move(edges));
}

CoOccurrenceMatrix::CoOccurrenceMatrix(std::vector<std::string> node_ids) : node_ids_(std::move(node_ids)) {}

void CoOccurrenceMatrix::add(std::uint32_t i, std::uint32_t j, std::uint64_t weight)
{
    if (i == j)
        throw Error(Errc::invalid_record, "co-occurrence matrix has no diagonal");
    if (i >= node_ids_.size() || j >= node_ids_.size())
        throw Error(Errc::invalid_record, "co-occurrence index out of range");
    if (weight == 0)
        throw Error(Errc::invalid_record, "co-occurrence weights must be positive");
    weights_[{std::min(i, j), std::max(i, j)}] += weight;
}

std::uint64_t CoOccurrenceMatrix::weight(std::uint32_t i, std::uint32_t j) const
{
    if (i == j)
        return 0;
    auto it = weights_.find({std::min(i, j), std::max(i, j)});
    return it == weights_.end() ? 0 : it->second;
}

std::uint64_t CoOccurrenceMatrix::total_weight() const
{
    std::uint64_t sum = 0;
    for (const auto& [k, w] : weights_)
        sum += w;
    return sum;
}

CoOccurrenceMatrix colinked_matrix(const BipartiteIncidence& incidence)
{
    // Edges are sorted by left index, so each referrer's targets are contiguous and ascending.
    std::vector<std::vector<std::uint32_t>> groups(incidence.left().size());
    for (auto [l, r] : incidence.edges())
        groups[l].push_back(r);
    return count_pairs(incidence.right(), groups);
}

CoOccurrenceMatrix colinking_matrix(const BipartiteIncidence& incidence)
{
    std::vector<std::vector<std::uint32_t>> groups(incidence.right().size());
    for (auto [l, r] : incidence.edges())
        groups[r].push_back(l);
    const auto full = count_pairs(incidence.left(), groups);

    // Keep only referrers that share a target with at least one other referrer.
    std::vector<std::uint32_t> remap(incidence.left().size(), UINT32_MAX);
    for (const auto& [key, w] : full.weights())
        remap[key.first] = remap[key.second] = 0;
    std::vector<std::string> kept;
    for (std::size_t l = 0; l < remap.size(); ++l)
        if (remap[l] == 0) {
            remap[l] = static_cast<std::uint32_t>(kept.size());
            kept.push_back(incidence.left()[l]);
        }
    CoOccurrenceMatrix out(std::move(kept));
    for (const auto& [key, w] : full.weights())
        out.add(remap[key.first], remap[key.second], w);
    return out;
}

} // namespace colink
