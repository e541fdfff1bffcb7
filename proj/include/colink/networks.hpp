#pragma once

#include "colink/filtering.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace colink {

// Referrers (left) linking to targets (right). Both node lists are sorted
// and unique; edges are sorted, unique (left, right) index pairs.
class BipartiteIncidence {
public:
    using Edge = std::pair<std::uint32_t, std::uint32_t>;

    BipartiteIncidence() = default;

    // Sorts and deduplicates edges. Throws Error(invalid_record) when a node
    // list is unsorted or repeats, or an index is out of range.
    BipartiteIncidence(std::vector<std::string> left, std::vector<std::string> right, std::vector<Edge> edges);

    const std::vector<std::string>& left() const noexcept { return left_; }
    const std::vector<std::string>& right() const noexcept { return right_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }

    std::vector<std::uint32_t> left_degrees() const;
    std::vector<std::uint32_t> right_degrees() const;

private:
    std::vector<std::string> left_;
    std::vector<std::string> right_;
    std::vector<Edge> edges_;
};

enum class OriginFilter { internal, external, both };

// Left nodes are the distinct referring domains surviving the filter, right
// nodes the projects they link to.
BipartiteIncidence build_incidence(const std::vector<ClassifiedRelation>& classified, OriginFilter filter);

// Symmetric co-occurrence counts keyed by unordered index pair (i < j).
// Absent pairs have weight 0; the diagonal is always zero.
class CoOccurrenceMatrix {
public:
    using Key = std::pair<std::uint32_t, std::uint32_t>;

    CoOccurrenceMatrix() = default;
    explicit CoOccurrenceMatrix(std::vector<std::string> node_ids);

    const std::vector<std::string>& node_ids() const noexcept { return node_ids_; }
    std::size_t size() const noexcept { return node_ids_.size(); }

    // Adds to weight{i,j}; throws Error(invalid_record) for i == j, an
    // out-of-range index or a zero increment.
    void add(std::uint32_t i, std::uint32_t j, std::uint64_t weight);

    std::uint64_t weight(std::uint32_t i, std::uint32_t j) const;

    const std::map<Key, std::uint64_t>& weights() const noexcept { return weights_; }

    std::uint64_t total_weight() const;

    friend bool operator==(const CoOccurrenceMatrix&, const CoOccurrenceMatrix&) = default;

private:
    std::vector<std::string> node_ids_;
    std::map<Key, std::uint64_t> weights_;
};

// Co-linked (co-citation) network over the right-hand nodes: weight{P,Q}
// is the number of referrers linking to both P and Q.
CoOccurrenceMatrix colinked_matrix(const BipartiteIncidence& incidence);

// Co-linking (bibliographic coupling) network over the left-hand nodes:
// weight{d,e} is the number of targets both d and e link to. Referrers
// that share no target with any other referrer are left out of node_ids.
CoOccurrenceMatrix colinking_matrix(const BipartiteIncidence& incidence);

} // namespace colink
