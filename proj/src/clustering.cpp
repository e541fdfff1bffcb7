#include "colink/clustering.hpp"
#include "colink/error.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

namespace colink {

namespace {

struct Graph {
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;
    std::vector<double> self_weight; // internal weight of an aggregated node, each edge once
    std::vector<double> strength;
    double two_m = 0;

    std::size_t size() const { return adj.size(); }
};

Graph graph_from_matrix(const CoOccurrenceMatrix& m)
{
    Graph g;
    g.adj.resize(m.size());
    g.self_weight.assign(m.size(), 0.0);
    g.strength.assign(m.size(), 0.0);
    for (const auto& [key, w] : m.weights()) {
        auto wd = static_cast<double>(w);
        g.adj[key.first].emplace_back(key.second, wd);
        g.adj[key.second].emplace_back(key.first, wd);
        g.strength[key.first] += wd;
        g.strength[key.second] += wd;
    }
    g.two_m = std::accumulate(g.strength.begin(), g.strength.end(), 0.0);
    return g;
}

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Fisher-Yates with explicit draws so the order is identical on every
// standard library.
void shuffle(std::vector<std::uint32_t>& v, std::mt19937_64& rng)
{
    for (std::size_t i = v.size(); i > 1; --i) {
        auto j = static_cast<std::size_t>(rng() % i);
        std::swap(v[i - 1], v[j]);
    }
}

// Moves nodes between communities until no single move improves quality.
// Returns true when any node changed community.
bool local_moving(const Graph& g, double resolution, std::mt19937_64& rng, std::vector<std::uint32_t>& comm)
{
    const auto n = g.size();
    comm.resize(n);
    std::iota(comm.begin(), comm.end(), 0);
    std::vector<double> tot(g.strength);
    std::vector<double> link(n, 0.0);
    std::vector<std::uint32_t> touched;
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    shuffle(order, rng);

    bool any = false;
    for (bool moved = true; moved;) {
        moved = false;
        for (auto i : order) {
            const double k = g.strength[i];
            if (k == 0)
                continue;
            touched.clear();
            for (auto [j, w] : g.adj[i]) {
                if (link[comm[j]] == 0)
                    touched.push_back(comm[j]);
                link[comm[j]] += w;
            }
            const auto current = comm[i];
            tot[current] -= k;
            const double scale = resolution * k / g.two_m;
            auto best = current;
            double best_gain = link[current] - scale * tot[current];
            for (auto c : touched) {
                double gain = link[c] - scale * tot[c];
                if (gain > best_gain + 1e-12) {
                    best_gain = gain;
                    best = c;
                }
            }
            for (auto c : touched)
                link[c] = 0;
            link[current] = 0;
            tot[best] += k;
            if (best != current) {
                comm[i] = best;
                moved = true;
                any = true;
            }
        }
    }
    return any;
}

// Renumbers communities 0..k-1 in order of first appearance; returns k.
std::uint32_t compact(std::vector<std::uint32_t>& comm)
{
    std::vector<std::uint32_t> map(comm.size(), UINT32_MAX);
    std::uint32_t next = 0;
    for (auto& c : comm) {
        if (map[c] == UINT32_MAX)
            map[c] = next++;
        c = map[c];
    }
    return next;
}

Graph aggregate(const Graph& g, const std::vector<std::uint32_t>& comm, std::uint32_t k)
{
    Graph out;
    out.adj.resize(k);
    out.self_weight.assign(k, 0.0);
    out.strength.assign(k, 0.0);
    out.two_m = g.two_m;
    std::vector<std::map<std::uint32_t, double>> sparse(k);
    for (std::uint32_t i = 0; i < g.size(); ++i) {
        out.self_weight[comm[i]] += g.self_weight[i];
        out.strength[comm[i]] += g.strength[i];
        for (auto [j, w] : g.adj[i]) {
            if (comm[i] == comm[j]) {
                if (i < j)
                    out.self_weight[comm[i]] += w;
            } else {
                sparse[comm[i]][comm[j]] += w;
            }
        }
    }
    for (std::uint32_t c = 0; c < k; ++c)
        out.adj[c].assign(sparse[c].begin(), sparse[c].end());
    return out;
}

std::vector<std::uint32_t> louvain(const Graph& base, double resolution, std::mt19937_64& rng)
{
    std::vector<std::uint32_t> membership(base.size());
    std::iota(membership.begin(), membership.end(), 0);
    Graph g = base;
    for (;;) {
        std::vector<std::uint32_t> comm;
        bool moved = local_moving(g, resolution, rng, comm);
        auto k = compact(comm);
        for (auto& m : membership)
            m = comm[m];
        if (!moved || k == g.size())
            break;
        g = aggregate(g, comm, k);
    }
    return membership;
}

// 1-based labels, largest cluster first, ties by smallest member index.
std::vector<std::uint32_t> canonical_labels(const std::vector<std::uint32_t>& membership)
{
    std::vector<std::uint32_t> comm = membership;
    auto k = compact(comm); // first-appearance order == smallest member order
    std::vector<std::size_t> size(k, 0);
    for (auto c : comm)
        ++size[c];
    std::vector<std::uint32_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return size[a] > size[b]; });
    std::vector<std::uint32_t> label(k);
    for (std::uint32_t r = 0; r < k; ++r)
        label[order[r]] = r + 1;
    for (auto& c : comm)
        c = label[c];
    return comm;
}

} // namespace

std::uint32_t ClusteredNetwork::cluster_count() const
{
    return cluster_of.empty() ? 0 : *std::max_element(cluster_of.begin(), cluster_of.end());
}

double modularity(const CoOccurrenceMatrix& matrix, std::span<const std::uint32_t> cluster_of, double resolution)
{
    if (cluster_of.size() != matrix.size())
        throw Error(Errc::length_mismatch, "cluster assignment does not cover every node");
    std::map<std::uint32_t, std::pair<double, double>> per; // cluster -> (internal, strength)
    double two_m = 0;
    for (const auto& [key, w] : matrix.weights()) {
        auto wd = static_cast<double>(w);
        two_m += 2 * wd;
        per[cluster_of[key.first]].second += wd;
        per[cluster_of[key.second]].second += wd;
        if (cluster_of[key.first] == cluster_of[key.second])
            per[cluster_of[key.first]].first += 2 * wd;
    }
    if (two_m == 0)
        return 0.0;
    double q = 0;
    for (const auto& [c, v] : per)
        q += v.first / two_m - resolution * (v.second / two_m) * (v.second / two_m);
    return q;
}

ClusteredNetwork cluster_network(const CoOccurrenceMatrix& matrix, double resolution, std::uint64_t seed,
                                 unsigned restarts)
{
    if (matrix.size() == 0)
        throw Error(Errc::empty_network, "cannot cluster an empty network");
    if (!(resolution > 0))
        throw Error(Errc::invalid_config, "clustering resolution must be positive");
    if (restarts == 0)
        throw Error(Errc::invalid_config, "clustering needs at least one restart");

    ClusteredNetwork out;
    out.matrix = matrix;
    out.resolution = resolution;
    out.seed = seed;

    const Graph g = graph_from_matrix(matrix);
    if (g.two_m == 0) {
        std::vector<std::uint32_t> singletons(matrix.size());
        std::iota(singletons.begin(), singletons.end(), 0);
        out.cluster_of = canonical_labels(singletons);
        out.quality = 0.0;
        return out;
    }

    bool have = false;
    for (unsigned r = 0; r < restarts; ++r) {
        std::mt19937_64 rng(splitmix64(seed ^ splitmix64(r)));
        auto labels = canonical_labels(louvain(g, resolution, rng));
        double q = modularity(matrix, labels, resolution);
        if (!have || q > out.quality + 1e-12) {
            out.quality = q;
            out.cluster_of = std::move(labels);
            have = true;
        }
    }
    return out;
}

} // namespace colink
