#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <unordered_set>
#include <vector>

#include "ignn/distance.hpp"
#include "ignn/error.hpp"
#include "ignn/graph.hpp"
#include "ignn/rng.hpp"

namespace ignn {

// One training/evaluation sample: node pair, task label, graph distance.
struct PairSample {
    int i;
    int j;
    int y;   // task label in {0, 1}
    int d_g; // hop count on the batch's reference graph, or kUnreachable
};

struct PairBatch {
    std::vector<PairSample> pairs;

    std::size_t size() const { return pairs.size(); }
    bool empty() const { return pairs.empty(); }
};

enum class Task { link, pairwise };

struct EdgeSplit {
    Graph train_graph;
    std::vector<Edge> val_pos;
    std::vector<Edge> test_pos;
    int isolated_train_nodes = 0; // nodes left with degree 0 after the split
};

// Uniform random edge partition into train/val/test. Message passing and
// training distances are computed on train_graph only.
inline EdgeSplit split_edges(const Graph& g, double train_frac, double val_frac, std::uint64_t seed) {
    if (!(train_frac > 0.0) || !(val_frac > 0.0)) {
        throw parameter_error("split_edges: fractions must be positive");
    }
    if (!(train_frac + val_frac < 1.0)) {
        throw parameter_error("split_edges: train_frac + val_frac must be < 1");
    }

    std::vector<Edge> edges = g.edges();
    Rng rng = make_rng(derive_seed(seed, SeedStream::split));
    fisher_yates_shuffle(edges, rng);

    const auto m = static_cast<double>(edges.size());
    const auto n_train = static_cast<std::size_t>(std::llround(m * train_frac));
    const auto n_val = static_cast<std::size_t>(std::llround(m * val_frac));
    if (n_train + n_val > edges.size()) throw parameter_error("split_edges: fractions leave no test edges");

    std::vector<Edge> train(edges.begin(), edges.begin() + static_cast<std::ptrdiff_t>(n_train));
    std::vector<Edge> val(edges.begin() + static_cast<std::ptrdiff_t>(n_train),
                          edges.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
    std::vector<Edge> test(edges.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), edges.end());

    Graph train_graph(g.num_nodes(), std::move(train));
    int isolated = 0;
    for (int u = 0; u < train_graph.num_nodes(); ++u) {
        if (train_graph.degree(u) == 0) ++isolated;
    }
    std::sort(val.begin(), val.end());
    std::sort(test.begin(), test.end());
    return {std::move(train_graph), std::move(val), std::move(test), isolated};
}

namespace detail {

// Unordered pair <-> flat index over {(i, j) : 0 <= i < j < n}, colexicographic.
inline std::uint64_t pair_count(int n) {
    return static_cast<std::uint64_t>(n) * (static_cast<std::uint64_t>(n) - 1) / 2;
}

inline Edge pair_from_index(std::uint64_t k, int /*n*/) {
    // j is the smallest integer with C(j+1, 2) > k
    const auto j = static_cast<int>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(k))) / 2.0);
    std::uint64_t base = static_cast<std::uint64_t>(j) * (static_cast<std::uint64_t>(j) - 1) / 2;
    int jj = j;
    while (base > k) { // guard against sqrt rounding
        --jj;
        base = static_cast<std::uint64_t>(jj) * (static_cast<std::uint64_t>(jj) - 1) / 2;
    }
    while (base + static_cast<std::uint64_t>(jj) <= k) {
        base += static_cast<std::uint64_t>(jj);
        ++jj;
    }
    return {static_cast<int>(k - base), jj};
}

struct EdgeHash {
    std::size_t operator()(const Edge& e) const {
        return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(e.first) << 32) ^
                                          static_cast<std::uint64_t>(e.second));
    }
};

} // namespace detail

// Uniform sample of `count` distinct non-edges of g, excluding `exclude`.
inline std::vector<Edge> sample_negative_pairs(const Graph& g, std::size_t count, std::uint64_t seed,
                                               const std::vector<Edge>& exclude = {}) {
    const int n = g.num_nodes();
    std::unordered_set<Edge, detail::EdgeHash> excluded(exclude.begin(), exclude.end());
    std::uint64_t pool = detail::pair_count(n) - g.num_edges();
    for (const Edge& e : excluded) {
        if (!g.has_edge(e.first, e.second) && e.first != e.second) --pool;
    }
    if (count > pool) {
        throw parameter_error("sample_negative_pairs: requested " + std::to_string(count) +
                              " pairs but only " + std::to_string(pool) + " non-edges are available");
    }

    Rng rng = make_rng(seed);
    std::vector<Edge> out;
    out.reserve(count);

    if (count * 2 >= pool) {
        // Dense request: enumerate all eligible pairs and take a shuffled prefix.
        std::vector<Edge> eligible;
        eligible.reserve(pool);
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                const Edge e{i, j};
                if (!g.has_edge(i, j) && !excluded.count(e)) eligible.push_back(e);
            }
        }
        fisher_yates_shuffle(eligible, rng);
        out.assign(eligible.begin(), eligible.begin() + static_cast<std::ptrdiff_t>(count));
    } else {
        std::unordered_set<Edge, detail::EdgeHash> seen;
        const std::uint64_t total = detail::pair_count(n);
        while (out.size() < count) {
            const Edge e = detail::pair_from_index(uniform_below(rng, total), n);
            if (g.has_edge(e.first, e.second) || excluded.count(e) || seen.count(e)) continue;
            seen.insert(e);
            out.push_back(e);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Annotates positive/negative pairs with the task label and the graph
// distance taken from `dm`. For the pairwise task, labels come from the
// community partition rather than the positive/negative role.
inline PairBatch make_pair_batch(Task task, const std::vector<Edge>& positives,
                                 const std::vector<Edge>& negatives,
                                 const std::optional<Partition>& partition, const DistanceMatrix& dm) {
    if (task == Task::pairwise && !partition.has_value()) {
        throw parameter_error("make_pair_batch: pairwise task requires a partition");
    }
    PairBatch batch;
    batch.pairs.reserve(positives.size() + negatives.size());
    auto append = [&](const Edge& e, int role_label) {
        if (e.first == e.second) throw parameter_error("make_pair_batch: pair with i == j");
        int y = role_label;
        if (task == Task::pairwise) y = partition->same_community(e.first, e.second) ? 1 : 0;
        batch.pairs.push_back({e.first, e.second, y, dm(e.first, e.second)});
    };
    for (const Edge& e : positives) append(e, 1);
    for (const Edge& e : negatives) append(e, 0);
    return batch;
}

// Same-community (same=true) or cross-community (same=false) node pairs,
// uniformly sampled with replacement across draws; pairs in `exclude` are
// never produced. Used for the pairwise-classification task batches.
inline std::vector<Edge> sample_community_pairs(const Partition& partition, bool same, std::size_t count,
                                                std::uint64_t seed, const std::vector<Edge>& exclude = {}) {
    const int n = partition.num_nodes();
    if (n < 2) throw parameter_error("sample_community_pairs: need at least two nodes");
    std::unordered_set<Edge, detail::EdgeHash> excluded(exclude.begin(), exclude.end());

    bool feasible = false;
    if (same) {
        std::vector<int> sizes(static_cast<std::size_t>(partition.num_communities()), 0);
        for (int l : partition.labels()) ++sizes[static_cast<std::size_t>(l)];
        for (int s : sizes) {
            if (s >= 2) feasible = true;
        }
    } else {
        feasible = partition.num_communities() >= 2;
    }
    if (!feasible) {
        throw parameter_error(same ? "no community has two members" : "only one community present");
    }

    Rng rng = make_rng(seed);
    std::vector<Edge> out;
    out.reserve(count);
    std::uint64_t attempts = 0;
    const std::uint64_t max_attempts = 1000 * (count + static_cast<std::uint64_t>(n) + 1);
    while (out.size() < count) {
        if (++attempts > max_attempts) {
            throw parameter_error("sample_community_pairs: exclusions leave too few eligible pairs");
        }
        const int i = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n)));
        const int j = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n)));
        if (i == j) continue;
        if (partition.same_community(i, j) != same) continue;
        const Edge e = make_edge(i, j);
        if (excluded.count(e)) continue;
        out.push_back(e);
    }
    return out;
}

} // namespace ignn
