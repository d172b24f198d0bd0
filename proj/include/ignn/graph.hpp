#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ignn/error.hpp"
#include "ignn/rng.hpp"
#include "ignn/tensor.hpp"

namespace ignn {

using Edge = std::pair<int, int>; // stored with first < second

inline Edge make_edge(int u, int v) {
    if (u == v) throw parameter_error("self-loop edge (" + std::to_string(u) + ", " + std::to_string(v) + ")");
    return u < v ? Edge{u, v} : Edge{v, u};
}

// Immutable undirected simple graph in compressed adjacency (CSR) form.
// Neighbor lists are sorted ascending; adjacency is symmetric by construction.
class Graph {
public:
    Graph(int num_nodes, std::vector<Edge> edges) : num_nodes_(num_nodes) {
        if (num_nodes < 0) throw parameter_error("negative node count");
        for (auto& [u, v] : edges) {
            if (u == v) throw parameter_error("self-loop on node " + std::to_string(u));
            if (u > v) std::swap(u, v);
            if (u < 0 || v >= num_nodes_) {
                throw parameter_error("edge endpoint out of range: (" + std::to_string(u) + ", " +
                                      std::to_string(v) + ")");
            }
        }
        std::sort(edges.begin(), edges.end());
        if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
            throw parameter_error("duplicate edge in edge set");
        }
        edges_ = std::move(edges);

        offsets_.assign(static_cast<std::size_t>(num_nodes_) + 1, 0);
        for (const auto& [u, v] : edges_) {
            ++offsets_[static_cast<std::size_t>(u) + 1];
            ++offsets_[static_cast<std::size_t>(v) + 1];
        }
        for (std::size_t i = 1; i < offsets_.size(); ++i) offsets_[i] += offsets_[i - 1];
        neighbors_.resize(offsets_.back());
        std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
        for (const auto& [u, v] : edges_) {
            neighbors_[cursor[static_cast<std::size_t>(u)]++] = v;
            neighbors_[cursor[static_cast<std::size_t>(v)]++] = u;
        }
        for (int u = 0; u < num_nodes_; ++u) {
            auto nb = mutable_neighbors(u);
            std::sort(nb.begin(), nb.end());
        }
    }

    int num_nodes() const { return num_nodes_; }
    std::size_t num_edges() const { return edges_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }

    std::span<const int> neighbors(int u) const {
        return {neighbors_.data() + offsets_[static_cast<std::size_t>(u)],
                offsets_[static_cast<std::size_t>(u) + 1] - offsets_[static_cast<std::size_t>(u)]};
    }

    int degree(int u) const {
        return static_cast<int>(offsets_[static_cast<std::size_t>(u) + 1] -
                                offsets_[static_cast<std::size_t>(u)]);
    }

    bool has_edge(int u, int v) const {
        if (u == v) return false;
        auto nb = neighbors(u);
        return std::binary_search(nb.begin(), nb.end(), v);
    }

private:
    std::span<int> mutable_neighbors(int u) {
        return {neighbors_.data() + offsets_[static_cast<std::size_t>(u)],
                offsets_[static_cast<std::size_t>(u) + 1] - offsets_[static_cast<std::size_t>(u)]};
    }

    int num_nodes_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::size_t> offsets_;
    std::vector<int> neighbors_;
};

// Exclusive node -> community assignment.
class Partition {
public:
    Partition() = default;
    explicit Partition(std::vector<int> labels) : labels_(std::move(labels)) {
        for (int l : labels_) {
            if (l < 0) throw data_error("negative community label");
            num_communities_ = std::max(num_communities_, l + 1);
        }
    }

    int label(int node) const { return labels_[static_cast<std::size_t>(node)]; }
    int num_nodes() const { return static_cast<int>(labels_.size()); }
    int num_communities() const { return num_communities_; }
    const std::vector<int>& labels() const { return labels_; }

    bool same_community(int u, int v) const { return label(u) == label(v); }

private:
    std::vector<int> labels_;
    int num_communities_ = 0;
};

struct CommunitiesDataset {
    Graph graph;
    Partition partition;
};

// Ring-of-cliques generator: num_cliques fully connected blocks of
// clique_size nodes, consecutive cliques joined by one deterministic bridge
// (first node to first node), plus one random extra edge per unordered
// clique pair with probability inter_prob.
inline CommunitiesDataset generate_communities(int num_cliques, int clique_size, double inter_prob,
                                               std::uint64_t seed) {
    if (num_cliques < 2) throw parameter_error("generate_communities: num_cliques must be >= 2");
    if (clique_size < 2) throw parameter_error("generate_communities: clique_size must be >= 2");
    if (!(inter_prob >= 0.0 && inter_prob <= 1.0)) {
        throw parameter_error("generate_communities: inter_prob must lie in [0, 1]");
    }

    const int n = num_cliques * clique_size;
    std::set<Edge> edges;
    for (int c = 0; c < num_cliques; ++c) {
        const int base = c * clique_size;
        for (int a = 0; a < clique_size; ++a) {
            for (int b = a + 1; b < clique_size; ++b) {
                edges.insert(make_edge(base + a, base + b));
            }
        }
    }
    for (int c = 0; c < num_cliques; ++c) {
        const int next = (c + 1) % num_cliques;
        edges.insert(make_edge(c * clique_size, next * clique_size));
    }

    Rng rng = make_rng(derive_seed(seed, SeedStream::generator));
    for (int c1 = 0; c1 < num_cliques; ++c1) {
        for (int c2 = c1 + 1; c2 < num_cliques; ++c2) {
            if (uniform_real01(rng) < inter_prob) {
                const int u = c1 * clique_size + static_cast<int>(uniform_below(rng, clique_size));
                const int v = c2 * clique_size + static_cast<int>(uniform_below(rng, clique_size));
                edges.insert(make_edge(u, v));
            }
        }
    }

    std::vector<int> labels(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = i / clique_size;

    return {Graph(n, {edges.begin(), edges.end()}), Partition(std::move(labels))};
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline int parse_int_field(std::string_view tok, const char* what, int line_no) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        throw parse_error(std::string("line ") + std::to_string(line_no) + ": malformed " + what + " '" +
                          std::string(tok) + "'");
    }
    return value;
}

// Splits on whitespace into exactly two integer fields.
inline std::pair<int, int> parse_int_pair(std::string_view line, int line_no) {
    std::string_view s = trim(line);
    const auto sep = s.find_first_of(" \t");
    if (sep == std::string_view::npos) {
        throw parse_error("line " + std::to_string(line_no) + ": expected two fields");
    }
    const std::string_view a = trim(s.substr(0, sep));
    const std::string_view b = trim(s.substr(sep));
    if (b.find_first_of(" \t") != std::string_view::npos) {
        throw parse_error("line " + std::to_string(line_no) + ": expected exactly two fields");
    }
    return {parse_int_field(a, "integer", line_no), parse_int_field(b, "integer", line_no)};
}

} // namespace detail

// Edge-list file: one "u v" pair per line, 0-based ids, '#' starts a comment
// line. Duplicate and reversed duplicates are merged; self-loops rejected.
inline Graph load_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open edge list '" + path + "'");

    std::set<Edge> edges;
    int max_id = -1;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view s = detail::trim(line);
        if (s.empty() || s.front() == '#') continue;
        const auto [u, v] = detail::parse_int_pair(s, line_no);
        if (u < 0 || v < 0) throw parse_error("line " + std::to_string(line_no) + ": negative node id");
        if (u == v) throw data_error("line " + std::to_string(line_no) + ": self-loop on node " + std::to_string(u));
        edges.insert(make_edge(u, v));
        max_id = std::max({max_id, u, v});
    }
    return Graph(max_id + 1, {edges.begin(), edges.end()});
}

// Labels file: one "node label" pair per line; every node in [0, num_nodes)
// must appear exactly once.
inline Partition load_labels(const std::string& path, int num_nodes) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open labels file '" + path + "'");

    std::vector<int> labels(static_cast<std::size_t>(num_nodes), -1);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view s = detail::trim(line);
        if (s.empty() || s.front() == '#') continue;
        const auto [node, label] = detail::parse_int_pair(s, line_no);
        if (node < 0 || node >= num_nodes) {
            throw data_error("line " + std::to_string(line_no) + ": node " + std::to_string(node) +
                             " outside [0, " + std::to_string(num_nodes) + ")");
        }
        if (label < 0) throw data_error("line " + std::to_string(line_no) + ": negative label");
        if (labels[static_cast<std::size_t>(node)] != -1) {
            throw data_error("line " + std::to_string(line_no) + ": duplicate entry for node " +
                             std::to_string(node));
        }
        labels[static_cast<std::size_t>(node)] = label;
    }
    for (int i = 0; i < num_nodes; ++i) {
        if (labels[static_cast<std::size_t>(i)] == -1) {
            throw data_error("missing label for node " + std::to_string(i));
        }
    }
    return Partition(std::move(labels));
}

// Features file: comma-separated numeric rows, one row per node, no header.
inline Tensor load_features(const std::string& path, int num_nodes) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open features file '" + path + "'");

    std::vector<std::vector<double>> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view s = detail::trim(line);
        if (s.empty()) continue;
        std::vector<double> row;
        std::stringstream ss{std::string(s)};
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            const std::string_view t = detail::trim(cell);
            std::size_t consumed = 0;
            double value = 0.0;
            try {
                value = std::stod(std::string(t), &consumed);
            } catch (const std::exception&) {
                throw parse_error("line " + std::to_string(line_no) + ": malformed number '" + std::string(t) + "'");
            }
            if (consumed != t.size()) {
                throw parse_error("line " + std::to_string(line_no) + ": malformed number '" + std::string(t) + "'");
            }
            row.push_back(value);
        }
        if (row.empty()) throw parse_error("line " + std::to_string(line_no) + ": empty row");
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw data_error("line " + std::to_string(line_no) + ": ragged row (expected " +
                             std::to_string(rows.front().size()) + " columns, got " +
                             std::to_string(row.size()) + ")");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw data_error("features file '" + path + "' is empty");
    if (static_cast<int>(rows.size()) != num_nodes) {
        throw data_error("features file has " + std::to_string(rows.size()) + " rows, expected " +
                         std::to_string(num_nodes));
    }
    Tensor x(num_nodes, static_cast<int>(rows.front().size()));
    for (int i = 0; i < num_nodes; ++i) {
        for (int j = 0; j < x.cols(); ++j) x(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    return x;
}

inline Tensor one_hot_features(int num_nodes) { return Tensor::identity(num_nodes); }

} // namespace ignn
