#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "ignn/autodiff.hpp"
#include "ignn/error.hpp"
#include "ignn/graph.hpp"
#include "ignn/rng.hpp"
#include "ignn/sparse.hpp"
#include "ignn/tensor.hpp"

namespace ignn {

enum class Arch { gcn, sage, gin };

inline std::string arch_name(Arch a) {
    switch (a) {
        case Arch::gcn: return "gcn";
        case Arch::sage: return "sage";
        case Arch::gin: return "gin";
    }
    return "?";
}

inline Arch arch_from_name(const std::string& s) {
    if (s == "gcn") return Arch::gcn;
    if (s == "sage") return Arch::sage;
    if (s == "gin") return Arch::gin;
    throw parameter_error("unknown architecture '" + s + "' (expected gcn, sage, or gin)");
}

struct ModelConfig {
    Arch arch = Arch::gcn;
    int num_layers = 3;
    int hidden_dim = 32;
    int output_dim = 32;
    double gin_epsilon = 0.0; // fixed, not learned
    std::uint64_t seed = 0;
};

inline void validate(const ModelConfig& cfg) {
    if (cfg.num_layers < 1) throw parameter_error("model: num_layers must be >= 1");
    if (cfg.hidden_dim < 1 || cfg.output_dim < 1) throw parameter_error("model: dims must be >= 1");
}

// Flat list of parameter tensors; layout is defined by weight_shapes().
struct ModelWeights {
    std::vector<Tensor> tensors;
};

// A_hat = D~^{-1/2} (A + I) D~^{-1/2}; symmetric, eigenvalues in [-1, 1].
inline SparseAdjacency build_gcn_adjacency(const Graph& g) {
    const int n = g.num_nodes();
    std::vector<double> inv_sqrt_deg(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        inv_sqrt_deg[static_cast<std::size_t>(i)] = 1.0 / std::sqrt(static_cast<double>(g.degree(i) + 1));
    }
    std::vector<std::tuple<int, int, double>> t;
    t.reserve(2 * g.num_edges() + static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        t.emplace_back(i, i, inv_sqrt_deg[static_cast<std::size_t>(i)] * inv_sqrt_deg[static_cast<std::size_t>(i)]);
        for (int j : g.neighbors(i)) {
            t.emplace_back(i, j, inv_sqrt_deg[static_cast<std::size_t>(i)] * inv_sqrt_deg[static_cast<std::size_t>(j)]);
        }
    }
    return SparseAdjacency::from_triplets(n, std::move(t));
}

// Row-stochastic neighbor averaging without self-loops; zero row for
// isolated nodes.
inline SparseAdjacency build_mean_adjacency(const Graph& g) {
    const int n = g.num_nodes();
    std::vector<std::tuple<int, int, double>> t;
    t.reserve(2 * g.num_edges());
    for (int i = 0; i < n; ++i) {
        const int deg = g.degree(i);
        if (deg == 0) continue;
        const double w = 1.0 / static_cast<double>(deg);
        for (int j : g.neighbors(i)) t.emplace_back(i, j, w);
    }
    return SparseAdjacency::from_triplets(n, std::move(t));
}

// Raw adjacency (sum aggregation).
inline SparseAdjacency build_sum_adjacency(const Graph& g) {
    const int n = g.num_nodes();
    std::vector<std::tuple<int, int, double>> t;
    t.reserve(2 * g.num_edges());
    for (int i = 0; i < n; ++i) {
        for (int j : g.neighbors(i)) t.emplace_back(i, j, 1.0);
    }
    return SparseAdjacency::from_triplets(n, std::move(t));
}

inline SparseAdjacency build_model_adjacency(Arch arch, const Graph& g) {
    switch (arch) {
        case Arch::gcn: return build_gcn_adjacency(g);
        case Arch::sage: return build_mean_adjacency(g);
        case Arch::gin: return build_sum_adjacency(g);
    }
    throw usage_error("unreachable");
}

namespace detail {

struct WeightShape {
    int rows;
    int cols;
    bool is_bias;
};

inline std::vector<WeightShape> weight_shapes(const ModelConfig& cfg, int input_dim) {
    std::vector<WeightShape> shapes;
    int in = input_dim;
    for (int k = 0; k < cfg.num_layers; ++k) {
        const int out = (k + 1 == cfg.num_layers) ? cfg.output_dim : cfg.hidden_dim;
        switch (cfg.arch) {
            case Arch::gcn:
                shapes.push_back({in, out, false});
                shapes.push_back({1, out, true});
                break;
            case Arch::sage:
                shapes.push_back({2 * in, out, false});
                shapes.push_back({1, out, true});
                break;
            case Arch::gin: // 2-layer MLP per message-passing layer
                shapes.push_back({in, out, false});
                shapes.push_back({1, out, true});
                shapes.push_back({out, out, false});
                shapes.push_back({1, out, true});
                break;
        }
        in = out;
    }
    return shapes;
}

} // namespace detail

// Glorot-uniform weight matrices, zero biases; deterministic in cfg.seed.
inline ModelWeights init_weights(const ModelConfig& cfg, int input_dim) {
    validate(cfg);
    if (input_dim < 1) throw parameter_error("init_weights: input_dim must be >= 1");
    Rng rng = make_rng(derive_seed(cfg.seed, SeedStream::weight_init));
    ModelWeights w;
    for (const auto& s : detail::weight_shapes(cfg, input_dim)) {
        Tensor t(s.rows, s.cols);
        if (!s.is_bias) {
            const double limit = std::sqrt(6.0 / static_cast<double>(s.rows + s.cols));
            for (std::size_t k = 0; k < t.size(); ++k) t.data()[k] = uniform_real(rng, -limit, limit);
        }
        w.tensors.push_back(std::move(t));
    }
    return w;
}

struct ForwardResult {
    int raw;        // final-layer output before normalization (for distortion)
    int normalized; // row L2-normalized embeddings (for scores and losses)
};

inline std::vector<int> lift_weights(Tape& tape, const ModelWeights& w) {
    std::vector<int> ids;
    ids.reserve(w.tensors.size());
    for (const Tensor& t : w.tensors) ids.push_back(tape.leaf(t));
    return ids;
}

// K applications of the architecture's aggregate/combine layer; hidden
// layers use ReLU, the final layer is linear, and the returned embeddings
// are row L2-normalized so pair inner products are cosine similarities.
inline ForwardResult forward(Tape& tape, const ModelConfig& cfg, const std::vector<int>& weight_ids,
                             const SparseAdjacency& adj, int x) {
    validate(cfg);
    const auto shapes = detail::weight_shapes(cfg, tape.value(x).cols());
    if (weight_ids.size() != shapes.size()) {
        throw usage_error("forward: weight count does not match architecture (expected " +
                          std::to_string(shapes.size()) + ", got " + std::to_string(weight_ids.size()) + ")");
    }

    int z = x;
    std::size_t w = 0;
    for (int k = 0; k < cfg.num_layers; ++k) {
        const bool last = (k + 1 == cfg.num_layers);
        switch (cfg.arch) {
            case Arch::gcn: {
                const int h = tape.spmm(adj, z);
                z = tape.add_row_vector(tape.matmul(h, weight_ids[w]), weight_ids[w + 1]);
                w += 2;
                if (!last) z = tape.relu(z);
                break;
            }
            case Arch::sage: {
                const int m = tape.spmm(adj, z);
                const int c = tape.concat_cols(z, m);
                z = tape.add_row_vector(tape.matmul(c, weight_ids[w]), weight_ids[w + 1]);
                w += 2;
                if (!last) z = tape.relu(z);
                break;
            }
            case Arch::gin: {
                const int h = tape.add(tape.scale(z, 1.0 + cfg.gin_epsilon), tape.spmm(adj, z));
                const int t = tape.relu(tape.add_row_vector(tape.matmul(h, weight_ids[w]), weight_ids[w + 1]));
                z = tape.add_row_vector(tape.matmul(t, weight_ids[w + 2]), weight_ids[w + 3]);
                w += 4;
                break;
            }
        }
    }
    return {z, tape.l2_normalize_rows(z)};
}

// Plain inference: embeddings for fixed weights, no gradient bookkeeping.
struct Embeddings {
    Tensor raw;
    Tensor normalized;
};

inline Embeddings compute_embeddings(const ModelConfig& cfg, const ModelWeights& w,
                                     const SparseAdjacency& adj, const Tensor& x) {
    Tape tape;
    std::vector<int> ids;
    ids.reserve(w.tensors.size());
    for (const Tensor& t : w.tensors) ids.push_back(tape.constant(t));
    const ForwardResult r = forward(tape, cfg, ids, adj, tape.constant(x));
    return {tape.value(r.raw), tape.value(r.normalized)};
}

} // namespace ignn
