#pragma once

#include <cmath>
#include <cstdint>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ignn/autodiff.hpp"
#include "ignn/distance.hpp"
#include "ignn/error.hpp"
#include "ignn/pairs.hpp"
#include "ignn/rng.hpp"

namespace ignn {

struct LossConfig {
    double lambda_bce = 1.0;
    double lambda_mse = 0.0;
    double alpha = 1.0;              // distance-transform exponent
    std::size_t mse_pair_budget = 0; // 0 = automatic (see experiment module)
};

inline void validate(const LossConfig& cfg) {
    if (cfg.lambda_bce < 0.0 || cfg.lambda_mse < 0.0) throw parameter_error("loss: lambdas must be non-negative");
    if (cfg.lambda_bce == 0.0 && cfg.lambda_mse == 0.0) throw parameter_error("loss: both lambdas are zero");
    if (!(cfg.alpha > 0.0)) throw parameter_error("loss: alpha must be positive");
}

// Target for (1 - <z_i, z_j>)/2: 1 - 1/d^alpha, with 1/d^alpha -> 0 for
// unreachable pairs (antipodal target in embedding space).
inline double distance_target(int d_g, double alpha) {
    if (d_g == DistanceMatrix::kUnreachable) return 1.0;
    if (d_g == 0) throw usage_error("distance_target: d_g = 0 (pair with i == j)");
    return 1.0 - 1.0 / std::pow(static_cast<double>(d_g), alpha);
}

// Sum of binary cross entropies -[y log sigma(<z_i,z_j>) + (1-y) log(1 - sigma)].
inline int bce_loss(Tape& tape, int z, const PairBatch& batch) {
    if (batch.empty()) throw parameter_error("bce_loss: empty batch");
    std::vector<std::pair<int, int>> pairs;
    std::vector<double> labels;
    pairs.reserve(batch.size());
    labels.reserve(batch.size());
    for (const PairSample& p : batch.pairs) {
        pairs.emplace_back(p.i, p.j);
        labels.push_back(static_cast<double>(p.y));
    }
    return tape.bce_with_logits_sum(tape.row_pair_inner(z, std::move(pairs)), std::move(labels));
}

// Sum over pairs of [(1 - <z_i,z_j>)/2 - (1 - 1/d_G^alpha)]^2.
inline int mse_distance_loss(Tape& tape, int z, const PairBatch& batch, double alpha) {
    if (batch.empty()) throw parameter_error("mse_distance_loss: empty batch");
    std::vector<std::pair<int, int>> pairs;
    std::vector<double> targets;
    pairs.reserve(batch.size());
    targets.reserve(batch.size());
    for (const PairSample& p : batch.pairs) {
        pairs.emplace_back(p.i, p.j);
        targets.push_back(distance_target(p.d_g, alpha));
    }
    return tape.pair_squared_error_sum(tape.row_pair_inner(z, std::move(pairs)), std::move(targets));
}

// lambda_BCE * L_BCE + lambda_MSE * L_MSE. Terms with a zero weight are not
// recorded at all, so degenerate weightings reduce to the single remaining
// loss bit-for-bit.
inline int combined_loss(Tape& tape, int z, const PairBatch& task_batch, const PairBatch& dist_batch,
                         const LossConfig& cfg) {
    validate(cfg);
    auto weighted = [&](int id, double lambda) { return lambda == 1.0 ? id : tape.scale(id, lambda); };

    if (cfg.lambda_mse == 0.0) return weighted(bce_loss(tape, z, task_batch), cfg.lambda_bce);
    if (cfg.lambda_bce == 0.0) return weighted(mse_distance_loss(tape, z, dist_batch, cfg.alpha), cfg.lambda_mse);
    return tape.add(weighted(bce_loss(tape, z, task_batch), cfg.lambda_bce),
                    weighted(mse_distance_loss(tape, z, dist_batch, cfg.alpha), cfg.lambda_mse));
}

// Uniformly sampled unordered node pairs with their graph distance. All
// C(N,2) pairs in deterministic order once the budget covers them.
inline PairBatch sample_distance_pairs(const DistanceMatrix& dm, std::size_t budget, std::uint64_t seed) {
    if (budget == 0) throw parameter_error("sample_distance_pairs: zero budget");
    const int n = dm.n();
    const std::uint64_t total = detail::pair_count(n);

    PairBatch batch;
    if (budget >= total) {
        batch.pairs.reserve(total);
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) batch.pairs.push_back({i, j, 0, dm(i, j)});
        }
        return batch;
    }

    Rng rng = make_rng(seed);
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(budget * 2);
    batch.pairs.reserve(budget);
    while (batch.pairs.size() < budget) {
        const std::uint64_t k = uniform_below(rng, total);
        if (!seen.insert(k).second) continue;
        const Edge e = detail::pair_from_index(k, n);
        batch.pairs.push_back({e.first, e.second, 0, dm(e.first, e.second)});
    }
    return batch;
}

} // namespace ignn
