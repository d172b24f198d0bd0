#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "ignn/distance.hpp"
#include "ignn/error.hpp"
#include "ignn/objective.hpp"
#include "ignn/rng.hpp"
#include "ignn/tensor.hpp"

#include <json.hpp>

namespace ignn {

// Probability that a random positive outscores a random negative, ties at
// 1/2; computed by the rank-sum method (exactly equal to pair counting).
inline double auc_roc(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size()) throw usage_error("auc_roc: size mismatch");
    std::size_t n_pos = 0;
    for (int y : labels) {
        if (y != 0 && y != 1) throw usage_error("auc_roc: labels must be 0/1");
        n_pos += static_cast<std::size_t>(y);
    }
    const std::size_t n_neg = scores.size() - n_pos;
    if (n_pos == 0 || n_neg == 0) throw undefined_metric_error("auc_roc: single-class input");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // midranks over tie groups; ranks are integer halves, exact in doubles
    double pos_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
        const double mid_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) {
            if (labels[order[k]] == 1) pos_rank_sum += mid_rank;
        }
        i = j;
    }
    const double np = static_cast<double>(n_pos);
    const double nn = static_cast<double>(n_neg);
    return (pos_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

struct TauResult {
    double tau = 0.0;
    long long concordant = 0;   // P
    long long discordant = 0;   // Q
    long long ties_a_only = 0;  // T
    long long ties_b_only = 0;  // U
};

namespace detail {

// Merge sort counting strict inversions of `b`.
inline long long count_inversions(std::vector<double>& b, std::vector<double>& scratch, std::size_t lo,
                                  std::size_t hi) {
    if (hi - lo < 2) return 0;
    const std::size_t mid = lo + (hi - lo) / 2;
    long long inv = count_inversions(b, scratch, lo, mid) + count_inversions(b, scratch, mid, hi);
    std::size_t i = lo;
    std::size_t j = mid;
    std::size_t k = lo;
    while (i < mid && j < hi) {
        if (b[j] < b[i]) {
            inv += static_cast<long long>(mid - i);
            scratch[k++] = b[j++];
        } else {
            scratch[k++] = b[i++];
        }
    }
    while (i < mid) scratch[k++] = b[i++];
    while (j < hi) scratch[k++] = b[j++];
    std::copy(scratch.begin() + static_cast<std::ptrdiff_t>(lo), scratch.begin() + static_cast<std::ptrdiff_t>(hi),
              b.begin() + static_cast<std::ptrdiff_t>(lo));
    return inv;
}

inline long long tie_pair_count(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    long long total = 0;
    std::size_t i = 0;
    while (i < v.size()) {
        std::size_t j = i;
        while (j < v.size() && v[j] == v[i]) ++j;
        const auto t = static_cast<long long>(j - i);
        total += t * (t - 1) / 2;
        i = j;
    }
    return total;
}

} // namespace detail

// Tie-adjusted Kendall rank correlation via Knight's O(n log n) algorithm.
// Pairs tied in both lists count in neither T nor U.
inline TauResult kendall_tau_b(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw usage_error("kendall_tau_b: size mismatch");
    const std::size_t n = a.size();
    if (n < 2) throw usage_error("kendall_tau_b: need at least two observations");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        if (a[x] != a[y]) return a[x] < a[y];
        return b[x] < b[y];
    });

    const auto n0 = static_cast<long long>(n) * (static_cast<long long>(n) - 1) / 2;

    // tie counts: n1 in a, n2 in b, n3 jointly tied
    long long n1 = 0;
    long long n3 = 0;
    {
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j < n && a[order[j]] == a[order[i]]) ++j;
            const auto t = static_cast<long long>(j - i);
            n1 += t * (t - 1) / 2;
            std::size_t k = i; // b runs inside an a-tie group are joint ties
            while (k < j) {
                std::size_t l = k;
                while (l < j && b[order[l]] == b[order[k]]) ++l;
                const auto u = static_cast<long long>(l - k);
                n3 += u * (u - 1) / 2;
                k = l;
            }
            i = j;
        }
    }
    std::vector<double> b_sorted(n);
    for (std::size_t i = 0; i < n; ++i) b_sorted[i] = b[order[i]];
    const long long n2 = detail::tie_pair_count(b_sorted);

    std::vector<double> scratch(n);
    const long long discordant = detail::count_inversions(b_sorted, scratch, 0, n);

    const long long concordant = n0 - n1 - n2 + n3 - discordant;
    const long long denom_a = n0 - n1; // P + Q + U
    const long long denom_b = n0 - n2; // P + Q + T
    if (denom_a == 0 || denom_b == 0) {
        throw undefined_metric_error("kendall_tau_b: a ranking is entirely tied");
    }

    TauResult r;
    r.concordant = concordant;
    r.discordant = discordant;
    r.ties_a_only = n1 - n3;
    r.ties_b_only = n2 - n3;
    r.tau = static_cast<double>(concordant - discordant) /
            std::sqrt(static_cast<double>(denom_b) * static_cast<double>(denom_a));
    return r;
}

// Rank agreement between graph distance (ascending) and cosine similarity
// (descending) over sampled finite-distance node pairs; tau = 1 means the
// embedding orders every pair exactly as the graph metric does.
inline TauResult distance_similarity_kt_full(const Tensor& z_normalized, const DistanceMatrix& dm,
                                             std::size_t pair_budget, std::uint64_t seed) {
    if (z_normalized.rows() != dm.n()) throw usage_error("distance_similarity_kt: row count mismatch");
    const PairBatch sampled = sample_distance_pairs(dm, pair_budget, seed);
    std::vector<double> dist;
    std::vector<double> neg_sim;
    dist.reserve(sampled.size());
    neg_sim.reserve(sampled.size());
    for (const PairSample& p : sampled.pairs) {
        if (p.d_g == DistanceMatrix::kUnreachable) continue;
        dist.push_back(static_cast<double>(p.d_g));
        neg_sim.push_back(-row_dot(z_normalized, p.i, z_normalized, p.j));
    }
    if (dist.size() < 2) throw undefined_metric_error("distance_similarity_kt: fewer than two finite-distance pairs");
    return kendall_tau_b(dist, neg_sim);
}

inline double distance_similarity_kt(const Tensor& z_normalized, const DistanceMatrix& dm,
                                     std::size_t pair_budget, std::uint64_t seed) {
    return distance_similarity_kt_full(z_normalized, dm, pair_budget, seed).tau;
}

// Evaluation pair budget: exact at paper scale, sampled beyond it.
inline std::size_t default_kt_budget(int num_nodes) {
    if (num_nodes <= 1500) return static_cast<std::size_t>(detail::pair_count(num_nodes));
    return 1000000;
}

struct DistortionResult {
    double alpha = 1.0; // max stretch ratio / min stretch ratio, >= 1
    double r = 0.0;     // min stretch ratio
    bool infinite = false;

    double alpha_value() const { return infinite ? std::numeric_limits<double>::infinity() : alpha; }
};

// Distortion of the raw embedding against graph distances: with
// rho_ij = ||z_i - z_j|| / d_G(i,j) over finite pairs, r = min rho and
// alpha = max rho / min rho. Coincident embeddings of distinct nodes give
// the infinite-distortion flag.
inline DistortionResult empirical_distortion(const Tensor& z_raw, const DistanceMatrix& dm) {
    if (z_raw.rows() != dm.n()) throw usage_error("empirical_distortion: row count mismatch");
    const int n = dm.n();
    double min_rho = std::numeric_limits<double>::infinity();
    double max_rho = 0.0;
    bool any = false;
    bool degenerate = false;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const int d = dm(i, j);
            if (d == DistanceMatrix::kUnreachable || d == 0) continue;
            any = true;
            const double dz = row_euclidean(z_raw, i, j);
            if (dz == 0.0) {
                degenerate = true;
                continue;
            }
            const double rho = dz / static_cast<double>(d);
            min_rho = std::min(min_rho, rho);
            max_rho = std::max(max_rho, rho);
        }
    }
    if (!any) throw undefined_metric_error("empirical_distortion: no finite-distance pairs");
    if (degenerate) return {std::numeric_limits<double>::infinity(), 0.0, true};
    return {std::max(1.0, max_rho / min_rho), min_rho, false};
}

// Evaluation output for one trained model.
struct MetricsRecord {
    double auc = 0.0;
    double kendall_tau = 0.0;
    double distortion = 1.0; // +inf encodes the undefined/infinite flag
    long long P = 0;
    long long Q = 0;
    long long T = 0;
    long long U = 0;
    std::string dataset;
    std::string model;
    std::string variant;
    std::string task;
    std::uint64_t seed = 0;
    int epochs_run = 0;
    double wall_time_s = 0.0;

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["auc"] = auc;
        j["kendall_tau"] = kendall_tau;
        if (std::isfinite(distortion)) {
            j["distortion"] = distortion;
        } else {
            j["distortion"] = nullptr; // undefined / infinite flag
        }
        j["P"] = P;
        j["Q"] = Q;
        j["T"] = T;
        j["U"] = U;
        j["metadata"] = {{"dataset", dataset}, {"model", model},   {"variant", variant},       {"task", task},
                         {"seed", seed},       {"epochs_run", epochs_run}, {"wall_time_s", wall_time_s}};
        return j;
    }

    static MetricsRecord from_json(const nlohmann::json& j) {
        MetricsRecord r;
        r.auc = j.at("auc").get<double>();
        r.kendall_tau = j.at("kendall_tau").get<double>();
        r.distortion = j.at("distortion").is_null() ? std::numeric_limits<double>::infinity()
                                                    : j.at("distortion").get<double>();
        r.P = j.at("P").get<long long>();
        r.Q = j.at("Q").get<long long>();
        r.T = j.at("T").get<long long>();
        r.U = j.at("U").get<long long>();
        const auto& m = j.at("metadata");
        r.dataset = m.at("dataset").get<std::string>();
        r.model = m.at("model").get<std::string>();
        r.variant = m.at("variant").get<std::string>();
        r.task = m.at("task").get<std::string>();
        r.seed = m.at("seed").get<std::uint64_t>();
        r.epochs_run = m.at("epochs_run").get<int>();
        r.wall_time_s = m.at("wall_time_s").get<double>();
        return r;
    }
};

} // namespace ignn
