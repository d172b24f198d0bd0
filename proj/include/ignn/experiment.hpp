#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "ignn/autodiff.hpp"
#include "ignn/checkpoint.hpp"
#include "ignn/config.hpp"
#include "ignn/distance.hpp"
#include "ignn/error.hpp"
#include "ignn/graph.hpp"
#include "ignn/hash.hpp"
#include "ignn/metrics.hpp"
#include "ignn/models.hpp"
#include "ignn/objective.hpp"
#include "ignn/pairs.hpp"
#include "ignn/rng.hpp"

#include <json.hpp>

namespace ignn {

inline constexpr double kAdamBeta1 = 0.9;
inline constexpr double kAdamBeta2 = 0.999;
inline constexpr double kAdamEps = 1e-8;

struct AdamState {
    std::vector<Tensor> m;
    std::vector<Tensor> v;
    long long step = 0;

    static AdamState like(const ModelWeights& w) {
        AdamState s;
        for (const Tensor& t : w.tensors) {
            s.m.emplace_back(t.rows(), t.cols());
            s.v.emplace_back(t.rows(), t.cols());
        }
        return s;
    }
};

// One Adam update with bias-corrected moments.
inline void adam_step(ModelWeights& weights, const std::vector<const Tensor*>& grads, AdamState& state,
                      double learning_rate) {
    if (grads.size() != weights.tensors.size() || state.m.size() != weights.tensors.size()) {
        throw usage_error("adam_step: weight/gradient/state count mismatch");
    }
    ++state.step;
    const double bc1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(state.step));
    for (std::size_t i = 0; i < weights.tensors.size(); ++i) {
        Tensor& w = weights.tensors[i];
        const Tensor& g = *grads[i];
        if (!w.same_shape(g)) throw usage_error("adam_step: gradient shape mismatch");
        Tensor& m = state.m[i];
        Tensor& v = state.v[i];
        for (std::size_t k = 0; k < w.size(); ++k) {
            const double gk = g.data()[k];
            m.data()[k] = kAdamBeta1 * m.data()[k] + (1.0 - kAdamBeta1) * gk;
            v.data()[k] = kAdamBeta2 * v.data()[k] + (1.0 - kAdamBeta2) * gk * gk;
            const double m_hat = m.data()[k] / bc1;
            const double v_hat = v.data()[k] / bc2;
            w.data()[k] -= learning_rate * m_hat / (std::sqrt(v_hat) + kAdamEps);
        }
    }
}

struct EpochStats {
    int epoch = 0;
    double train_loss = 0.0;
    double val_auc = 0.0;
    double val_kt = 0.0;
};

struct TrainHistory {
    std::vector<EpochStats> epochs;
    int best_epoch = 0; // 1-based epoch index of the returned weights

    const EpochStats& best() const { return epochs.at(static_cast<std::size_t>(best_epoch) - 1); }
};

// Everything a training run consumes: graphs, distances, features, and the
// fixed evaluation pair sets. Immutable during training.
struct DataBundle {
    Graph full_graph{0, {}};        // evaluation graph
    Graph train_graph{0, {}};       // message-passing graph
    DistanceMatrix train_dist{0};   // loss targets (training graph only)
    DistanceMatrix eval_dist{0};    // metric distances (full graph)
    Tensor features;                // model input, hash columns included
    int base_feature_dim = 0;
    std::vector<Edge> train_pos;
    std::vector<Edge> val_pos;
    std::vector<Edge> test_pos;
    std::vector<Edge> val_neg;
    std::vector<Edge> test_neg;
    std::vector<Edge> epoch_exclude; // never sampled as per-epoch training pairs
    std::optional<Partition> partition;
    std::string dataset_name;
    int isolated_train_nodes = 0;
};

// Builds the run's data: edge split (link) or evaluation pair sets
// (pairwise), APSP distances, and the (optionally hash-augmented) feature
// matrix. Resolves hash_dim in cfg so the checkpoint echoes the value used.
inline DataBundle prepare_data(TrainConfig& cfg, const Graph& graph, std::optional<Partition> partition,
                               std::optional<Tensor> features) {
    validate(cfg);
    DataBundle b;
    b.full_graph = graph;
    b.partition = std::move(partition);
    b.dataset_name = cfg.dataset_name.empty() ? "unnamed" : cfg.dataset_name;

    if (cfg.task == Task::link) {
        EdgeSplit split = split_edges(graph, cfg.train_frac, cfg.val_frac, cfg.seed);
        b.train_graph = std::move(split.train_graph);
        b.val_pos = std::move(split.val_pos);
        b.test_pos = std::move(split.test_pos);
        b.isolated_train_nodes = split.isolated_train_nodes;
        b.train_pos = b.train_graph.edges();
        if (b.val_pos.empty() || b.test_pos.empty()) {
            throw parameter_error("prepare_data: split leaves an empty validation or test edge set");
        }
        b.val_neg = sample_negative_pairs(b.full_graph, b.val_pos.size(),
                                          derive_seed(cfg.seed, SeedStream::eval_pairs, 1));
        b.test_neg = sample_negative_pairs(b.full_graph, b.test_pos.size(),
                                           derive_seed(cfg.seed, SeedStream::eval_pairs, 2), b.val_neg);
        b.epoch_exclude = b.val_pos;
        b.epoch_exclude.insert(b.epoch_exclude.end(), b.test_pos.begin(), b.test_pos.end());
        b.train_dist = bfs_apsp(b.train_graph);
        b.eval_dist = bfs_apsp(b.full_graph);
    } else {
        if (!b.partition.has_value()) throw parameter_error("prepare_data: pairwise task requires labels");
        b.train_graph = graph; // no edges are held out for pair classification
        b.train_pos = graph.edges();
        const auto n_val = static_cast<std::size_t>(
            std::max<long long>(1, std::llround(cfg.val_frac * static_cast<double>(graph.num_edges()))));
        const auto n_test = static_cast<std::size_t>(std::max<long long>(
            1, std::llround((1.0 - cfg.train_frac - cfg.val_frac) * static_cast<double>(graph.num_edges()))));
        std::vector<Edge> taken;
        auto draw = [&](bool same, std::size_t count, std::uint64_t index) {
            auto pairs = sample_community_pairs(*b.partition, same, count,
                                                derive_seed(cfg.seed, SeedStream::eval_pairs, index), taken);
            taken.insert(taken.end(), pairs.begin(), pairs.end());
            return pairs;
        };
        b.val_pos = draw(true, n_val, 1);
        b.val_neg = draw(false, n_val, 2);
        b.test_pos = draw(true, n_test, 3);
        b.test_neg = draw(false, n_test, 4);
        b.epoch_exclude = std::move(taken);
        b.train_dist = bfs_apsp(b.train_graph);
        b.eval_dist = b.train_dist;
    }

    Tensor x = features.has_value() ? std::move(*features) : one_hot_features(graph.num_nodes());
    if (x.rows() != graph.num_nodes()) throw data_error("prepare_data: feature rows do not match node count");
    b.base_feature_dim = x.cols();
    if (hash_enabled(cfg.variant)) {
        if (cfg.hash_dim == 0) cfg.hash_dim = b.base_feature_dim;
        const HashConfig hcfg{cfg.hash_dim};
        b.features = augment_features(x, hcfg, decimal_node_ids(graph.num_nodes()));
    } else {
        b.features = std::move(x);
    }
    return b;
}

namespace detail {

inline std::size_t resolve_mse_budget(const TrainConfig& cfg, const DataBundle& b) {
    if (cfg.loss.mse_pair_budget > 0) return cfg.loss.mse_pair_budget;
    const int n = b.train_graph.num_nodes();
    if (n <= 500) return pair_count(n);
    return 4 * b.train_pos.size();
}

inline PairBatch epoch_task_batch(const TrainConfig& cfg, const DataBundle& b, int epoch) {
    if (cfg.task == Task::link) {
        const auto negatives = sample_negative_pairs(
            b.train_graph, b.train_pos.size(),
            derive_seed(cfg.seed, SeedStream::negative_sampling, static_cast<std::uint64_t>(epoch)),
            b.epoch_exclude);
        return make_pair_batch(Task::link, b.train_pos, negatives, std::nullopt, b.train_dist);
    }
    const std::size_t count = b.full_graph.num_edges();
    const auto same = sample_community_pairs(
        *b.partition, true, count,
        derive_seed(cfg.seed, SeedStream::task_pairs, 2 * static_cast<std::uint64_t>(epoch)), b.epoch_exclude);
    const auto cross = sample_community_pairs(
        *b.partition, false, count,
        derive_seed(cfg.seed, SeedStream::task_pairs, 2 * static_cast<std::uint64_t>(epoch) + 1),
        b.epoch_exclude);
    return make_pair_batch(Task::pairwise, same, cross, b.partition, b.train_dist);
}

inline void score_pairs(const Tensor& z, const std::vector<Edge>& pairs, int label,
                        std::vector<double>& scores, std::vector<int>& labels) {
    for (const Edge& e : pairs) {
        scores.push_back(row_dot(z, e.first, z, e.second));
        labels.push_back(label);
    }
}

inline double pair_auc(const Tensor& z, const std::vector<Edge>& pos, const std::vector<Edge>& neg) {
    std::vector<double> scores;
    std::vector<int> labels;
    scores.reserve(pos.size() + neg.size());
    labels.reserve(pos.size() + neg.size());
    score_pairs(z, pos, 1, scores, labels);
    score_pairs(z, neg, 0, scores, labels);
    // sigma is monotone, so ranking by raw inner products gives the same AUC
    return auc_roc(scores, labels);
}

} // namespace detail

struct TrainResult {
    ModelWeights weights; // best-validation weights
    TrainHistory history;
    double wall_time_s = 0.0;

    int epochs_run() const { return static_cast<int>(history.epochs.size()); }
};

// Full-batch training with per-epoch resampled pair batches and early
// stopping on validation AUC. Deterministic given (config, data, seed).
inline TrainResult train(TrainConfig cfg, const DataBundle& bundle) {
    validate(cfg);
    const auto t_start = std::chrono::steady_clock::now();

    ModelConfig mcfg = cfg.model;
    mcfg.seed = cfg.seed;
    const SparseAdjacency adj = build_model_adjacency(mcfg.arch, bundle.train_graph);
    const Tensor& x = bundle.features;

    ModelWeights weights = init_weights(mcfg, x.cols());
    AdamState adam = AdamState::like(weights);

    TrainResult result;
    ModelWeights best = weights;
    double best_auc = -std::numeric_limits<double>::infinity();
    int best_epoch = 0;
    int epochs_without_improvement = 0;
    const std::size_t kt_budget = default_kt_budget(bundle.full_graph.num_nodes());
    const std::uint64_t kt_seed = derive_seed(cfg.seed, SeedStream::eval_pairs, 0);

    Tape tape;
    for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        tape.clear();
        const std::vector<int> wids = lift_weights(tape, weights);
        const ForwardResult fwd = forward(tape, mcfg, wids, adj, tape.constant(x));

        const PairBatch task_batch = detail::epoch_task_batch(cfg, bundle, epoch);
        PairBatch dist_batch;
        if (cfg.loss.lambda_mse > 0.0) {
            dist_batch = sample_distance_pairs(
                bundle.train_dist, detail::resolve_mse_budget(cfg, bundle),
                derive_seed(cfg.seed, SeedStream::distance_pairs, static_cast<std::uint64_t>(epoch)));
        }
        const int loss_id = combined_loss(tape, fwd.normalized, task_batch, dist_batch, cfg.loss);
        const double loss = tape.value(loss_id)(0, 0);
        if (!std::isfinite(loss)) {
            throw training_error("training diverged (non-finite loss) at epoch " + std::to_string(epoch));
        }
        tape.backward(loss_id);

        std::vector<const Tensor*> grads;
        grads.reserve(wids.size());
        for (int id : wids) grads.push_back(&tape.grad(id));
        adam_step(weights, grads, adam, cfg.learning_rate);

        const Embeddings emb = compute_embeddings(mcfg, weights, adj, x);
        const double val_auc = detail::pair_auc(emb.normalized, bundle.val_pos, bundle.val_neg);
        const double val_kt = distance_similarity_kt(emb.normalized, bundle.eval_dist, kt_budget, kt_seed);
        result.history.epochs.push_back({epoch, loss, val_auc, val_kt});

        if (val_auc > best_auc) {
            best_auc = val_auc;
            best = weights;
            best_epoch = epoch;
            epochs_without_improvement = 0;
        } else {
            if (val_auc == best_auc) { // tie: prefer the longer-trained weights
                best = weights;
                best_epoch = epoch;
            }
            ++epochs_without_improvement;
            if (epochs_without_improvement > cfg.patience) break;
        }
    }

    result.weights = std::move(best);
    result.history.best_epoch = best_epoch;
    result.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return result;
}

struct RunInfo {
    int epochs_run = 0;
    double wall_time_s = 0.0;
};

// Test-set metrics for trained weights: AUC over held-out pairs, the
// distance/similarity Kendall's Tau-b, and empirical distortion, all on the
// evaluation graph.
inline MetricsRecord evaluate(const ModelWeights& weights, const TrainConfig& cfg, const DataBundle& bundle,
                              const RunInfo& info = {}) {
    ModelConfig mcfg = cfg.model;
    mcfg.seed = cfg.seed;
    const SparseAdjacency adj = build_model_adjacency(mcfg.arch, bundle.train_graph);
    const Embeddings emb = compute_embeddings(mcfg, weights, adj, bundle.features);

    MetricsRecord rec;
    rec.auc = detail::pair_auc(emb.normalized, bundle.test_pos, bundle.test_neg);
    const TauResult kt = distance_similarity_kt_full(emb.normalized, bundle.eval_dist,
                                                     default_kt_budget(bundle.full_graph.num_nodes()),
                                                     derive_seed(cfg.seed, SeedStream::eval_pairs, 0));
    rec.kendall_tau = kt.tau;
    rec.P = kt.concordant;
    rec.Q = kt.discordant;
    rec.T = kt.ties_a_only;
    rec.U = kt.ties_b_only;
    rec.distortion = empirical_distortion(emb.raw, bundle.eval_dist).alpha_value();
    rec.dataset = bundle.dataset_name;
    rec.model = arch_name(cfg.model.arch);
    rec.variant = variant_name(cfg.variant);
    rec.task = task_name(cfg.task);
    rec.seed = cfg.seed;
    rec.epochs_run = info.epochs_run;
    rec.wall_time_s = info.wall_time_s;
    return rec;
}

// ---------------------------------------------------------------------------
// Sweep grid
// ---------------------------------------------------------------------------

struct SweepGrid {
    std::vector<std::string> models = {"gcn"};
    std::vector<std::string> variants = {"base"};
    std::vector<double> learning_rates = {0.01};
    std::vector<double> lambda_bce = {1.0};
    std::vector<double> lambda_mse = {0.0};
    std::vector<std::uint64_t> seeds = {1};
    int workers = 1;
};

struct SweepCell {
    std::string model;
    std::string variant;
    double learning_rate = 0.0;
    double lambda_bce = 0.0;
    double lambda_mse = 0.0;
    std::uint64_t seed = 0;
};

struct SweepRow {
    SweepCell cell;
    MetricsRecord record;
    double val_auc = 0.0;
};

namespace detail {

inline std::string num_slug(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", x);
    return buf;
}

inline std::string cell_slug(const SweepCell& c) {
    return c.model + "_" + c.variant + "_lr" + num_slug(c.learning_rate) + "_lb" + num_slug(c.lambda_bce) +
           "_lm" + num_slug(c.lambda_mse) + "_s" + std::to_string(c.seed);
}

inline std::vector<SweepCell> enumerate_cells(const SweepGrid& g) {
    std::vector<SweepCell> cells;
    for (const auto& model : g.models) {
        for (const auto& variant : g.variants) {
            for (double lr : g.learning_rates) {
                for (double lb : g.lambda_bce) {
                    for (double lm : g.lambda_mse) {
                        for (std::uint64_t seed : g.seeds) {
                            cells.push_back({model, variant, lr, lb, lm, seed});
                        }
                    }
                }
            }
        }
    }
    return cells;
}

inline TrainConfig cell_config(TrainConfig base, const SweepCell& c) {
    base.model.arch = arch_from_name(c.model);
    base.variant = variant_from_name(c.variant);
    base.learning_rate = c.learning_rate;
    base.loss.lambda_bce = c.lambda_bce;
    base.loss.lambda_mse = c.lambda_mse;
    base.seed = c.seed;
    return base;
}

template <typename Fn>
inline void parallel_for(std::size_t count, int workers, Fn&& fn) {
    const int n_threads = std::max(1, std::min<int>(workers, static_cast<int>(count)));
    if (n_threads == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
            } catch (...) {
                errors[static_cast<std::size_t>(t)] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

} // namespace detail

// Runs one fully specified configuration against in-memory data and returns
// the evaluated record plus the best validation AUC.
inline SweepRow run_cell(const TrainConfig& base, const SweepCell& cell, const Graph& graph,
                         const std::optional<Partition>& partition, const std::optional<Tensor>& features) {
    TrainConfig cfg = detail::cell_config(base, cell);
    DataBundle bundle = prepare_data(cfg, graph, partition, features);
    const TrainResult tr = train(cfg, bundle);
    MetricsRecord rec = evaluate(tr.weights, cfg, bundle, {tr.epochs_run(), tr.wall_time_s});
    return {cell, std::move(rec), tr.history.best().val_auc};
}

// Cartesian grid sweep with per-cell result files (atomic write-then-rename)
// so an interrupted sweep resumes by skipping completed cells. Returns rows
// in grid order and writes the CSV.
inline std::vector<SweepRow> sweep(const TrainConfig& base, const SweepGrid& grid, const Graph& graph,
                                   const std::optional<Partition>& partition,
                                   const std::optional<Tensor>& features, const std::string& csv_path) {
    const std::vector<SweepCell> cells = detail::enumerate_cells(grid);
    if (cells.empty()) throw parameter_error("sweep: empty grid");

    const std::filesystem::path cells_dir = csv_path + ".cells";
    std::filesystem::create_directories(cells_dir);

    std::vector<std::optional<SweepRow>> rows(cells.size());
    std::mutex io_mutex;

    detail::parallel_for(cells.size(), grid.workers, [&](std::size_t i) {
        const SweepCell& cell = cells[i];
        const std::filesystem::path cell_path = cells_dir / (detail::cell_slug(cell) + ".json");

        if (std::filesystem::exists(cell_path)) {
            std::ifstream in(cell_path);
            nlohmann::json j;
            in >> j;
            rows[i] = SweepRow{cell, MetricsRecord::from_json(j.at("record")), j.at("val_auc").get<double>()};
            return;
        }
        TrainConfig probe = detail::cell_config(base, cell);
        try {
            validate(probe);
        } catch (const parameter_error& e) {
            const std::lock_guard<std::mutex> lock(io_mutex);
            std::cerr << "sweep: skipping invalid cell " << detail::cell_slug(cell) << ": " << e.what() << "\n";
            return;
        }
        SweepRow row = run_cell(base, cell, graph, partition, features);
        nlohmann::json j;
        j["record"] = row.record.to_json();
        j["val_auc"] = row.val_auc;
        const std::filesystem::path tmp = cell_path.string() + ".tmp";
        {
            std::ofstream out(tmp);
            out << j.dump();
        }
        std::filesystem::rename(tmp, cell_path);
        rows[i] = std::move(row);
    });

    std::vector<SweepRow> out;
    for (auto& r : rows) {
        if (r.has_value()) out.push_back(std::move(*r));
    }

    std::ofstream csv(csv_path);
    if (!csv) throw data_error("cannot write '" + csv_path + "'");
    csv << "dataset,task,model,variant,lr,lambda_bce,lambda_mse,seed,auc,kendall_tau,distortion,"
           "epochs_run,wall_time_s\n";
    csv.precision(17);
    for (const SweepRow& r : out) {
        csv << r.record.dataset << ',' << r.record.task << ',' << r.cell.model << ',' << r.cell.variant << ','
            << r.cell.learning_rate << ',' << r.cell.lambda_bce << ',' << r.cell.lambda_mse << ','
            << r.cell.seed << ',' << r.record.auc << ',' << r.record.kendall_tau << ',';
        if (std::isfinite(r.record.distortion)) csv << r.record.distortion;
        else csv << "inf";
        csv << ',' << r.record.epochs_run << ',' << r.record.wall_time_s << '\n';
    }
    return out;
}

// Best validation cell per (model, variant), mirroring best-validation
// hyper-parameter selection.
inline std::vector<SweepRow> best_by_validation(const std::vector<SweepRow>& rows) {
    std::vector<SweepRow> best;
    for (const SweepRow& r : rows) {
        auto it = std::find_if(best.begin(), best.end(), [&](const SweepRow& b) {
            return b.cell.model == r.cell.model && b.cell.variant == r.cell.variant;
        });
        if (it == best.end()) {
            best.push_back(r);
        } else if (r.val_auc > it->val_auc) {
            *it = r;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Variant suite: base / hash / mse / both over a set of seeds
// ---------------------------------------------------------------------------

struct MetricSummary {
    double mean = 0.0;
    double stddev = 0.0; // sample standard deviation; 0 for a single seed
};

inline MetricSummary summarize(const std::vector<double>& xs) {
    MetricSummary s;
    if (xs.empty()) return s;
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / static_cast<double>(xs.size());
    if (xs.size() >= 2) {
        double acc = 0.0;
        for (double x : xs) acc += (x - s.mean) * (x - s.mean);
        s.stddev = std::sqrt(acc / static_cast<double>(xs.size() - 1));
    }
    return s;
}

struct VariantSummary {
    Variant variant = Variant::base;
    std::vector<MetricsRecord> records; // one per seed, in seed order
    MetricSummary auc;
    MetricSummary kendall_tau;
};

inline const std::array<Variant, 4>& variant_order() {
    static const std::array<Variant, 4> order{Variant::base, Variant::hash, Variant::mse, Variant::both};
    return order;
}

// Runs all four variants for one architecture across seeds and aggregates
// mean +/- sample standard deviation per metric.
inline std::vector<VariantSummary> run_variant_suite(const TrainConfig& base, Arch arch,
                                                     const std::vector<std::uint64_t>& seeds,
                                                     const Graph& graph,
                                                     const std::optional<Partition>& partition,
                                                     const std::optional<Tensor>& features, int workers = 1) {
    if (seeds.empty()) throw parameter_error("run_variant_suite: no seeds");
    struct Job {
        Variant variant;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (Variant v : variant_order()) {
        for (std::uint64_t s : seeds) jobs.push_back({v, s});
    }
    std::vector<MetricsRecord> records(jobs.size());

    detail::parallel_for(jobs.size(), workers, [&](std::size_t i) {
        const Job& job = jobs[i];
        const bool uses_mse = job.variant == Variant::mse || job.variant == Variant::both;
        const SweepCell cell{arch_name(arch), variant_name(job.variant), base.learning_rate,
                             base.loss.lambda_bce, uses_mse ? base.loss.lambda_mse : 0.0, job.seed};
        records[i] = run_cell(base, cell, graph, partition, features).record;
    });

    std::vector<VariantSummary> out;
    std::size_t idx = 0;
    for (Variant v : variant_order()) {
        VariantSummary s;
        s.variant = v;
        std::vector<double> aucs;
        std::vector<double> kts;
        for (std::size_t k = 0; k < seeds.size(); ++k) {
            const MetricsRecord& r = records[idx++];
            aucs.push_back(r.auc);
            kts.push_back(r.kendall_tau);
            s.records.push_back(r);
        }
        s.auc = summarize(aucs);
        s.kendall_tau = summarize(kts);
        out.push_back(std::move(s));
    }
    return out;
}

inline std::string format_variant_table(const std::string& model, const std::vector<VariantSummary>& rows) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(3);
    for (const VariantSummary& s : rows) {
        std::string name = model;
        if (s.variant != Variant::base) name += " + " + variant_name(s.variant);
        os << name;
        for (std::size_t i = name.size(); i < 16; ++i) os << ' ';
        os << "AUC " << s.auc.mean << " +/- " << s.auc.stddev << "    KT " << s.kendall_tau.mean << " +/- "
           << s.kendall_tau.stddev << "\n";
    }
    return os.str();
}

} // namespace ignn
