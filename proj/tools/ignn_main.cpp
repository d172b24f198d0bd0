// Command-line front end: dataset generation, training, evaluation,
// hyper-parameter sweeps, and hash-feature inspection.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ignn/ignn.hpp"

#include <CLI11.hpp>

namespace fs = std::filesystem;

namespace {

struct LoadedDataset {
    ignn::Graph graph{0, {}};
    std::optional<ignn::Partition> partition;
    std::optional<ignn::Tensor> features;
};

LoadedDataset load_dataset_dir(const std::string& dir) {
    const fs::path root(dir);
    const fs::path edges = root / "edges.txt";
    if (!fs::exists(edges)) throw ignn::data_error("no edges.txt in '" + dir + "'");
    LoadedDataset d;
    d.graph = ignn::load_edge_list(edges.string());
    const fs::path labels = root / "labels.txt";
    if (fs::exists(labels)) d.partition = ignn::load_labels(labels.string(), d.graph.num_nodes());
    const fs::path features = root / "features.csv";
    if (fs::exists(features)) d.features = ignn::load_features(features.string(), d.graph.num_nodes());
    return d;
}

void fill_dataset_name(ignn::TrainConfig& cfg) {
    if (cfg.dataset_name.empty()) {
        cfg.dataset_name = fs::path(cfg.dataset_dir).filename().string();
        if (cfg.dataset_name.empty()) cfg.dataset_name = "unnamed";
    }
}

int cmd_generate(const std::string& dataset, int cliques, int size, double p, std::uint64_t seed,
                 const std::string& out_dir) {
    if (dataset != "communities") throw ignn::parameter_error("unknown dataset '" + dataset + "'");
    const auto [graph, partition] = ignn::generate_communities(cliques, size, p, seed);
    fs::create_directories(out_dir);

    std::ofstream edges(fs::path(out_dir) / "edges.txt");
    for (const auto& [u, v] : graph.edges()) edges << u << ' ' << v << '\n';
    std::ofstream labels(fs::path(out_dir) / "labels.txt");
    for (int i = 0; i < graph.num_nodes(); ++i) labels << i << ' ' << partition.label(i) << '\n';

    std::cout << "wrote " << graph.num_nodes() << " nodes, " << graph.num_edges() << " edges to " << out_dir
              << "\n";
    return 0;
}

int cmd_train(const std::string& config_path, const std::vector<std::string>& overrides) {
    ignn::TrainConfig cfg = ignn::parse_config_file(config_path);
    for (const std::string& o : overrides) ignn::apply_override(cfg, o);
    ignn::validate(cfg);
    if (cfg.dataset_dir.empty()) throw ignn::parameter_error("config: dataset_dir is required");
    fill_dataset_name(cfg);

    LoadedDataset data = load_dataset_dir(cfg.dataset_dir);
    ignn::DataBundle bundle = ignn::prepare_data(cfg, data.graph, data.partition, data.features);
    if (bundle.isolated_train_nodes > 0) {
        std::cerr << "note: " << bundle.isolated_train_nodes << " nodes isolated by the edge split\n";
    }

    const ignn::TrainResult result = ignn::train(cfg, bundle);
    const ignn::MetricsRecord record =
        ignn::evaluate(result.weights, cfg, bundle, {result.epochs_run(), result.wall_time_s});

    fs::create_directories(cfg.out_dir);
    ignn::Checkpoint ckpt{cfg, result.weights, bundle.features.cols(), result.epochs_run(),
                          result.wall_time_s};
    const fs::path ckpt_path = fs::path(cfg.out_dir) / "checkpoint.json";
    ignn::save_checkpoint(ckpt, ckpt_path.string());
    {
        std::ofstream metrics(fs::path(cfg.out_dir) / "metrics.json");
        metrics << record.to_json().dump(2) << '\n';
    }

    std::cout << record.to_json().dump(2) << '\n';
    std::cerr << "best epoch " << result.history.best_epoch << "/" << result.epochs_run() << ", checkpoint at "
              << ckpt_path.string() << "\n";
    return 0;
}

int cmd_evaluate(const std::string& checkpoint_path, const std::string& data_dir) {
    ignn::Checkpoint ckpt = ignn::load_checkpoint(checkpoint_path);
    ignn::TrainConfig cfg = ckpt.config;
    cfg.dataset_dir = data_dir;
    fill_dataset_name(cfg);

    LoadedDataset data = load_dataset_dir(data_dir);
    ignn::DataBundle bundle = ignn::prepare_data(cfg, data.graph, data.partition, data.features);
    if (bundle.features.cols() != ckpt.input_dim) {
        throw ignn::data_error("checkpoint expects input dimension " + std::to_string(ckpt.input_dim) +
                               " but the data yields " + std::to_string(bundle.features.cols()));
    }
    const ignn::MetricsRecord record =
        ignn::evaluate(ckpt.weights, cfg, bundle, {ckpt.epochs_run, ckpt.wall_time_s});
    std::cout << record.to_json().dump(2) << '\n';
    return 0;
}

ignn::SweepGrid parse_sweep_section(const std::string& config_path) {
    // The sweep file reuses the train config format plus a [sweep] section.
    std::ifstream in(config_path);
    if (!in) throw ignn::data_error("cannot open config file '" + config_path + "'");
    ignn::SweepGrid grid;
    bool in_sweep = false;
    bool has_sweep = false;
    std::string line;
    int line_no = 0;
    auto parse_doubles = [](const std::string& v) {
        std::vector<double> out;
        std::stringstream ss(v);
        std::string tok;
        while (std::getline(ss, tok, ',')) out.push_back(std::stod(std::string(ignn::detail::trim(tok))));
        return out;
    };
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view s = ignn::detail::trim(line);
        if (s.empty() || s.front() == '#' || s.front() == ';') continue;
        if (s.front() == '[') {
            in_sweep = (s == "[sweep]");
            has_sweep = has_sweep || in_sweep;
            continue;
        }
        if (!in_sweep) continue;
        const auto eq = s.find('=');
        if (eq == std::string_view::npos) {
            throw ignn::parse_error("line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key{ignn::detail::trim(s.substr(0, eq))};
        const std::string value{ignn::detail::trim(s.substr(eq + 1))};
        std::stringstream ss(value);
        std::string tok;
        if (key == "models") {
            grid.models.clear();
            while (std::getline(ss, tok, ',')) grid.models.emplace_back(ignn::detail::trim(tok));
        } else if (key == "variants") {
            grid.variants.clear();
            while (std::getline(ss, tok, ',')) grid.variants.emplace_back(ignn::detail::trim(tok));
        } else if (key == "learning_rates") {
            grid.learning_rates = parse_doubles(value);
        } else if (key == "lambda_bce") {
            grid.lambda_bce = parse_doubles(value);
        } else if (key == "lambda_mse") {
            grid.lambda_mse = parse_doubles(value);
        } else if (key == "seeds") {
            grid.seeds.clear();
            while (std::getline(ss, tok, ',')) grid.seeds.push_back(std::stoull(std::string(ignn::detail::trim(tok))));
        } else if (key == "workers") {
            grid.workers = std::stoi(value);
        } else {
            throw ignn::parameter_error("sweep: unknown key '" + key + "'");
        }
    }
    if (!has_sweep) throw ignn::parameter_error("config has no [sweep] section");
    return grid;
}

ignn::TrainConfig parse_base_config_ignoring_sweep(const std::string& config_path) {
    std::ifstream in(config_path);
    if (!in) throw ignn::data_error("cannot open config file '" + config_path + "'");
    std::stringstream filtered;
    std::string line;
    bool in_sweep = false;
    while (std::getline(in, line)) {
        const std::string_view s = ignn::detail::trim(line);
        if (!s.empty() && s.front() == '[') in_sweep = (s == "[sweep]");
        if (!in_sweep) filtered << line << '\n';
    }
    return ignn::parse_config_text(filtered, config_path);
}

int cmd_sweep(const std::string& config_path, const std::string& out_csv, int workers_override) {
    ignn::TrainConfig base = parse_base_config_ignoring_sweep(config_path);
    ignn::SweepGrid grid = parse_sweep_section(config_path);
    if (workers_override > 0) grid.workers = workers_override;
    if (base.dataset_dir.empty()) throw ignn::parameter_error("config: dataset_dir is required");
    fill_dataset_name(base);

    LoadedDataset data = load_dataset_dir(base.dataset_dir);
    const auto rows = ignn::sweep(base, grid, data.graph, data.partition, data.features, out_csv);
    std::cout << "wrote " << rows.size() << " rows to " << out_csv << "\n";
    for (const ignn::SweepRow& r : ignn::best_by_validation(rows)) {
        std::cout << "best " << r.cell.model << "/" << r.cell.variant << ": lr=" << r.cell.learning_rate
                  << " lambda_bce=" << r.cell.lambda_bce << " lambda_mse=" << r.cell.lambda_mse
                  << " seed=" << r.cell.seed << " val_auc=" << r.val_auc << " test_auc=" << r.record.auc
                  << " kt=" << r.record.kendall_tau << "\n";
    }
    return 0;
}

int cmd_hash_features(const std::string& ids_path, int n, const std::string& out_csv) {
    std::ifstream in(ids_path);
    if (!in) throw ignn::data_error("cannot open ids file '" + ids_path + "'");
    std::vector<std::string> ids;
    std::string line;
    while (std::getline(in, line)) {
        const std::string id{ignn::detail::trim(line)};
        if (!id.empty()) ids.push_back(id);
    }
    if (ids.empty()) throw ignn::data_error("ids file '" + ids_path + "' is empty");

    std::ofstream out(out_csv);
    if (!out) throw ignn::data_error("cannot write '" + out_csv + "'");
    out.precision(17);
    const ignn::HashConfig cfg{n};
    for (const std::string& id : ids) {
        const ignn::HashVector h = ignn::hash_vector(id, cfg);
        for (std::size_t i = 0; i < h.size(); ++i) {
            if (i) out << ',';
            out << h[i];
        }
        out << '\n';
    }
    std::cout << "wrote " << ids.size() << " rows x " << n << " columns to " << out_csv << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Graph-embedding laboratory: distance-aware GNN training and evaluation"};
    app.require_subcommand(1);

    auto* generate = app.add_subcommand("generate", "Generate a synthetic dataset directory");
    std::string gen_dataset = "communities";
    int gen_cliques = 20;
    int gen_size = 20;
    double gen_p = 0.01;
    std::uint64_t gen_seed = 1;
    std::string gen_out;
    generate->add_option("--dataset", gen_dataset, "Dataset family (communities)");
    generate->add_option("--cliques", gen_cliques, "Number of cliques");
    generate->add_option("--size", gen_size, "Clique size");
    generate->add_option("--p", gen_p, "Extra inter-clique edge probability");
    generate->add_option("--seed", gen_seed, "Generator seed");
    generate->add_option("--out", gen_out, "Output directory")->required();

    auto* train = app.add_subcommand("train", "Train one configuration");
    std::string train_config;
    std::vector<std::string> train_overrides;
    train->add_option("--config", train_config, "Config file")->required();
    train->add_option("--override", train_overrides, "key=value config overrides");

    auto* evaluate = app.add_subcommand("evaluate", "Evaluate a checkpoint against a dataset directory");
    std::string eval_checkpoint;
    std::string eval_data;
    evaluate->add_option("--checkpoint", eval_checkpoint, "Checkpoint JSON")->required();
    evaluate->add_option("--data", eval_data, "Dataset directory")->required();

    auto* sweep = app.add_subcommand("sweep", "Run a hyper-parameter grid");
    std::string sweep_config;
    std::string sweep_out = "results.csv";
    int sweep_workers = 0;
    sweep->add_option("--config", sweep_config, "Config file with a [sweep] section")->required();
    sweep->add_option("--out", sweep_out, "Output CSV path");
    sweep->add_option("--workers", sweep_workers, "Parallel cell workers (overrides config)");

    auto* hash = app.add_subcommand("hash-features", "Emit hash-augmentation columns for a list of node ids");
    std::string hash_ids;
    int hash_n = 8;
    std::string hash_out;
    hash->add_option("--ids", hash_ids, "File with one node id per line")->required();
    hash->add_option("--n", hash_n, "Hash vector dimension");
    hash->add_option("--out", hash_out, "Output CSV path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) return cmd_generate(gen_dataset, gen_cliques, gen_size, gen_p, gen_seed, gen_out);
        if (train->parsed()) return cmd_train(train_config, train_overrides);
        if (evaluate->parsed()) return cmd_evaluate(eval_checkpoint, eval_data);
        if (sweep->parsed()) return cmd_sweep(sweep_config, sweep_out, sweep_workers);
        if (hash->parsed()) return cmd_hash_features(hash_ids, hash_n, hash_out);
    } catch (const ignn::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
