#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include "ignn/config.hpp"
#include "ignn/error.hpp"
#include "ignn/models.hpp"

#include <json.hpp>

namespace ignn {

inline constexpr int kCheckpointFormatVersion = 1;

struct Checkpoint {
    TrainConfig config;
    ModelWeights weights;
    int input_dim = 0;
    int epochs_run = 0;
    double wall_time_s = 0.0;
};

inline nlohmann::json config_to_json(const TrainConfig& cfg) {
    return {
        {"dataset", cfg.dataset_name},
        {"task", task_name(cfg.task)},
        {"variant", variant_name(cfg.variant)},
        {"seed", cfg.seed},
        {"learning_rate", cfg.learning_rate},
        {"max_epochs", cfg.max_epochs},
        {"patience", cfg.patience},
        {"hash_dim", cfg.hash_dim},
        {"train_frac", cfg.train_frac},
        {"val_frac", cfg.val_frac},
        {"model",
         {{"arch", arch_name(cfg.model.arch)},
          {"num_layers", cfg.model.num_layers},
          {"hidden_dim", cfg.model.hidden_dim},
          {"output_dim", cfg.model.output_dim},
          {"gin_epsilon", cfg.model.gin_epsilon}}},
        {"loss",
         {{"lambda_bce", cfg.loss.lambda_bce},
          {"lambda_mse", cfg.loss.lambda_mse},
          {"alpha", cfg.loss.alpha},
          {"mse_pair_budget", cfg.loss.mse_pair_budget}}},
    };
}

inline TrainConfig config_from_json(const nlohmann::json& j) {
    TrainConfig cfg;
    cfg.dataset_name = j.at("dataset").get<std::string>();
    cfg.task = task_from_name(j.at("task").get<std::string>());
    cfg.variant = variant_from_name(j.at("variant").get<std::string>());
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.learning_rate = j.at("learning_rate").get<double>();
    cfg.max_epochs = j.at("max_epochs").get<int>();
    cfg.patience = j.at("patience").get<int>();
    cfg.hash_dim = j.at("hash_dim").get<int>();
    cfg.train_frac = j.at("train_frac").get<double>();
    cfg.val_frac = j.at("val_frac").get<double>();
    const auto& m = j.at("model");
    cfg.model.arch = arch_from_name(m.at("arch").get<std::string>());
    cfg.model.num_layers = m.at("num_layers").get<int>();
    cfg.model.hidden_dim = m.at("hidden_dim").get<int>();
    cfg.model.output_dim = m.at("output_dim").get<int>();
    cfg.model.gin_epsilon = m.at("gin_epsilon").get<double>();
    cfg.model.seed = cfg.seed;
    const auto& l = j.at("loss");
    cfg.loss.lambda_bce = l.at("lambda_bce").get<double>();
    cfg.loss.lambda_mse = l.at("lambda_mse").get<double>();
    cfg.loss.alpha = l.at("alpha").get<double>();
    cfg.loss.mse_pair_budget = l.at("mse_pair_budget").get<std::size_t>();
    return cfg;
}

// JSON container: config echo plus per-layer tensors; doubles survive the
// round trip exactly.
inline void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
    nlohmann::json j;
    j["format_version"] = kCheckpointFormatVersion;
    j["config"] = config_to_json(ckpt.config);
    j["input_dim"] = ckpt.input_dim;
    j["epochs_run"] = ckpt.epochs_run;
    j["wall_time_s"] = ckpt.wall_time_s;
    nlohmann::json tensors = nlohmann::json::array();
    for (const Tensor& t : ckpt.weights.tensors) {
        nlohmann::json jt;
        jt["rows"] = t.rows();
        jt["cols"] = t.cols();
        jt["data"] = std::vector<double>(t.data(), t.data() + t.size());
        tensors.push_back(std::move(jt));
    }
    j["tensors"] = std::move(tensors);

    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw data_error("cannot write checkpoint '" + path + "'");
        out << j.dump();
    }
    std::filesystem::rename(tmp, path);
}

inline Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open checkpoint '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw data_error("checkpoint '" + path + "' is not valid JSON: " + e.what());
    }
    if (j.value("format_version", -1) != kCheckpointFormatVersion) {
        throw data_error("checkpoint '" + path + "' has unsupported format version");
    }
    Checkpoint ckpt;
    ckpt.config = config_from_json(j.at("config"));
    ckpt.input_dim = j.at("input_dim").get<int>();
    ckpt.epochs_run = j.at("epochs_run").get<int>();
    ckpt.wall_time_s = j.at("wall_time_s").get<double>();
    for (const auto& jt : j.at("tensors")) {
        Tensor t(jt.at("rows").get<int>(), jt.at("cols").get<int>(),
                 jt.at("data").get<std::vector<double>>());
        ckpt.weights.tensors.push_back(std::move(t));
    }
    return ckpt;
}

} // namespace ignn
