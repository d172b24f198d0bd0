#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>

#include "ignn/error.hpp"
#include "ignn/graph.hpp"
#include "ignn/models.hpp"
#include "ignn/objective.hpp"
#include "ignn/pairs.hpp"

namespace ignn {

enum class Variant { base, hash, mse, both };

inline std::string variant_name(Variant v) {
    switch (v) {
        case Variant::base: return "base";
        case Variant::hash: return "hash";
        case Variant::mse: return "mse";
        case Variant::both: return "both";
    }
    return "?";
}

inline Variant variant_from_name(const std::string& s) {
    if (s == "base") return Variant::base;
    if (s == "hash") return Variant::hash;
    if (s == "mse") return Variant::mse;
    if (s == "both") return Variant::both;
    throw parameter_error("unknown variant '" + s + "' (expected base, hash, mse, or both)");
}

inline bool hash_enabled(Variant v) { return v == Variant::hash || v == Variant::both; }

inline std::string task_name(Task t) { return t == Task::link ? "link" : "pairwise"; }

inline Task task_from_name(const std::string& s) {
    if (s == "link") return Task::link;
    if (s == "pairwise") return Task::pairwise;
    throw parameter_error("unknown task '" + s + "' (expected link or pairwise)");
}

struct TrainConfig {
    ModelConfig model;
    LossConfig loss;
    Variant variant = Variant::base;
    Task task = Task::link;
    double learning_rate = 0.01;
    int max_epochs = 2000;
    int patience = 100;
    std::uint64_t seed = 1;
    int hash_dim = 0; // 0 = match the observed feature dimension
    double train_frac = 0.8;
    double val_frac = 0.1;
    std::string dataset_dir;
    std::string dataset_name;
    std::string out_dir = ".";
};

// Enforces the variant contract: base runs force both IGNN ingredients off,
// the other variants must be internally consistent or the config is
// rejected.
inline void validate(TrainConfig& cfg) {
    validate(cfg.model);
    if (!(cfg.learning_rate > 0.0)) throw parameter_error("config: learning_rate must be positive");
    if (cfg.max_epochs < 1) throw parameter_error("config: max_epochs must be >= 1");
    if (cfg.patience < 0) throw parameter_error("config: patience must be >= 0");
    if (cfg.hash_dim < 0) throw parameter_error("config: hash_dim must be >= 0");
    if (!(cfg.train_frac > 0.0) || !(cfg.val_frac > 0.0) || !(cfg.train_frac + cfg.val_frac < 1.0)) {
        throw parameter_error("config: split fractions must be positive with train + val < 1");
    }

    switch (cfg.variant) {
        case Variant::base:
            cfg.loss.lambda_mse = 0.0; // forced off, whatever the config said
            break;
        case Variant::hash:
            if (cfg.loss.lambda_mse != 0.0) {
                throw parameter_error("config: variant=hash requires lambda_mse = 0");
            }
            break;
        case Variant::mse:
        case Variant::both:
            if (!(cfg.loss.lambda_mse > 0.0)) {
                throw parameter_error("config: variant=" + variant_name(cfg.variant) +
                                      " requires lambda_mse > 0");
            }
            break;
    }
    validate(cfg.loss);
}

namespace detail {

inline double parse_double_value(const std::string& v, const std::string& key) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw parameter_error("config: key '" + key + "' has non-numeric value '" + v + "'");
    }
}

inline long long parse_int_value(const std::string& v, const std::string& key) {
    long long x = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc{} || p != v.data() + v.size()) {
        throw parameter_error("config: key '" + key + "' has non-integer value '" + v + "'");
    }
    return x;
}

inline std::uint64_t parse_u64_value(const std::string& v, const std::string& key) {
    std::uint64_t x = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc{} || p != v.data() + v.size()) {
        throw parameter_error("config: key '" + key + "' has non-integer value '" + v + "'");
    }
    return x;
}

} // namespace detail

// Applies one "key = value" assignment; keys use the section-qualified names
// model.* and loss.*. Unknown keys are hard errors.
inline void set_config_key(TrainConfig& cfg, const std::string& key, const std::string& value) {
    using detail::parse_double_value;
    using detail::parse_int_value;
    using detail::parse_u64_value;

    if (key == "dataset_dir") cfg.dataset_dir = value;
    else if (key == "dataset") cfg.dataset_name = value;
    else if (key == "out_dir") cfg.out_dir = value;
    else if (key == "task") cfg.task = task_from_name(value);
    else if (key == "variant") cfg.variant = variant_from_name(value);
    else if (key == "seed") cfg.seed = parse_u64_value(value, key);
    else if (key == "learning_rate") cfg.learning_rate = parse_double_value(value, key);
    else if (key == "max_epochs") cfg.max_epochs = static_cast<int>(parse_int_value(value, key));
    else if (key == "patience") cfg.patience = static_cast<int>(parse_int_value(value, key));
    else if (key == "hash_dim") cfg.hash_dim = static_cast<int>(parse_int_value(value, key));
    else if (key == "train_frac") cfg.train_frac = parse_double_value(value, key);
    else if (key == "val_frac") cfg.val_frac = parse_double_value(value, key);
    else if (key == "model.arch") cfg.model.arch = arch_from_name(value);
    else if (key == "model.num_layers") cfg.model.num_layers = static_cast<int>(parse_int_value(value, key));
    else if (key == "model.hidden_dim") cfg.model.hidden_dim = static_cast<int>(parse_int_value(value, key));
    else if (key == "model.output_dim") cfg.model.output_dim = static_cast<int>(parse_int_value(value, key));
    else if (key == "model.gin_epsilon") cfg.model.gin_epsilon = parse_double_value(value, key);
    else if (key == "loss.lambda_bce") cfg.loss.lambda_bce = parse_double_value(value, key);
    else if (key == "loss.lambda_mse") cfg.loss.lambda_mse = parse_double_value(value, key);
    else if (key == "loss.alpha") cfg.loss.alpha = parse_double_value(value, key);
    else if (key == "loss.mse_pair_budget") cfg.loss.mse_pair_budget = static_cast<std::size_t>(parse_int_value(value, key));
    else throw parameter_error("config: unknown key '" + key + "'");
}

// INI-style config: top-level keys plus [model] and [loss] sections whose
// keys mirror the TrainConfig field names.
inline TrainConfig parse_config_text(std::istream& in, const std::string& origin) {
    TrainConfig cfg;
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view s = detail::trim(line);
        if (s.empty() || s.front() == '#' || s.front() == ';') continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw parse_error(origin + " line " + std::to_string(line_no) + ": unterminated section");
            section = std::string(detail::trim(s.substr(1, s.size() - 2)));
            if (section != "model" && section != "loss") {
                throw parameter_error(origin + " line " + std::to_string(line_no) + ": unknown section '" + section + "'");
            }
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string_view::npos) {
            throw parse_error(origin + " line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        std::string key{detail::trim(s.substr(0, eq))};
        const std::string value{detail::trim(s.substr(eq + 1))};
        if (key.empty()) throw parse_error(origin + " line " + std::to_string(line_no) + ": empty key");
        if (!section.empty()) key = section + "." + key;
        set_config_key(cfg, key, value);
    }
    return cfg;
}

inline TrainConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open config file '" + path + "'");
    return parse_config_text(in, path);
}

// "key=value" override, e.g. loss.lambda_mse=10 or seed=3.
inline void apply_override(TrainConfig& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw parameter_error("override '" + assignment + "' is not key=value");
    const std::string key{detail::trim(std::string_view(assignment).substr(0, eq))};
    const std::string value{detail::trim(std::string_view(assignment).substr(eq + 1))};
    set_config_key(cfg, key, value);
}

} // namespace ignn
