#pragma once

#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>
#include <vector>

#include "ignn/error.hpp"
#include "ignn/tensor.hpp"

namespace ignn {

// MurmurHash3 x86 32-bit variant, bit-exact with the reference algorithm.
inline std::uint32_t murmur3_32(std::string_view data, std::uint32_t seed) {
    constexpr std::uint32_t c1 = 0xcc9e2d51u;
    constexpr std::uint32_t c2 = 0x1b873593u;
    const auto rotl = [](std::uint32_t x, int r) { return (x << r) | (x >> (32 - r)); };

    std::uint32_t h = seed;
    const std::size_t n_blocks = data.size() / 4;
    const char* p = data.data();
    for (std::size_t b = 0; b < n_blocks; ++b) {
        std::uint32_t k;
        std::memcpy(&k, p + 4 * b, 4); // little-endian block load
        k *= c1;
        k = rotl(k, 15);
        k *= c2;
        h ^= k;
        h = rotl(h, 13);
        h = h * 5u + 0xe6546b64u;
    }

    std::uint32_t k = 0;
    const auto* tail = reinterpret_cast<const unsigned char*>(p + 4 * n_blocks);
    switch (data.size() & 3u) {
        case 3: k ^= static_cast<std::uint32_t>(tail[2]) << 16; [[fallthrough]];
        case 2: k ^= static_cast<std::uint32_t>(tail[1]) << 8; [[fallthrough]];
        case 1:
            k ^= tail[0];
            k *= c1;
            k = rotl(k, 15);
            k *= c2;
            h ^= k;
    }

    h ^= static_cast<std::uint32_t>(data.size());
    h ^= h >> 16;
    h *= 0x85ebca6bu;
    h ^= h >> 13;
    h *= 0xc2b2ae35u;
    h ^= h >> 16;
    return h;
}

struct HashConfig {
    int n = 1;                                  // hash vector dimension
    static constexpr int kOutputBits = 32;      // m, fixed
    static constexpr char kSeparator = '|';     // joins node id and component index
    static constexpr std::uint32_t kHashSeed = 0;
};

using HashVector = std::vector<double>;

// Component i = signed32(murmur3(node_id '|' i)) / (2^31 - 1). Deterministic
// across processes and platforms; components lie in [-2^31/(2^31-1), 1].
inline HashVector hash_vector(std::string_view node_id, const HashConfig& cfg) {
    if (node_id.empty()) throw parameter_error("hash_vector: empty node id");
    if (cfg.n < 1) throw parameter_error("hash_vector: dimension must be >= 1");

    constexpr double denom = 2147483647.0; // 2^31 - 1
    HashVector out(static_cast<std::size_t>(cfg.n));
    std::string key;
    for (int i = 0; i < cfg.n; ++i) {
        key.assign(node_id);
        key.push_back(HashConfig::kSeparator);
        key += std::to_string(i);
        const auto raw = static_cast<std::int32_t>(murmur3_32(key, HashConfig::kHashSeed));
        out[static_cast<std::size_t>(i)] = static_cast<double>(raw) / denom;
    }
    return out;
}

// Concatenates each feature row with the node's hash vector: N x d -> N x (d+n).
inline Tensor augment_features(const Tensor& x, const HashConfig& cfg,
                               const std::vector<std::string>& node_ids) {
    if (static_cast<int>(node_ids.size()) != x.rows()) {
        throw parameter_error("augment_features: id count does not match feature rows");
    }
    if (cfg.n < 1) throw parameter_error("augment_features: hash dimension must be >= 1");

    Tensor out(x.rows(), x.cols() + cfg.n);
    for (int i = 0; i < x.rows(); ++i) {
        for (int j = 0; j < x.cols(); ++j) out(i, j) = x(i, j);
        const HashVector h = hash_vector(node_ids[static_cast<std::size_t>(i)], cfg);
        for (int j = 0; j < cfg.n; ++j) out(i, x.cols() + j) = h[static_cast<std::size_t>(j)];
    }
    return out;
}

inline std::vector<std::string> decimal_node_ids(int num_nodes) {
    std::vector<std::string> ids;
    ids.reserve(static_cast<std::size_t>(num_nodes));
    for (int i = 0; i < num_nodes; ++i) ids.push_back(std::to_string(i));
    return ids;
}

} // namespace ignn
