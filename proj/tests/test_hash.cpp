#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <string>
#include <unordered_set>

#include "ignn/hash.hpp"
#include "ignn/rng.hpp"
#include "oracles.hpp"

using namespace ignn;

TEST_CASE("murmur3 reproduces the published reference vectors", "[hash]") {
    struct Vec {
        std::string data;
        std::uint32_t seed;
        std::uint32_t want;
    };
    const std::vector<Vec> vectors = {
        {"", 0x00000000u, 0x00000000u},
        {"", 0x00000001u, 0x514E28B7u},
        {"", 0xffffffffu, 0x81F16F39u},
        {std::string("\xff\xff\xff\xff", 4), 0, 0x76293B50u},
        {std::string("\x21\x43\x65\x87", 4), 0, 0xF55B516Bu},
        {std::string("\x21\x43\x65\x87", 4), 0x5082EDEEu, 0x2362F9DEu},
        {std::string("\x21\x43\x65", 3), 0, 0x7E4A8634u},
        {std::string("\x21\x43", 2), 0, 0xA0F7B07Au},
        {std::string("\x21", 1), 0, 0x72661CF4u},
        {std::string("\x00\x00\x00\x00", 4), 0, 0x2362F9DEu},
        {std::string("\x00\x00\x00", 3), 0, 0x85F0B427u},
        {std::string("\x00\x00", 2), 0, 0x30F4C306u},
        {std::string("\x00", 1), 0, 0x514E28B7u},
        {"aaaa", 0x9747b28cu, 0x5A97808Au},
        {"Hello, world!", 0x9747b28cu, 0x24884CBAu},
        {"The quick brown fox jumps over the lazy dog", 0x9747b28cu, 0x2FA826CDu},
        // golden constants frozen from the verified reference implementation
        {"a", 0, 0x3c2569b2u},
        {"b", 0, 0x95de7e03u},
        {"test", 0, 0xba6bd213u},
    };
    for (const Vec& v : vectors) {
        CAPTURE(v.data, v.seed);
        REQUIRE(murmur3_32(v.data, v.seed) == v.want);
    }
}

TEST_CASE("murmur3 agrees with an independent transcription on random inputs", "[hash]") {
    Rng rng = make_rng(77);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t len = uniform_below(rng, 24);
        std::vector<unsigned char> bytes(len);
        for (auto& b : bytes) b = static_cast<unsigned char>(uniform_below(rng, 256));
        const auto seed = static_cast<std::uint32_t>(rng());
        const std::string_view view(reinterpret_cast<const char*>(bytes.data()), bytes.size());
        REQUIRE(murmur3_32(view, seed) == oracle::murmur3_reference(bytes, seed));
    }
}

TEST_CASE("murmur3 is deterministic and input-sensitive", "[hash]") {
    REQUIRE(murmur3_32("some-node-id", 3) == murmur3_32("some-node-id", 3));
    REQUIRE(murmur3_32("a", 0) != murmur3_32("b", 0));
}

TEST_CASE("hash_vector construction", "[hash]") {
    SECTION("frozen component values for node id 42") {
        const HashVector h = hash_vector("42", {2});
        // signed32(murmur3("42|0")) = -1705699476, signed32(murmur3("42|1")) = 1893975322
        REQUIRE(h[0] == Catch::Approx(-1705699476.0 / 2147483647.0).epsilon(1e-15));
        REQUIRE(h[1] == Catch::Approx(1893975322.0 / 2147483647.0).epsilon(1e-15));
    }

    SECTION("repeated evaluation is bit-identical") {
        const HashVector a = hash_vector("42", {8});
        const HashVector b = hash_vector("42", {8});
        REQUIRE(a == b);
    }

    SECTION("different ids differ in at least one component") {
        REQUIRE(hash_vector("0", {8}) != hash_vector("1", {8}));
    }

    SECTION("components stay within the signed-normalized range") {
        constexpr double bound = 2147483648.0 / 2147483647.0;
        for (int id = 0; id < 200; ++id) {
            for (double c : hash_vector(std::to_string(id), {4})) {
                REQUIRE(std::abs(c) <= bound);
            }
        }
    }

    SECTION("separator prevents index aliasing between ids 1 and 11") {
        // "1" with component 11 vs "11" with component 1 hash different keys
        const HashVector a = hash_vector("1", {12});
        const HashVector b = hash_vector("11", {2});
        REQUIRE(a[11] != b[1]);
    }

    SECTION("invalid arguments") {
        REQUIRE_THROWS_AS(hash_vector("", {4}), parameter_error);
        REQUIRE_THROWS_AS(hash_vector("x", {0}), parameter_error);
    }
}

TEST_CASE("hash vectors avoid collisions across many ids", "[hash]") {
    // n = 2 gives 64 bits of hash material; 1e4 ids must not collide
    std::set<std::pair<double, double>> seen;
    for (int id = 0; id < 10000; ++id) {
        const HashVector h = hash_vector(std::to_string(id), {2});
        REQUIRE(seen.emplace(h[0], h[1]).second);
    }
}

TEST_CASE("hash component distribution is roughly centered", "[hash]") {
    double sum = 0.0;
    long long positive = 0;
    long long total = 0;
    for (int id = 0; id < 10000; ++id) {
        for (double c : hash_vector(std::to_string(id), {8})) {
            sum += c;
            positive += c > 0.0 ? 1 : 0;
            ++total;
        }
    }
    const double mean = sum / static_cast<double>(total);
    const double pos_frac = static_cast<double>(positive) / static_cast<double>(total);
    REQUIRE(mean > -0.02);
    REQUIRE(mean < 0.02);
    REQUIRE(pos_frac > 0.48);
    REQUIRE(pos_frac < 0.52);
}

TEST_CASE("augment_features appends hash columns", "[hash]") {
    SECTION("one-hot rows keep their prefix") {
        const Tensor x = Tensor::identity(5);
        const Tensor out = augment_features(x, {32}, decimal_node_ids(5));
        REQUIRE(out.rows() == 5);
        REQUIRE(out.cols() == 5 + 32);
        for (int i = 0; i < 5; ++i) {
            for (int j = 0; j < 5; ++j) REQUIRE(out(i, j) == x(i, j));
        }
        const HashVector h0 = hash_vector("0", {32});
        for (int j = 0; j < 32; ++j) REQUIRE(out(0, 5 + j) == h0[static_cast<std::size_t>(j)]);
    }

    SECTION("id count must match rows") {
        REQUIRE_THROWS_AS(augment_features(Tensor::identity(3), {4}, decimal_node_ids(2)), parameter_error);
    }

    SECTION("zero hash dimension is rejected") {
        REQUIRE_THROWS_AS(augment_features(Tensor::identity(3), {0}, decimal_node_ids(3)), parameter_error);
    }
}
