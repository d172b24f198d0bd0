#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <functional>

#include "ignn/autodiff.hpp"
#include "ignn/rng.hpp"
#include "ignn/sparse.hpp"
#include "oracles.hpp"

using namespace ignn;

namespace {

Tensor random_tensor(int r, int c, Rng& rng, double scale = 1.0) {
    Tensor t(r, c);
    for (std::size_t k = 0; k < t.size(); ++k) t.data()[k] = scale * (2.0 * uniform_real01(rng) - 1.0);
    return t;
}

} // namespace

TEST_CASE("matmul forward", "[autodiff]") {
    Tape tape;
    Rng rng = make_rng(1);
    const Tensor a = random_tensor(3, 4, rng);

    SECTION("identity times A is A") {
        const int out = tape.matmul(tape.constant(Tensor::identity(3)), tape.constant(a));
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 4; ++j) REQUIRE(tape.value(out)(i, j) == Catch::Approx(a(i, j)));
        }
    }
    SECTION("1x1 product") {
        const int out = tape.matmul(tape.constant(Tensor::full(1, 1, 2.0)), tape.constant(Tensor::full(1, 1, 3.0)));
        REQUIRE(tape.value(out)(0, 0) == 6.0);
    }
    SECTION("shape mismatch throws") {
        REQUIRE_THROWS_AS(tape.matmul(tape.constant(Tensor(2, 3)), tape.constant(Tensor(2, 3))), usage_error);
    }
}

TEST_CASE("gradient of sum(A*B) with respect to A is the column sums of B", "[autodiff]") {
    Rng rng = make_rng(2);
    Tensor a = random_tensor(3, 4, rng);
    const Tensor b = random_tensor(4, 5, rng);

    Tape tape;
    const int aid = tape.leaf(a);
    const int loss = tape.sum(tape.matmul(aid, tape.constant(b)));
    tape.backward(loss);

    // each row of dL/dA equals the vector of row sums of B
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 4; ++j) {
            double want = 0.0;
            for (int c = 0; c < 5; ++c) want += b(j, c);
            REQUIRE(tape.grad(aid)(i, j) == Catch::Approx(want).margin(1e-12));
        }
    }

    const Tensor numeric = oracle::finite_difference_grad(a, [&]() {
        Tape t2;
        return t2.value(t2.sum(t2.matmul(t2.leaf(a), t2.constant(b))))(0, 0);
    });
    REQUIRE(oracle::max_relative_error(tape.grad(aid), numeric) < 1e-4);
}

TEST_CASE("spmm forward and gradient", "[autodiff]") {
    Rng rng = make_rng(3);
    const Tensor x = random_tensor(3, 4, rng);

    SECTION("zero adjacency gives zero output") {
        const SparseAdjacency zero = SparseAdjacency::from_triplets(3, {});
        Tape tape;
        const int out = tape.spmm(zero, tape.constant(x));
        for (std::size_t k = 0; k < tape.value(out).size(); ++k) REQUIRE(tape.value(out).data()[k] == 0.0);
    }

    SECTION("identity adjacency reproduces x") {
        std::vector<std::tuple<int, int, double>> t;
        for (int i = 0; i < 3; ++i) t.emplace_back(i, i, 1.0);
        const SparseAdjacency id = SparseAdjacency::from_triplets(3, std::move(t));
        Tape tape;
        const int out = tape.spmm(id, tape.constant(x));
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 4; ++j) REQUIRE(tape.value(out)(i, j) == x(i, j));
        }
    }

    SECTION("mean-normalized star: center row is the mean of leaf rows") {
        // star 0-1, 0-2 with mean weights: row 0 = (x1 + x2)/2
        const SparseAdjacency star = SparseAdjacency::from_triplets(
            3, {{0, 1, 0.5}, {0, 2, 0.5}, {1, 0, 1.0}, {2, 0, 1.0}});
        Tape tape;
        const int out = tape.spmm(star, tape.constant(x));
        for (int j = 0; j < 4; ++j) {
            REQUIRE(tape.value(out)(0, j) == Catch::Approx(0.5 * (x(1, j) + x(2, j))));
        }
    }

    SECTION("gradient matches finite differences through a weighted sum") {
        const SparseAdjacency s = SparseAdjacency::from_triplets(
            3, {{0, 1, 0.7}, {1, 0, -0.3}, {1, 2, 1.2}, {2, 2, 0.5}});
        const Tensor w = random_tensor(3, 4, rng);
        Tensor xp = x;
        auto loss_value = [&](const Tensor& xv) {
            Tape t;
            return t.value(t.sum(t.hadamard(t.spmm(s, t.leaf(xv)), t.constant(w))))(0, 0);
        };
        Tape tape;
        const int xid = tape.leaf(xp);
        const int loss = tape.sum(tape.hadamard(tape.spmm(s, xid), tape.constant(w)));
        tape.backward(loss);
        const Tensor numeric =
            oracle::finite_difference_grad(xp, [&]() { return loss_value(xp); });
        REQUIRE(oracle::max_relative_error(tape.grad(xid), numeric) < 1e-4);
    }
}

TEST_CASE("elementwise op values", "[autodiff]") {
    Tape tape;
    SECTION("relu clips negatives") {
        const int out = tape.relu(tape.constant(Tensor::from_rows({{-1.0, 2.0}})));
        REQUIRE(tape.value(out)(0, 0) == 0.0);
        REQUIRE(tape.value(out)(0, 1) == 2.0);
    }
    SECTION("sigmoid at zero is one half") {
        const int out = tape.sigmoid(tape.constant(Tensor::from_rows({{0.0}})));
        REQUIRE(tape.value(out)(0, 0) == 0.5);
    }
    SECTION("l2 normalization of a 3-4-5 row") {
        const int out = tape.l2_normalize_rows(tape.constant(Tensor::from_rows({{3.0, 4.0}})));
        REQUIRE(tape.value(out)(0, 0) == Catch::Approx(0.6).margin(1e-9));
        REQUIRE(tape.value(out)(0, 1) == Catch::Approx(0.8).margin(1e-9));
    }
    SECTION("row_pair_inner on normalized rows is a cosine in [-1, 1]") {
        Rng rng = make_rng(4);
        const Tensor z = random_tensor(6, 5, rng);
        const int zn = tape.l2_normalize_rows(tape.constant(z));
        const int out = tape.row_pair_inner(zn, {{0, 1}, {2, 3}, {4, 5}, {1, 4}});
        for (int m = 0; m < 4; ++m) {
            REQUIRE(tape.value(out)(m, 0) <= 1.0 + 1e-12);
            REQUIRE(tape.value(out)(m, 0) >= -1.0 - 1e-12);
        }
    }
    SECTION("row_pair_inner validates indices") {
        const int z = tape.constant(Tensor(2, 2));
        REQUIRE_THROWS_AS(tape.row_pair_inner(z, {{0, 5}}), usage_error);
    }
}

TEST_CASE("finite differences validate every primitive gradient", "[autodiff]") {
    Rng rng = make_rng(5);
    const Tensor w = random_tensor(4, 3, rng);

    // each case builds loss = sum(weight .* op(x, ...)) so gradients vary per entry
    const auto check = [&](const std::function<int(Tape&, int)>& op, int rows, int cols) {
        Tensor x = random_tensor(rows, cols, rng);
        auto loss_of = [&](const Tensor& xv) {
            Tape t;
            const int y = op(t, t.leaf(xv));
            const Tensor& val = t.value(y);
            Tensor mask(val.rows(), val.cols());
            Rng mrng = make_rng(99);
            for (std::size_t k = 0; k < mask.size(); ++k) mask.data()[k] = 2.0 * uniform_real01(mrng) - 1.0;
            return t.value(t.sum(t.hadamard(y, t.constant(mask))))(0, 0);
        };
        Tape tape;
        const int xid = tape.leaf(x);
        const int y = op(tape, xid);
        const Tensor& val = tape.value(y);
        Tensor mask(val.rows(), val.cols());
        Rng mrng = make_rng(99);
        for (std::size_t k = 0; k < mask.size(); ++k) mask.data()[k] = 2.0 * uniform_real01(mrng) - 1.0;
        tape.backward(tape.sum(tape.hadamard(y, tape.constant(mask))));
        const Tensor numeric = oracle::finite_difference_grad(x, [&]() { return loss_of(x); });
        return oracle::max_relative_error(tape.grad(xid), numeric);
    };

    REQUIRE(check([&](Tape& t, int x) { return t.matmul(x, t.constant(w)); }, 5, 4) < 1e-4);
    REQUIRE(check([&](Tape& t, int x) { return t.add(x, t.constant(w)); }, 4, 3) < 1e-4);
    REQUIRE(check([&](Tape& t, int x) { return t.add_row_vector(x, t.constant(Tensor::full(1, 3, 0.7))); }, 4, 3) < 1e-4);
    REQUIRE(check([&](Tape& t, int x) { return t.hadamard(x, t.constant(w)); }, 4, 3) < 1e-4);
    REQUIRE(check([&](Tape& t, int x) { return t.scale(x, -2.5); }, 4, 3) < 1e-4);
    REQUIRE(check([&](Tape& t, int x) { return t.concat_cols(x, t.constant(w)); }, 4, 2) < 1e-4);
    REQUIRE(check([&](Tape& t, int x) { return t.sigmoid(x); }, 4, 3) < 1e-4);
    REQUIRE(check([&](Tape& t, int x) { return t.l2_normalize_rows(x); }, 4, 3) < 1e-4);
    REQUIRE(check([&](Tape& t, int x) { return t.row_pair_inner(x, {{0, 1}, {1, 2}, {0, 3}}); }, 4, 3) < 1e-4);
    // relu checked away from the kink
    REQUIRE(check([&](Tape& t, int x) { return t.relu(t.add(x, t.constant(Tensor::full(4, 3, 3.0)))); }, 4, 3) < 1e-4);

    // bias gradient of add_row_vector
    {
        Tensor bias = random_tensor(1, 3, rng);
        const Tensor x = random_tensor(4, 3, rng);
        Tape tape;
        const int bid = tape.leaf(bias);
        tape.backward(tape.sum(tape.add_row_vector(tape.constant(x), bid)));
        for (int j = 0; j < 3; ++j) REQUIRE(tape.grad(bid)(0, j) == Catch::Approx(4.0));
    }
}

TEST_CASE("backward basics", "[autodiff]") {
    SECTION("loss = sum(W) has all-ones gradient") {
        Tape tape;
        const int w = tape.leaf(Tensor::full(2, 2, 0.3));
        tape.backward(tape.sum(w));
        for (std::size_t k = 0; k < 4; ++k) REQUIRE(tape.grad(w).data()[k] == 1.0);
    }
    SECTION("sigmoid gradient at zero is one quarter") {
        Tape tape;
        const int w = tape.leaf(Tensor::from_rows({{0.0}}));
        tape.backward(tape.sum(tape.sigmoid(w)));
        REQUIRE(tape.grad(w)(0, 0) == Catch::Approx(0.25));
    }
    SECTION("non-scalar loss is rejected") {
        Tape tape;
        const int w = tape.leaf(Tensor(2, 2));
        REQUIRE_THROWS_AS(tape.backward(w), usage_error);
    }
}

TEST_CASE("random two-layer network matches finite differences", "[autodiff]") {
    Rng rng = make_rng(6);
    const Tensor x = random_tensor(6, 5, rng);
    Tensor w1 = random_tensor(5, 4, rng);
    Tensor w2 = random_tensor(4, 3, rng);

    auto loss_of = [&]() {
        Tape t;
        const int h = t.relu(t.add(t.matmul(t.constant(x), t.leaf(w1)), t.constant(Tensor::full(6, 4, 0.1))));
        const int z = t.l2_normalize_rows(t.matmul(h, t.leaf(w2)));
        return t.value(t.sum(t.sigmoid(t.row_pair_inner(z, {{0, 1}, {2, 3}, {4, 5}}))))(0, 0);
    };

    Tape tape;
    const int w1id = tape.leaf(w1);
    const int w2id = tape.leaf(w2);
    const int h = tape.relu(tape.add(tape.matmul(tape.constant(x), w1id), tape.constant(Tensor::full(6, 4, 0.1))));
    const int z = tape.l2_normalize_rows(tape.matmul(h, w2id));
    tape.backward(tape.sum(tape.sigmoid(tape.row_pair_inner(z, {{0, 1}, {2, 3}, {4, 5}}))));

    REQUIRE(oracle::max_relative_error(tape.grad(w1id), oracle::finite_difference_grad(w1, loss_of)) < 1e-4);
    REQUIRE(oracle::max_relative_error(tape.grad(w2id), oracle::finite_difference_grad(w2, loss_of)) < 1e-4);
}

TEST_CASE("backward is linear in the loss", "[autodiff]") {
    Rng rng = make_rng(7);
    const Tensor x = random_tensor(4, 4, rng);
    Tensor w = random_tensor(4, 3, rng);
    const double a = 2.25;
    const double b = -0.75;

    const auto grads = [&](double ca, double cb) {
        Tape t;
        const int wid = t.leaf(w);
        const int y = t.matmul(t.constant(x), wid);
        const int l1 = t.sum(t.sigmoid(y));
        const int l2 = t.sum(t.hadamard(y, y));
        t.backward(t.add(t.scale(l1, ca), t.scale(l2, cb)));
        return t.grad(wid);
    };

    const Tensor combined = grads(a, b);
    const Tensor g1 = grads(1.0, 0.0);
    const Tensor g2 = grads(0.0, 1.0);
    for (std::size_t k = 0; k < combined.size(); ++k) {
        REQUIRE(combined.data()[k] ==
                Catch::Approx(a * g1.data()[k] + b * g2.data()[k]).margin(1e-12));
    }
}

TEST_CASE("repeated forward+backward passes are bit-identical", "[autodiff]") {
    Rng rng = make_rng(8);
    const Tensor x = random_tensor(5, 5, rng);
    const Tensor w = random_tensor(5, 4, rng);

    const auto run = [&]() {
        Tape t;
        const int wid = t.leaf(w);
        const int z = t.l2_normalize_rows(t.relu(t.matmul(t.constant(x), wid)));
        t.backward(t.sum(t.row_pair_inner(z, {{0, 1}, {2, 3}})));
        return t.grad(wid);
    };
    const Tensor g1 = run();
    const Tensor g2 = run();
    for (std::size_t k = 0; k < g1.size(); ++k) REQUIRE(g1.data()[k] == g2.data()[k]);
}

TEST_CASE("gradients do not flow into constants", "[autodiff]") {
    Tape tape;
    const int c = tape.constant(Tensor::full(2, 2, 1.0));
    const int w = tape.leaf(Tensor::full(2, 2, 1.0));
    tape.backward(tape.sum(tape.hadamard(c, w)));
    REQUIRE_THROWS_AS(tape.grad(c), usage_error);
    REQUIRE(tape.grad(w)(0, 0) == 1.0);
}
